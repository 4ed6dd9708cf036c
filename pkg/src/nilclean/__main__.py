from nilclean.cli import main
import sys

sys.exit(main())
