import sys

from ffdrive.cli import main

sys.exit(main())
