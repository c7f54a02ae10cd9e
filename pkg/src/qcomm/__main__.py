import sys

from qcomm.cli import main

sys.exit(main())
