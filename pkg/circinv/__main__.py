import sys

from circinv.cli import main

sys.exit(main())
