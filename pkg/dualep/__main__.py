import sys

from dualep.cli import main

sys.exit(main())
