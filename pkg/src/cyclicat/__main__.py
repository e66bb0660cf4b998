import sys

from cyclicat.cli import main

sys.exit(main())
