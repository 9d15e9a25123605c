import sys

from qtwist.cli import main

sys.exit(main())
