import sys

from vimax.cli import main

sys.exit(main())
