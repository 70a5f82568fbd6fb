import sys

from tmfejer.cli import main

sys.exit(main())
