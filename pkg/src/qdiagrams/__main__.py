import sys

from qdiagrams.cli import main

sys.exit(main())
