import sys

from gazecross.cli import main

sys.exit(main())
