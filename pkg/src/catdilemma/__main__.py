import sys

from catdilemma.cli import main

sys.exit(main())
