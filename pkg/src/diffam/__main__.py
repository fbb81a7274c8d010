import sys

from diffam.cli import main

sys.exit(main())
