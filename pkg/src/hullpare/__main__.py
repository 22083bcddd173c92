"""Run the command-line interface via ``python -m hullpare``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
