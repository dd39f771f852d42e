"""Entry point for `python -m eebc`."""

import sys

from eebc.app import main

if __name__ == "__main__":
    sys.exit(main())
