"""Entry point for ``python -m rational_telescopers``."""

import sys

from .cli.runner import main

if __name__ == "__main__":
    sys.exit(main())
