"""Main entry point for the rational telescoper engine."""

import sys

from rational_telescopers.cli.runner import main

if __name__ == "__main__":
    sys.exit(main())
