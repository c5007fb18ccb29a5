"""Entry point for the rips-collapse command-line tool."""

import sys

from cli.app import main

if __name__ == "__main__":
    sys.exit(main())
