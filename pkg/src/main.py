"""
densepoints - entry point
Run as `python src/main.py <command> ...`; see harness.cli for the subcommands
"""
import sys

from harness.cli import main


if __name__ == "__main__":
    sys.exit(main())
