"""
Main application entry point for Quan Arena.

Loads environment variables from .env (API keys named in the run
configuration resolve from there) and dispatches to the command line.
"""

import sys

from dotenv import load_dotenv

from quan_arena.cli import main as cli_main


def main() -> int:
    """
    Main application entry point.

    Returns:
        Process exit code
    """
    load_dotenv()
    return cli_main()


if __name__ == "__main__":
    sys.exit(main())
