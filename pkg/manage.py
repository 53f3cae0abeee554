#!/usr/bin/env python
"""numlab command-line entry point (Django management utility)."""
import os
import sys

from core.cli import run


def main():
    """Run a numlab subcommand and exit with its status; `test` runs the suite."""
    if sys.argv[1:2] == ["test"]:
        os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
        from django.core.management import execute_from_command_line

        execute_from_command_line(sys.argv)
        return
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
