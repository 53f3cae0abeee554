"""
run(argv) -> exit code.

Subcommands are the Django management commands under core/management/commands;
Django's own commands (migrate, runserver, ...) are not reachable from here.
Unknown or missing subcommands exit 2, like any other usage error.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

from django.core.management import find_commands

MANAGEMENT_DIR = Path(__file__).resolve().parent / "management"


def lab_commands() -> list[str]:
    return sorted(find_commands(str(MANAGEMENT_DIR)))


def usage() -> str:
    return "usage: manage.py COMMAND [options]\ncommands: " + ", ".join(lab_commands()) + "\n"


def run(argv: list[str]) -> int:
    if not argv or argv[0] not in lab_commands():
        if argv:
            sys.stderr.write(f"Unknown command: {argv[0]!r}\n")
        sys.stderr.write(usage())
        return 2

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    from django.core.management import execute_from_command_line

    try:
        execute_from_command_line(["manage.py", *argv])
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    return 0
