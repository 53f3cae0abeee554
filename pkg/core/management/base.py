"""
Shared plumbing for the numlab management commands.

Global flags (--config, --constants, --format), rendering of results, and the
mapping from service exceptions to exit codes:
  1  invariant violated during a sweep or verification
  2  bad input
  3  capacity limit (sieve ceiling, factoring effort)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging

from django.core.management.base import BaseCommand, CommandError
from django.template.loader import render_to_string

from core.exceptions import CapacityError, InvariantViolation, NumberTheoryError
from core.services.bounds import BoundConstants

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "csv")


def add_global_arguments(parser, nested: bool = False) -> None:
    """
    --config, --constants and --format.

    A subcommand parser passes nested=True so a flag it does not see keeps the
    value parsed before the subcommand name.
    """
    unset = {"default": argparse.SUPPRESS} if nested else {}
    parser.add_argument(
        "--config", metavar="FILE", help="flat key = value file of bound constants", **unset
    )
    parser.add_argument(
        "--constants",
        action="append",
        metavar="KEY=VALUE",
        help="override one bound constant (repeatable)",
        **(unset or {"default": []}),
    )
    parser.add_argument("--format", choices=FORMATS, **(unset or {"default": "text"}))


def _flatten(data: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, (list, tuple)):
            flat[name] = json.dumps(value, default=str)
        else:
            flat[name] = value
    return flat


class LabCommand(BaseCommand):
    template_name: str | None = None

    def add_arguments(self, parser):
        add_global_arguments(parser)
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except InvariantViolation as exc:
            for failure in exc.failures[:20]:
                logger.error(failure)
            raise CommandError(str(exc), returncode=1) from exc
        except CapacityError as exc:
            raise CommandError(str(exc), returncode=3) from exc
        except (NumberTheoryError, ZeroDivisionError, OSError) as exc:
            raise CommandError(str(exc), returncode=2) from exc

    def constants(self, options) -> BoundConstants:
        return BoundConstants.load(options.get("config"), options.get("constants") or ())

    def emit(self, data, options, context: dict | None = None, rows: list[dict] | None = None):
        """Write one result to stdout in the requested format."""
        fmt = options.get("format") or "text"
        if fmt == "json":
            self.stdout.write(json.dumps(data, indent=2, default=str))
        elif fmt == "csv":
            rows = rows if rows is not None else [_flatten(data)]
            buf = io.StringIO()
            if rows:
                writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
                writer.writeheader()
                writer.writerows(rows)
            self.stdout.write(buf.getvalue(), ending="")
        else:
            text = render_to_string(self.template_name, context if context is not None else data)
            self.stdout.write(text.rstrip("\n"))
