"""Mapping of failures to CLI exit codes."""

from contextlib import contextmanager
from typing import Iterator

import click
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from sa_forge.core.exceptions import SaForgeError

EXIT_OK = 0
EXIT_CONTRACT = 1
EXIT_IO = 2

console = Console(stderr=True)


def exit_code_for(error: BaseException) -> int:
    """1 for contract or configuration errors, 2 for I/O errors."""
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_CONTRACT


@contextmanager
def reporting_errors(ctx: click.Context) -> Iterator[None]:
    """Print library errors and exit with the matching code."""
    try:
        yield
    except (SaForgeError, ValidationError, ValueError) as e:
        console.print(f"[red]Error:[/red] {escape(str(e))}", highlight=False)
        ctx.exit(EXIT_CONTRACT)
    except OSError as e:
        console.print(f"[red]I/O error:[/red] {escape(str(e))}", highlight=False)
        ctx.exit(EXIT_IO)
