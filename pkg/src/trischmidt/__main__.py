"""Entry point for ``python -m trischmidt``."""

from .cli import run

run()
