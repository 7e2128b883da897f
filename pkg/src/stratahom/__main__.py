"""Module entry point, so `python -m stratahom` behaves like the script."""

from .cli import main

main()
