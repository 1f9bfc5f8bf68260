#!/usr/bin/env python3
"""
Human-facing status lines for the command line.

Everything goes to stderr so stdout only ever carries the JSON/CSV artefact.
"""

import sys

from colorama import Fore, Style, init

init()


def _emit(colour: str, text: str):
    print(f"{colour}{text}{Style.RESET_ALL}", file=sys.stderr)


def info(text: str):
    _emit("", text)


def success(text: str):
    _emit(Fore.GREEN, text)


def warning(text: str):
    _emit(Fore.YELLOW, f"Warning: {text}")


def error(text: str):
    _emit(Fore.RED, f"Error: {text}")


def heading(text: str):
    _emit(Style.BRIGHT, text)
    _emit(Style.BRIGHT, "=" * len(text))
