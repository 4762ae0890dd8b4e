"""The shipped corpus of named test functions."""

from __future__ import annotations

import functools
from importlib import resources


@functools.lru_cache(maxsize=1)
def raw_entries():
    text = resources.files("rittdyn").joinpath("data/corpus.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, expr = line.split(None, 1)
        out[name] = expr
    return out


@functools.lru_cache(maxsize=1)
def functions():
    """name -> exact RatFunc for every corpus entry."""
    from .expr import parse

    return {name: parse(expr) for name, expr in raw_entries().items()}


def get(name):
    return functions()[name]


def names():
    return sorted(raw_entries())
