"""Named example graphs shipped with the package."""

from __future__ import annotations

from importlib import resources

from ..graph import LabeledGraph, bs
from ..io import parse_graph

NAMES = ("F1L", "F1R", "F3G", "F3Gp", "D1", "D2", "klein_loop", "klein_segment")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.json")


def load(name: str) -> LabeledGraph:
    """Load a fixture by name, or ``BS(p,q)`` for the one-loop graph."""
    if name.startswith("BS(") and name.endswith(")"):
        p, q = (int(x) for x in name[3:-1].split(","))
        return bs(p, q)
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    return parse_graph(path(name).read_text(encoding="utf-8"))
