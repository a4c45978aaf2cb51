"""Clones of finitary operations over finite universes and finite windows."""

from .core import Operation, Relation, Table, Universe, compose, evaluate, preserves, tabulate
from .galois import clone_fragment, inv_generate, local_member, pol
from .lattice import CloneHandle, join, leq
from .report import CheckReport

__all__ = [
    "Universe",
    "Operation",
    "Table",
    "Relation",
    "evaluate",
    "tabulate",
    "compose",
    "preserves",
    "clone_fragment",
    "pol",
    "inv_generate",
    "local_member",
    "CloneHandle",
    "leq",
    "join",
    "CheckReport",
]
