"""Semantic-network analysis of short narratives.

Turns stories into seven network variants (sliding-window co-occurrence
and dependency-based), extracts structural, spreading-activation and
emotion features, and evaluates how well those features predict human
creativity ratings under cross-validation with permutation baselines and
Shapley attributions.
"""

from . import activation, affect, graphmetrics, mlharness, netbuild, stats, textpipe
from .netbuild import BUILDER_TAGS, LexicalNetwork
from .textpipe import Story, Token

__version__ = "0.1.0"

__all__ = [
    "BUILDER_TAGS",
    "LexicalNetwork",
    "Story",
    "Token",
    "activation",
    "affect",
    "graphmetrics",
    "mlharness",
    "netbuild",
    "stats",
    "textpipe",
]
