from __future__ import annotations

from sim.amalgam import EMPTY_WORD, AmalgamatedProduct, FactorGroup, Letter, Word
from sim.osgroup import OS_GROUP, O1Element, O2Element, word_apply
from sim.seed import SeedManager
from sim.wordfile import format_word, load_word, parse_word_text

__all__ = [
    "AmalgamatedProduct",
    "EMPTY_WORD",
    "FactorGroup",
    "Letter",
    "O1Element",
    "O2Element",
    "OS_GROUP",
    "SeedManager",
    "Word",
    "format_word",
    "load_word",
    "parse_word_text",
    "word_apply",
]
