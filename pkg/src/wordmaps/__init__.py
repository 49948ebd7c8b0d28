"""Level-3 word mappings: iterated pushdown automata, L-system recurrences,
representation lowerings, and a Groebner-basis sequence-equality decision."""

from .errors import (
    BudgetExceededError,
    DomainError,
    FuelExhaustedError,
    ParseError,
    WordmapsError,
)
from .words import Word, word, show_word

__all__ = [
    "BudgetExceededError",
    "DomainError",
    "FuelExhaustedError",
    "ParseError",
    "WordmapsError",
    "Word",
    "word",
    "show_word",
]

__version__ = "0.1.0"
