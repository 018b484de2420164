"""Finitely presented groups and coset enumeration."""

from .enumerate import (
    EnumerationOutcome,
    WordEvaluator,
    first_relator_failure,
    group_from_regular_table,
    presentation_of,
    realize_group,
    relator_violations,
    todd_coxeter,
)
from .presentation import Presentation, Word, commutator_word, cyclic_canonical, free_reduce, word_inverse

__all__ = [
    "EnumerationOutcome", "Presentation", "Word", "WordEvaluator", "commutator_word", "cyclic_canonical",
    "first_relator_failure", "free_reduce", "group_from_regular_table", "presentation_of", "realize_group",
    "relator_violations", "todd_coxeter", "word_inverse",
]
