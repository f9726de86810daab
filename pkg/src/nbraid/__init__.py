"""Pure braid groups of nonorientable surfaces: words, combing, p-quotients."""

from .words import EPSILON, Gen, Word, B, rho, x, p, abstract, commutator, parse_word, reduce, substitute
from .presentations import (
    GroupSpec,
    Presentation,
    bordered_presentation,
    closed_presentation,
    free_presentation,
    named_element,
    surface_presentation,
)

__version__ = "0.1.0"
