"""Finite p-group quotients by the lower exponent-p central series."""

from .collector import PcPresentation
from .quotient import (
    DEFAULT_LIMIT,
    FiltrationReport,
    H1,
    InconsistentPresentation,
    PcQuotient,
    ResourceLimit,
    h1_mod_p,
    image,
    p_quotient,
    iter_p_quotients,
    p_quotients,
)
