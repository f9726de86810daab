"""Combing in pure braid groups of bordered nonorientable surfaces."""

from __future__ import annotations

from functools import lru_cache

from ..presentations import GroupSpec, Unsupported, bordered_presentation, conjugation_rhs
from ..words import B, Gen, Word, rho, substitute, x
from .tower import CombedForm, LevelError, SemidirectTower, _Default

__all__ = [
    "bordered_tower",
    "kernel_tower",
    "comb",
    "is_trivial_bordered",
    "equal_bordered",
    "action",
    "invert_action",
    "level_generators",
    "relator_check",
    "boundary_word",
    "free_conjugate",
    "peripheral_check",
]


def level_generators(m: int, g: int, b: int, first: int = 1) -> list[Gen]:
    """Free generators of strand level ``m``; ``first`` is the lowest strand kept."""
    return [B(i, m) for i in range(first, m)] + [rho(m, l) for l in range(1, g + 1)] + [x(m, t) for t in range(1, b)]


@lru_cache(maxsize=None)
def kernel_tower(g: int, b: int, n: int, first: int = 1, m2_reading: str = "k") -> SemidirectTower:
    """Tower on strands ``first..n``.

    With ``first=2`` and ``b=1`` this is the subgroup generated by all
    generators not involving the first strand, which is again a bordered
    braid group on ``n-1`` strands.
    """
    levels = [level_generators(m, g, b, first) for m in range(first, n + 1)]

    def rule(c: Gen, z: Gen):
        return conjugation_rhs(c, z, m2_reading)[1]

    return SemidirectTower(levels, rule)


def bordered_tower(spec: GroupSpec, m2_reading: str = "k") -> SemidirectTower:
    if spec.family != "bordered":
        raise Unsupported(f"expected a bordered braid group, got {spec}")
    return kernel_tower(spec.g, spec.b, spec.n, 1, m2_reading)


def comb(w: Word, spec: GroupSpec) -> CombedForm:
    return bordered_tower(spec).comb(w)


def is_trivial_bordered(w: Word, spec: GroupSpec) -> bool:
    return bordered_tower(spec).is_trivial(w)


def equal_bordered(u: Word, v: Word, spec: GroupSpec) -> bool:
    return is_trivial_bordered(u * v.inverse(), spec)


def action(conjugator, z: Gen, spec: GroupSpec) -> Word:
    """``g z g^-1`` (sign +1) or ``g^-1 z g`` (sign -1) for a letter ``(g, sign)``."""
    if isinstance(conjugator, Gen):
        conjugator = (conjugator, 1)
    c, sign = conjugator
    if c.strand >= z.strand:
        raise LevelError(f"{c} is not below {z}")
    if spec.family == "bordered":
        return bordered_tower(spec).action(c, sign, z)
    if spec.family == "closed":
        if sign == 1:
            return conjugation_rhs(c, z)[1]
        # inverses live in the kernel tower only when the first strand is not involved
        if c.strand >= 2 or (c.kind == "B" and c.idx[0] >= 2):
            return kernel_tower(spec.g, 1, spec.n, 2).action(c, -1, z)
        raise Unsupported("inverse action of a first-strand generator is computed by the closed solver")
    raise Unsupported(f"no action table for {spec}")


def invert_action(tower: SemidirectTower, conjugator: Gen, level: int) -> dict[Gen, Word]:
    """Inverse entries for ``conjugator`` on strand ``level`` (cached in the tower)."""
    m = next(k for k, lv in enumerate(tower.levels) if lv and lv[0].strand == level)
    table = tower.act[(conjugator, -1)].get(m)
    if table is None:
        return {z: Word.gen(z) for z in tower.levels[m]}
    return dict(table)


def relator_check(spec: GroupSpec, m2_reading: str = "k") -> list[str]:
    """Labels of presentation relators that do not comb to the identity."""
    tower = bordered_tower(spec, m2_reading)
    pres = bordered_presentation(spec.g, spec.b, spec.n, m2_reading)
    return [lbl for lbl, r in pres if not tower.is_trivial(r)]


def boundary_word(m: int, g: int, b: int) -> Word:
    """Loop around the last boundary component in the level-``m`` fibre."""
    squares = Word.product(Word.gen(rho(m, l), 2) for l in range(1, g + 1))
    xs = Word([(x(m, t), 1) for t in range(1, b)])
    ts = Word([(B(i, m), 1) for i in range(1, m)])
    return squares * xs * ts.inverse()


def _cyclic(w: Word) -> tuple:
    letters = w.letters
    i, j = 0, len(letters)
    while j - i > 1 and letters[i][0] == letters[j - 1][0] and letters[i][1] == -letters[j - 1][1]:
        i += 1
        j -= 1
    return letters[i:j]


def free_conjugate(u: Word, v: Word) -> bool:
    """Conjugacy in a free group via cyclic reduction and rotation."""
    a, b = _cyclic(u), _cyclic(v)
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    return any(doubled[i:i + len(a)] == b for i in range(len(a)))


def peripheral_check(g: int, b: int, n: int, m2_reading: str = "k") -> list[str]:
    """Conjugators that fail to preserve the boundary class of a higher level.

    Pushing a strand around a loop is supported away from the boundary, so
    the conjugacy class of the boundary loop in every fibre must survive the
    action.  This separates readings of a relation that the relator check
    alone cannot.
    """
    tower = kernel_tower(g, b, n, 1, m2_reading)
    bad = []
    for m in range(2, n + 1):
        bd = boundary_word(m, g, b)
        for lv in tower.levels[: m - 1]:
            for c in lv:
                img = substitute_level(tower, c, bd)
                if not free_conjugate(img, bd):
                    bad.append(f"{c} on level {m}")
    return bad


def substitute_level(tower: SemidirectTower, c: Gen, w: Word) -> Word:
    """Apply the action of ``c`` to a word lying in a single level."""
    m = tower.level_of[next(iter(w.symbols()))]
    table = tower.act[(c, 1)].get(m)
    return w if table is None else substitute(w, _Default(table))
