"""Normal forms in iterated semidirect products of free groups.

A tower has free levels ``F_1, ..., F_L``; every generator of a lower level
acts on each higher level by an automorphism (conjugation).  Elements are
written uniquely as ``w_L ... w_1`` with ``w_m`` a reduced word in ``F_m``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from ..words import Gen, Word, substitute
from .folding import NotInvertible, invert_automorphism

__all__ = ["CombedForm", "SemidirectTower", "LevelError", "SymbolError"]

log = logging.getLogger(__name__)


class LevelError(ValueError):
    """Conjugator does not lie strictly below the target level."""


class SymbolError(ValueError):
    """Word uses a symbol that is not a generator of the tower."""


@dataclass(frozen=True)
class CombedForm:
    """Levels listed from the top down: ``(w_L, ..., w_1)``."""

    levels: tuple[Word, ...]

    def word(self) -> Word:
        return Word.product(self.levels)

    def is_identity(self) -> bool:
        return not any(self.levels)

    def to_dict(self) -> dict:
        return {"levels": [str(w) if w else "ε" for w in self.levels]}

    def __str__(self) -> str:
        return " | ".join(str(w) if w else "ε" for w in self.levels)


class SemidirectTower:
    """``levels[m]`` lists the free generators of level ``m+1``.

    ``rule(c, z)`` returns ``c z c^-1`` for ``c`` below ``z``; pairs where the
    rule returns None act trivially.  Inverse actions are obtained by folding
    and checked on construction.
    """

    def __init__(self, levels: Sequence[Sequence[Gen]], rule: Callable[[Gen, Gen], Word | None]):
        self.levels = [list(lv) for lv in levels]
        self.depth = len(self.levels)
        self.level_of: dict[Gen, int] = {}
        for m, lv in enumerate(self.levels):
            for z in lv:
                if z in self.level_of:
                    raise ValueError(f"generator {z} appears on two levels")
                self.level_of[z] = m
        # act[(c, sign)][m] = dict z -> image, only for nontrivial actions
        self.act: dict[tuple[Gen, int], dict[int, dict[Gen, Word]]] = {}
        for c, lc in self.level_of.items():
            fwd_all: dict[int, dict[Gen, Word]] = {}
            inv_all: dict[int, dict[Gen, Word]] = {}
            for m in range(lc + 1, self.depth):
                fwd = {}
                for z in self.levels[m]:
                    img = rule(c, z)
                    fwd[z] = Word.gen(z) if img is None else img
                    stray = [s for s in fwd[z].symbols() if self.level_of.get(s) != m]
                    if stray:
                        raise LevelError(f"action of {c} on {z} leaves level {m + 1}: {stray}")
                if all(fwd[z] == Word.gen(z) for z in fwd):
                    continue
                try:
                    inv = invert_automorphism(fwd, self.levels[m])
                except NotInvertible as exc:
                    raise NotInvertible(f"conjugation by {c} on level {m + 1}: {exc}") from None
                fwd_all[m] = fwd
                inv_all[m] = inv
            self.act[(c, 1)] = fwd_all
            self.act[(c, -1)] = inv_all

    # ------------------------------------------------------------------
    def generators(self) -> list[Gen]:
        return [z for lv in self.levels for z in lv]

    def action(self, c: Gen, sign: int, z: Gen) -> Word:
        """``c z c^-1`` for sign +1, ``c^-1 z c`` for sign -1."""
        lc, lz = self._level(c), self._level(z)
        if lc >= lz:
            raise LevelError(f"{c} is not below {z}")
        table = self.act[(c, sign)].get(lz)
        return Word.gen(z) if table is None else table[z]

    def _level(self, g: Gen) -> int:
        try:
            return self.level_of[g]
        except KeyError:
            raise SymbolError(f"{g} is not a generator of this group") from None

    def check(self, w: Word):
        for g in w.symbols():
            self._level(g)

    # ------------------------------------------------------------------
    def comb(self, w: Word) -> CombedForm:
        """Normal form of ``w``."""
        return CombedForm(tuple(reversed(self._comb_levels(w, None))))

    def _comb_levels(self, w: Word, start: list[Word] | None) -> list[Word]:
        # levels stored bottom-up; each kept reversed so that prepending is an append
        self.check(w)
        if start:
            parts = [list(reversed(v.letters)) for v in start]
        else:
            parts = [[] for _ in range(self.depth)]
        rev = self._reversed_tables()
        level_of = self.level_of
        for letter in reversed(w.letters):
            g, s = letter
            for k, table in rev[letter].items():
                part = parts[k]
                if not part:
                    continue
                out: list = []
                push, pop = out.append, out.pop
                for z in part:
                    for y in table[z]:
                        if out and out[-1][0] is y[0] and out[-1][1] == -y[1]:
                            pop()
                        else:
                            push(y)
                parts[k] = out
            part = parts[level_of[g]]
            if part and part[-1][0] is g and part[-1][1] == -s:
                part.pop()
            else:
                part.append(letter)
        return [Word(reversed(pt)) for pt in parts]

    def _reversed_tables(self):
        """letter -> level -> (kernel letter -> reversed image letters)."""
        if getattr(self, "_rev", None) is None:
            rev = {}
            for (c, s), tables in self.act.items():
                per_level = {}
                for m, table in tables.items():
                    entry = {}
                    for z in self.levels[m]:
                        img = table.get(z, Word.gen(z))
                        entry[(z, 1)] = tuple(reversed(img.letters))
                        entry[(z, -1)] = tuple(reversed(img.inverse().letters))
                    per_level[m] = entry
                rev[(c, s)] = per_level
            self._rev = rev
        return self._rev

    def multiply(self, u: CombedForm, v: CombedForm) -> CombedForm:
        start = list(reversed(v.levels))
        return CombedForm(tuple(reversed(self._comb_levels(u.word(), start))))

    def is_trivial(self, w: Word) -> bool:
        return self.comb(w).is_identity()

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(u * v.inverse())

    def reduce(self, w: Word) -> Word:
        """Normal-form word representing ``w``."""
        return self.comb(w).word()

    # ------------------------------------------------------------------
    def check_tables(self) -> list[str]:
        """Forward then inverse must fix every generator; returns failures."""
        bad = []
        for (c, s), tables in self.act.items():
            if s != 1:
                continue
            for m, fwd in tables.items():
                inv = self.act[(c, -1)][m]
                for z in self.levels[m]:
                    if substitute(substitute(Word.gen(z), inv), fwd) != Word.gen(z):
                        bad.append(f"{c} on {z}")
                    if substitute(substitute(Word.gen(z), fwd), inv) != Word.gen(z):
                        bad.append(f"{c}^-1 on {z}")
        return bad


class _Default(dict):
    """Mapping that sends unlisted generators to themselves."""

    def __init__(self, table: Mapping[Gen, Word]):
        super().__init__(table)

    def __missing__(self, key):
        return Word.gen(key)


def tower_from_levels(levels: Iterable[Iterable[Gen]], rules: Mapping[tuple[Gen, Gen], Word]) -> SemidirectTower:
    """Tower whose action is given by an explicit table of ``c z c^-1`` words."""
    return SemidirectTower([list(lv) for lv in levels], lambda c, z: rules.get((c, z)))
