"""Word problem in the fundamental group of a closed nonorientable surface.

* g = 2: Klein bottle normal form ``b^j a^i`` with ``a = p1``, ``b = p1 p2``.
* g >= 4: Dehn's algorithm; the relator ``p1^2 ... pg^2`` has pieces of
  length one, so it satisfies C'(1/6) once its length 2g exceeds 6.
* g = 3: pass to the orientable double cover (Reidemeister-Schreier with
  transversal {1, p1}) and run Dehn's algorithm on the genus-2 relator.
"""

from __future__ import annotations

from functools import lru_cache

from ..presentations import Unsupported
from ..words import Word, abstract, p

__all__ = ["DehnSolver", "pi1_is_trivial", "pi1_equal", "klein_normal_form", "double_cover_word"]


class DehnSolver:
    """Dehn's algorithm for a one-relator small-cancellation presentation."""

    def __init__(self, relator: Word):
        if not relator:
            raise ValueError("empty relator")
        self.length = len(relator)
        cyclic = set()
        for r in (relator, relator.inverse()):
            letters = r.letters
            for i in range(len(letters)):
                cyclic.add(letters[i:] + letters[:i])
        # index rotations by first letter for a quicker scan
        self.by_first: dict = {}
        for r in cyclic:
            self.by_first.setdefault(r[0], []).append(r)

    def reduce(self, w: Word) -> Word:
        letters = list(w.letters)
        half = self.length // 2
        changed = True
        while changed:
            changed = False
            for i in range(len(letters)):
                best = None
                for r in self.by_first.get(letters[i], ()):
                    k = 0
                    while k < self.length and i + k < len(letters) and letters[i + k] == r[k]:
                        k += 1
                    if k > half and (best is None or k > best[0]):
                        best = (k, r)
                if best is not None:
                    k, r = best
                    complement = Word(r[k:]).inverse()
                    letters = list(Word(letters[:i] + list(complement.letters) + letters[i + k:]).letters)
                    changed = True
                    break
        return Word(letters)

    def is_trivial(self, w: Word) -> bool:
        return not self.reduce(w)


def _check(w: Word, g: int):
    if g < 2:
        raise Unsupported(f"surface group solver needs g>=2 (got g={g})")
    for s in w.symbols():
        if s.kind != "p" or s.idx[0] > g:
            raise ValueError(f"{s} is not a generator of pi_1(N_{g})")


def klein_normal_form(w: Word) -> tuple[int, int]:
    """``(j, i)`` with ``w = b^j a^i`` in the Klein bottle group."""
    j, i = 0, 0
    for gen, s in w.letters:
        k = gen.idx[0]
        if k == 1:
            dj, di = 0, s
        elif s > 0:
            dj, di = -1, -1  # p2 = a^-1 b = b^-1 a^-1
        else:
            dj, di = -1, 1  # p2^-1 = a b = b^-1 a
        j += dj if i % 2 == 0 else -dj
        i += di
    return j, i


_Y = {i: abstract(f"y{i}") for i in range(2, 4)}
_Z = {i: abstract(f"z{i}") for i in range(1, 4)}


def double_cover_word(w: Word) -> Word:
    """Rewrite an even-exponent-sum word of pi_1(N_3) in the cover's generators."""
    out: list = []
    coset = 0  # 0 for the identity coset, 1 for p1
    for gen, s in w.letters:
        i = gen.idx[0]
        if s > 0:
            if coset == 0:
                if i != 1:
                    out.append((_Y[i], 1))
            else:
                out.append((_Z[i], 1))
        else:
            if coset == 0:
                out.append((_Z[i], -1))
            elif i != 1:
                out.append((_Y[i], -1))
        coset ^= 1
    if coset:
        raise ValueError("word does not lie in the orientation subgroup")
    z1 = Word([(_Z[3], -1), (_Y[3], -1), (_Z[2], -1), (_Y[2], -1)])
    letters: list = []
    for gen, s in out:
        if gen == _Z[1]:
            letters.extend((z1 if s > 0 else z1.inverse()).letters)
        else:
            letters.append((gen, s))
    return Word(letters)


@lru_cache(maxsize=None)
def _solver(g: int) -> DehnSolver:
    if g == 3:
        y2, y3, z2, z3 = (Word.gen(s) for s in (_Y[2], _Y[3], _Z[2], _Z[3]))
        rel = z2.inverse() * y2.inverse() * z2 * y2 * z3 * y3 * z3.inverse() * y3.inverse()
        return DehnSolver(rel)
    return DehnSolver(Word.product(Word.gen(p(i), 2) for i in range(1, g + 1)))


def pi1_is_trivial(w: Word, g: int) -> bool:
    _check(w, g)
    if g == 2:
        return klein_normal_form(w) == (0, 0)
    if sum(s for _, s in w.letters) % 2:
        return False
    if g == 3:
        return _solver(3).is_trivial(double_cover_word(w))
    return _solver(g).is_trivial(w)


def pi1_equal(u: Word, v: Word, g: int) -> bool:
    return pi1_is_trivial(u * v.inverse(), g)
