"""Word problem in pure braid groups of closed nonorientable surfaces.

The first-strand map ``lambda: P_n(N_g) -> pi_1(N_g)`` splits via ``sigma``
and its kernel ``A`` is generated by the generators avoiding strand 1 once
``B[1,j]`` is eliminated with relation (c).  ``A`` is a bordered braid group
on ``n-1`` strands, so it is decided by combing.  A word is swept into the
form ``sigma(c) * a`` letter by letter.

Conjugation by ``r[1,l]`` on ``A`` comes from relations (b) and (d); its
inverse is obtained level by level (the automorphism preserves the strand
filtration of ``A``) using folding on each free quotient.

Each ``sigma(p_l)`` has the shape ``V r[1,l] W`` with ``V, W`` in ``A``,
which is all the sweep needs.  For g=2 the default section is
``r[n,l] ... r[1,l]``; the printed case list does not kill the surface
relator there.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..presentations import (
    GroupSpec,
    Unsupported,
    conjugation_rhs,
    elimination_word,
    sigma_word,
    U_word,
    T_word,
)
from ..words import Gen, Word, p, rho, substitute
from .bordered import kernel_tower
from .folding import NotInvertible, invert_automorphism
from .surface import pi1_is_trivial
from .tower import CombedForm, SemidirectTower, SymbolError, _Default

__all__ = [
    "ClosedSolver",
    "ClosedSplitting",
    "SectionError",
    "closed_solver",
    "is_trivial_closed",
    "equal_closed",
    "tau",
    "lambda_map",
]

log = logging.getLogger(__name__)


class SectionError(RuntimeError):
    """The candidate section does not kill the surface relator."""


def lambda_map(w: Word) -> Word:
    """Letter map r[1,l] -> p[l]; every other generator -> identity."""
    return Word((p(g.idx[1]), s) for g, s in w.letters if g.kind == "rho" and g.idx[0] == 1)


@dataclass
class ClosedSplitting:
    g: int
    n: int
    sigma: dict[int, Word]
    rho1: dict[int, tuple[Word, Word]]  # l -> (sigma(p_l), A-correction) with r[1,l] = product
    b1: dict[int, Word]  # j -> B[1,j] as a word avoiding strand 1
    lam: dict[Gen, Word] = field(default_factory=dict)

    def mu_symbols_ok(self) -> bool:
        """Every elimination output avoids the first strand."""
        words = list(self.b1.values()) + [a for _, a in self.rho1.values()]
        return all(_in_mu(s) for w in words for s in w.symbols())


def _in_mu(s: Gen) -> bool:
    return (s.kind == "rho" and s.idx[0] >= 2) or (s.kind == "B" and s.idx[0] >= 2)


class _FilteredAut:
    """Automorphism of a tower preserving each normal subgroup ``levels >= m``."""

    def __init__(self, tower: SemidirectTower, images: dict[Gen, Word]):
        self.tower = tower
        self.fwd = {z: tower.reduce(w) for z, w in images.items()}
        self.inv: dict[Gen, Word] = {}
        for m in range(tower.depth - 1, -1, -1):
            level = tower.levels[m]
            induced = {}
            for z in level:
                form = tower.comb(self.fwd[z]).levels  # top-down
                bottom = form[tower.depth - 1 - m:]
                if any(bottom[1:]):
                    raise NotInvertible(f"image of {z} leaves its filtration step")
                induced[z] = bottom[0]
            bar_inv = invert_automorphism(induced, level)
            for z in level:
                wz = bar_inv[z]
                form = tower.comb(self.apply_word(wz)).levels
                head = Word.product(form[: tower.depth - 1 - m])
                self.inv[z] = tower.reduce(substitute(head.inverse(), _Default(self.inv)) * wz)
        for z in tower.generators():
            if tower.reduce(self.apply_word(self.inv[z])) != Word.gen(z):
                raise NotInvertible(f"inverse check failed on {z}")

    def apply_word(self, w: Word) -> Word:
        return substitute(w, self.fwd)

    def apply(self, w: Word) -> Word:
        return self.tower.reduce(substitute(w, self.fwd))

    def apply_inverse(self, w: Word) -> Word:
        return self.tower.reduce(substitute(w, self.inv))


class ClosedSolver:
    """Decides equality in ``P_n(N_g)``; construction verifies the section."""

    def __init__(self, g: int, n: int, verify: bool = True, section: str = "auto"):
        if g < 2:
            raise Unsupported(f"closed case needs g>=2 (got g={g})")
        if n < 1:
            raise Unsupported("need n>=1")
        self.g, self.n = g, n
        self.spec = GroupSpec.closed(g, n)
        self.generators = set(_closed_generators(g, n))
        self.section = section
        self.sigma = {l: sigma_word(l, g, n, section) for l in range(1, g + 1)}
        if n == 1:
            self.A = None
            return
        self.A = kernel_tower(g, 1, n, 2)
        self._h1_cache: dict = {}
        self.E = {j: elimination_word(j, g, n) for j in range(2, n + 1)}
        e_map = {Gen("B", (1, j)): w for j, w in self.E.items()}
        self.U = U_word(g, n)
        self.T1 = self.A.reduce(substitute(T_word(1, n), _Default(e_map)))
        self.psi = {}
        for l in range(1, g + 1):
            c = rho(1, l)
            images = {}
            for z in self.A.generators():
                rhs = conjugation_rhs(c, z)[1]
                images[z] = substitute(rhs, _Default(e_map))
            self.psi[l] = _FilteredAut(self.A, images)
        # sigma(p_l) = V_l r[1,l] W_l with V_l, W_l in A
        self.V, self.W = {}, {}
        for l, sw in self.sigma.items():
            hits = [k for k, (h, _) in enumerate(sw.letters) if h.kind == "rho" and h.idx[0] == 1]
            if len(hits) != 1 or sw.letters[hits[0]] != (rho(1, l), 1):
                raise SectionError(f"sigma(p_{l}) must contain r[1,{l}] exactly once")
            k = hits[0]
            self.V[l] = self.A.reduce(substitute(Word(sw.letters[:k]), _Default(e_map)))
            self.W[l] = self.A.reduce(substitute(Word(sw.letters[k + 1:]), _Default(e_map)))
        self.alpha = {
            l: self.A.reduce(self.phi_minus(l, self.V[l].inverse()) * self.W[l].inverse())
            for l in range(1, g + 1)
        }
        self.splitting = ClosedSplitting(
            g,
            n,
            dict(self.sigma),
            {l: (self.sigma[l], self.alpha[l]) for l in range(1, g + 1)},
            dict(self.E),
            {rho(1, l): Word.gen(p(l)) for l in range(1, g + 1)},
        )
        if verify:
            self.section_defect = self._section_defect()
            if not self.section_defect.is_identity():
                raise SectionError(f"sigma(p1^2...pg^2) is not trivial: {self.section_defect}")

    # ------------------------------------------------------------------
    # conjugation by sigma(p_l) on A
    def phi_plus(self, l: int, a: Word) -> Word:
        """``sigma(p_l) a sigma(p_l)^-1``."""
        V, W = self.V[l], self.W[l]
        return self.A.reduce(V * self.psi[l].apply(W * a * W.inverse()) * V.inverse())

    def phi_minus(self, l: int, a: Word) -> Word:
        """``sigma(p_l)^-1 a sigma(p_l)``."""
        V, W = self.V[l], self.W[l]
        return self.A.reduce(W.inverse() * self.psi[l].apply_inverse(V.inverse() * a * V) * W)

    # ------------------------------------------------------------------
    def _check(self, w: Word):
        stray = w.symbols() - self.generators
        if stray:
            raise SymbolError(f"not generators of P_{self.n}(N_{self.g}): {sorted(stray)}")

    def split(self, w: Word) -> tuple[Word, Word]:
        """Return ``(c, a)`` with ``w = sigma(c) * a`` and ``a`` a normal-form word of ``A``."""
        self._check(w)
        c: list = []
        a = Word()
        A = self.A
        for gen, s in w.letters:
            if gen.kind == "rho" and gen.idx[0] == 1:
                l = gen.idx[1]
                if s > 0:
                    a = A.reduce(self.phi_minus(l, a) * self.alpha[l])
                else:
                    a = self.phi_plus(l, a * self.alpha[l].inverse())
                c.append((p(l), s))
            elif gen.kind == "B" and gen.idx[0] == 1:
                e = self.E[gen.idx[1]]
                a = A.reduce(a * (e if s > 0 else e.inverse()))
            else:
                a = A.reduce(a * Word([(gen, s)]))
        return Word(c), a

    def split_h1(self, w: Word, h1) -> tuple[Word, list[int]]:
        """``split`` with the ``A`` part read in ``H_1(A; F_p)`` only.

        The automorphisms ``phi`` preserve the mod-p commutator subgroup, so
        they act on ``H_1(A; F_p)`` by matrices and the sweep never builds
        long normal forms.  ``h1`` must come from ``h1_mod_p`` of the kernel
        presentation.
        """
        self._check(w)
        P, plus, minus, alpha, elim = self._h1_data(h1)
        letter = {}
        c: list = []
        a = np.zeros(h1.dimension, dtype=np.int64)
        for gen, s in w.letters:
            if gen.kind == "rho" and gen.idx[0] == 1:
                l = gen.idx[1]
                a = minus[l] @ a + alpha[l] if s > 0 else plus[l] @ (a - alpha[l])
                c.append((p(l), s))
            elif gen.kind == "B" and gen.idx[0] == 1:
                a = a + s * elim[gen.idx[1]]
            else:
                if gen not in letter:
                    letter[gen] = P(Word.gen(gen))
                a = a + s * letter[gen]
            a %= h1.p
        return Word(c), [int(x) for x in a]

    def _h1_data(self, h1):
        key = (h1.p, tuple(h1.basis))
        if key not in self._h1_cache:
            def P(w):
                return np.array(h1.project(w), dtype=np.int64)

            basis = [Word.gen(b) for b in h1.basis]
            ls = range(1, self.g + 1)
            plus = {l: np.array([P(self.phi_plus(l, b)) for b in basis], dtype=np.int64).reshape(-1, h1.dimension).T for l in ls}
            minus = {l: np.array([P(self.phi_minus(l, b)) for b in basis], dtype=np.int64).reshape(-1, h1.dimension).T for l in ls}
            alpha = {l: P(self.alpha[l]) for l in ls}
            elim = {j: P(e) for j, e in self.E.items()}
            self._h1_cache[key] = (P, plus, minus, alpha, elim)
        return self._h1_cache[key]

    def is_trivial(self, w: Word) -> bool:
        self._check(w)
        if self.n == 1:
            return pi1_is_trivial(lambda_map(w), self.g)
        if not pi1_is_trivial(lambda_map(w), self.g):
            return False
        _, a = self.split(w)
        return not a

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(u * v.inverse())

    def kernel_form(self, w: Word) -> CombedForm:
        """Combed form in ``A`` of ``w``; requires ``lambda(w) = 1``."""
        if not pi1_is_trivial(lambda_map(w), self.g):
            raise ValueError("word does not lie in the kernel of the first-strand map")
        return self.A.comb(self.split(w)[1])

    def sigma_of(self, c: Word) -> Word:
        return substitute(c, {p(i): w for i, w in self.sigma.items()})

    def tau(self, w: Word) -> Word:
        return self.sigma_of(lambda_map(w)).inverse() * w

    # ------------------------------------------------------------------
    def _section_defect(self) -> CombedForm:
        """Sweep ``sigma(p_1)^2 ... sigma(p_g)^2`` using only ``r[1,l]`` conjugations.

        The prefix is kept as ``r~(f) * a`` where ``r~`` sends ``p_l`` to
        ``r[1,l]``.  The first-strand letters of the swept word spell the
        surface relator exactly, so the prefix ends as ``T_1 * a`` by
        relation (c), and the section is well defined iff that is trivial.
        """
        word = Word.product(self.sigma[i] ** 2 for i in range(1, self.g + 1))
        relator = Word.product(Word.gen(p(i), 2) for i in range(1, self.g + 1))
        if lambda_map(word) != relator:
            raise SectionError("first-strand letters of the section relator do not spell the surface relator")
        a = Word()
        A = self.A
        for gen, s in word.letters:
            if gen.kind == "rho" and gen.idx[0] == 1:
                psi = self.psi[gen.idx[1]]
                a = psi.apply_inverse(a) if s > 0 else psi.apply(a)
            elif gen.kind == "B" and gen.idx[0] == 1:
                e = self.E[gen.idx[1]]
                a = A.reduce(a * (e if s > 0 else e.inverse()))
            else:
                a = A.reduce(a * Word([(gen, s)]))
        return A.comb(self.T1 * a)


def _closed_generators(g: int, n: int) -> list[Gen]:
    from ..presentations import closed_presentation

    return closed_presentation(g, n).generators


@lru_cache(maxsize=None)
def closed_solver(g: int, n: int, section: str = "auto") -> ClosedSolver:
    return ClosedSolver(g, n, section=section)


def _solver(spec: GroupSpec) -> ClosedSolver:
    if spec.family != "closed":
        raise Unsupported(f"expected a closed braid group, got {spec}")
    return closed_solver(spec.g, spec.n)


def is_trivial_closed(w: Word, spec: GroupSpec) -> bool:
    return _solver(spec).is_trivial(w)


def equal_closed(u: Word, v: Word, spec: GroupSpec) -> bool:
    return _solver(spec).equal(u, v)


def tau(w: Word, spec: GroupSpec) -> Word:
    return _solver(spec).tau(w)
