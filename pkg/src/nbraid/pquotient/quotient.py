"""Quotients ``G / P_{c+1}(G)`` by the lower exponent-p central series.

``P_1 = G`` and ``P_{k+1} = [P_k, G] P_k^p``.  Each class is obtained from
the previous one by adding a central tail to every relation that is not a
definition (and to every non-defining image of an original generator),
imposing the consistency equations and the relator images, and keeping a
basis of what remains as the new layer.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ..presentations import Presentation
from ..words import Gen, Word
from .collector import PcPresentation, dense, sparse
from .linalg import Echelon

__all__ = [
    "PcQuotient",
    "FiltrationReport",
    "ResourceLimit",
    "InconsistentPresentation",
    "p_quotient",
    "p_quotients",
    "iter_p_quotients",
    "h1_mod_p",
    "H1",
    "image",
    "DEFAULT_LIMIT",
]

log = logging.getLogger(__name__)

DEFAULT_LIMIT = 2**20


class ResourceLimit(RuntimeError):
    """The quotient would exceed the configured order bound."""

    def __init__(self, message: str, log_order: int = 0, completed_class: int = 0):
        super().__init__(message)
        self.log_order = log_order
        self.completed_class = completed_class


class InconsistentPresentation(RuntimeError):
    pass


@dataclass
class FiltrationReport:
    p: int
    orders: list[int]  # |G / P_{k+1}| for k = 1..c
    ranks: list[int]  # dim P_k / P_{k+1}

    def to_dict(self) -> dict:
        return {"p": self.p, "orders": [str(o) if o > 2**53 else o for o in self.orders], "ranks": self.ranks}


@dataclass
class PcQuotient:
    p: int
    cls: int
    weights: list[int]
    power: list[tuple]
    comm: list[list[tuple]]
    definitions: list[tuple]
    generators: list[Gen]  # original generators, in presentation order
    images: dict[Gen, list[int]]
    preimages: list[Word] = field(default_factory=list)

    def __post_init__(self):
        self.pc = PcPresentation(self.p, len(self.weights), self.power, self.comm)
        self._inv_images = {}

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def order(self) -> int:
        return self.p ** self.rank

    def layer(self, k: int) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w == k]

    def identity(self) -> list[int]:
        return [0] * self.rank

    def multiply(self, u, v) -> list[int]:
        return self.pc.multiply(u, v)

    def inverse(self, u) -> list[int]:
        return self.pc.inverse(u)

    def image(self, w: Word) -> list[int]:
        e = self.identity()
        for g, s in w.letters:
            try:
                vec = self.images[g] if s > 0 else self._inverse_image(g)
            except KeyError:
                raise KeyError(f"{g} is not a generator of the presented group") from None
            self.pc.collect(e, self.pc.letters(vec))
        return e

    def _inverse_image(self, g: Gen) -> list[int]:
        if g not in self._inv_images:
            self._inv_images[g] = self.pc.inverse(self.images[g])
        return self._inv_images[g]

    def is_identity(self, w: Word) -> bool:
        return not any(self.image(w))

    def weight_of(self, vec) -> int:
        """Smallest weight carrying a nonzero exponent (class+1 for the identity)."""
        for i, e in enumerate(vec):
            if e:
                return self.weights[i]
        return self.cls + 1

    def truncate(self, vec, c: int) -> list[int]:
        """Projection onto the class-``c`` quotient (a prefix of the generators)."""
        k = sum(1 for w in self.weights if w <= c)
        return list(vec[:k])

    def normal_word(self, vec) -> str:
        parts = [f"a{i + 1}" if e == 1 else f"a{i + 1}^{e}" for i, e in enumerate(vec) if e]
        return " ".join(parts) if parts else "1"

    def to_dict(self) -> dict:
        def fmt(w):
            return " ".join(f"a{k + 1}" if e == 1 else f"a{k + 1}^{e}" for k, e in w) or "1"

        rels = {}
        for i in range(self.rank):
            if self.power[i]:
                rels[f"a{i + 1}^{self.p}"] = fmt(self.power[i])
            for j in range(i + 1, self.rank):
                if self.comm[j][i]:
                    rels[f"[a{j + 1},a{i + 1}]"] = fmt(self.comm[j][i])
        return {
            "p": self.p,
            "class": self.cls,
            "order": str(self.order) if self.order > 2**53 else self.order,
            "weights": self.weights,
            "relations": rels,
            "definitions": [list(d) for d in self.definitions],
            "images": {str(g): self.normal_word(v) for g, v in self.images.items()},
        }


# --------------------------------------------------------------------------


def _trivial_quotient(pres: Presentation, p: int) -> PcQuotient:
    return PcQuotient(p, 0, [], [], [], [], list(pres.generators), {g: [] for g in pres.generators}, [])


def _next_class(q: PcQuotient, relators: list[Word], limit: int) -> PcQuotient:
    p, m, c = q.p, q.rank, q.cls
    defined = {d[1:] if d[0] != "image" else None for d in q.definitions}
    defined_power = {d[1] for d in q.definitions if d[0] == "power"}
    defined_comm = {(d[1], d[2]) for d in q.definitions if d[0] == "comm"}
    defined_image = {d[1] for d in q.definitions if d[0] == "image"}
    del defined

    # tails: image tails first so that they are eliminated in preference
    tails: list[tuple] = []
    for g in q.generators:
        if g not in defined_image:
            tails.append(("image", g))
    for i in range(m):
        if i not in defined_power:
            tails.append(("power", i))
    for i in range(m):
        for j in range(i + 1, m):
            if (j, i) not in defined_comm and q.weights[i] + q.weights[j] <= c + 1:
                tails.append(("comm", j, i))
    T = len(tails)
    n = m + T
    if n > 4096:
        raise ResourceLimit(f"{T} tails at class {c + 1}", m, c)
    index = {t: m + k for k, t in enumerate(tails)}

    power = [tuple(q.power[i]) + (((index[("power", i)], 1),) if ("power", i) in index else ()) for i in range(m)]
    power += [()] * T
    comm = [[() for _ in range(n)] for _ in range(n)]
    for j in range(m):
        for i in range(j):
            base = tuple(q.comm[j][i])
            t = index.get(("comm", j, i))
            comm[j][i] = base + (((t, 1),) if t is not None else ())
    cover = PcPresentation(p, n, power, comm)

    images = {}
    for g in q.generators:
        v = list(q.images[g]) + [0] * T
        t = index.get(("image", g))
        if t is not None:
            v[t] = 1
        images[g] = v

    ech = Echelon(T, p)

    def equate(u, v, what):
        if u[:m] != v[:m]:
            raise InconsistentPresentation(f"class {c} presentation fails {what}")
        diff = np.array([(a - b) % p for a, b in zip(u[m:], v[m:])], dtype=np.int64)
        if diff.any():
            ech.add(diff)

    def g(i):
        return cover.gen(i)

    # consistency
    for k in range(m):
        for j in range(k):
            for i in range(j):
                if q.weights[i] + q.weights[j] + q.weights[k] > c + 1:
                    continue
                left = cover.collect(g(k), [j, i])
                right = cover.collect(g(k), cover.letters(cover.collect(g(j), [i])))
                equate(left, right, f"associativity {k},{j},{i}")
    for j in range(m):
        for i in range(j):
            if q.weights[i] + q.weights[j] > c + 1:
                continue
            # (a_j^p) a_i = a_j^(p-1) (a_j a_i)
            left = cover.collect(dense(power[j], n), [i])
            right = cover.collect([0] * n, [j] * (p - 1) + cover.letters(cover.collect(g(j), [i])))
            equate(left, right, f"power-left {j},{i}")
            # (a_j a_i^(p-1)) a_i = a_j (a_i^p)
            left = cover.collect(g(j), [i] * p)
            right = cover.collect(g(j), cover.letters(dense(power[i], n)))
            equate(left, right, f"power-right {j},{i}")
    for i in range(m):
        left = cover.collect(dense(power[i], n), [i])
        right = cover.collect(g(i), cover.letters(dense(power[i], n)))
        equate(left, right, f"power {i}")

    # relators
    inv_images = {}
    for rel in relators:
        e = [0] * n
        for gen, s in rel.letters:
            if s > 0:
                vec = images[gen]
            else:
                if gen not in inv_images:
                    inv_images[gen] = cover.inverse(images[gen])
                vec = inv_images[gen]
            cover.collect(e, cover.letters(vec))
        equate(e, [0] * n, "relator image")

    free = ech.free_columns()
    r = len(free)
    if p ** (m + r) > limit:
        raise ResourceLimit(f"class {c + 1} quotient has order {p}^{m + r} above the limit", m + r, c)
    new_index = {col: m + k for k, col in enumerate(free)}

    def tail_word(col: int) -> tuple:
        if col in new_index:
            return ((new_index[col], 1),)
        combo = ech.solve_pivot(col)
        return tuple(sorted((new_index[k], e) for k, e in combo.items() if e))

    def replace(word: tuple) -> tuple:
        out = []
        for k, e in word:
            if k < m:
                out.append((k, e))
            else:
                for kk, ee in tail_word(k - m):
                    out.append((kk, (ee * e) % p))
        merged: dict[int, int] = {}
        for k, e in out:
            merged[k] = (merged.get(k, 0) + e) % p
        return tuple((k, e) for k, e in sorted(merged.items()) if e)

    M = m + r
    new_power = [replace(power[i]) for i in range(m)] + [()] * r
    new_comm = [[() for _ in range(M)] for _ in range(M)]
    for j in range(m):
        for i in range(j):
            new_comm[j][i] = replace(comm[j][i])
    new_images = {gen: dense(replace(sparse(v)), M) for gen, v in images.items()}
    definitions = list(q.definitions)
    preimages = list(q.preimages)
    for col in free:
        t = tails[col]
        definitions.append(t)
        if t[0] == "image":
            preimages.append(Word.gen(t[1]))
        elif t[0] == "power":
            preimages.append(preimages[t[1]] ** p)
        else:
            a, b = preimages[t[1]], preimages[t[2]]
            preimages.append(a.inverse() * b.inverse() * a * b)
    log.debug("class %d: %d tails, %d new generators", c + 1, T, r)
    return PcQuotient(p, c + 1, q.weights + [c + 1] * r, new_power, new_comm, definitions,
                      q.generators, new_images, preimages)


def _check_prime(p: int):
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def iter_p_quotients(pres: Presentation, p: int, limit: int = DEFAULT_LIMIT) -> Iterator[PcQuotient]:
    """Yield the class-1, class-2, ... quotients; stops only when the caller does."""
    _check_prime(p)
    q = _trivial_quotient(pres, p)
    relators = list(pres.relators)
    while True:
        q = _next_class(q, relators, limit)
        yield q


def p_quotients(pres: Presentation, p: int, c: int, limit: int = DEFAULT_LIMIT) -> list[PcQuotient]:
    """Quotients of class 1..c (each a prefix refinement of the next)."""
    if c < 1:
        raise ValueError("class must be >= 1")
    return list(itertools.islice(iter_p_quotients(pres, p, limit), c))


def p_quotient(pres: Presentation, p: int, c: int, limit: int = DEFAULT_LIMIT) -> tuple[PcQuotient, FiltrationReport]:
    qs = p_quotients(pres, p, c, limit)
    ranks = [len(qs[-1].layer(k)) for k in range(1, c + 1)]
    return qs[-1], FiltrationReport(p, [q.order for q in qs], ranks)


def image(q: PcQuotient, w: Word) -> list[int]:
    return q.image(w)


# --------------------------------------------------------------------------


@dataclass
class H1:
    p: int
    dimension: int
    basis: list[Gen]  # generators whose classes form a basis
    generators: list[Gen]
    _matrix: np.ndarray  # coordinates of each generator in the basis

    def project(self, w: Word) -> list[int]:
        v = np.zeros(self.dimension, dtype=np.int64)
        pos = {g: k for k, g in enumerate(self.generators)}
        for g, s in w.letters:
            v = (v + s * self._matrix[pos[g]]) % self.p
        return [int(a) for a in v]


def h1_mod_p(pres: Presentation, p: int) -> H1:
    """``H_1(G; F_p)`` as the cokernel of the relator exponent matrix."""
    gens = list(pres.generators)
    pos = {g: k for k, g in enumerate(gens)}
    ech = Echelon(len(gens), p)
    for rel in pres.relators:
        row = np.zeros(len(gens), dtype=np.int64)
        for g, s in rel.letters:
            row[pos[g]] += s
        ech.add(row % p)
    free = ech.free_columns()
    coord = np.zeros((len(gens), len(free)), dtype=np.int64)
    where = {col: k for k, col in enumerate(free)}
    for k, col in enumerate(free):
        coord[col, k] = 1
    for col in ech.pivots():
        for other, e in ech.solve_pivot(col).items():
            coord[col, where[other]] = e
    return H1(p, len(free), [gens[c] for c in free], gens, coord)
