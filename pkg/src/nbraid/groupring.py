"""Mod-2 group rings of finite groups and powers of the augmentation ideal.

Groups are given by a full multiplication table with the identity at index
0.  Group ring elements are 0/1 numpy vectors indexed by group elements;
subspaces are kept as echelonized bitsets (Python ints) so that sums,
containment and dimension are exact.

The decomposition check compares ``I^k(Q)`` with
``R_k = sum_{i+h=k} I^i(A) I^h(C)`` inside ``F_2[Q]`` for ``Q = A C`` with
``A`` normal, which is what the tensor identification ``a (x) c -> ac``
amounts to.  :func:`special_reduce` follows the swap-and-induct argument and
returns an explicit certificate.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .pquotient import PcQuotient
from .report import CheckResult

__all__ = [
    "FiniteGroup",
    "GF2Space",
    "GroupRing",
    "SpecialElement",
    "Term",
    "DecompositionCertificate",
    "PreconditionFailed",
    "SearchFailure",
    "GroupTooLarge",
    "aug_power_basis",
    "aug_dims",
    "check_decomposition",
    "special_reduce",
    "random_special",
    "MAX_ORDER",
]

MAX_ORDER = 4096


class PreconditionFailed(ValueError):
    pass


class SearchFailure(RuntimeError):
    pass


class GroupTooLarge(ValueError):
    pass


# --------------------------------------------------------------------------
# finite groups


class FiniteGroup:
    """A finite group by multiplication table; element 0 is the identity."""

    def __init__(self, table: np.ndarray, labels: Sequence[str] | None = None, name: str = ""):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        if n > MAX_ORDER:
            raise GroupTooLarge(f"order {n} exceeds {MAX_ORDER}")
        if not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise ValueError("element 0 must be the identity")
        self.table = table
        self.order = n
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
        self.name = name
        self.inv = np.argmin(table, axis=1)  # the identity is the only 0 in each row

    def mul(self, *elems: int) -> int:
        out = 0
        for e in elems:
            out = int(self.table[out, e])
        return out

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        return self.mul(int(self.inv[a]), int(self.inv[b]), a, b)

    def conj(self, g: int, a: int) -> int:
        """``g a g^-1``."""
        return self.mul(g, a, int(self.inv[g]))

    def subgroup(self, gens: Iterable[int]) -> list[int]:
        seen = {0}
        gens = [int(g) for g in gens]
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    k = int(self.table[h, g])
                    if k not in seen:
                        seen.add(k)
                        nxt.append(k)
            frontier = nxt
        return sorted(seen)

    def is_normal(self, sub: Sequence[int]) -> bool:
        s = set(sub)
        return all(self.conj(g, a) in s for g in range(self.order) for a in sub)

    def frattini(self, sub: Sequence[int]) -> list[int]:
        """``[S,S] S^2`` for a subgroup ``S`` (the kernel of ``S -> H_1(S; F_2)``)."""
        gens = {self.mul(a, a) for a in sub}
        gens |= {self.commutator(a, b) for a in sub for b in sub}
        return self.subgroup(gens)

    # constructors
    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        i = np.arange(n)
        return cls((i[:, None] + i[None, :]) % n, [f"t^{k}" if k != 1 else "t" for k in range(n)], f"Z/{n}")

    @classmethod
    def semidirect(cls, A: "FiniteGroup", C: "FiniteGroup", action) -> tuple["FiniteGroup", list[int], list[int]]:
        """``A x| C`` with ``(a,c)(a',c') = (a phi_c(a'), c c')``.

        ``action(c, a)`` returns ``phi_c(a)``.  Returns the group and the
        index lists of the copies of ``A`` and ``C``.
        """
        na, nc = A.order, C.order
        phi = np.array([[action(c, a) for a in range(na)] for c in range(nc)], dtype=np.int64)
        n = na * nc
        if n > MAX_ORDER:
            raise GroupTooLarge(f"order {n} exceeds {MAX_ORDER}")
        idx = lambda a, c: c * na + a  # noqa: E731
        table = np.empty((n, n), dtype=np.int64)
        for c1 in range(nc):
            for a1 in range(na):
                row = table[idx(a1, c1)]
                for c2 in range(nc):
                    cc = C.table[c1, c2]
                    for a2 in range(na):
                        row[idx(a2, c2)] = idx(A.table[a1, phi[c1, a2]], cc)
        labels = []
        for c in range(nc):
            for a in range(na):
                parts = [s for s in (A.labels[a] if a else "", C.labels[c] if c else "") if s]
                labels.append("*".join(parts) or "1")
        G = cls(table, labels, f"({A.name}) x| ({C.name})")
        return G, [idx(a, 0) for a in range(na)], [idx(0, c) for c in range(nc)]

    @classmethod
    def direct(cls, A: "FiniteGroup", C: "FiniteGroup"):
        return cls.semidirect(A, C, lambda c, a: a)

    @classmethod
    def from_pc(cls, q: PcQuotient) -> "FiniteGroup":
        """Enumerate a pc quotient; element index is the exponent vector read base p."""
        n = q.order
        if n > MAX_ORDER:
            raise GroupTooLarge(f"order {n} exceeds {MAX_ORDER}")
        m, p = q.rank, q.p
        vecs = [list(v) for v in itertools.product(range(p), repeat=m)]
        vecs = [v[::-1] for v in vecs]  # first pc generator varies fastest
        index = {tuple(v): k for k, v in enumerate(vecs)}
        table = np.empty((n, n), dtype=np.int64)
        for i, u in enumerate(vecs):
            for j, v in enumerate(vecs):
                table[i, j] = index[tuple(q.multiply(u, v))]
        G = cls(table, [q.normal_word(v) for v in vecs], f"class-{q.cls} quotient")
        G.vectors = vecs
        G.index = index
        return G

    def element(self, vec) -> int:
        return self.index[tuple(vec)]


# --------------------------------------------------------------------------
# GF(2) subspaces as bitsets


def _to_int(vec: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(vec, dtype=np.uint8) & 1, bitorder="little").tobytes(), "little")


def _to_vec(x: int, n: int) -> np.ndarray:
    raw = np.frombuffer(x.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


class GF2Space:
    """Echelonized span of bit vectors; ``pivot`` selects the highest or lowest set bit."""

    def __init__(self, n: int, pivot: str = "high"):
        if pivot not in ("high", "low"):
            raise ValueError("pivot must be 'high' or 'low'")
        self.n = n
        self.pivot = pivot
        self.rows: dict[int, int] = {}

    def _lead(self, x: int) -> int:
        return x.bit_length() - 1 if self.pivot == "high" else (x & -x).bit_length() - 1

    def reduce(self, x: int) -> int:
        rows = self.rows
        while x:
            lead = self._lead(x)
            r = rows.get(lead)
            if r is None:
                return x
            x ^= r
        return 0

    def add(self, x) -> bool:
        if not isinstance(x, int):
            x = _to_int(x)
        x = self.reduce(x)
        if not x:
            return False
        self.rows[self._lead(x)] = x
        return True

    def __contains__(self, x) -> bool:
        if not isinstance(x, int):
            x = _to_int(x)
        return self.reduce(x) == 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[int]:
        return [self.rows[k] for k in sorted(self.rows)]

    def vectors(self) -> list[np.ndarray]:
        return [_to_vec(x, self.n) for x in self.basis()]

    def contains_space(self, other: "GF2Space") -> bool:
        return all(self.reduce(x) == 0 for x in other.rows.values())

    def equals(self, other: "GF2Space") -> bool:
        return self.dim == other.dim and self.contains_space(other)


# --------------------------------------------------------------------------
# group ring


class GroupRing:
    """``F_2[G]``; elements are uint8 vectors of length ``|G|``."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.n = G.order
        # (g y)[z] = y[g^-1 z]; (y g)[z] = y[z g^-1]
        self._left = G.table[G.inv]  # row g: z -> g^-1 z
        self._right = G.table[:, G.inv].T  # row g: z -> z g^-1

    def zero(self) -> np.ndarray:
        return np.zeros(self.n, dtype=np.uint8)

    def basis_element(self, g: int) -> np.ndarray:
        v = self.zero()
        v[g] = 1
        return v

    def aug(self, g: int) -> np.ndarray:
        """``g - 1``."""
        v = self.zero()
        v[g] ^= 1
        v[0] ^= 1
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = self.zero()
        for g in np.flatnonzero(x):
            out ^= y[self._left[g]]
        return out

    def right_mul(self, y: np.ndarray, g: int) -> np.ndarray:
        return y[self._right[g]]

    def left_mul(self, g: int, y: np.ndarray) -> np.ndarray:
        return y[self._left[g]]

    def product(self, factors: Iterable[np.ndarray]) -> np.ndarray:
        out = self.basis_element(0)
        for f in factors:
            out = self.mul(out, f)
        return out

    def augmentation(self, x: np.ndarray) -> int:
        return int(x.sum() % 2)

    def support(self, x: np.ndarray) -> list[str]:
        return [self.G.labels[g] for g in np.flatnonzero(x)]

    @cached_property
    def _chains(self) -> dict:
        return {}


def aug_power_basis(G: FiniteGroup, k: int, subgroup: Sequence[int] | None = None,
                    pivot: str = "high", ring: GroupRing | None = None) -> GF2Space:
    """``I^k`` of ``F_2[S]`` inside ``F_2[G]`` (``S = G`` unless ``subgroup`` is given)."""
    return _aug_chain(G, k, subgroup, pivot, ring)[k]


def _aug_chain(G, k, subgroup, pivot, ring) -> list[GF2Space]:
    R = ring or GroupRing(G)
    elems = list(range(G.order)) if subgroup is None else sorted(int(s) for s in subgroup)
    key = (tuple(elems), pivot)
    chain = R._chains.setdefault(key, [])
    if not chain:
        whole = GF2Space(G.order, pivot)
        for g in elems:
            whole.add(R.basis_element(g))
        chain.append(whole)
    while len(chain) <= k:
        prev = chain[-1]
        nxt = GF2Space(G.order, pivot)
        vecs = prev.vectors()
        for g in elems:
            if g == 0:
                continue
            for v in vecs:
                # v (g - 1) = v g + v
                nxt.add(R.right_mul(v, g) ^ v)
        chain.append(nxt)
        if nxt.dim == 0:
            while len(chain) <= k:
                chain.append(nxt)
    return chain


def aug_dims(G: FiniteGroup, k_max: int, subgroup=None) -> list[int]:
    """Dimensions of ``I^1 .. I^k_max``."""
    chain = _aug_chain(G, k_max, subgroup, "high", None)
    return [chain[k].dim for k in range(1, k_max + 1)]


def _check_split(G: FiniteGroup, A: Sequence[int], C: Sequence[int]):
    if len(A) * len(C) != G.order or set(A) & set(C) != {0}:
        raise PreconditionFailed("A and C do not form a split decomposition of the group")
    if not G.is_normal(A):
        raise PreconditionFailed("A is not normal")
    phi = set(G.frattini(A))
    for c in C:
        for a in A:
            if G.mul(G.conj(c, a), int(G.inv[a])) not in phi:
                raise PreconditionFailed(
                    f"C acts nontrivially on H_1(A; F_2): {G.labels[c]} moves {G.labels[a]}")


def check_decomposition(G: FiniteGroup, A: Sequence[int], C: Sequence[int], k_max: int) -> CheckResult:
    """``I^k(G) = sum_{i+h=k} I^i(A) I^h(C)`` for ``k <= k_max``."""
    _check_split(G, A, C)
    R = GroupRing(G)
    lhs = _aug_chain(G, k_max, None, "high", R)
    ia = _aug_chain(G, k_max, A, "high", R)
    ic = _aug_chain(G, k_max, C, "high", R)
    rows = []
    ok = True
    for k in range(k_max + 1):
        rk = GF2Space(G.order)
        for i in range(k + 1):
            xs, ys = ia[i].vectors(), ic[k - i].vectors()
            for x in xs:
                for y in ys:
                    rk.add(R.mul(x, y))
        same = rk.equals(lhs[k])
        rows.append({"k": k, "dim_lhs": lhs[k].dim, "dim_rhs": rk.dim, "equal": same})
        ok &= same
    return CheckResult(ok, "augmentation-decomposition", {"order": G.order, "k": rows})


# --------------------------------------------------------------------------
# special elements


@dataclass(frozen=True)
class SpecialElement:
    """``prod (e_j - 1)``; ``tags[j]`` is "A" or "C"."""

    factors: tuple
    tags: tuple

    def __post_init__(self):
        if len(self.factors) != len(self.tags) or not self.factors:
            raise ValueError("need one tag per factor and at least one factor")
        if any(t not in ("A", "C") for t in self.tags):
            raise ValueError("tags must be 'A' or 'C'")

    @property
    def type(self) -> tuple:
        return tuple(0 if t == "A" else 1 for t in self.tags)

    def is_standard(self) -> bool:
        t = self.type
        return list(t) == sorted(t)

    def evaluate(self, R: GroupRing) -> np.ndarray:
        return R.product(R.aug(e) for e in self.factors)


@dataclass(frozen=True)
class Term:
    """``prod (a - 1) prod (c - 1) m`` with the A-factors first and ``m`` in ``C``."""

    a_factors: tuple
    c_factors: tuple
    right: int = 0

    @property
    def degrees(self) -> tuple[int, int]:
        return len(self.a_factors), len(self.c_factors)

    def evaluate(self, R: GroupRing) -> np.ndarray:
        v = R.product(R.aug(e) for e in self.a_factors + self.c_factors)
        return R.right_mul(v, self.right)


@dataclass
class DecompositionCertificate:
    element: SpecialElement
    terms: list[Term] = field(default_factory=list)

    def evaluate(self, R: GroupRing) -> np.ndarray:
        out = R.zero()
        for t in self.terms:
            out ^= t.evaluate(R)
        return out

    def verify(self, R: GroupRing, C: Sequence[int]) -> bool:
        k = len(self.element.factors)
        cs = set(C)
        if any(sum(t.degrees) != k or t.right not in cs for t in self.terms):
            return False
        return bool(np.array_equal(self.evaluate(R), self.element.evaluate(R)))

    def to_dict(self, G: FiniteGroup) -> dict:
        lab = G.labels
        return {
            "element": {"factors": [lab[e] for e in self.element.factors], "type": list(self.element.type)},
            "terms": [
                {"i": len(t.a_factors), "h": len(t.c_factors),
                 "A": [lab[e] for e in t.a_factors], "C": [lab[e] for e in t.c_factors], "right": lab[t.right]}
                for t in self.terms
            ],
        }

    def to_json(self, G: FiniteGroup) -> str:
        return json.dumps(self.to_dict(G), indent=2)


class _FrattiniSearch:
    """Write elements of ``[A,A] A^2`` as short products of commutators and squares."""

    def __init__(self, G: FiniteGroup, A: Sequence[int], max_factors: int = 4):
        self.G = G
        pieces: dict[int, tuple] = {}
        for a in A:
            pieces.setdefault(G.mul(a, a), ("sq", a))
        for a in A:
            for b in A:
                pieces.setdefault(G.commutator(a, b), ("comm", a, b))
        pieces.pop(0, None)
        self.pieces = pieces
        # breadth-first: shortest product reaching each element
        self.path: dict[int, list] = {0: []}
        queue = deque([0])
        while queue:
            h = queue.popleft()
            if len(self.path[h]) >= max_factors:
                continue
            for z, how in pieces.items():
                k = G.mul(h, z)
                if k not in self.path:
                    self.path[k] = self.path[h] + [(z, how)]
                    queue.append(k)

    def decompose(self, f: int) -> list:
        try:
            return self.path[f]
        except KeyError:
            raise SearchFailure(f"{self.G.labels[f]} is not a short product of commutators and squares") from None


def _minus_one_pairs(G: FiniteGroup, f: int, search: _FrattiniSearch) -> list[tuple[int, int, int]]:
    """``f - 1 = sum (u - 1)(v - 1) alpha`` over F_2, as (u, v, alpha) triples."""
    parts = search.decompose(f)
    out = []
    for j, (z, how) in enumerate(parts):
        rest = G.mul(*[w for w, _ in parts[j + 1:]]) if j + 1 < len(parts) else 0
        if how[0] == "sq":
            # z - 1 = (k - 1)^2
            u = v = how[1]
            beta = 0
        else:
            # [x,y] - 1 = g ((x-1)(y-1) + (y-1)(x-1)) with g = x^-1 y^-1
            #           = (gxg^-1 - 1)(gyg^-1 - 1) g + (gyg^-1 - 1)(gxg^-1 - 1) g
            x, y = how[1], how[2]
            gg = G.mul(int(G.inv[x]), int(G.inv[y]))
            gx, gy = G.conj(gg, x), G.conj(gg, y)
            out.append((gy, gx, G.mul(gg, rest)))
            u, v, beta = gx, gy, gg
        out.append((u, v, G.mul(beta, rest)))
    return out


def special_reduce(e: SpecialElement, G: FiniteGroup, A: Sequence[int], C: Sequence[int],
                   max_factors: int = 4, _search: _FrattiniSearch | None = None) -> DecompositionCertificate:
    """Rewrite ``e`` as a sum of standard products with right multipliers in ``C``."""
    _check_tags(e, A, C)
    search = _search or _FrattiniSearch(G, A, max_factors)
    terms = []
    _reduce(e.factors, e.tags, 0, G, search, terms)
    return DecompositionCertificate(e, _cancel(terms))


def _check_tags(e: SpecialElement, A, C):
    sa, sc = set(A), set(C)
    for f, t in zip(e.factors, e.tags):
        if f not in (sa if t == "A" else sc):
            raise ValueError(f"factor {f} is not in {t}")


def _reduce(factors: tuple, tags: tuple, right: int, G: FiniteGroup, search, out: list):
    if any(f == 0 for f in factors):
        return  # (1 - 1) = 0
    k = next((j for j in range(len(tags) - 1) if tags[j] == "C" and tags[j + 1] == "A"), None)
    if k is None:
        na = tags.count("A")
        out.append(Term(tuple(factors[:na]), tuple(factors[na:]), right))
        return
    c, a = factors[k], factors[k + 1]
    head, tail_f, tail_t = factors[:k], factors[k + 2:], tags[k + 2:]
    # (c-1)(a-1) = (a-1)(c-1) + (f-1) a c, f = c a c^-1 a^-1
    _reduce(head + (a, c) + tail_f, tags[:k] + ("A", "C") + tail_t, right, G, search, out)
    f = G.mul(G.conj(c, a), int(G.inv[a]))
    # a c prod(e_l - 1) = a prod(c e_l c^-1 - 1) c
    moved = tuple(G.conj(c, x) for x in tail_f)
    new_right = G.mul(c, right)
    for u, v, alpha in _minus_one_pairs(G, f, search):
        # (u-1)(v-1) alpha a = (u-1)(v alpha a - 1) + (u-1)(alpha a - 1)
        aa = G.mul(alpha, a)
        for second in (G.mul(v, aa), aa):
            _reduce(head + (u, second) + moved, tags[:k] + ("A", "A") + tail_t, new_right, G, search, out)


def _cancel(terms: list[Term]) -> list[Term]:
    # identical terms cancel in characteristic 2
    count: dict[Term, int] = {}
    order = []
    for t in terms:
        if t not in count:
            order.append(t)
        count[t] = count.get(t, 0) ^ 1
    return [t for t in order if count[t]]


def random_special(rng: random.Random, A: Sequence[int], C: Sequence[int], max_len: int = 4) -> SpecialElement:
    k = rng.randint(1, max_len)
    tags = tuple(rng.choice("AC") for _ in range(k))
    factors = tuple(rng.choice([x for x in (A if t == "A" else C) if x]) for t in tags)
    return SpecialElement(factors, tags)
