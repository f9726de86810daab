"""Independent oracles for the test suite.

Nothing in here imports ``nbraid``.  Words are read from their text form
with a private tokenizer, finite groups are plain Python closures, and
linear algebra is schoolbook elimination.  Running the module rewrites
``frozen_oracles.json`` next to it; the tests compare the engine against
the frozen values and re-derive the cheap ones on every run.
"""

from __future__ import annotations

import itertools
import json
import re
from pathlib import Path

FROZEN = Path(__file__).with_name("frozen_oracles.json")

_TOKEN = re.compile(r"\s*([Brxp]\[\d+(?:,\d+)?\]|[A-Za-z_]\w*)(?:\^(-?\d+))?")


def tokens(text: str) -> list[tuple[str, int]]:
    """``"r[1,1]^2 B[1,2]^-1"`` -> ``[("r[1,1]", 2), ("B[1,2]", -1)]``; no brackets or commutators."""
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"oracle tokenizer stuck at {text[pos:]!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
        pos = m.end()
    return out


# --------------------------------------------------------------------------
# linear algebra mod p


def rank_mod_p(rows, p: int) -> int:
    rows = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def h1_dim(generators: list[str], relators: list[str], p: int) -> int:
    idx = {g: i for i, g in enumerate(generators)}
    rows = []
    for r in relators:
        row = [0] * len(generators)
        for sym, e in tokens(r):
            row[idx[sym]] += e
        rows.append(row)
    return len(generators) - (rank_mod_p(rows, p) if rows else 0)


def _mobius(n: int) -> int:
    out, m, q = 1, n, 2
    while q * q <= m:
        if m % q == 0:
            m //= q
            if m % q == 0:
                return 0
            out = -out
        q += 1
    return -out if m > 1 else out


def witt(d: int, n: int) -> int:
    """Number of basic commutators of weight ``n`` on ``d`` letters."""
    return sum(_mobius(e) * d ** (n // e) for e in range(1, n + 1) if n % e == 0) // n


def free_layer_ranks(d: int, c: int) -> list[int]:
    """Layer ranks of the exponent-p series of a free group.

    A basic commutator of weight ``w`` raised to ``p^j`` sits in layer ``w + j``.
    """
    return [sum(witt(d, k - j) for j in range(k)) for k in range(1, c + 1)]


# --------------------------------------------------------------------------
# brute-force finite groups


class Brute:
    """A finite group given by a multiplication closure on hashable elements."""

    def __init__(self, gens, mul, identity):
        self.mul, self.e = mul, identity
        self.gens = list(gens)
        self.elements = self.closure(self.gens)

    def closure(self, gens) -> frozenset:
        seen = {self.e}
        frontier = [self.e]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def inv(self, x):
        # finite order: x^(m-1)
        y, prev = x, self.e
        while y != self.e:
            prev, y = y, self.mul(y, x)
        return prev

    def comm(self, h, k):
        return self.mul(self.mul(self.inv(h), self.inv(k)), self.mul(h, k))

    def power(self, x, n: int):
        out = self.e
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def p_series(self, p: int, c: int) -> list[frozenset]:
        """``[G, P_2, ..., P_{c+1}]`` for the lower exponent-p central series."""
        series = [self.elements]
        for _ in range(c):
            cur = series[-1]
            gens = {self.comm(g, x) for g in self.gens for x in cur} | {self.power(x, p) for x in cur}
            series.append(self.closure(gens))
        return series

    def quotient_orders(self, p: int, c: int) -> list[int]:
        s = self.p_series(p, c)
        return [len(self.elements) // len(s[k]) for k in range(1, c + 1)]


def cyclic(m: int) -> Brute:
    return Brute([1], lambda x, y: (x + y) % m, 0)


def zz_semidirect(m: int, sign: int) -> Brute:
    """``(Z/m) x| (Z/m)`` with pairs ``(j, i)`` standing for ``b^j a^i`` and ``a b a^-1 = b^sign``."""

    def mul(u, v):
        j1, i1 = u
        j2, i2 = v
        return ((j1 + sign ** i1 * j2) % m, (i1 + i2) % m)

    return Brute([(0, 1), (1, 0)], mul, (0, 0))


def klein_affine(word: list[tuple[str, int]], names=("a", "b")) -> tuple:
    """Faithful action of the Klein bottle group on Z^2.

    ``a: (x, y) -> (x + 1, -y)`` and ``b: (x, y) -> (x, y + 1)``; an element
    is recorded as ``(e, tx, ty)`` meaning ``(x, y) -> (x + tx, e*y + ty)``.
    """
    def compose(f, g):  # f after g
        e1, x1, y1 = f
        e2, x2, y2 = g
        return (e1 * e2, x1 + x2, e1 * y2 + y1)

    gen = {names[0]: (-1, 1, 0), names[1]: (1, 0, 1)}
    inv = {names[0]: (-1, -1, 0), names[1]: (1, 0, -1)}
    acc = (1, 0, 0)
    # left-to-right product u1 u2 ... acts as u1 after u2 after ...
    for sym, e in word:
        step = gen[sym] if e > 0 else inv[sym]
        for _ in range(abs(e)):
            acc = compose(acc, step)
    return acc


def klein_p_word(text: str) -> tuple:
    """Evaluate a word over ``p[1], p[2]`` in the Klein bottle group, ``p1 = a``, ``p2 = a^-1 b``."""
    w = []
    for sym, e in tokens(text):
        unit = [("a", 1)] if sym == "p[1]" else [("a", -1), ("b", 1)]
        if e < 0:
            unit = [(s, -x) for s, x in reversed(unit)]
        w += unit * abs(e)
    return klein_affine(w)


# --------------------------------------------------------------------------
# homomorphisms into small 2-groups


def dihedral8() -> Brute:
    # (r, s) = rot^r ref^s
    def mul(u, v):
        r1, s1 = u
        r2, s2 = v
        return ((r1 + (-1) ** s1 * r2) % 4, (s1 + s2) % 2)

    return Brute([(1, 0), (0, 1)], mul, (0, 0))


def eval_word(G: Brute, text: str, assign: dict) -> object:
    acc = G.e
    for sym, e in tokens(text):
        x = assign[sym] if e > 0 else G.inv(assign[sym])
        for _ in range(abs(e)):
            acc = G.mul(acc, x)
    return acc


def find_separating_hom(G: Brute, generators: list[str], relators: list[str], target: str,
                        determined: dict[str, str] | None = None):
    """Assignments of generators into ``G`` killing every relator with ``target`` mapped nontrivially.

    ``determined`` maps a generator to a word in the others that fixes its
    value (used to cut the search).
    """
    determined = determined or {}
    free = [g for g in generators if g not in determined]
    elems = sorted(G.elements)
    for values in itertools.product(elems, repeat=len(free)):
        assign = dict(zip(free, values))
        for g, w in determined.items():
            assign[g] = eval_word(G, w, assign)
        if eval_word(G, target, assign) == G.e:
            continue
        if all(eval_word(G, r, assign) == G.e for r in relators):
            return assign
    return None


# --------------------------------------------------------------------------
# group rings over F_2, products enumerated directly


def _ring_mul(G: Brute, index: dict, x: int, y: int) -> int:
    out = 0
    elems = G.order_list
    for i in range(len(elems)):
        if x >> i & 1:
            for j in range(len(elems)):
                if y >> j & 1:
                    out ^= 1 << index[G.mul(elems[i], elems[j])]
    return out


def _span_rank(vectors) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            if h not in basis:
                basis[h] = v
                break
            v ^= basis[h]
    return len(basis)


def _span_basis(vectors) -> list[int]:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            if h not in basis:
                basis[h] = v
                break
            v ^= basis[h]
    return list(basis.values())


def _setup(G: Brute):
    G.order_list = sorted(G.elements, key=repr)
    return {g: i for i, g in enumerate(G.order_list)}


def aug_products(G: Brute, sub, k: int) -> list[int]:
    """All k-fold products ``(g1-1)...(gk-1)`` with ``gi`` in ``sub`` (deduplicated)."""
    index = _setup(G) if not hasattr(G, "order_list") else {g: i for i, g in enumerate(G.order_list)}
    one = 1 << index[G.e]
    if k == 0:
        # the whole group ring of the subgroup
        return sorted(1 << index[g] for g in sub)
    layer = {one}
    for _ in range(k):
        layer = {_ring_mul(G, index, x, one ^ (1 << index[g])) for x in layer for g in sub if g != G.e}
        layer.discard(0)
        layer = set(_span_basis(layer)) if len(layer) > 4096 else layer
    return sorted(layer)


def aug_dims(G: Brute, k_max: int) -> list[int]:
    _setup(G)
    return [_span_rank(aug_products(G, G.elements, k)) for k in range(1, k_max + 1)]


def decomposition_dims(G: Brute, A, C, k_max: int) -> list[tuple[int, int]]:
    """``(dim I^k, dim sum_{i+h=k} I^i(A) I^h(C))`` for k = 1..k_max."""
    _setup(G)
    index = {g: i for i, g in enumerate(G.order_list)}
    out = []
    for k in range(1, k_max + 1):
        lhs = _span_rank(aug_products(G, G.elements, k))
        rhs_vecs = []
        for i in range(k + 1):
            left = aug_products(G, A, i)
            right = aug_products(G, C, k - i)
            rhs_vecs += [_ring_mul(G, index, x, y) for x in _span_basis(left) for y in _span_basis(right)]
        out.append((lhs, _span_rank(rhs_vecs)))
    return out


# --------------------------------------------------------------------------
# frozen values


def _p2n2_presentation_text():
    """P_2(N_2) as text, typed in by hand from the displayed relations (independent of the engine)."""
    gens = ["B[1,2]", "r[1,1]", "r[1,2]", "r[2,1]", "r[2,2]"]
    rels = [
        # (b2) r11 r21 r11^-1 = r21^-1 B12^-1 r21^2, and the same with l=2
        "r[1,1] r[2,1] r[1,1]^-1 r[2,1]^-2 B[1,2] r[2,1]",
        "r[1,2] r[2,2] r[1,2]^-1 r[2,2]^-2 B[1,2] r[2,2]",
        # (b1) r11 r22 r11^-1 = r22
        "r[1,1] r[2,2] r[1,1]^-1 r[2,2]^-1",
        # (b3) r12 r21 r12^-1 = r22^-1 B12^-1 r22 B12^-1 r21 B12 r22^-1 B12 r22
        "r[1,2] r[2,1] r[1,2]^-1 r[2,2]^-1 B[1,2]^-1 r[2,2] B[1,2]^-1 r[2,1]^-1 B[1,2] r[2,2]^-1 B[1,2] r[2,2]",
        # (d2) r1l B12 r1l^-1 = r2l^-1 B12^-1 r2l
        "r[1,1] B[1,2] r[1,1]^-1 r[2,1]^-1 B[1,2] r[2,1]",
        "r[1,2] B[1,2] r[1,2]^-1 r[2,2]^-1 B[1,2] r[2,2]",
        # (c) with T1 = T2 = B12
        "r[1,1]^2 r[1,2]^2 B[1,2]^-1",
        "r[2,1]^2 r[2,2]^2 B[1,2]^-1",
    ]
    return gens, rels


def compute() -> dict:
    out: dict = {}
    out["z_orders"] = cyclic(2 ** 4).quotient_orders(2, 3)
    out["klein_orders"] = zz_semidirect(16, -1).quotient_orders(2, 3)
    out["zxz_orders"] = zz_semidirect(16, 1).quotient_orders(2, 3)
    # the modulus must be even for inversion to be an action, and large enough for class 3 at p=3
    out["klein_orders_p3"] = zz_semidirect(54, -1).quotient_orders(3, 3)
    out["z_orders_p3"] = cyclic(81).quotient_orders(3, 3)
    # free group of rank d: layer 2 of the exponent-2 series is spanned by d squares and C(d,2) commutators
    out["free2_class2_order"] = 2 ** sum(free_layer_ranks(2, 2))
    out["free_layer_ranks"] = {str(d): free_layer_ranks(d, 4) for d in (1, 2, 3, 4)}
    out["h1_surface"] = {str(g): h1_dim([f"p[{i}]" for i in range(1, g + 1)],
                                        [" ".join(f"p[{i}]^2" for i in range(1, g + 1))], 2) for g in (2, 3, 4, 5)}
    gens, rels = _p2n2_presentation_text()
    out["h1_p2n2"] = h1_dim(gens, rels, 2)
    out["z4_aug_dims"] = aug_dims(cyclic(4), 4)
    out["z2_aug_dims"] = aug_dims(cyclic(2), 2)
    kl = zz_semidirect(4, -1)
    A = [x for x in kl.elements if x[1] == 0]
    C = [x for x in kl.elements if x[0] == 0]
    out["klein_mod4_decomposition"] = decomposition_dims(kl, A, C, 3)
    z4sq = zz_semidirect(4, 1)
    A = [x for x in z4sq.elements if x[1] == 0]
    C = [x for x in z4sq.elements if x[0] == 0]
    out["z4xz4_decomposition"] = decomposition_dims(z4sq, A, C, 3)
    hom = find_separating_hom(dihedral8(), gens, rels, "B[1,2]", {"B[1,2]": "r[1,1]^2 r[1,2]^2"})
    out["p2n2_b12_separated_in_d8"] = hom is not None
    out["p2n2_b12_d8_assignment"] = {k: list(v) for k, v in hom.items()} if hom else None
    return out


def frozen() -> dict:
    return json.loads(FROZEN.read_text())


if __name__ == "__main__":
    FROZEN.write_text(json.dumps(compute(), indent=1, sort_keys=True) + "\n")
    print(FROZEN.read_text())
