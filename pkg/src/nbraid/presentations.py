"""Presentations of pure braid groups of nonorientable surfaces.

Relations are stored as single relator words ``LHS * RHS^-1`` where the left
hand side is the conjugation ``c z c^-1`` exactly as displayed for each
relation family.  Every relator carries a label such as ``"b2(1,2,1,1)"``
naming its family and index pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .words import EPSILON, Gen, Word, B, abstract, p, parse_word, rho, x

__all__ = [
    "GroupSpec",
    "Presentation",
    "NamedElement",
    "Unsupported",
    "OutOfRange",
    "closed_presentation",
    "bordered_presentation",
    "surface_presentation",
    "free_presentation",
    "custom_presentation",
    "named_element",
    "conjugation_rhs",
    "elimination_word",
    "M2_READINGS",
    "parse_group_spec",
    "presentation_for",
    "sigma_word",
    "SECTION_VARIANTS",
    "T_word",
    "U_word",
    "a_word",
]

M2_READINGS = ("k", "drop")


class Unsupported(ValueError):
    """Parameters outside the range where a presentation is available."""


class OutOfRange(ValueError):
    """Index out of range for a named element."""


@dataclass(frozen=True)
class GroupSpec:
    family: str
    g: int = 0
    b: int = 0
    n: int = 0
    rank: int = 0
    name: str = ""

    def __post_init__(self):
        f = self.family
        if f == "closed":
            if self.g < 2:
                raise Unsupported(f"closed braid groups need g>=2 (got g={self.g})")
            if self.n < 1:
                raise Unsupported("closed braid groups need n>=1")
        elif f == "bordered":
            if self.g < 1 or self.b < 1 or self.n < 1:
                raise Unsupported(f"bordered braid groups need g,b,n>=1 (got {self.g},{self.b},{self.n})")
        elif f == "surface":
            if self.g < 2:
                raise Unsupported(f"surface groups need g>=2 (got g={self.g})")
        elif f == "free":
            if self.rank < 0:
                raise Unsupported("free group rank must be >= 0")
        elif f != "custom":
            raise Unsupported(f"unknown family {f!r}")

    @classmethod
    def closed(cls, g: int, n: int) -> "GroupSpec":
        return cls("closed", g=g, n=n)

    @classmethod
    def bordered(cls, g: int, b: int, n: int) -> "GroupSpec":
        return cls("bordered", g=g, b=b, n=n)

    @classmethod
    def surface(cls, g: int) -> "GroupSpec":
        return cls("surface", g=g)

    @classmethod
    def free(cls, rank: int) -> "GroupSpec":
        return cls("free", rank=rank)

    def __str__(self) -> str:
        if self.family == "closed":
            return f"closed:g={self.g},n={self.n}"
        if self.family == "bordered":
            return f"bordered:g={self.g},b={self.b},n={self.n}"
        if self.family == "surface":
            return f"surface:g={self.g}"
        if self.family == "free":
            return f"free:rank={self.rank}"
        return f"custom:{self.name}"

    def to_dict(self) -> dict:
        d = {"family": self.family}
        for key in ("g", "b", "n", "rank"):
            if getattr(self, key):
                d[key] = getattr(self, key)
        if self.name:
            d["name"] = self.name
        return d


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``closed:g=2,n=3``, ``bordered:g=2,b=1,n=3``, ``surface:g=2``, ``free:rank=2``."""
    family, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"bad group parameter {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ValueError(f"group parameter {key!r} must be an integer") from None
    allowed = {"closed": {"g", "n"}, "bordered": {"g", "b", "n"}, "surface": {"g"}, "free": {"rank"}}
    if family not in allowed:
        raise ValueError(f"unknown group family {family!r}")
    if set(params) != allowed[family]:
        raise ValueError(f"{family} needs parameters {sorted(allowed[family])}")
    return GroupSpec(family, **params)


@dataclass
class Presentation:
    spec: GroupSpec
    generators: list[Gen]
    relators: list[Word]
    labels: list[str] = field(default_factory=list)
    flagged: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"R{i + 1}" for i in range(len(self.relators))]
        gens = set(self.generators)
        for label, rel in zip(self.labels, self.relators):
            if not rel:
                raise ValueError(f"relator {label} is trivial")
            extra = rel.symbols() - gens
            if extra:
                raise ValueError(f"relator {label} uses undeclared generators {sorted(extra)}")

    def __iter__(self) -> Iterator[tuple[str, Word]]:
        return iter(zip(self.labels, self.relators))

    def relator(self, label: str) -> Word:
        return self.relators[self.labels.index(label)]

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "generators": [str(g) for g in self.generators],
            "relators": [str(r) for r in self.relators],
            "labels": self.labels,
            "flagged": self.flagged,
        }

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        d = json.loads(text)
        spec = GroupSpec(**d["spec"])
        gens = []
        for s in d["generators"]:
            (g, _), = parse_word(s).letters
            gens.append(g)
        rels = [parse_word(s) for s in d["relators"]]
        return cls(spec, gens, rels, d.get("labels") or [], d.get("flagged") or {})


@dataclass(frozen=True)
class NamedElement:
    name: str
    word: Word


def _w(*parts) -> Word:
    """Build a word from generators, (generator, exponent) pairs and words."""
    letters: list = []
    for part in parts:
        if isinstance(part, Gen):
            letters.append((part, 1))
        elif isinstance(part, Word):
            letters.extend(part.letters)
        else:
            g, e = part
            letters.extend(Word.gen(g, e).letters)
    return Word(letters)


def _inv(g: Gen):
    return (g, -1)


# --------------------------------------------------------------------------
# right hand sides of the displayed conjugation relations


def conjugation_rhs(c: Gen, z: Gen, m2_reading: str = "k") -> tuple[str, Word]:
    """Return ``(family label, c z c^-1)`` for a conjugator of lower strand level.

    ``c`` must live on a strictly lower strand than ``z``.  Pairs that the
    relations only state as commutation (higher generator conjugating a
    lower one) act trivially.
    """
    if c.strand >= z.strand:
        raise ValueError(f"{c} does not lie below {z}")
    ck, zk = c.kind, z.kind
    if ck == "B" and zk == "B":
        r, s = c.idx
        i, j = z.idx
        if i < r < s < j or r < s < i < j:
            return "a1", _w(z)
        if r < i == s < j:
            return "a2", _w(_inv(z), _inv(B(r, j)), z, B(r, j), z)
        if i == r < s < j:
            return "a3", _w(_inv(B(s, j)), z, B(s, j))
        if r < i < s < j:
            return "a4", _w(_inv(B(s, j)), _inv(B(r, j)), B(s, j), B(r, j), z,
                            _inv(B(r, j)), _inv(B(s, j)), B(r, j), B(s, j))
        raise AssertionError((c, z))
    if ck == "B":
        # B_{i,j} below rho_{k,l} or x_{u,t}: relations (d1) j<k and (l1) j<u
        return ("d1" if zk == "rho" else "l1"), _w(z)
    if ck == "rho" and zk == "B":
        k, l = c.idx
        i, j = z.idx
        if k < i:
            return "d1", _w(z)
        if k == i:
            return "d2", _w(_inv(rho(j, l)), _inv(z), rho(j, l))
        R, Bk = rho(j, l), B(k, j)
        return "d3", _w(_inv(R), _inv(Bk), R, _inv(Bk), z, Bk, _inv(R), Bk, R)
    if ck == "rho" and zk == "rho":
        i, k = c.idx
        j, l = z.idx
        if k < l:
            return "b1", _w(z)
        R, Bij = rho(j, k), B(i, j)
        if k == l:
            return "b2", _w(_inv(R), _inv(Bij), (R, 2))
        return "b3", _w(_inv(R), _inv(Bij), R, _inv(Bij), z, Bij, _inv(R), Bij, R)
    if ck == "rho" and zk == "x":
        return "m1", _w(z)
    if ck == "x" and zk == "B":
        u, t = c.idx
        i, j = z.idx
        X = x(j, t)
        if u < i:
            return "l1", _w(z)
        if u == i:
            return "l2", _w(_inv(X), z, X)
        Bu = B(u, j)
        return "l3", _w(_inv(X), Bu, X, _inv(Bu), z, Bu, _inv(X), _inv(Bu), X)
    if ck == "x" and zk == "rho":
        u, t = c.idx
        k, _ = z.idx
        X, Bu = x(k, t), B(u, k)
        if m2_reading == "k":
            return "m2", _w(_inv(X), Bu, X, _inv(Bu), z, Bu, _inv(X), _inv(Bu), X)
        if m2_reading == "drop":
            return "m2", _w(_inv(X), Bu, X, z, Bu, _inv(X), _inv(Bu), X)
        raise ValueError(f"unknown m2 reading {m2_reading!r}")
    if ck == "x" and zk == "x":
        i, t = c.idx
        j, s = z.idx
        X, Bij = x(j, t), B(i, j)
        if t < s:
            return "n1", _w(z)
        if t == s:
            return "n2", _w(_inv(X), Bij, X, _inv(Bij), X)
        return "n3", _w(_inv(X), Bij, X, _inv(Bij), z, Bij, _inv(X), _inv(Bij), X)
    raise ValueError(f"no relation between {c} and {z}")


def _conj_relator(c: Gen, z: Gen, rhs: Word) -> Word:
    return _w(c, z, _inv(c), rhs.inverse())


def _braid_gens(g: int, b: int, n: int) -> list[Gen]:
    gens = [B(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    gens += [rho(k, l) for k in range(1, n + 1) for l in range(1, g + 1)]
    gens += [x(u, t) for u in range(1, n + 1) for t in range(1, b)]
    return sorted(gens)


def _common_relators(g: int, n: int, b: int, m2_reading: str):
    """Relators of families (a), (b), (d), (l), (m), (n) in display order."""
    out: list[tuple[str, Word]] = []
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]

    # (a): B_{r,s} B_{i,j} B_{r,s}^-1, only the displayed index patterns
    for i, j in pairs:
        for r, s in pairs:
            if s < j:
                fam, rhs = conjugation_rhs(B(r, s), B(i, j))
                out.append((f"{fam}({i},{j},{r},{s})", _conj_relator(B(r, s), B(i, j), rhs)))
    # (b): rho_{i,k} rho_{j,l} rho_{i,k}^-1
    for i, j in pairs:
        for k in range(1, g + 1):
            for l in range(1, g + 1):
                fam, rhs = conjugation_rhs(rho(i, k), rho(j, l))
                out.append((f"{fam}({i},{j},{k},{l})", _conj_relator(rho(i, k), rho(j, l), rhs)))
    # (d): rho_{k,l} B_{i,j} rho_{k,l}^-1, k != j
    for i, j in pairs:
        for k in range(1, n + 1):
            if k == j:
                continue
            for l in range(1, g + 1):
                lbl = f"({i},{j},{k},{l})"
                if k > j:
                    out.append(("d1" + lbl, _conj_relator(rho(k, l), B(i, j), _w(B(i, j)))))
                else:
                    fam, rhs = conjugation_rhs(rho(k, l), B(i, j))
                    out.append((fam + lbl, _conj_relator(rho(k, l), B(i, j), rhs)))
    if b < 2:
        return out
    # (l): x_{u,t} B_{i,j} x_{u,t}^-1, u != j
    for i, j in pairs:
        for u in range(1, n + 1):
            if u == j:
                continue
            for t in range(1, b):
                lbl = f"({i},{j},{u},{t})"
                if u > j:
                    out.append(("l1" + lbl, _conj_relator(x(u, t), B(i, j), _w(B(i, j)))))
                else:
                    fam, rhs = conjugation_rhs(x(u, t), B(i, j))
                    out.append((fam + lbl, _conj_relator(x(u, t), B(i, j), rhs)))
    # (m): x_{u,t} rho_{k,l} x_{u,t}^-1, k != u
    for k in range(1, n + 1):
        for u in range(1, n + 1):
            if k == u:
                continue
            for l in range(1, g + 1):
                for t in range(1, b):
                    lbl = f"({k},{u},{l},{t})"
                    if k < u:
                        out.append(("m1" + lbl, _conj_relator(x(u, t), rho(k, l), _w(rho(k, l)))))
                    else:
                        fam, rhs = conjugation_rhs(x(u, t), rho(k, l), m2_reading)
                        out.append((fam + lbl, _conj_relator(x(u, t), rho(k, l), rhs)))
    # (n): x_{i,t} x_{j,s} x_{i,t}^-1
    for i, j in pairs:
        for s in range(1, b):
            for t in range(1, b):
                fam, rhs = conjugation_rhs(x(i, t), x(j, s))
                out.append((f"{fam}({i},{j},{s},{t})", _conj_relator(x(i, t), x(j, s), rhs)))
    return out


def T_word(i: int, n: int) -> Word:
    return _w(*[B(k, i) for k in range(1, i)], *[B(i, k) for k in range(i + 1, n + 1)])


def closed_presentation(g: int, n: int) -> Presentation:
    spec = GroupSpec.closed(g, n)
    rels = _common_relators(g, n, 1, "k")
    for i in range(1, n + 1):
        lhs = _w(*[(rho(i, l), 2) for l in range(1, g + 1)])
        rels.append((f"c({i})", lhs * T_word(i, n).inverse()))
    labels = [lbl for lbl, _ in rels]
    return Presentation(spec, _braid_gens(g, 1, n), [r for _, r in rels], labels)


def bordered_presentation(g: int, b: int, n: int, m2_reading: str = "k") -> Presentation:
    """Presentation of P_n(N_{g,b}).

    ``m2_reading`` selects how the ``B_{u,j}^-1`` factor printed in the
    (m2) family is instantiated: ``"k"`` substitutes the strand index of the
    conjugated generator, ``"drop"`` omits the factor.  Relators of that
    family are listed in ``flagged``.
    """
    if m2_reading not in M2_READINGS:
        raise ValueError(f"m2_reading must be one of {M2_READINGS}")
    spec = GroupSpec.bordered(g, b, n)
    rels = _common_relators(g, n, b, m2_reading)
    labels = [lbl for lbl, _ in rels]
    flagged = {
        lbl: f"printed factor B_(u,j)^-1 read as {'B_(u,k)^-1' if m2_reading == 'k' else 'omitted'}"
        for lbl in labels
        if lbl.startswith("m2")
    }
    return Presentation(spec, _braid_gens(g, b, n), [r for _, r in rels], labels, flagged)


def surface_presentation(g: int) -> Presentation:
    spec = GroupSpec.surface(g)
    gens = [p(i) for i in range(1, g + 1)]
    return Presentation(spec, gens, [_w(*[(q, 2) for q in gens])], ["surface"])


def free_presentation(rank: int, prefix: str = "f") -> Presentation:
    gens = [abstract(f"{prefix}{i}") for i in range(1, rank + 1)]
    return Presentation(GroupSpec.free(rank), gens, [], [])


def custom_presentation(name: str, generators, relators, labels=None) -> Presentation:
    return Presentation(GroupSpec("custom", name=name), list(generators), list(relators), list(labels or []))


# --------------------------------------------------------------------------
# named elements of the closed groups


def a_word(k: int, g: int) -> Word:
    return _w(rho(k, g - 1), rho(k, g))


def U_word(g: int, n: int) -> Word:
    return _w(*[a_word(k, g) for k in range(n, 1, -1)])


SECTION_VARIANTS = ("paper", "diagonal", "auto")


def sigma_word(i: int, g: int, n: int, variant: str = "paper") -> Word:
    """Image of p_i under a section of the first-strand map.

    ``"paper"`` is the case list as printed.  For g=2 that map does not kill
    p_1^2 p_2^2 (its value is U^2), so ``"diagonal"`` gives the alternative
    r[n,i] ... r[2,i] r[1,i], which is a section when g=2.  ``"auto"`` picks
    diagonal for g=2 and paper otherwise.
    """
    if variant not in SECTION_VARIANTS:
        raise ValueError(f"variant must be one of {SECTION_VARIANTS}")
    if variant == "auto":
        variant = "diagonal" if g == 2 else "paper"
    if variant == "diagonal":
        return _w(*[rho(k, i) for k in range(n, 0, -1)])
    U, T1 = U_word(g, n), T_word(1, n)
    if i == g:
        return _w(rho(1, g), T1.inverse())
    if i == g - 1:
        return _w(U, rho(1, g - 1))
    if i == g - 2:
        return _w(rho(1, g - 2), U.inverse())
    return _w(rho(1, i))


def elimination_word(j: int, g: int, n: int) -> Word:
    """B_{1,j} written in the generators of the kernel of the first-strand map."""
    squares = _w(*[(rho(j, l), 2) for l in range(1, g + 1)])
    rest = _w(*[B(k, j) for k in range(2, j)], *[B(j, k) for k in range(j + 1, n + 1)])
    return squares * rest.inverse()


def named_element(spec: GroupSpec, name: str, index: int | None = None) -> NamedElement:
    """``T(i)``, ``a(k)``, ``U`` or ``sigma(p_i)`` in a closed braid group."""
    if spec.family != "closed":
        raise Unsupported("named elements are defined for closed braid groups")
    g, n = spec.g, spec.n
    if name == "U":
        return NamedElement("U", U_word(g, n))
    if index is None:
        raise OutOfRange(f"{name} needs an index")
    if name == "T":
        if not 1 <= index <= n:
            raise OutOfRange(f"T({index}) needs 1<=i<={n}")
        return NamedElement(f"T({index})", T_word(index, n))
    if name == "a":
        if not 1 <= index <= n:
            raise OutOfRange(f"a({index}) needs 1<=k<={n}")
        return NamedElement(f"a({index})", a_word(index, g))
    if name == "sigma":
        if not 1 <= index <= g:
            raise OutOfRange(f"sigma(p_{index}) needs 1<=i<={g}")
        return NamedElement(f"sigma(p_{index})", sigma_word(index, g, n))
    raise OutOfRange(f"unknown named element {name!r}")


def presentation_for(spec: GroupSpec) -> Presentation:
    if spec.family == "closed":
        return closed_presentation(spec.g, spec.n)
    if spec.family == "bordered":
        return bordered_presentation(spec.g, spec.b, spec.n)
    if spec.family == "surface":
        return surface_presentation(spec.g)
    if spec.family == "free":
        return free_presentation(spec.rank)
    raise Unsupported(f"no standard presentation for {spec}")


_ = EPSILON  # re-exported for convenience in callers
