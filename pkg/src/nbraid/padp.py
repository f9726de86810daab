"""Split extensions ``1 -> A -> B -> C -> 1`` and their p-almost direct structure.

A :class:`SplitSequence` bundles three presentations with the maps between
them and two exact oracles (triviality in ``B`` and in ``C``) plus a rewrite
taking a ``B``-word that lies in the kernel to an ``A``-word.  Every check
here reduces to those oracles and to p-quotients of the three groups.

Membership in ``P_k(A)`` (the lower exponent-p central series) is decided
by looking at the image in the class ``k-1`` quotient, which is exact.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .combing import closed_solver, is_trivial, pi1_is_trivial
from .pquotient import DEFAULT_LIMIT, H1, PcQuotient, h1_mod_p, iter_p_quotients, p_quotients
from .pquotient.linalg import rank_mod_p
from .report import CheckResult
from .presentations import (
    GroupSpec,
    Presentation,
    bordered_presentation,
    custom_presentation,
    presentation_for,
    surface_presentation,
)
from .words import B, Gen, Word, abstract, commutator, p, rho, substitute, x

__all__ = [
    "SplitSequence",
    "CheckResult",
    "WitnessResult",
    "RewriteFailure",
    "TrivialInput",
    "Exhausted",
    "closed_sequence",
    "semidirect_zz",
    "klein_sequence",
    "shift_strands",
    "check_section",
    "check_p_almost_direct",
    "check_split_filtration",
    "perturb_section",
    "lemma_fr_sample",
    "witness",
]

log = logging.getLogger(__name__)


class RewriteFailure(RuntimeError):
    """A word expected to lie in the kernel could not be written over ``A``."""


class TrivialInput(ValueError):
    """The witness search was given an element that is trivial."""


class Exhausted(RuntimeError):
    def __init__(self, message: str, max_class: int):
        super().__init__(message)
        self.max_class = max_class


@dataclass
class SplitSequence:
    name: str
    A: Presentation
    B: Presentation
    C: Presentation
    embed: dict[Gen, Word]  # A generator -> B word
    lam: dict[Gen, Word]  # B generator -> C word (missing means identity)
    sigma: dict[Gen, Word]  # C generator -> B word
    b_trivial: Callable[[Word], bool]
    c_trivial: Callable[[Word], bool]
    rewrite: Callable[[Word], Word]  # kernel B word -> A word
    rewrite_h1: Callable[[Word, H1], list[int]] | None = None  # same, read in H_1(A; F_p)

    def lambda_of(self, w: Word) -> Word:
        return Word(letter for g, s in w.letters for letter in (self.lam.get(g, Word()) ** s).letters)

    def sigma_of(self, c: Word) -> Word:
        return substitute(c, self.sigma)

    def embed_word(self, a: Word) -> Word:
        return substitute(a, self.embed)

    def to_A(self, w: Word) -> Word:
        """Rewrite a kernel element of ``B`` over the generators of ``A``."""
        try:
            a = self.rewrite(w)
        except RewriteFailure:
            raise
        except Exception as exc:  # the oracles raise their own errors
            raise RewriteFailure(f"cannot rewrite {w}: {exc}") from exc
        stray = a.symbols() - set(self.A.generators)
        if stray:
            raise RewriteFailure(f"rewrite left symbols outside A: {sorted(stray)}")
        return a


# --------------------------------------------------------------------------
# concrete sequences


def shift_strands(w: Word, k: int) -> Word:
    """Add ``k`` to every strand index of a braid word."""
    def move(g: Gen) -> Gen:
        if g.kind == "B":
            return B(g.idx[0] + k, g.idx[1] + k)
        if g.kind == "rho":
            return rho(g.idx[0] + k, g.idx[1])
        if g.kind == "x":
            return x(g.idx[0] + k, g.idx[1])
        return g

    return Word((move(g), s) for g, s in w.letters)


def kernel_presentation(g: int, n: int) -> Presentation:
    """``P_{n-1}(N_{g,1})`` on strands 2..n, as it sits inside ``P_n(N_g)``."""
    base = bordered_presentation(g, 1, n - 1)
    gens = [shift_strands(Word.gen(h), 1).letters[0][0] for h in base.generators]
    rels = [shift_strands(r, 1) for r in base.relators]
    return custom_presentation(f"P_{n - 1}(N_{g},1) on strands 2..{n}", gens, rels, base.labels)


def closed_sequence(g: int, n: int, section: str = "auto") -> SplitSequence:
    """``1 -> P_{n-1}(N_{g,1}) -> P_n(N_g) -> pi_1(N_g) -> 1`` (forget all but strand 1)."""
    if n < 2:
        raise ValueError("the first-strand sequence needs n >= 2")
    solver = closed_solver(g, n, section)
    A = kernel_presentation(g, n)
    Bp = presentation_for(GroupSpec.closed(g, n))
    C = surface_presentation(g)

    def rewrite(w: Word) -> Word:
        c, a = solver.split(w)
        if not pi1_is_trivial(c, g):
            raise RewriteFailure(f"{w} does not lie in the kernel (first strand reads {c})")
        return a

    def rewrite_h1(w: Word, h1: H1) -> list[int]:
        c, v = solver.split_h1(w, h1)
        if not pi1_is_trivial(c, g):
            raise RewriteFailure(f"{w} does not lie in the kernel (first strand reads {c})")
        return v

    return SplitSequence(
        name=f"closed g={g} n={n}",
        A=A,
        B=Bp,
        C=C,
        embed={h: Word.gen(h) for h in A.generators},
        lam={rho(1, l): Word.gen(p(l)) for l in range(1, g + 1)},
        sigma={p(l): w for l, w in solver.sigma.items()},
        b_trivial=solver.is_trivial,
        c_trivial=lambda w: pi1_is_trivial(w, g),
        rewrite=rewrite,
        rewrite_h1=rewrite_h1,
    )


def semidirect_zz(sign: int) -> SplitSequence:
    """``<b> x| <a>`` with ``a b a^-1 = b^sign``: the Klein bottle for -1, ``Z x Z`` for +1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b = abstract("a"), abstract("b")
    rel = Word([(a, 1), (b, 1), (a, -1), (b, -sign)])
    name = "Klein bottle" if sign < 0 else "Z x Z"
    Bp = custom_presentation(name, [a, b], [rel], ["action"])
    A = custom_presentation("Z=<b>", [b], [])
    C = custom_presentation("Z=<a>", [a], [])

    def normal_form(w: Word) -> tuple[int, int]:
        # element b^j a^i; a^i b^s = b^(sign^i s) a^i
        j = i = 0
        for h, s in w.letters:
            if h is a:
                i += s
            elif h is b:
                j += s if (sign > 0 or i % 2 == 0) else -s
            else:
                raise KeyError(f"{h} is not a generator of {name}")
        return j, i

    def rewrite(w: Word) -> Word:
        j, i = normal_form(w)
        if i:
            raise RewriteFailure(f"{w} does not lie in <b>")
        return Word.gen(b, j)

    return SplitSequence(
        name=name,
        A=A,
        B=Bp,
        C=C,
        embed={b: Word.gen(b)},
        lam={a: Word.gen(a)},
        sigma={a: Word.gen(a)},
        b_trivial=lambda w: normal_form(w) == (0, 0),
        c_trivial=lambda w: w.exponent_sum(a) == 0,
        rewrite=rewrite,
    )


def klein_sequence() -> SplitSequence:
    return semidirect_zz(-1)


# --------------------------------------------------------------------------
# checks


def check_section(seq: SplitSequence) -> CheckResult:
    """``lambda o sigma = id`` on generators and ``sigma`` kills every relator of ``C``."""
    for c in seq.C.generators:
        back = seq.lambda_of(seq.sigma[c])
        if not seq.c_trivial(back * Word.gen(c).inverse()):
            return CheckResult(False, "section", {}, {"kind": "lambda-sigma", "generator": str(c), "image": str(back)})
    for label, rel in seq.C:
        img = seq.sigma_of(rel)
        if not seq.b_trivial(img):
            return CheckResult(False, "section", {}, {"kind": "relator", "label": label, "image": str(img)})
    return CheckResult(True, "section", {"generators": len(seq.C.generators), "relators": len(seq.C.relators)})


def check_p_almost_direct(seq: SplitSequence, p: int, exact: bool = False) -> CheckResult:
    """``sigma(c) a sigma(c)^-1 = a`` in ``H_1(A; F_p)`` for all generator pairs.

    Uses the sequence's linear rewrite when it has one, unless ``exact``.
    """
    h1 = h1_mod_p(seq.A, p)
    fast = seq.rewrite_h1 is not None and not exact
    pairs = 0
    for c in seq.C.generators:
        s = seq.sigma[c]
        for h in seq.A.generators:
            a = seq.embed[h]
            w = s * a * s.inverse()
            if fast:
                conj, after = w, seq.rewrite_h1(w, h1)
            else:
                conj = seq.to_A(w)
                after = h1.project(conj)
            before = h1.project(Word.gen(h))
            pairs += 1
            if before != after:
                return CheckResult(
                    False,
                    "p-almost-direct",
                    {"p": p, "h1_dim": h1.dimension},
                    {"c": str(c), "a": str(h), "conjugate": str(conj), "h1_before": before, "h1_after": after},
                )
    return CheckResult(True, "p-almost-direct", {"p": p, "h1_dim": h1.dimension, "pairs": pairs})


def perturb_section(seq: SplitSequence, rng: random.Random, max_len: int = 4, mode: str = "kernel") -> SplitSequence:
    """Move ``sigma`` by random kernel words.

    ``mode="kernel"`` replaces each ``sigma(c)`` by ``a_c sigma(c)`` with an
    independent ``a_c``; this keeps ``lambda o sigma = id`` but usually not
    the relators of ``C``.  ``mode="conjugate"`` uses ``a sigma(c) a^-1``
    with one ``a`` for all ``c``, which is again a homomorphic section.
    """
    gens = list(seq.A.generators)

    def rand() -> Word:
        k = rng.randint(1, max_len)
        return seq.embed_word(Word([(rng.choice(gens), rng.choice((1, -1))) for _ in range(k)]))

    if mode == "kernel":
        new_sigma = {c: rand() * w for c, w in seq.sigma.items()}
    elif mode == "conjugate":
        a = rand()
        new_sigma = {c: a * w * a.inverse() for c, w in seq.sigma.items()}
    else:
        raise ValueError(f"unknown perturbation mode {mode!r}")
    return replace(seq, name=seq.name + " (perturbed)", sigma=new_sigma)


def _layer_rank(q: PcQuotient, vectors: list[list[int]], k: int) -> int:
    cols = q.layer(k)
    if not cols or not vectors:
        return 0
    m = np.array([[v[i] for i in cols] for v in vectors], dtype=np.int64)
    return rank_mod_p(m, q.p)


def check_split_filtration(seq: SplitSequence, p: int, c_max: int, limit: int = DEFAULT_LIMIT) -> CheckResult:
    """Order multiplicativity ``|B/P_{c+1}| = |A/P_{c+1}| |C/P_{c+1}|`` and layer checks.

    Layer checks at the top class: lambda sends weight-k generators of the
    ``B`` quotient to weight >= k and onto the weight-k layer of ``C``; the
    inclusion sends the weight-k layer of ``A`` injectively into that of ``B``.
    """
    qa = p_quotients(seq.A, p, c_max, limit)
    qb = p_quotients(seq.B, p, c_max, limit)
    qc = p_quotients(seq.C, p, c_max, limit)
    orders = {
        "A": [q.order for q in qa],
        "B": [q.order for q in qb],
        "C": [q.order for q in qc],
    }
    details: dict = {"p": p, "orders": {k: [str(o) if o > 2**53 else o for o in v] for k, v in orders.items()}}
    for c in range(c_max):
        if orders["B"][c] != orders["A"][c] * orders["C"][c]:
            return CheckResult(False, "split-filtration", details,
                               {"class": c + 1, "B": orders["B"][c], "A": orders["A"][c], "C": orders["C"][c]})
    A_, B_, C_ = qa[-1], qb[-1], qc[-1]
    layers = []
    for k in range(1, c_max + 1):
        lam_images = [C_.image(seq.lambda_of(B_.preimages[i])) for i in B_.layer(k)]
        low = [C_.weight_of(v) for v in lam_images if C_.weight_of(v) < k]
        lam_rank = _layer_rank(C_, lam_images, k)
        inc_images = [B_.image(seq.embed_word(A_.preimages[i])) for i in A_.layer(k)]
        low_inc = [B_.weight_of(v) for v in inc_images if B_.weight_of(v) < k]
        inc_rank = _layer_rank(B_, inc_images, k)
        row = {
            "k": k,
            "rank_A": len(A_.layer(k)),
            "rank_B": len(B_.layer(k)),
            "rank_C": len(C_.layer(k)),
            "lambda_rank": lam_rank,
            "inclusion_rank": inc_rank,
        }
        layers.append(row)
        if low or low_inc or lam_rank != row["rank_C"] or inc_rank != row["rank_A"]:
            details["layers"] = layers
            return CheckResult(False, "split-filtration", details, {"layer": row})
    details["layers"] = layers
    return CheckResult(True, "split-filtration", details)


# --------------------------------------------------------------------------
# sampled containment [P_m(sigma(C)), P_n(A)] in P_{m+n}(A)


def _weighted(rng: random.Random, pool: list[Word], weight: int, p: int) -> Word:
    """A random element of weight ``weight`` built from ``pool`` (weight 1)."""
    if weight == 1:
        k = rng.randint(1, 2)
        return Word.product(rng.choice(pool) ** rng.choice((1, -1)) for _ in range(k))
    if rng.random() < 0.3:
        return _weighted(rng, pool, weight - 1, p) ** p
    split = rng.randint(1, weight - 1)
    return commutator(_weighted(rng, pool, split, p), _weighted(rng, pool, weight - split, p))


def lemma_fr_sample(seq: SplitSequence, p: int, m: int, n: int, samples: int = 20, seed: int = 0,
                    limit: int = DEFAULT_LIMIT, u: Word | None = None, v: Word | None = None) -> CheckResult:
    """Sample ``[u, v]`` with ``u`` of weight ``m`` over sigma-images and ``v`` of weight ``n`` in ``A``.

    Each commutator is rewritten over ``A`` and must vanish in
    ``A / P_{m+n}(A)``.  Passing ``u`` and ``v`` checks a single pair.
    """
    q = p_quotients(seq.A, p, m + n - 1, limit)[-1]
    rng = random.Random(seed)
    c_pool = [seq.sigma[c] for c in seq.C.generators]
    a_pool = [seq.embed[h] for h in seq.A.generators]
    pairs = [(u, v)] if u is not None else [
        (_weighted(rng, c_pool, m, p), _weighted(rng, a_pool, n, p)) for _ in range(samples)
    ]
    for k, (uu, vv) in enumerate(pairs):
        a = seq.to_A(commutator(uu, vv))
        img = q.image(a)
        if any(img):
            return CheckResult(False, "lemma-fr", {"p": p, "m": m, "n": n},
                               {"sample": k, "u": str(uu), "v": str(vv), "image": q.normal_word(img)})
    return CheckResult(True, "lemma-fr", {"p": p, "m": m, "n": n, "samples": len(pairs), "seed": seed})


# --------------------------------------------------------------------------
# witnesses


@dataclass
class WitnessResult:
    verdict: str
    cls: int
    image: str
    order: int
    p: int

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "class": self.cls, "image": self.image,
                "order": str(self.order) if self.order > 2**53 else self.order, "p": self.p}


def witness(w: Word, spec: GroupSpec, p: int = 2, c_max: int = 4, limit: int = DEFAULT_LIMIT,
            pres: Presentation | None = None) -> WitnessResult:
    """Smallest class ``c <= c_max`` whose quotient sees ``w``.

    Raises :class:`TrivialInput` if the exact solver says ``w = 1`` and
    :class:`Exhausted` if no class up to ``c_max`` separates it (which is
    not evidence of triviality).
    """
    if is_trivial(w, spec):
        raise TrivialInput(f"{w} is trivial in {spec}")
    pres = pres or presentation_for(spec)
    for c, q in enumerate(iter_p_quotients(pres, p, limit), start=1):
        img = q.image(w)
        if any(img):
            return WitnessResult("nontrivial", c, q.normal_word(img), q.order, p)
        if c >= c_max:
            break
    raise Exhausted(f"no class <= {c_max} quotient separates {w}", c_max)
