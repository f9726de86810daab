"""Curated verification batteries run by ``nbraid suite`` and the acceptance tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .combing import closed_solver, comb, is_trivial, lambda_map
from .groupring import (
    FiniteGroup,
    GroupRing,
    aug_dims,
    check_decomposition,
    random_special,
    special_reduce,
)
from .padp import (
    check_p_almost_direct,
    check_section,
    check_split_filtration,
    closed_sequence,
    klein_sequence,
    perturb_section,
    semidirect_zz,
)
from .pquotient import DEFAULT_LIMIT, ResourceLimit, iter_p_quotients, p_quotient, p_quotients
from .presentations import (
    GroupSpec,
    T_word,
    U_word,
    a_word,
    presentation_for,
    sigma_word,
)
from .report import CheckResult
from .words import B, Word, commutator, p, rho

__all__ = ["SuiteReport", "SUITES", "run_suite", "lemma42_instances", "klein_quotient_split"]

LEMMA42_GRID = ((2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3))
SECTION_GRID = tuple((g, n) for g in (2, 3, 4) for n in (2, 3))


@dataclass
class SuiteReport:
    name: str
    results: list[CheckResult] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "seconds": round(self.seconds, 3),
                "results": [r.to_dict() for r in self.results]}


def _g(h) -> Word:
    return Word.gen(h)


def lemma42_instances(g: int, n: int) -> dict[str, list[tuple[str, Word]]]:
    """Words that each identity says are trivial, keyed by identity name."""
    U, T1 = U_word(g, n), T_word(1, n)
    a = lambda k: a_word(k, g)  # noqa: E731
    full = Word.product(a(k) for k in range(n, 0, -1))  # a_n ... a_1
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    out: dict[str, list[tuple[str, Word]]] = {}
    out["e"] = [(f"i={i},j={j},k={k}", commutator(_g(rho(i, k)), _g(rho(j, k)).inverse()) * _g(B(i, j)))
                for i, j in pairs for k in range(1, g + 1)]
    out["f1"] = [(f"l={l}", commutator(U, _g(rho(1, l)))) for l in range(1, g - 1)]
    out["f2"] = [("", commutator(_g(rho(1, g - 1)), U.inverse()) * T1)]
    out["g"] = [(f"i={i},j={j},k={k}", commutator(a(k) * a(j) * a(k).inverse(), _g(B(i, k))))
                for i in range(1, n + 1) for j in range(i + 1, n + 1) for k in range(j + 1, n + 1)]
    out["h"] = [(f"j={j},k={k}", commutator(full, _g(B(j, k)))) for j, k in pairs]
    out["i"] = [(f"i={i},j={j}", commutator(U, _g(B(i, j)))) for i, j in pairs if i >= 2]
    out["j"] = [("", commutator(full, T1))]
    out["k"] = [(f"j={j},k={k}", commutator(T1, _g(B(j, k)))) for j, k in pairs if j >= 2]
    return out


def suite_lemma42(grid=LEMMA42_GRID, **_) -> list[CheckResult]:
    results = []
    for g, n in grid:
        S = closed_solver(g, n)
        for name, cases in lemma42_instances(g, n).items():
            if not cases:
                results.append(CheckResult(True, f"lemma42 ({name}) g={g} n={n}", {"skipped": "empty index range"}))
                continue
            failed = [label for label, w in cases if not S.is_trivial(w)]
            results.append(CheckResult(not failed, f"lemma42 ({name}) g={g} n={n}", {"instances": len(cases)},
                                       {"failed": failed} if failed else None))
        # a commutator that is not an identity must come out nontrivial
        ctrl = commutator(_g(rho(1, 1)), _g(rho(2, 1)))
        results.append(CheckResult(not S.is_trivial(ctrl), f"lemma42 control g={g} n={n}",
                                   {"word": str(ctrl), "expect": "nontrivial"}))
    return results


def suite_prop42(grid=SECTION_GRID, **_) -> list[CheckResult]:
    """The printed section: lambda o sigma = id and sigma(p_1^2 ... p_g^2) = 1."""
    results = []
    for g, n in grid:
        S = closed_solver(g, n)
        lam_ok = all(lambda_map(sigma_word(i, g, n)) == _g(p(i)) for i in range(1, g + 1))
        rel = Word.product(sigma_word(i, g, n) ** 2 for i in range(1, g + 1))
        trivial = S.is_trivial(rel)
        details = {"lambda_sigma_id": lam_ok, "relator_trivial": trivial}
        cex = None
        if not trivial:
            q, _ = p_quotient(presentation_for(GroupSpec.closed(g, n)), 2, 2)
            img = q.image(rel)
            cex = {"sigma_relator_kernel_form": str(S.kernel_form(rel)),
                   "class2_image": q.normal_word(img)}
        results.append(CheckResult(lam_ok and trivial, f"prop42 printed section g={g} n={n}", details, cex))
        if g == 2:
            rel2 = Word.product(S.sigma[i] ** 2 for i in range(1, g + 1))
            lam2 = all(lambda_map(S.sigma[i]) == _g(p(i)) for i in range(1, g + 1))
            ok2 = lam2 and S.is_trivial(rel2)
            results.append(CheckResult(ok2, f"prop42 replacement section g={g} n={n}",
                                       {"sigma": {f"p{i}": str(w) for i, w in S.sigma.items()}}))
    return results


def suite_prop43(grid=SECTION_GRID, seed: int = 0, perturbations: int = 5, loose: bool = False,
                 **_) -> list[CheckResult]:
    """2-almost-direct checks, with conjugated sections as the perturbations.

    ``loose=True`` also perturbs each generator by its own kernel word,
    which keeps only ``lambda o sigma = id`` (slow for g=4, n=3).
    """
    results = []
    rng = random.Random(seed)
    for g, n in grid:
        seq = closed_sequence(g, n)
        sec = check_section(seq)
        sec.name = f"section g={g} n={n}"
        results.append(sec)
        base = check_p_almost_direct(seq, 2)
        base.name = f"2-almost-direct g={g} n={n}"
        results.append(base)
        verdicts, extra = [], []
        for _ in range(perturbations):
            pert = perturb_section(seq, rng, mode="conjugate")
            verdicts.append(check_section(pert).ok and check_p_almost_direct(pert, 2).ok)
            if loose:
                extra.append(check_p_almost_direct(perturb_section(seq, rng), 2).ok)
        details = {"base": base.ok, "perturbed": verdicts}
        if loose:
            details["kernel_word_perturbed"] = extra
        results.append(CheckResult(all(v == base.ok for v in verdicts + extra), f"section independence g={g} n={n}",
                                   details))
    kl = klein_sequence()
    results.append(CheckResult(check_p_almost_direct(kl, 2).ok, "Klein bottle 2-almost-direct"))
    neg = check_p_almost_direct(kl, 3)
    results.append(CheckResult(not neg.ok, "Klein bottle p=3 negative control", {"expect": "fails"},
                               neg.counterexample))
    return results


def suite_thm33(**_) -> list[CheckResult]:
    cases = [(klein_sequence(), 3), (semidirect_zz(1), 3), (closed_sequence(2, 2), 2)]
    out = []
    for seq, c in cases:
        r = check_split_filtration(seq, 2, c)
        r.name = f"split filtration {seq.name} c<={c}"
        out.append(r)
    return out


def klein_quotient_split(cls: int = 2):
    """The class-``cls`` 2-quotient of the Klein bottle group with its ``A`` and ``C`` images."""
    seq = klein_sequence()
    q, _ = p_quotient(seq.B, 2, cls)
    Q = FiniteGroup.from_pc(q)
    A = Q.subgroup(Q.element(q.image(seq.embed_word(_g(h)))) for h in seq.A.generators)
    C = Q.subgroup(Q.element(q.image(seq.sigma[c])) for c in seq.C.generators)
    return Q, A, C


def suite_thm_aug(seed: int = 0, samples: int = 100, **_) -> list[CheckResult]:
    out = []
    dims = aug_dims(FiniteGroup.cyclic(4), 4)
    out.append(CheckResult(dims == [3, 2, 1, 0], "augmentation dims Z/4", {"dims": dims}))
    Q, A, C = klein_quotient_split(2)
    r = check_decomposition(Q, A, C, 3)
    r.name = "decomposition Klein class-2 quotient"
    out.append(r)
    Z4 = FiniteGroup.cyclic(4)
    G, A2, C2 = FiniteGroup.direct(Z4, Z4)
    r = check_decomposition(G, A2, C2, 3)
    r.name = "decomposition Z/4 x Z/4"
    out.append(r)
    R = GroupRing(Q)
    rng = random.Random(seed)
    bad, terms = [], 0
    for k in range(samples):
        e = random_special(rng, A, C, 4)
        cert = special_reduce(e, Q, A, C)
        terms += len(cert.terms)
        if not (cert.verify(R, C) and all(len(set(t.a_factors) - set(A)) == 0 for t in cert.terms)):
            bad.append(k)
    out.append(CheckResult(not bad, "special_reduce certificates", {"samples": samples, "terms": terms},
                           {"failed": bad} if bad else None))
    return out


def suite_filtration(**_) -> list[CheckResult]:
    from .presentations import free_presentation, surface_presentation
    from .pquotient import h1_mod_p

    out = []
    Z = free_presentation(1)
    orders = [q.order for q in p_quotients(Z, 2, 3)]
    out.append(CheckResult(orders == [2, 4, 8], "Z orders", {"orders": orders}))
    q, rep = p_quotient(free_presentation(2), 2, 2)
    out.append(CheckResult(q.order == 32, "free rank 2 class 2", {"order": q.order}))
    kl = klein_sequence().B
    orders = [q.order for q in p_quotients(kl, 2, 2)]
    out.append(CheckResult(orders == [4, 16], "Klein bottle orders", {"orders": orders}))
    for g in (2, 3, 4, 5):
        d = h1_mod_p(surface_presentation(g), 2).dimension
        out.append(CheckResult(d == g, f"H1 pi1(N_{g})", {"dim": d}))
    d = h1_mod_p(presentation_for(GroupSpec.closed(2, 2)), 2).dimension
    out.append(CheckResult(d == 4, "H1 P_2(N_2)", {"dim": d}))
    return out


def suite_witness(**_) -> list[CheckResult]:
    from .padp import witness

    spec = GroupSpec.closed(2, 2)
    pres = presentation_for(spec)
    q1, _ = p_quotient(pres, 2, 1)
    b12 = _g(B(1, 2))
    first = witness(b12, spec, 2, 4)
    again = witness(b12, spec, 2, 4)
    ok = not any(q1.image(b12)) and first.cls <= 4 and first.to_dict() == again.to_dict()
    out = [CheckResult(ok, "witness B[1,2]", first.to_dict())]
    r = witness(_g(rho(1, 1)), spec, 2, 4)
    out.append(CheckResult(r.cls == 1, "witness r[1,1]", r.to_dict()))
    return out


def suite_combing(seed: int = 0, samples: int = 200, **_) -> list[CheckResult]:
    out = []
    rng = random.Random(seed)
    for spec in (GroupSpec.bordered(2, 1, 2), GroupSpec.bordered(2, 1, 3), GroupSpec.closed(2, 2)):
        pres = presentation_for(spec)
        # pc arithmetic stays cheap far beyond the default order limit
        quotients = quotients_upto(pres, 2, 3, limit=2**200)
        deeper: list = []
        bad_rel = [lbl for lbl, r in pres if not is_trivial(r, spec)]
        gens = list(pres.generators)
        mismatch, insertion, idem = 0, 0, 0
        for _ in range(samples):
            w = Word([(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, 12))])
            if rng.random() < 0.3:
                # bias towards trivial elements: w * (relator conjugate) * w^-1
                r = rng.choice(pres.relators)
                w = w * r * w.inverse()
            exact = is_trivial(w, spec)
            quot = all(not any(q.image(w)) for q in quotients)
            if quot and not exact:
                # a nontrivial word may sit deep in the filtration; look further before calling it a miss
                deeper = deeper or quotients_upto(pres, 2, 5, limit=2**200)[3:]
                quot = all(not any(q.image(w)) for q in deeper)
            if exact != quot:
                # trivial words must die in every quotient; nontrivial ones must survive in one
                mismatch += 1
            cut = rng.randint(0, len(w))
            r = rng.choice(pres.relators)
            v = Word(w.letters[:cut] + r.letters + w.letters[cut:])
            if spec.family == "bordered":
                if comb(w, spec).levels != comb(v, spec).levels:
                    insertion += 1
                form = comb(w, spec)
                if comb(form.word(), spec).levels != form.levels:
                    idem += 1
            else:
                if is_trivial(w * v.inverse(), spec) is not True:
                    insertion += 1
                S = closed_solver(spec.g, spec.n)
                c, a = S.split(w)
                form = S.A.comb(a)
                if S.A.comb(form.word()).levels != form.levels:
                    idem += 1
        ok = not (bad_rel or mismatch or insertion or idem)
        out.append(CheckResult(ok, f"combing {spec}", {
            "samples": samples, "relators_nontrivial": bad_rel, "quotient_disagreements": mismatch,
            "insertion_failures": insertion, "idempotence_failures": idem,
        }))
    return out


def quotients_upto(pres, p: int, c: int, limit: int = DEFAULT_LIMIT) -> list:
    """Every class up to ``c`` that fits under ``limit`` (at least class 1)."""
    out = []
    try:
        for q in iter_p_quotients(pres, p, limit):
            out.append(q)
            if len(out) >= c:
                break
    except ResourceLimit:
        if not out:
            raise
    return out


SUITES = {
    "lemma42": suite_lemma42,
    "prop42": suite_prop42,
    "prop43": suite_prop43,
    "thm33": suite_thm33,
    "thm-aug": suite_thm_aug,
    "filtration": suite_filtration,
    "witness": suite_witness,
    "combing": suite_combing,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    t = time.perf_counter()
    results = SUITES[name](**kwargs)
    return SuiteReport(name, results, time.perf_counter() - t)
