"""The eight acceptance criteria, one test each.

Every test records a one-line verdict; ``conftest.py`` prints them at the
end of the session, and running this file directly prints them as well.
"""
import time

import pytest

import oracles
from nbraid.groupring import FiniteGroup, aug_dims
from nbraid.padp import klein_sequence, witness
from nbraid.pquotient import h1_mod_p, p_quotients
from nbraid.presentations import GroupSpec, free_presentation, presentation_for, surface_presentation
from nbraid.suites import klein_quotient_split, run_suite, suite_lemma42
from nbraid.words import B, Word, rho

FROZEN = oracles.frozen()
VERDICTS: dict[int, str] = {}


def record(n, ok, detail=""):
    VERDICTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    print(VERDICTS[n])
    return ok


def failures(results):
    return [r.name for r in results if not r.ok]


def test_criterion_1_lemma_identities():
    t = time.perf_counter()
    results = suite_lemma42(grid=((2, 2), (2, 3), (3, 2), (3, 3)))
    # (f1) has instances only from g = 3 on
    results += [r for r in suite_lemma42(grid=((3, 2), (4, 2), (4, 3))) if "(f1)" in r.name]
    seconds = time.perf_counter() - t
    bad = failures(results)
    f1 = [r for r in results if "(f1)" in r.name and "g=4" in r.name]
    ok = not bad and f1 and all(r.details.get("instances", 0) > 0 for r in f1) and seconds < 60
    record(1, ok, f"{len(results)} checks in {seconds:.1f}s" + (f", failed {bad}" if bad else ""))
    assert ok, bad


def test_criterion_2_printed_section():
    report = run_suite("prop42")
    printed = [r for r in report.results if "printed" in r.name]
    bad = failures(printed)
    record(2, not bad, f"failed {bad}; the g=2 case list sends p1^2 p2^2 to a nontrivial element" if bad else
           f"{len(printed)} cells")
    assert not bad, bad


def test_criterion_3_almost_direct():
    report = run_suite("prop43", seed=0, perturbations=5)
    bad = failures(report.results)
    record(3, report.ok, f"{len(report.results)} checks in {report.seconds:.1f}s" + (f", failed {bad}" if bad else ""))
    assert report.ok, bad


def test_criterion_4_quotient_orders():
    got = {
        "Z": [q.order for q in p_quotients(free_presentation(1), 2, 3)],
        "free2": p_quotients(free_presentation(2), 2, 2)[-1].order,
        "Klein": [q.order for q in p_quotients(klein_sequence().B, 2, 2)],
        "h1_surface": {str(g): h1_mod_p(surface_presentation(g), 2).dimension for g in (2, 3, 4, 5)},
        "h1_p2n2": h1_mod_p(presentation_for(GroupSpec.closed(2, 2)), 2).dimension,
    }
    want = {
        "Z": FROZEN["z_orders"],
        "free2": FROZEN["free2_class2_order"],
        "Klein": FROZEN["klein_orders"][:2],
        "h1_surface": FROZEN["h1_surface"],
        "h1_p2n2": FROZEN["h1_p2n2"],
    }
    ok = got == want and got["Z"] == [2, 4, 8] and got["Klein"] == [4, 16] and got["free2"] == 32
    record(4, ok, str(got))
    assert ok


def test_criterion_5_split_filtration():
    report = run_suite("thm33")
    wanted = [r for r in report.results if "Klein" in r.name or "closed g=2 n=2" in r.name]
    ok = len(wanted) == 2 and all(r.ok for r in wanted)
    kl = next(r for r in wanted if "Klein" in r.name)
    ok = ok and kl.details["orders"]["B"] == FROZEN["klein_orders"]
    record(5, ok, "; ".join(f"{r.name}: B={r.details['orders']['B']}" for r in wanted))
    assert ok


def test_criterion_6_witness():
    spec = GroupSpec.closed(2, 2)
    qs = p_quotients(presentation_for(spec), 2, 4, limit=2**200)
    b12 = Word.gen(B(1, 2))
    trivial_at_1 = qs[0].is_identity(b12)
    first = witness(b12, spec, 2, 4)
    stable = all(witness(b12, spec, 2, 4).cls == first.cls for _ in range(2))
    # minimal: dead in every lower class, alive at the reported one
    minimal = all(qs[c].is_identity(b12) for c in range(first.cls - 1)) and not qs[first.cls - 1].is_identity(b12)
    r11 = witness(Word.gen(rho(1, 1)), spec, 2, 4).cls == 1
    ok = trivial_at_1 and first.cls <= 4 and stable and minimal and r11 and FROZEN["p2n2_b12_separated_in_d8"]
    record(6, ok, f"B[1,2] minimal class {first.cls}, r[1,1] class 1: {r11}")
    assert ok


def test_criterion_7_augmentation():
    dims = aug_dims(FiniteGroup.cyclic(4), 4)
    order = klein_quotient_split(2)[0].order
    report = run_suite("thm-aug", seed=0, samples=100)
    ok = dims == FROZEN["z4_aug_dims"] == [3, 2, 1, 0] and order == 16 and report.ok
    record(7, ok, f"dims {dims}, Klein quotient order {order}; "
           + ", ".join(f"{r.name}: {r.ok}" for r in report.results))
    assert ok, failures(report.results)


def test_criterion_8_combing():
    report = run_suite("combing", seed=0, samples=200)
    bad = failures(report.results)
    record(8, report.ok, f"{len(report.results)} groups x 200 words in {report.seconds:.1f}s"
           + (f", failed {bad}" if bad else ""))
    assert report.ok, [r.to_dict() for r in report.results if not r.ok]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
