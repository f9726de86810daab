"""``nbraid`` command line.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error,
3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from .combing import comb, equal
from .combing.tower import SymbolError
from .groupring import FiniteGroup, GroupTooLarge, PreconditionFailed, aug_dims, check_decomposition
from .padp import (
    Exhausted,
    TrivialInput,
    check_p_almost_direct,
    check_section,
    check_split_filtration,
    closed_sequence,
    klein_sequence,
    witness,
)
from .pquotient import DEFAULT_LIMIT, ResourceLimit, h1_mod_p, p_quotient
from .presentations import GroupSpec, Unsupported, bordered_presentation, parse_group_spec, presentation_for
from .suites import SUITES, run_suite
from .words import WordSyntaxError, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("nbraid")


class UsageError(Exception):
    pass


def _big(n: int):
    return str(n) if n > 2**53 else n


def _group(args) -> GroupSpec:
    if not args.group:
        raise UsageError("--group is required")
    try:
        return parse_group_spec(args.group)
    except (ValueError, Unsupported) as exc:
        raise UsageError(f"bad group spec {args.group!r}: {exc}") from None


def _word(text: str):
    try:
        return parse_word(text)
    except WordSyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _sequence(spec: GroupSpec):
    if spec.family == "closed":
        return closed_sequence(spec.g, spec.n)
    if spec.family == "surface" and spec.g == 2:
        return klein_sequence()
    raise UsageError(f"no split sequence is built in for {spec} (use closed:g=..,n=.. or surface:g=2)")


# --------------------------------------------------------------------------
# verbs; each returns (payload, ok)


def cmd_present(args):
    spec = _group(args)
    pres = bordered_presentation(spec.g, spec.b, spec.n, args.m2) if spec.family == "bordered" else presentation_for(spec)
    payload = pres.to_dict()
    text = [f"{spec}: {len(pres.generators)} generators, {len(pres.relators)} relators",
            "generators: " + " ".join(str(g) for g in pres.generators)]
    text += [f"  {label}: {rel}" for label, rel in pres]
    return payload, True, "\n".join(text)


def cmd_comb(args):
    spec = _group(args)
    w = _word(args.word)
    if spec.family == "bordered":
        form = comb(w, spec)
        return form.to_dict(), True, str(form)
    if spec.family == "closed":
        from .combing import closed_solver

        S = closed_solver(spec.g, spec.n)
        c, a = S.split(w)
        form = S.A.comb(a)
        payload = {"sigma_part": str(c) or "ε", **form.to_dict()}
        return payload, True, f"sigma({c or 'ε'}) * [{form}]"
    raise UsageError("comb needs a bordered or closed group")


def cmd_equal(args):
    spec = _group(args)
    u, v = _word(args.word1), _word(args.word2)
    verdict = equal(u, v, spec)
    return {"equal": verdict}, True, "equal" if verdict else "not equal"


def cmd_pq(args):
    spec = _group(args)
    pres = presentation_for(spec)
    c = args.cls or args.max_class or 2
    q, report = p_quotient(pres, args.p, c, args.limit_order)
    payload = {**report.to_dict(), "order": _big(q.order),
               "images": {str(g): q.normal_word(v) for g, v in q.images.items()}}
    if args.full:
        payload["presentation"] = q.to_dict()
    text = f"orders {report.orders}  ranks {report.ranks}"
    return payload, True, text


def cmd_h1(args):
    spec = _group(args)
    h = h1_mod_p(presentation_for(spec), args.p)
    payload = {"p": args.p, "dimension": h.dimension, "basis": [str(g) for g in h.basis]}
    return payload, True, f"dim H_1(G; F_{args.p}) = {h.dimension}"


def cmd_witness(args):
    spec = _group(args)
    if args.word is None:
        raise UsageError("--word is required")
    w = _word(args.word)
    c_max = args.max_class or 4
    try:
        r = witness(w, spec, args.p, c_max, args.limit_order)
    except TrivialInput:
        return {"verdict": "trivial"}, False, "the element is trivial; nothing to witness"
    except Exhausted:
        return {"verdict": "exhausted", "max_class": c_max}, False, f"no quotient of class <= {c_max} separates it"
    return r.to_dict(), True, f"nontrivial in the class-{r.cls} quotient (order {r.order}): {r.image}"


def cmd_check(args):
    spec = _group(args)
    seq = _sequence(spec)
    if args.what == "section":
        r = check_section(seq)
    elif args.what == "padp":
        r = check_p_almost_direct(seq, args.p)
    else:
        r = check_split_filtration(seq, args.p, args.cls or args.max_class or 2, args.limit_order)
    return r.to_dict(), r.ok, f"{r.name}: {'pass' if r.ok else 'FAIL'}"


def cmd_aug(args):
    spec = _group(args)
    c = args.cls or args.max_class or 2
    try:
        seq = _sequence(spec)
    except UsageError:
        seq = None
    pres = seq.B if seq else presentation_for(spec)
    q, _ = p_quotient(pres, 2, c, args.limit_order)
    Q = FiniteGroup.from_pc(q)
    payload = {"order": Q.order, "dims": aug_dims(Q, args.kmax)}
    ok = True
    if seq is not None:
        from .words import Word

        A = Q.subgroup(Q.element(q.image(seq.embed_word(Word.gen(h)))) for h in seq.A.generators)
        C = Q.subgroup(Q.element(q.image(seq.sigma[g])) for g in seq.C.generators)
        try:
            r = check_decomposition(Q, A, C, args.kmax)
            payload["decomposition_ok"] = r.ok
            payload["decomposition"] = r.details["k"]
            ok = r.ok
        except PreconditionFailed as exc:
            payload["decomposition_ok"] = False
            payload["precondition"] = str(exc)
            ok = False
    return payload, ok, f"dims {payload['dims']}" + (
        f"  decomposition {'ok' if payload.get('decomposition_ok') else 'FAILED'}" if seq else "")


def cmd_suite(args):
    report = run_suite(args.name, seed=args.seed)
    lines = [f"{'pass' if r.ok else 'FAIL'}  {r.name}" for r in report.results]
    return report.to_dict(), report.ok, "\n".join(lines)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="closed:g=G,n=N | bordered:g=G,b=B,n=N | surface:g=G | free:rank=R")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--max-class", type=int, default=None)
    common.add_argument("--limit-order", type=int, default=DEFAULT_LIMIT, help="largest quotient order allowed")
    common.add_argument("--p", type=int, default=2, help="prime")

    ap = argparse.ArgumentParser(prog="nbraid", description="Pure braid groups of nonorientable surfaces.")
    ap.add_argument("--version", action="version", version=f"nbraid {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("present", parents=[common], help="print a presentation")
    s.add_argument("--m2", choices=("k", "drop"), default="k", help="reading of the m2 relators")
    s.set_defaults(func=cmd_present)

    s = sub.add_parser("comb", parents=[common], help="normal form of a word")
    s.add_argument("word")
    s.set_defaults(func=cmd_comb)

    s = sub.add_parser("equal", parents=[common], help="decide equality of two words")
    s.add_argument("word1")
    s.add_argument("word2")
    s.set_defaults(func=cmd_equal)

    s = sub.add_parser("pq", parents=[common], help="2-quotients by the exponent-p central series")
    s.add_argument("--class", dest="cls", type=int, default=None)
    s.add_argument("--full", action="store_true", help="include the pc presentation")
    s.set_defaults(func=cmd_pq)

    s = sub.add_parser("h1", parents=[common], help="first homology mod p")
    s.set_defaults(func=cmd_h1)

    s = sub.add_parser("witness", parents=[common], help="smallest quotient class seeing an element")
    s.add_argument("--word", required=False)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("check", parents=[common], help="split-sequence checks")
    s.add_argument("what", choices=("padp", "section", "lcs"))
    s.add_argument("--class", dest="cls", type=int, default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("aug", parents=[common], help="augmentation ideal powers of a 2-quotient")
    s.add_argument("--class", dest="cls", type=int, default=None)
    s.add_argument("--kmax", type=int, default=3)
    s.set_defaults(func=cmd_aug)

    s = sub.add_parser("suite", parents=[common], help="run a verification battery")
    s.add_argument("name", choices=sorted(SUITES))
    s.set_defaults(func=cmd_suite)
    return ap


def _setup_logging():
    level = os.environ.get("NBRAID_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 for --help
        return int(exc.code or 0)
    echo = {"verb": args.verb, "argv": list(argv) if argv is not None else sys.argv[1:]}
    t = time.perf_counter()
    code = EXIT_OK
    try:
        payload, ok, text = args.func(args)
        code = EXIT_OK if ok else EXIT_FAIL
    except (UsageError, SymbolError, Unsupported, GroupTooLarge, KeyError, ValueError) as exc:
        payload, text, code = {"error": str(exc)}, f"error: {exc}", EXIT_USAGE
    except ResourceLimit as exc:
        payload = {"error": str(exc), "log_order": exc.log_order, "completed_class": exc.completed_class}
        text, code = f"resource limit: {exc}", EXIT_LIMIT
    if args.json:
        report = {"command": echo, "result": payload, "ok": code == EXIT_OK, "seconds": round(time.perf_counter() - t, 3),
                  "version": __version__, "seed": args.seed}
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(text, file=sys.stderr if code == EXIT_USAGE else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
