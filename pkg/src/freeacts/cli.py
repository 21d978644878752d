"""Command-line interface. JSON goes to stdout, summaries to stderr.

Exit codes: 0 all checks pass, 1 a theorem-level check failed, 2 usage or budget error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import acts, catalog, category, monoid, unary
from .errors import FreeActsError, InvalidMonoid, Timeout, TooLarge

BUILTINS = {
    "trivial": monoid.trivial_monoid,
    "C2": lambda: monoid.cyclic_group(2),
    "C3": lambda: monoid.cyclic_group(3),
    "zero": monoid.zero_monoid,
    "S3": lambda: monoid.symmetric_group(3),
}


class CheckFailed(Exception):
    pass


def load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def load_monoid(spec: str) -> monoid.FiniteMonoid:
    """A JSON file path, or one of the builtin names."""
    if not Path(spec).exists() and spec in BUILTINS:
        return BUILTINS[spec]()
    data = load_json(spec)
    if "monoid" in data and "table" not in data:
        data = data["monoid"]
    return monoid.FiniteMonoid.from_dict(data)


def emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_monoid_validate(args):
    try:
        m = load_monoid(args.file)
    except InvalidMonoid as exc:
        emit({"valid": False, "error": type(exc).__name__, "witness": getattr(exc, "witness", None), "message": str(exc)})
        raise CheckFailed(str(exc))
    emit({"valid": True, **m.to_dict()})
    note(f"valid monoid of order {m.order}")


def cmd_monoid_aut(args):
    m = load_monoid(args.file)
    auts = monoid.enumerate_automorphisms(m)
    emit({"order": len(auts), "automorphisms": [a.to_dict() for a in auts]})
    note(f"|Aut(S)| = {len(auts)}")


def cmd_monoid_out(args):
    m = load_monoid(args.file)
    out = monoid.outer_group(m)
    emit(out.to_dict())
    note(f"|Aut| = {len(out.automorphisms)}, |Int| = {len(out.inner)}, |Out| = {out.order}")


def cmd_catalog_generate(args):
    cat = catalog.generate_monoids(args.order)
    emit(cat.to_dict())
    note(f"{len(cat)} monoids of order {args.order} up to isomorphism")


def cmd_catalog_classify(args):
    cat = catalog.generate_monoids(args.order)
    rows = catalog.classify_catalog(cat, max_rank=args.max_rank, timeout=args.timeout_secs, workers=args.workers)
    emit(rows)
    bad = [r["id"] for r in rows if r.get("perfect_agrees") is False or r.get("out_matches") is False]
    if bad:
        raise CheckFailed(f"classification disagrees for {bad}")


def cmd_act_homs(args):
    m = load_monoid(args.monoid)
    homs = acts.enumerate_homs(m, args.n, args.m, max_homset=args.max_homset)
    emit({"count": len(homs), "homs": [h.to_dict() for h in homs]})
    note(f"|Hom(F_{args.n}, F_{args.m})| = {len(homs)}")


def _skeleton(m, args):
    return category.build_truncated_skeleton(m, args.max_rank, max_homset=args.max_homset)


def cmd_functor_twist(args):
    data = load_json(args.sigma)
    m = load_monoid(args.monoid) if args.monoid else monoid.FiniteMonoid.from_dict(data["monoid"])
    sigma = monoid.MonoidAutomorphism.from_dict(data, m)
    phi = category.twisted_functor(sigma, _skeleton(m, args))
    violations = category.check_functoriality(phi)
    emit(phi.to_dict())
    if violations:
        raise CheckFailed(f"twisted functor violates {len(violations)} functor laws")


def cmd_functor_enumerate(args):
    m = load_monoid(args.monoid)
    sk = _skeleton(m, args)
    stats = category.EnumerationStats()
    autos = category.enumerate_category_automorphisms(
        sk, pin_objects=args.pin_objects, timeout=args.timeout_secs, max_monoid_order=args.max_monoid_order, stats=stats
    )
    emit({"count": len(autos), "functors": [phi.to_dict() for phi in autos]})
    note(f"{len(autos)} automorphisms at N={args.max_rank} ({stats.nodes} search nodes, {stats.seconds:.2f}s)")


def cmd_functor_certify(args):
    data = load_json(args.functor)
    m = monoid.FiniteMonoid.from_dict(data["monoid"])
    sk = category.build_truncated_skeleton(m, int(data["max_rank"]), max_homset=args.max_homset)
    phi = category.TruncatedFunctor.from_dict(data, sk)
    violations = category.check_functoriality(phi, limit=10)
    if violations:
        emit({"functorial": False, "violations": [v._asdict() for v in violations]})
        raise CheckFailed("input is not a functor automorphism")
    cert = category.semi_inner_certificate(phi)
    inner = category.is_inner(phi)
    out = {
        "functorial": True,
        "semi_inner": cert is not None,
        "certificate": None if cert is None else cert.to_dict(),
        "inner": inner is not None,
        "inner_components": None if inner is None else [h.to_dict() for h in inner],
    }
    emit(out)
    if cert is None or category.evaluate_certificate(phi, cert):
        raise CheckFailed("no semi-inner certificate")


def cmd_suite_run(args):
    m = load_monoid(args.monoid)
    report = catalog.run_theorem_suite(
        m, args.max_rank, timeout=args.timeout_secs, max_monoid_order=args.max_monoid_order
    )
    emit(report.to_dict(include_certificates=args.certificates))
    note(f"{m.name or 'monoid'} N={args.max_rank}: {report.results}")
    if not report.complete:
        raise Timeout("suite did not complete")
    if not report.passed:
        raise CheckFailed("theorem suite failed")


def cmd_unary_rigidity(args):
    sig = unary.UnarySignature(args.k, args.L if args.L else unary.default_truncation(args.k))
    report = unary.verify_letter_permutation_rigidity(sig)
    emit(report.to_dict())
    note(f"k={sig.k}, L={sig.L}: {report.count} automorphisms, expected {report.expected}")
    if report.count != report.expected or not report.all_letter_induced:
        raise CheckFailed("rigidity count differs from k!")


def cmd_unary_perfect(args):
    sig = unary.UnarySignature(args.k, args.L if args.L else unary.default_truncation(args.k))
    result = unary.perfectness_check(sig)
    emit(result.to_dict())
    note(result.explanation)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freeacts", description=__doc__.splitlines()[0])
    p.add_argument("--max-homset", type=int, default=acts.DEFAULT_MAX_HOMSET)
    p.add_argument("--timeout-secs", type=float, default=category.DEFAULT_TIMEOUT_SECS)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("monoid").add_subparsers(dest="cmd", required=True)
    for name, fn in (("validate", cmd_monoid_validate), ("aut", cmd_monoid_aut), ("out", cmd_monoid_out)):
        c = g.add_parser(name)
        c.add_argument("file")
        c.set_defaults(func=fn)

    g = sub.add_parser("catalog").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("generate")
    c.add_argument("--order", type=int, required=True)
    c.set_defaults(func=cmd_catalog_generate)
    c = g.add_parser("classify")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--max-rank", type=int, default=None)
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_catalog_classify)

    g = sub.add_parser("act").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("homs")
    c.add_argument("--monoid", required=True)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("-m", type=int, required=True)
    c.set_defaults(func=cmd_act_homs)

    g = sub.add_parser("functor").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("twist")
    c.add_argument("--sigma", required=True)
    c.add_argument("--monoid")
    c.add_argument("--max-rank", type=int, default=2)
    c.set_defaults(func=cmd_functor_twist)
    c = g.add_parser("enumerate")
    c.add_argument("--monoid", required=True)
    c.add_argument("--max-rank", type=int, default=2)
    c.add_argument("--max-monoid-order", type=int, default=category.DEFAULT_MAX_MONOID_ORDER)
    c.add_argument("--pin-objects", action="store_true")
    c.set_defaults(func=cmd_functor_enumerate)
    c = g.add_parser("certify")
    c.add_argument("--functor", required=True)
    c.set_defaults(func=cmd_functor_certify)

    g = sub.add_parser("suite").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("run")
    c.add_argument("--monoid", required=True)
    c.add_argument("--max-rank", type=int, default=2)
    c.add_argument("--max-monoid-order", type=int, default=category.DEFAULT_MAX_MONOID_ORDER)
    c.add_argument("--certificates", action="store_true", help="include every functor and certificate")
    c.set_defaults(func=cmd_suite_run)

    g = sub.add_parser("unary").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("rigidity")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("-L", type=int, default=None)
    c.set_defaults(func=cmd_unary_rigidity)
    c = g.add_parser("perfect")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("-L", type=int, default=None)
    c.set_defaults(func=cmd_unary_perfect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        args.func(args)
    except CheckFailed as exc:
        note(f"check failed: {exc}")
        return 1
    except (TooLarge, Timeout) as exc:
        note(f"budget exceeded: {exc}")
        return 2
    except (FreeActsError, ValueError, KeyError, OSError) as exc:
        note(f"error: {type(exc).__name__}: {exc}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
