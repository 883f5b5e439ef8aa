"""Batch command line front end; one JSON document per run, deterministic."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .congruence import (
    LAMBDA_FULL,
    LAMBDA_INT,
    LAMBDA_UNIT,
    GenClassGroup,
    Modulus,
    exact_sequence_audit,
    lambda_powers,
    suborder_transport,
)
from .lab import (
    ScenarioError,
    ab_ideal_check,
    build_scenario,
    build_volcano,
    certify_action,
    export_graph,
    instance_from_json,
    instance_to_json,
    suborder_equivalence,
    vectorize,
    volcano_graph,
)
from .quadforms import DomainError, QuadIdeal, class_group, order_from_disc

USAGE_ERROR = 2
CERTIFIED_FAILURE = 1


def _parse_modulus(order, spec: str) -> Modulus:
    """`N` means NO; `P:n:b:c` means the ideal (n, b + c*w)."""
    try:
        if spec.startswith("P:"):
            _, n, b, c = spec.split(":")
            return Modulus(QuadIdeal(order, int(n), int(b), int(c)))
        return Modulus.scalar(order, int(spec))
    except (ValueError, DomainError) as e:
        raise SystemExit(_usage(f"invalid modulus spec {spec!r}: {e}"))


def _parse_lambda(tag: str):
    if tag == "one":
        return LAMBDA_UNIT
    if tag == "int":
        return LAMBDA_INT
    if tag == "full":
        return LAMBDA_FULL
    if tag.startswith("pow:"):
        return lambda_powers(int(tag.split(":")[1]))
    raise SystemExit(_usage(f"invalid lambda tag {tag!r} "
                            "(use one|int|pow:N|full)"))


def _usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_classgroup(args) -> int:
    order = order_from_disc(args.disc)
    cls = class_group(order)
    _emit({
        "schema": "clact.classgroup/1",
        "disc": args.disc,
        "h": len(cls),
        "classes": [{"form": list(c.form), "rep": c.rep.to_json()}
                    for c in cls],
    }, args.out)
    return 0


def _cmd_genclassgroup(args) -> int:
    order = order_from_disc(args.disc)
    m = _parse_modulus(order, args.modulus)
    lam = _parse_lambda(getattr(args, "lambda"))
    G = GenClassGroup(order, m, lam)
    _emit(G.to_json() | {"schema": "clact.genclassgroup/1"}, args.out)
    return 0


def _cmd_audit(args) -> int:
    order = order_from_disc(args.disc)
    m = _parse_modulus(order, args.modulus)
    lam = _parse_lambda(getattr(args, "lambda"))
    audit = exact_sequence_audit(order, m, lam)
    _emit(audit.to_json(), args.out)
    return 0 if audit.passed else CERTIFIED_FAILURE


def _cmd_suborder(args) -> int:
    order = order_from_disc(args.disc)
    tr = suborder_transport(order, args.f)
    _emit({
        "schema": "clact.suborder/1",
        "disc": args.disc,
        "f": args.f,
        "suborder_disc": tr.suborder.disc,
        "size": len(tr.sub_classes),
        "map": tr.table,
        "verified": tr.verified,
    }, args.out)
    return 0 if tr.verified else CERTIFIED_FAILURE


def _scenario_descriptor(args) -> dict:
    p = args.preset
    if p in ("gpv", "fullgroup"):
        if args.p is None or args.N is None:
            raise SystemExit(_usage(f"preset {p} needs --p and --N"))
        return {"preset": p, "p": args.p, "N": args.N}
    if p == "eigenvector":
        if args.p is None or args.f is None:
            raise SystemExit(_usage("preset eigenvector needs --p and --f"))
        return {"preset": p, "p": args.p, "f": args.f}
    if p == "nthpower":
        if None in (args.q, args.t, args.f):
            raise SystemExit(_usage("preset nthpower needs --q --t --f"))
        return {"preset": p, "q": args.q, "t": args.t, "f": args.f,
                "n": args.n}
    if p == "suborder":
        if None in (args.q, args.t, args.f):
            raise SystemExit(_usage("preset suborder needs --q --t --f"))
        return {"preset": p, "q": args.q, "t": args.t, "f": args.f}
    raise SystemExit(_usage(f"unknown preset {p!r}"))


def _cmd_certify(args) -> int:
    desc = _scenario_descriptor(args)
    workers = int(os.environ.get("CLACT_WORKERS", "1"))
    if desc["preset"] == "suborder":
        vi = build_volcano(desc["q"], desc["t"], desc["f"])
        cert1 = suborder_equivalence(vi, seed=args.seed)
        cert2 = ab_ideal_check(vi, seed=args.seed)
        doc = {"schema": "clact.certify/1",
               "suborder_equivalence": cert1.to_json(),
               "ab_ideal_check": cert2.to_json()}
        _emit(doc, args.out)
        return 0 if cert1.passed and cert2.passed else CERTIFIED_FAILURE
    scn = build_scenario(desc)
    cert = certify_action(scn, seed=args.seed, freeness=args.freeness,
                          workers=workers)
    if args.emit_instance:
        rng = random.Random(args.seed)
        x1 = rng.choice(scn.elements)
        x2 = scn.act_class(rng.randrange(len(scn.G)), x1)
        with open(args.emit_instance, "w") as fh:
            json.dump(instance_to_json(scn, x1, x2), fh, sort_keys=True,
                      indent=1)
            fh.write("\n")
    _emit(cert.to_json(), args.out)
    return 0 if cert.passed else CERTIFIED_FAILURE


def _cmd_vectorize(args) -> int:
    with open(args.instance) as fh:
        obj = json.load(fh)
    scn, x1, x2 = instance_from_json(obj)
    try:
        idx = vectorize(scn, x1, x2)
    except ScenarioError as e:
        _emit({"schema": "clact.vectorize/1", "solved": False,
               "error": str(e)}, args.out)
        return CERTIFIED_FAILURE
    _emit({
        "schema": "clact.vectorize/1",
        "solved": True,
        "class_index": idx,
        "class_rep": scn.G.rep(idx).to_json(),
    }, args.out)
    return 0


def _cmd_graph(args) -> int:
    desc = _scenario_descriptor(args)
    if desc["preset"] == "suborder":
        vi = build_volcano(desc["q"], desc["t"], desc["f"])
        dot = volcano_graph(vi)
    else:
        scn = build_scenario(desc)
        dot = export_graph(scn)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dot)
    else:
        sys.stdout.write(dot)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="clact",
        description="generalized class group actions on oriented curves, "
                    "certified by exhaustive desk-scale enumeration")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classgroup", help="class group of a discriminant")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_classgroup)

    for name, fn in (("genclassgroup", _cmd_genclassgroup),
                     ("audit", _cmd_audit)):
        p = sub.add_parser(name)
        p.add_argument("--disc", type=int, required=True)
        p.add_argument("--modulus", required=True,
                       help="N for NO, or P:n:b:c for the ideal (n, b+c*w)")
        p.add_argument("--lambda", required=True,
                       help="one | int | pow:N | full")
        p.add_argument("--out")
        p.set_defaults(fn=fn)

    p = sub.add_parser("suborder", help="suborder transport isomorphism")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_suborder)

    for name, fn in (("certify", _cmd_certify), ("graph", _cmd_graph)):
        p = sub.add_parser(name)
        p.add_argument("--preset", required=True,
                       choices=["gpv", "eigenvector", "nthpower",
                                "fullgroup", "suborder"])
        p.add_argument("--p", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--f", type=int)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--freeness", choices=["exhaustive", "sampled"],
                       default="exhaustive")
        p.add_argument("--emit-instance")
        p.add_argument("--out")
        p.set_defaults(fn=fn)

    p = sub.add_parser("vectorize", help="solve a serialized instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_vectorize)

    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    except (DomainError, ScenarioError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
