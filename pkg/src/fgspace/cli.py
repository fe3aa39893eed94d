"""Command-line front end.

Exit codes: 0 when every checked property holds, 1 when a property is
violated, 2 for unreadable or invalid input.  Reports are JSON on stdout (or
``--out FILE``); ``--human`` prints an indented text rendering instead.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Any, Callable, Optional

from . import __version__
from .closurespace import validate_gcs
from .errors import FGSpaceError, InvalidSpace
from .fgcs import (
    FGCSpace,
    basis_of,
    degenerate_members,
    is_regular_open,
    mode_agreement,
    regular_laws,
    way_below,
)
from .finposet import build_poset_space, classify_poset, roundtrip_iso
from .io import dumps, kind_of, load_mapping, load_poset, load_space, mapping_to_doc, space_to_doc, _resolve
from .miner import TARGETS, MinerConfig, mine
from .morphisms import (
    am_apply,
    am_compose,
    am_laws,
    am_to_poset_fn,
    am_to_scott,
    validate_am,
)
from .rayspace import (
    parse_rat,
    parse_ray,
    ray_hull,
    ray_is_regular,
    ray_sigma,
    ray_way_below,
    regular_witness,
    way_below_witness,
)
from .setcore import Subset
from .subclasses import is_consistent, is_locally_consistent, regular_flags, space_class, verify_subclass_theorems


class Outcome:
    """What a command returns: a JSON-ready body and an overall verdict."""

    def __init__(self, body: dict, ok: bool = True):
        self.body = body
        self.ok = ok


def _mode(args) -> str:
    return "oracle" if args.oracle else "fast"


def _space(args, path: str) -> FGCSpace:
    x = load_space(path)
    if not x.space.validated or not x.validated:
        raise InvalidSpace(x.space.report if not x.space.validated else x.report)
    return x


def _subset(x: FGCSpace, text: str) -> Subset:
    return x.universe.parse(text)


# -- space commands -------------------------------------------------------------------

def cmd_validate(args) -> Outcome:
    x = load_space(args.space)
    g = validate_gcs(x.space, args.cap)
    body = {"gcs": g.to_dict()}
    ok = g.ok
    if ok:
        f = x.report
        body["fgcs"] = f.to_dict()
        ok = f.ok
        deg = degenerate_members(x)
        if deg:
            body["notes"] = [f"members with an empty hull: {[x.render(m) for m in deg]}"]
    return Outcome(body, ok)


def cmd_regulars(args) -> Outcome:
    x = _space(args, args.space)
    mode = _mode(args)
    regs = [x.render(u) for u in range(1, 1 << x.universe.n)
            if is_regular_open(x, Subset(x.universe, u), mode, args.cap)]
    return Outcome({"mode": mode, "regulars": regs, "count": len(regs)})


def cmd_basis(args) -> Outcome:
    x = _space(args, args.space)
    laws = regular_laws(x)
    return Outcome({"basis": basis_of(x).render(), "laws": laws.to_dict()}, laws.ok)


def cmd_waybelow(args) -> Outcome:
    x = _space(args, args.space)
    mode = _mode(args)
    if args.u1 is not None:
        u1, u2 = _subset(x, args.u1), _subset(x, args.u2 or args.u1)
        return Outcome({"mode": mode, "U1": str(u1), "U2": str(u2), "way_below": way_below(x, u1, u2, mode)})
    rows = {}
    for a in x.regulars:
        sa = Subset(x.universe, a)
        rows[x.render(a)] = [x.render(b) for b in x.regulars
                             if way_below(x, sa, Subset(x.universe, b), mode)]
    return Outcome({"mode": mode, "way_below": rows})


def cmd_classify_space(args) -> Outcome:
    x = _space(args, args.space)
    lc, bc = is_locally_consistent(x, args.cap), is_consistent(x, args.cap)
    flags = regular_flags(x)
    body = {
        "class": space_class(x),
        "locally_consistent": lc.to_dict(),
        "consistent": bc.to_dict(),
        "regular_flags": flags.as_dict() if flags else None,
    }
    return Outcome(body)


# -- poset commands -------------------------------------------------------------------

def cmd_classify(args) -> Outcome:
    p = load_poset(args.poset)
    flags = classify_poset(p)
    body = {"poset": p.to_dict(), "flags": flags.as_dict()}
    if flags.notes:
        body["notes"] = flags.notes
    return Outcome(body)


def cmd_represent(args) -> Outcome:
    p = load_poset(args.poset)
    basis = args.basis.split(",") if args.basis else None
    ps = build_poset_space(p, basis)
    return Outcome(space_to_doc(ps.space))


def cmd_roundtrip(args) -> Outcome:
    p = load_poset(args.poset)
    rep = roundtrip_iso(p, args.cap)
    return Outcome(rep.to_dict(), rep.ok)


def cmd_pipeline(args) -> Outcome:
    doc = _resolve(args.input)
    if kind_of(doc) == "poset" or (args.as_poset and "fixture" in doc):
        p = load_poset(args.input)
        flags = classify_poset(p)
        rt = roundtrip_iso(p, args.cap)
        x = build_poset_space(p).space
        lc, bc = is_locally_consistent(x), is_consistent(x)
        body = {"kind": "poset", "flags": flags.as_dict(), "roundtrip": rt.to_dict(),
                "regulars": len(x.regulars), "locally_consistent": lc.to_dict(), "consistent": bc.to_dict()}
        return Outcome(body, rt.ok)
    x = _space(args, args.input)
    agree = mode_agreement(x, args.cap)
    thm = verify_subclass_theorems(x)
    lc, bc = is_locally_consistent(x), is_consistent(x)
    body = {
        "kind": "space",
        "regulars": [x.render(u) for u in x.regulars],
        "basis": basis_of(x).render(),
        "mode_agreement": agree.to_dict(),
        "class": space_class(x),
        "locally_consistent": lc.to_dict(),
        "consistent": bc.to_dict(),
        "theorems": thm.to_dict(),
    }
    return Outcome(body, agree.ok and thm.ok)


# -- mappings --------------------------------------------------------------------------

def cmd_am_validate(args) -> Outcome:
    t = load_mapping(args.mapping)
    rep = validate_am(t, args.cap, witnesses=True)
    body = {"axioms": rep.to_dict()}
    ok = rep.ok
    if ok:
        laws = am_laws(t)
        body["laws"] = laws.to_dict()
        ok = laws.ok
    return Outcome(body, ok)


def cmd_am_apply(args) -> Outcome:
    t = load_mapping(args.mapping)
    u = _subset(t.source, args.U)
    v = am_apply(t, u)
    regular = v.mask in set(t.target.regulars)
    body = {"U": str(u), "image": str(v), "regular": regular}
    if not regular:
        body["notes"] = ["the image is not a regular open set of the target"]
    return Outcome(body)


def cmd_am_compose(args) -> Outcome:
    t1, t2 = load_mapping(args.first), load_mapping(args.second)
    t = am_compose(t1, t2)
    rep = validate_am(t, args.cap)
    return Outcome({"mapping": mapping_to_doc(t), "report": rep.to_dict()}, rep.ok)


def cmd_am_convert(args) -> Outcome:
    t = load_mapping(args.mapping)
    if args.to == "scott":
        phi = am_to_scott(t)
        return Outcome({"map": phi.as_labels()})
    src, tgt = load_poset(args.source_poset), load_poset(args.target_poset)
    f = am_to_poset_fn(t, src, tgt)
    return Outcome({"map": f.as_labels()})


# -- rays ------------------------------------------------------------------------------

def _rats(text: str) -> list:
    return [parse_rat(s) for s in text.split(",") if s.strip()] if text else []


def cmd_ray_hull(args) -> Outcome:
    f = [parse_rat(s) for s in args.points]
    return Outcome({"F": [str(v) for v in f], "hull": str(ray_hull(f))})


def cmd_ray_wb(args) -> Outcome:
    u1, u2 = parse_ray(args.u1), parse_ray(args.u2)
    w = way_below_witness(u1, u2)
    return Outcome({"U1": str(u1), "U2": str(u2), "way_below": ray_way_below(u1, u2),
                    "witness": [str(v) for v in w] if w else None})


def cmd_ray_sigma(args) -> Outcome:
    s = ray_sigma(_rats(args.F), _rats(args.M))
    return Outcome({"F": args.F, "M": args.M or "", "sigma": str(s), "nonempty": bool(s)})


def cmd_ray_regular(args) -> Outcome:
    u = parse_ray(args.u)
    body = {"U": str(u), "regular": ray_is_regular(u)}
    if u.kind == "closed":
        body["failing_M"] = [str(u.a)]
    else:
        w = regular_witness(u, [])
        body["witness_for_empty_M"] = [str(v) for v in w] if w else None
    return Outcome(body)


# -- mining ----------------------------------------------------------------------------

def cmd_mine(args) -> Outcome:
    targets = tuple(args.targets.split(",")) if args.targets else TARGETS
    cfg = MinerConfig(seed=args.seed, count=args.count, max_n=args.max_n, targets=targets,
                      include_degenerate=args.include_degenerate)
    rep = mine(cfg)
    return Outcome(rep, rep["ok"])


# -- parser ----------------------------------------------------------------------------

def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--cap", type=int, default=d(16), help="largest universe to enumerate (default 16)")
    parser.add_argument("--oracle", action="store_true", default=d(False),
                        help="decide by the literal definitions instead of the fast characterisations")
    parser.add_argument("--seed", type=int, default=d(42), help="random seed (default 42)")
    parser.add_argument("--human", action="store_true", default=d(False), help="indented text instead of JSON")
    parser.add_argument("--out", default=d(None), help="write the report to FILE")
    parser.add_argument("--timing", action="store_true", default=d(False), help="add elapsed seconds to the report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fgspace", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, parent=sub) -> argparse.ArgumentParser:
        p = parent.add_parser(name, help=help, parents=[common])
        p.set_defaults(fn=fn)
        return p

    space_help = "space file, poset file, or fixture name such as FIX-CHAIN2"
    add(("validate"), cmd_validate, "check the closure and refinement axioms").add_argument("space", help=space_help)
    add("regulars", cmd_regulars, "list the regular open sets").add_argument("space", help=space_help)
    add("basis", cmd_basis, "member hulls and the structural laws of R(X)").add_argument("space", help=space_help)
    p = add("waybelow", cmd_waybelow, "way-below between two regular sets, or the whole relation")
    p.add_argument("space", help=space_help)
    p.add_argument("u1", nargs="?", help="e.g. {a}")
    p.add_argument("u2", nargs="?")
    add("classify", cmd_classify, "dcpo / continuous / L-domain / ... flags of a poset").add_argument("poset")
    add("classify-space", cmd_classify_space, "general, locally consistent or consistent").add_argument("space", help=space_help)
    p = add("represent", cmd_represent, "the space built from a poset")
    p.add_argument("poset")
    p.add_argument("--basis", help="comma separated basis elements (default: all)")
    add("roundtrip", cmd_roundtrip, "poset to space and back").add_argument("poset")
    p = add("pipeline", cmd_pipeline, "run every applicable check on a space or poset")
    p.add_argument("input")
    p.add_argument("--as-poset", action="store_true", help="treat a poset fixture name as a poset")

    am = sub.add_parser("am", help="approximable mappings").add_subparsers(dest="am_command", required=True)
    add("validate", cmd_am_validate, "check the mapping axioms and their consequences", am).add_argument("mapping")
    p = add("apply", cmd_am_apply, "image of a regular open set", am)
    p.add_argument("mapping")
    p.add_argument("U")
    p = add("compose", cmd_am_compose, "second after first", am)
    p.add_argument("first")
    p.add_argument("second")
    p = add("convert", cmd_am_convert, "the induced map on regular sets or on posets", am)
    p.add_argument("mapping")
    p.add_argument("--to", choices=("scott", "poset"), default="scott")
    p.add_argument("--source-poset")
    p.add_argument("--target-poset")

    ray = sub.add_parser("ray", help="the rational-ray space").add_subparsers(dest="ray_command", required=True)
    p = add("hull", cmd_ray_hull, "hull of a finite set of rationals", ray)
    p.add_argument("points", nargs="+")
    p = add("wb", cmd_ray_wb, "way-below between rays such as (1,inf) and all", ray)
    p.add_argument("u1")
    p.add_argument("u2")
    p = add("sigma", cmd_ray_sigma, "F-sups of M relative to F", ray)
    p.add_argument("--F", required=True, help="comma separated rationals")
    p.add_argument("--M", default="", help="comma separated rationals (may be empty)")
    add("regular", cmd_ray_regular, "is a ray regular open", ray).add_argument("u")

    p = add("mine", cmd_mine, "seeded random search for counterexamples")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--targets", help="comma separated subset of " + ",".join(TARGETS))
    p.add_argument("--include-degenerate", action="store_true",
                   help="also check spaces with a member whose hull is empty")
    return ap


def _human(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + ", ".join(str(v) for v in obj)
        return "\n".join(pad + "-\n" + _human(v, indent + 1) for v in obj)
    return pad + str(obj)


def _emit(args, report: dict) -> None:
    text = _human(report) + "\n" if args.human else dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    echo = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    try:
        out = args.fn(args)
    except (FGSpaceError, KeyError, ValueError, OSError) as e:
        if isinstance(e, InvalidSpace):
            detail: Any = e.report.to_dict()
        else:
            detail = str(e.args[0]) if isinstance(e, KeyError) and e.args else str(e)
        _emit(args, {"command": echo, "version": __version__, "ok": False,
                     "error": type(e).__name__, "detail": detail})
        return 2
    report = {"command": echo, "version": __version__, "ok": out.ok, **out.body}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 6)
    _emit(args, report)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
