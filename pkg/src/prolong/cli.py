"""Command-line front end.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.
All JSON goes out with sorted keys so runs are byte-comparable.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import DEFAULT_CAP, STRATEGIES, DimensionCapError, derivatives_in, differential_power_member, prolong
from .formspace import FormSpace, make_formspace
from .frames import enumerate_frame_systems, frame_polynomial
from .monomial import (
    MonomialSpace,
    build_blowup_graph,
    circuits_and_decomposition,
    monomial_prolong,
    monomial_support,
    no_three_way_space,
)
from .phylo import parse_tree, phylo_parametrization, phylo_quadrics
from .poly import Polynomial, count_monomials, format_monomial
from .secant import MonomialMap, SampleConfig, interpolate_vanishing_piece, secant_vanish_check

OK, CHECK_FAILED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _read_json(path: str | None) -> dict:
    text = _read_text(path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path or '<stdin>'}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path or '<stdin>'}: expected a JSON object")
    return obj


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _load_space(path) -> FormSpace:
    obj = _read_json(path)
    if "basis" not in obj:
        raise InputError("expected FormSpace JSON with 'vars', 'degree' and 'basis'")
    return FormSpace.from_json(obj)


def _load_poly(path, varset) -> Polynomial:
    text = " ".join(_read_text(path).split())
    return Polynomial.parse(text, varset)


def _check_cap(n: int, degree: int, cap: int):
    ambient = count_monomials(n, degree)
    if ambient > cap:
        raise DimensionCapError(f"ambient dimension {ambient} of degree-{degree} forms exceeds cap {cap}")


# -- commands ---------------------------------------------------------------------

def cmd_prolong(args) -> int:
    a = _load_space(args.inp)
    b = prolong(a, args.r, args.alg, threads=args.threads, cap=args.cap)
    _emit(b.dumps(), args.out)
    return OK


def cmd_mprolong(args) -> int:
    obj = _read_json(args.inp)
    if "monomials" in obj:
        space = MonomialSpace.from_json(obj)
    elif "basis" in obj:
        space = monomial_support(FormSpace.from_json(obj))
    else:
        raise InputError("expected MonomialSpace or FormSpace JSON")
    if args.dot:
        _emit(build_blowup_graph(space, args.r).to_dot(), args.dot)
    _emit(monomial_prolong(space, args.r).dumps(), args.out)
    return OK


def cmd_circuits(args) -> int:
    a = _load_space(args.inp)
    dec = circuits_and_decomposition(a)
    report = {
        "circuits_only": dec.circuits_only,
        "blocks": [{"monomials": [format_monomial(m, a.varset) for m in blk],
                    "basis": [str(b) for b in s.basis]}
                   for blk, s in zip(dec.blocks, dec.spaces)],
    }
    _emit(_dumps(report), args.out)
    return OK


def cmd_diffpower(args) -> int:
    a = _load_space(args.space)
    f = _load_poly(args.poly, a.varset)
    member = differential_power_member(f, a, args.r)
    report = {"member": member, "derivatives_in_space": derivatives_in(f, a, args.r)}
    _emit(_dumps(report), args.out)
    return OK if member else CHECK_FAILED


def _sample_config(args) -> SampleConfig:
    return SampleConfig(seed=args.seed, coordinate_range=args.range)


def cmd_secant_check(args) -> int:
    mmap = MonomialMap.from_json(_read_json(args.map))
    f = _load_poly(args.poly, mmap.targets)
    report = secant_vanish_check(f, mmap, args.r, args.trials, _sample_config(args))
    _emit(report.dumps(), args.out)
    return OK if report.passes else CHECK_FAILED


def cmd_interpolate(args) -> int:
    mmap = MonomialMap.from_json(_read_json(args.map))
    _check_cap(mmap.targets.n, args.deg, args.cap)
    space = interpolate_vanishing_piece(mmap, args.r, args.deg, _sample_config(args), args.points)
    _emit(space.dumps(), args.out)
    return OK


def _load_tree(path):
    return parse_tree(_read_text(path))


def cmd_phylo_ideal(args) -> int:
    tree = _load_tree(args.tree)
    if args.map_out:
        _emit(phylo_parametrization(tree).dumps(), args.map_out)
    _emit(phylo_quadrics(tree).dumps(), args.out)
    return OK


def cmd_phylo_prolong(args) -> int:
    tree = _load_tree(args.tree)
    a = phylo_quadrics(tree)
    b = prolong(a, args.r, args.alg, threads=args.threads, cap=args.cap)
    dec = circuits_and_decomposition(b)
    report = {
        "dimension": b.dim,
        "block_sizes": [len(blk) for blk in dec.blocks],
        "circuits_only": dec.circuits_only,
        "space": b.to_json(),
    }
    _emit(_dumps(report), args.out)
    return OK


def cmd_phylo_frames(args) -> int:
    tree = _load_tree(args.tree)
    systems = enumerate_frame_systems(tree, args.d, args.limit)
    seen = {}
    for s in systems:
        p = frame_polynomial(tree, s, check=False)
        if not p.is_zero():
            seen.setdefault(p.normalized(), None)
    polys = list(seen)
    report = {"systems": len(systems), "polynomials": [str(p) for p in polys]}
    if args.d >= 3 and not args.no_check:
        a = phylo_quadrics(tree)
        target = prolong(a, args.d - 2, threads=args.threads, cap=args.cap)
        span = make_formspace(polys, args.d, a.varset)
        contained = span.issubset(target)
        report.update({"span_dimension": span.dim, "prolongation_dimension": target.dim,
                       "contained": contained, "dimension_gap": target.dim - span.dim})
        if not contained:
            _emit(_dumps(report), args.out)
            return CHECK_FAILED
    if args.systems:
        report["frame_systems"] = [s.to_json() for s in systems]
    _emit(_dumps(report), args.out)
    return OK


def cmd_no3way(args) -> int:
    try:
        l, m, n = (int(x) for x in args.dims.split(","))
    except ValueError as exc:
        raise InputError("--dims expects three integers l,m,n") from exc
    if min(l, m, n) < 2:
        raise InputError("each dimension must be at least 2")
    _emit(no_three_way_space(l, m, n).dumps(), args.out)
    return OK


# -- parser -----------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer: {text!r}")
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP,
                        help="largest ambient monomial count allowed (default %(default)s)")
    common.add_argument("--threads", type=_positive, default=1)

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--seed", type=_seed, default=0)
    sampling.add_argument("--range", type=_positive, default=97,
                          help="numerators and denominators are drawn from 1..RANGE")

    p = argparse.ArgumentParser(prog="prolong", description="Exact prolongations of spaces of forms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("prolong", parents=[common], help="r-th prolongation of a FormSpace")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--alg", choices=STRATEGIES, default="derivative")
    s.set_defaults(func=cmd_prolong)

    s = sub.add_parser("mprolong", parents=[common], help="monomial prolongation (reads stdin without --in)")
    s.add_argument("--in", dest="inp")
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--dot", help="also write the blow-up graph of a quadratic space as DOT")
    s.set_defaults(func=cmd_mprolong)

    s = sub.add_parser("circuits", parents=[common], help="support blocks and circuits")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_circuits)

    s = sub.add_parser("diffpower", parents=[common], help="membership in the differential power")
    s.add_argument("--space", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--r", type=_positive, required=True)
    s.set_defaults(func=cmd_diffpower)

    s = sub.add_parser("secant-check", parents=[common, sampling], help="vanishing on sampled secant points")
    s.add_argument("--map", required=True)
    s.add_argument("--poly", required=True)
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--trials", type=_positive, default=50)
    s.set_defaults(func=cmd_secant_check)

    s = sub.add_parser("interpolate", parents=[common, sampling], help="forms vanishing on the sampled secant")
    s.add_argument("--map", required=True)
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--deg", type=_positive, required=True)
    s.add_argument("--points", type=_positive, help="points per batch (default: monomial count + 1)")
    s.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("phylo-ideal", parents=[common], help="quadrics A_T of a tree")
    s.add_argument("--tree", required=True)
    s.add_argument("--map-out", help="also write the tree's monomial parametrization")
    s.set_defaults(func=cmd_phylo_ideal)

    s = sub.add_parser("phylo-prolong", parents=[common], help="prolongation of A_T")
    s.add_argument("--tree", required=True)
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--alg", choices=STRATEGIES, default="derivative")
    s.set_defaults(func=cmd_phylo_prolong)

    s = sub.add_parser("phylo-frames", parents=[common], help="frame polynomials of a tree")
    s.add_argument("--tree", required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--limit", type=_positive)
    s.add_argument("--systems", action="store_true", help="include the frame systems in the output")
    s.add_argument("--no-check", action="store_true", help="skip the comparison with the prolongation")
    s.set_defaults(func=cmd_phylo_frames)

    s = sub.add_parser("no3way", parents=[common], help="no-3-way interaction binomials")
    s.add_argument("--dims", required=True, help="l,m,n")
    s.set_defaults(func=cmd_no3way)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
