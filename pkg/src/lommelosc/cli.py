"""Command-line front-end: evaluation, Wright zeros, contour counts and verification."""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys

from . import __version__, bessel
from .branch import BranchPoint
from .census import (
    AuxParams, aux_g, aux_g_prime, aux_ghat, aux_ghat_prime, build_contour_omega_g,
    build_contour_omega_ghat, count_zeros, ghat_zeros_inside, smallest_admissible_m,
)
from .errors import HypothesisError, LommelOscError, ParamError, ValidityError
from .lommel import LommelParams, lommel_S
from .verify import (
    OdeParams, SolutionSpec, assemble_solution, quantization_classify, relative_residual_z,
    table1_case,
)
from .wright import WrightTarget, wright_bounds, wright_refine, wright_seed

EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_HYPOTHESIS = 4

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^\s*(?:(?P<re>{_NUM})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i|"
                      rf"(?P<only_re>{_NUM})|(?P<only_im>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i)\s*$")


def parse_complex(text: str) -> complex:
    """Parse "a+bi", "a-bi", "a" or "bi" (exponents allowed)."""
    m = _COMPLEX.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")

    def coef(s):
        if s in ("", "+"):
            return 1.0
        if s == "-":
            return -1.0
        return float(s)

    if m.group("only_re") is not None:
        return complex(float(m.group("only_re")), 0.0)
    if m.group("re") is not None:
        return complex(float(m.group("re")), coef(m.group("im")))
    return complex(0.0, coef(m.group("only_im")))


def parse_range(text: str) -> list[int]:
    """"a:b" inclusive, or a comma list of integers."""
    try:
        if ":" in text:
            a, b = text.split(":")
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None


def parse_term(text: str) -> tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"term must be 'sigma,mu': {text!r}")
    return parse_complex(parts[0]), parse_complex(parts[1])


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


class _Out:
    def __init__(self, stream, header: bool):
        self.stream = stream
        self.header = header

    def emit_header(self, kind: str):
        if not self.header:
            return
        if kind == "csv":
            self.stream.write(f"# lommelosc {__version__}\n")
        else:
            self.json({"header": {"tool": "lommelosc", "version": __version__}})

    def json(self, obj):
        self.stream.write(json.dumps(obj, sort_keys=True) + "\n")


# verbs ----------------------------------------------------------------------------

def cmd_eval(args, out: _Out) -> int:
    z = BranchPoint.from_complex(args.zeta).rotate(args.branch_shift)
    if args.fn == "lommel":
        if args.mu is None:
            raise ParamError("--mu is required for lommel")
        res = lommel_S(LommelParams(args.mu, args.nu), z)
    elif args.fn == "besselj":
        res = bessel.bessel_j(args.nu, z)
    elif args.fn == "bessely":
        res = bessel.bessel_y(args.nu, z)
    else:
        res = bessel.hankel(1 if args.fn == "hankel1" else 2, args.nu, z)
    out.emit_header("json")
    out.json({"fn": args.fn, "zeta": _pair(args.zeta), "branch_shift": args.branch_shift,
              "value": _pair(res.value), "abs_err_est": res.abs_err_est, "method": res.label})
    return 0


def cmd_wright(args, out: _Out) -> int:
    if args.a == 0:
        raise ParamError("a must be non-zero")
    target = WrightTarget.from_complex(args.a)
    out.emit_header("json")
    ok = 0
    for n in args.n:
        rec = {"n": n}
        try:
            seed = wright_seed(target, n, args.j_max)
            rec["seed"] = [seed.x, seed.y]
            rec["valid"] = seed.valid
            box = wright_bounds(target, n)
            rec["box"] = [box.x_lo, box.x_hi if box.x_hi != float("inf") else "inf", box.y_lo, box.y_hi]
            if args.refine:
                r = wright_refine(target, seed, args.tol)
                rec.update(refined=_pair(r.z), residual=r.residual, iterations=r.iterations)
            ok += 1
        except (LommelOscError, ValueError) as exc:
            rec["error"] = type(exc).__name__
            rec["message"] = str(exc)
        out.json(rec)
    return 0 if ok else EXIT_EVAL


def _aux(args) -> AuxParams:
    return AuxParams(args.C_hat, args.sigma_hat, args.mu, args.D_hat)


def _build(args, prm: AuxParams, k: int):
    if args.kind == "g":
        if args.m is None:
            raise HypothesisError("--m is required for g", smallest_m=smallest_admissible_m(prm))
        m = args.m
        return build_contour_omega_g(prm, m, k, args.samples), m
    return build_contour_omega_ghat(prm, k, args.modified, args.samples), None


def cmd_census(args, out: _Out) -> int:
    prm = _aux(args)
    out.emit_header("json")
    for k in args.k:
        contour, m = _build(args, prm, k)
        if args.kind == "g":
            res = count_zeros(lambda z: aux_g(prm, z), contour, lambda z: aux_g_prime(prm, z))
        else:
            res = count_zeros(lambda z: aux_ghat(prm, z), contour, lambda z: aux_ghat_prime(prm, z))
        rec = {"k": k, "kind": args.kind, "winding": res.winding, "min_abs": res.min_abs_on_contour}
        if m is not None:
            rec["m"] = m
        if args.emit_zeros and args.kind == "ghat":
            rec["zeros_inside"] = [{"label": lab, "index": j, "zeta": _pair(z)}
                                   for lab, j, z in ghat_zeros_inside(prm, contour, k)]
        out.json(rec)
    return 0


def cmd_contour(args, out: _Out) -> int:
    prm = _aux(args)
    contour, _ = _build(args, prm, args.k[0])
    pts = contour.polyline()
    out.emit_header("csv")
    w = csv.writer(out.stream, lineterminator="\n")
    w.writerow(["re", "im"])
    for p in pts:
        w.writerow([repr(float(p.real)), repr(float(p.imag))])
    if pts[0] != pts[-1]:
        w.writerow([repr(float(pts[0].real)), repr(float(pts[0].imag))])
    return 0


def _spec(args) -> SolutionSpec:
    if not args.term:
        raise ParamError("at least one --term sigma,mu is required")
    return SolutionSpec(args.A, args.B, OdeParams(args.L, args.M, args.N, args.nu, tuple(args.term)))


def cmd_verify(args, out: _Out) -> int:
    spec = _spec(args)
    out.emit_header("json")
    for z in args.z:
        out.json({"z": _pair(z), "value": _pair(assemble_solution(spec, z)),
                  "relative_residual": relative_residual_z(spec, z, args.h)})
    return 0


def _table1(args, out: _Out) -> int:
    if args.case is None or args.p is None:
        raise ParamError("--case and --p are required")
    rep = table1_case(args.case, args.p, args.sigma)
    out.emit_header("json")
    out.json(rep.to_dict())
    return 0


def cmd_quantize(args, out: _Out) -> int:
    if args.table1:
        return _table1(args, out)
    spec = _spec(args)
    out.emit_header("json")
    out.json(quantization_classify(spec).to_dict())
    return 0


# parser -----------------------------------------------------------------------------

def _spec_flags(p):
    p.add_argument("--A", type=parse_complex, default=0j)
    p.add_argument("--B", type=parse_complex, default=0j)
    p.add_argument("--L", type=parse_complex, default=1 + 0j)
    p.add_argument("--M", type=parse_complex, default=1 + 0j)
    p.add_argument("--N", type=parse_complex, default=0j)
    p.add_argument("--nu", type=parse_complex, required=True)
    p.add_argument("--term", type=parse_term, action="append", default=[],
                   help="sigma,mu (repeatable)")


def _aux_flags(p):
    p.add_argument("--kind", choices=("g", "ghat"), default="ghat")
    p.add_argument("--C-hat", dest="C_hat", type=parse_complex, default=1 + 0j)
    p.add_argument("--D-hat", dest="D_hat", type=parse_complex, default=0j)
    p.add_argument("--sigma-hat", dest="sigma_hat", type=parse_complex, default=1 + 0j)
    p.add_argument("--mu", type=parse_complex, default=0.5 + 0j)
    p.add_argument("--m", type=int, default=None, help="g only; must satisfy the hypothesis gate")
    p.add_argument("--k", type=parse_range, required=True)
    p.add_argument("--modified", action="store_true")
    p.add_argument("--samples", type=int, default=400)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lommelosc")
    ap.add_argument("--no-header", dest="header", action="store_false",
                    help="omit the version header record")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("eval", help="evaluate J, Y, H1, H2 or S on any sheet")
    p.add_argument("--fn", choices=("besselj", "bessely", "hankel1", "hankel2", "lommel"), required=True)
    p.add_argument("--nu", type=parse_complex, required=True)
    p.add_argument("--mu", type=parse_complex)
    p.add_argument("--zeta", type=parse_complex, required=True)
    p.add_argument("--branch-shift", type=int, default=0, help="evaluate at zeta e^{k pi i}")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("wright", help="seeds, bound boxes and refined zeros of z e^z = a")
    p.add_argument("--a", type=parse_complex, required=True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--j-max", type=int, default=3)
    p.set_defaults(run=cmd_wright)

    p = sub.add_parser("census", help="winding counts of g or g-hat on their contours")
    _aux_flags(p)
    p.add_argument("--emit-zeros", action="store_true")
    p.set_defaults(run=cmd_census)

    p = sub.add_parser("contour", help="contour polyline as CSV")
    _aux_flags(p)
    p.set_defaults(run=cmd_contour)

    p = sub.add_parser("verify", help="assembled solution and residual at points z")
    _spec_flags(p)
    p.add_argument("--z", type=parse_complex, action="append", required=True)
    p.add_argument("--h", type=float, default=None)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("quantize", help="finite/infinite exponent verdict")
    p.add_argument("--A", type=parse_complex, default=0j)
    p.add_argument("--B", type=parse_complex, default=0j)
    p.add_argument("--L", type=parse_complex, default=1 + 0j)
    p.add_argument("--M", type=parse_complex, default=1 + 0j)
    p.add_argument("--N", type=parse_complex, default=0j)
    p.add_argument("--nu", type=parse_complex, default=0j)
    p.add_argument("--term", type=parse_term, action="append", default=[])
    p.add_argument("--table1", action="store_true")
    p.add_argument("--case", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--p", type=int)
    p.add_argument("--sigma", type=parse_complex, default=1 + 0j)
    p.set_defaults(run=cmd_quantize)

    p = sub.add_parser("table1", help="one row of the quantized table")
    p.add_argument("--case", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--sigma", type=parse_complex, default=1 + 0j)
    p.set_defaults(run=_table1)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = _Out(sys.stdout, args.header)
    try:
        return args.run(args, out)
    except (HypothesisError, ValidityError) as exc:
        detail = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "smallest_m", None) is not None:
            detail["smallest_m"] = exc.smallest_m
        print(json.dumps(detail, sort_keys=True), file=sys.stderr)
        return EXIT_HYPOTHESIS
    except ParamError as exc:
        code = EXIT_HYPOTHESIS if args.verb in ("census", "contour") else EXIT_USAGE
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except (LommelOscError, ValueError, OverflowError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, ValueError) and args.verb in ("quantize", "table1") else EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
