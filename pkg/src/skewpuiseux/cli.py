"""Command-line front end.

Exit codes: 0 success, 1 usage/parse error, 2 mathematical obstruction
(failed twist coprimality, sigma-zero obstruction).  Output is
deterministic: fixed flags give byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from mpmath import mp

from . import scalar
from .errors import MathObstruction, SkewError, UsageError
from .factorizer import (FactorConfig, Factorization, newton_puiseux_factor,
                         sigma_zero_quadratic, verify_factorization)
from .hensel import hensel_lift
from .parsing import (parse_poly, parse_scalar, parse_series, poly_to_str,
                      series_to_str)
from .scalar import INF, Alpha, fmt_exponent
from .skewpoly import ConjSeriesRing, SkewPoly, puiseux_ring

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OBSTRUCTION = 2


def _add_common(sp, alpha_required=True, base_choice=False):
    sp.add_argument("--alpha", help="twist multiplier (rational or complex literal)",
                    required=False)
    sp.add_argument("--prec", default="16",
                    help="target series order (rational, default 16)")
    sp.add_argument("--bits", type=int, default=None,
                    help="scalar precision in bits (default 128 or $SKEWPUISEUX_BITS)")
    sp.add_argument("--ramification-cap", type=int, default=256)
    sp.add_argument("--max-classical-iterations", type=int, default=64)
    sp.add_argument("--json", action="store_true", help="JSON output")
    sp.add_argument("--tol-root", default=None, help="root clustering tolerance (bits)")
    sp.add_argument("--tol-orbit", default=None, help="orbit matching tolerance (bits)")
    sp.add_argument("--zero-bits", type=int, default=None,
                    help="noise threshold 2^(-N) for series normalization")
    sp.add_argument("--seedless", action="store_true",
                    help="deterministic mode (always on; reserved)")
    if base_choice:
        sp.add_argument("--base", choices=["puiseux", "conj-series"],
                        default="puiseux",
                        help="coefficient ring (conj-series = C[[x,rho]], central t)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="skewpuiseux",
        description="Skew polynomial arithmetic over Puiseux series: "
                    "factorization, sigma-zeros, Hensel lifting.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("factor", help="factor a monic polynomial into linear factors")
    sp.add_argument("poly")
    _add_common(sp)

    sp = sub.add_parser("sigma-zero", help="compute one sigma-zero")
    sp.add_argument("poly")
    _add_common(sp)

    sp = sub.add_parser("eval", help="(sigma,delta)-substitution f(a)")
    sp.add_argument("poly")
    sp.add_argument("value")
    _add_common(sp, base_choice=True)

    sp = sub.add_parser("mul", help="product of two skew polynomials")
    sp.add_argument("left")
    sp.add_argument("right")
    _add_common(sp, base_choice=True)

    sp = sub.add_parser("divmod", help="left division with remainder")
    sp.add_argument("poly")
    sp.add_argument("divisor")
    _add_common(sp, base_choice=True)

    sp = sub.add_parser("hensel", help="skew Hensel lift: f from g, h")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("h")
    _add_common(sp, base_choice=True)

    sp = sub.add_parser("verify", help="check a factorization f = (t-z1)...(t-zd)")
    sp.add_argument("poly")
    sp.add_argument("zeros", nargs="+")
    sp.add_argument("--unit", default=None, help="left unit series")
    _add_common(sp)
    return p


def _read_arg(text: str) -> str:
    if text == "-":
        return sys.stdin.read().strip()
    return text


def _alpha_from(args, allow_complex_cmds=("sigma-zero", "eval")) -> Alpha:
    if not args.alpha:
        raise UsageError("--alpha is required for this command")
    g = parse_scalar(args.alpha)
    if g.im == 0:
        return Alpha(g.re)
    if args.command not in allow_complex_cmds:
        raise UsageError("complex --alpha is only valid with sigma-zero and eval")
    return Alpha(scalar.to_mpc(g), allow_complex=True)


def _config(args) -> FactorConfig:
    bits_ = args.bits
    if bits_ is None:
        bits_ = int(os.environ.get("SKEWPUISEUX_BITS", "128"))
    cfg = FactorConfig(
        target_order=Fraction(args.prec),
        bits=bits_,
        max_ramification=args.ramification_cap,
        max_classical_iterations=args.max_classical_iterations,
    )
    if args.tol_root is not None:
        cfg.root_tol = mp.mpf(2) ** -int(args.tol_root)
    if args.tol_orbit is not None:
        cfg.orbit_tol = mp.mpf(2) ** -int(args.tol_orbit)
    return cfg


def _ring_for(args, alpha=None):
    if getattr(args, "base", "puiseux") == "conj-series":
        return ConjSeriesRing()
    if alpha is None:
        alpha = _alpha_from(args)
    return puiseux_ring(alpha)


def _ord_str(o) -> str:
    return "inf" if o == INF else fmt_exponent(Fraction(o)).strip("()")


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, separators=(", ", ": ")))
    else:
        for line in text_lines:
            print(line)


def _factor_payload(fac: Factorization) -> dict:
    factors = []
    for z in fac.zeros:
        ring = puiseux_ring(Alpha(1), z.L)
        factors.append(poly_to_str(SkewPoly.t_minus(ring, z)))
    payload = {
        "factors": factors,
        "residual": mp.nstr(mp.mpf(fac.residual), 8),
        "order": _ord_str(fac.achieved_order),
        "ramification": fac.ramification,
        "iso_trail": [str(r) for r in fac.iso_trail],
        "warnings": list(fac.warnings),
    }
    if fac.unit is not None:
        payload["unit"] = series_to_str(fac.unit)
    return payload


def run(args) -> int:
    cfg = _config(args)
    if args.zero_bits is not None:
        scalar.set_zero_eps_bits(args.zero_bits)
    try:
        with scalar.bits(cfg.bits):
            return _dispatch(args, cfg)
    finally:
        scalar.set_zero_eps_bits(None)


def _dispatch(args, cfg: FactorConfig) -> int:
    cmd = args.command
    if cmd == "factor":
        alpha = _alpha_from(args, allow_complex_cmds=())
        ring = puiseux_ring(alpha)
        f = parse_poly(_read_arg(args.poly), ring)
        fac = newton_puiseux_factor(f, cfg)
        payload = _factor_payload(fac)
        lines = [f"f = {poly_to_str(f)}"]
        if fac.unit is not None:
            lines.append(f"unit: {payload['unit']}")
        lines += [f"factor: {s}" for s in payload["factors"]]
        lines.append(f"residual: {payload['residual']}  order: {payload['order']}"
                     f"  ramification: {payload['ramification']}")
        lines += [f"warning: {w}" for w in payload["warnings"]]
        _emit(args, payload, lines)
        return EXIT_OK

    if cmd == "sigma-zero":
        alpha = _alpha_from(args)
        ring = puiseux_ring(alpha)
        f = parse_poly(_read_arg(args.poly), ring)
        if alpha.allow_complex or (f.degree == 2 and not alpha.is_real_positive):
            z = sigma_zero_quadratic(f, cfg)
        else:
            fac = newton_puiseux_factor(f, cfg)
            z = fac.zeros[-1]
        ev = f.evaluate(z)
        check = ev.ord()
        if ev.trunc is not None:
            check = min(check, Fraction(ev.trunc, ev.L))
        payload = {"zero": series_to_str(z), "check_ord": _ord_str(check)}
        _emit(args, payload, [f"zero: {payload['zero']}",
                              f"check_ord: {payload['check_ord']}"])
        return EXIT_OK

    if cmd == "eval":
        ring = _ring_for(args)
        f = parse_poly(_read_arg(args.poly), ring)
        val = parse_series(_read_arg(args.value))
        if isinstance(ring, ConjSeriesRing):
            from .parsing import series_to_conj
            a = series_to_conj(val)
        else:
            a = val
        out = f.evaluate(a)
        payload = {"value": series_to_str(out)}
        _emit(args, payload, [payload["value"]])
        return EXIT_OK

    if cmd == "mul":
        ring = _ring_for(args)
        a = parse_poly(_read_arg(args.left), ring)
        b = parse_poly(_read_arg(args.right), ring)
        payload = {"product": poly_to_str(a * b)}
        _emit(args, payload, [payload["product"]])
        return EXIT_OK

    if cmd == "divmod":
        ring = _ring_for(args)
        f = parse_poly(_read_arg(args.poly), ring)
        p = parse_poly(_read_arg(args.divisor), ring)
        q, r = f.left_divmod(p)
        payload = {"quotient": poly_to_str(q), "remainder": poly_to_str(r)}
        _emit(args, payload, [f"quotient: {payload['quotient']}",
                              f"remainder: {payload['remainder']}"])
        return EXIT_OK

    if cmd == "hensel":
        ring = _ring_for(args)
        f = parse_poly(_read_arg(args.f), ring)
        g = parse_poly(_read_arg(args.g), ring)
        h = parse_poly(_read_arg(args.h), ring)
        L = getattr(f.ring, "L", 1)
        target_k = int(Fraction(args.prec) * L)
        gh, hh, achieved = hensel_lift(f, g, h, target_k)
        payload = {
            "g_hat": poly_to_str(gh),
            "h_hat": poly_to_str(hh),
            "achieved_order": _ord_str(achieved if achieved == INF
                                       else Fraction(int(achieved), L)),
        }
        _emit(args, payload, [f"g_hat: {payload['g_hat']}",
                              f"h_hat: {payload['h_hat']}",
                              f"achieved_order: {payload['achieved_order']}"])
        return EXIT_OK

    if cmd == "verify":
        alpha = _alpha_from(args, allow_complex_cmds=())
        ring = puiseux_ring(alpha)
        f = parse_poly(_read_arg(args.poly), ring)
        zeros = [parse_series(z) for z in args.zeros]
        unit = parse_series(args.unit) if args.unit else None
        fac = Factorization(zeros=zeros, unit=unit, residual=None,
                            achieved_order=None, ramification=max(z.L for z in zeros))
        report = verify_factorization(f, fac, order=cfg.target_order)
        payload = {
            "residual": mp.nstr(mp.mpf(report["residual"]), 8),
            "eval_ord": _ord_str(report["eval_ord"]),
            "ok": bool(report["ok"]),
        }
        _emit(args, payload, [f"residual: {payload['residual']}",
                              f"eval_ord: {payload['eval_ord']}"])
        return EXIT_OK

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return run(args)
    except MathObstruction as e:
        payload = {"error": _obstruction_tag(e)}
        payload.update(_obstruction_fields(e))
        if getattr(args, "json", False):
            print(json.dumps(payload, sort_keys=True, separators=(", ", ": ")))
        else:
            print(f"obstruction: {e}", file=sys.stderr)
        return EXIT_OBSTRUCTION
    except (UsageError, SkewError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _obstruction_tag(e) -> str:
    from .errors import Obstruction, TwistCoprimeFailure
    if isinstance(e, TwistCoprimeFailure):
        return "twist_coprime_failed"
    if isinstance(e, Obstruction):
        return "obstruction"
    return "obstruction"


def _obstruction_fields(e) -> dict:
    from .errors import Obstruction, TwistCoprimeFailure
    if isinstance(e, TwistCoprimeFailure):
        out = {"n": e.n}
        if e.witness is not None:
            out["witness"] = _witness_str(e.witness)
        return out
    if isinstance(e, Obstruction):
        return {"q": str(e.q)}
    return {}


def _witness_str(w) -> str:
    from .residue import ResiduePoly
    from .scalar import fmt_scalar
    if not isinstance(w, ResiduePoly):
        return str(w)
    out = ""
    for i in range(w.degree, -1, -1):
        c = w.coeff(i)
        if c == 0 and out:
            continue
        cs = fmt_scalar(c)
        neg = cs.startswith("-") and not any(ch in cs[1:] for ch in "+-")
        if neg:
            cs = cs[1:]
        if any(ch in cs[1:] for ch in "+-"):
            cs = f"({cs})"
        if i == 0:
            body = cs
        else:
            tp = "t" if i == 1 else f"t^{i}"
            body = tp if cs == "1" else f"{cs}*{tp}"
        if not out:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out or "0"


if __name__ == "__main__":
    sys.exit(main())
