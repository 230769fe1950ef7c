"""Command-line front end.

Every subcommand writes to stdout or to ``--out``.  Exit status is 0 on
success, 2 on a usage error and 1 when a computation fails; errors are one
line on stderr starting with ``error:``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .config import Config, load_config
from .quad_arith import biquadratic_invariants, field_invariants, mpf_str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--precision", type=int, help="working precision in decimal digits")
    p.add_argument("--threads", type=int, help="worker threads for sweeps")
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--q-max", type=int, dest="q_max", help="largest prime power used for tower invariants")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    return p


def _header(what: str) -> str:
    return f"# bslab {__version__} {what}\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dict_csv(d: dict) -> str:
    return _csv(list(d), [[("" if v is None else v) for v in d.values()]])


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _number(text: str):
    """Exact Fraction for rational literals, mpf otherwise."""
    try:
        return Fraction(text)
    except ValueError:
        return mpmath.mpf(text)


# --- subcommands ---------------------------------------------------------


def cmd_chars(args, cfg: Config) -> str:
    from . import sym_chars as sc

    if args.action == "decompose":
        parts = _ints(args.young)
        signs = tuple(bool(v) for v in _ints(args.signs)) if args.signs else ()
        comp = sc.Composition(parts, signs)
        if args.n is not None and args.n != comp.n:
            raise UsageError(f"--young sums to {comp.n}, not --n {args.n}")
        if args.twist is not None:
            rows = sc.decompose_product(sc.induce_product(comp, bool(args.twist), cfg.degree_cap))
            if args.fmt == "json":
                return _json([{"partition": str(l), "twist": int(t), "multiplicity": m} for l, t, m in rows])
            return _header("chars decompose") + _csv(["partition_label", "twist", "multiplicity"], [[str(l), int(t), m] for l, t, m in rows])
        rows = sc.decompose(sc.induce_from_young(comp, cfg.degree_cap))
        if args.fmt == "json":
            return _json([{"partition": str(l), "multiplicity": m} for l, m in rows])
        return _header("chars decompose") + sc.decomposition_to_csv(rows)
    if args.action == "table":
        if args.n is None:
            raise UsageError("chars table needs --n")
        t = sc.character_table(args.n, cfg.degree_cap)
        if args.fmt == "json":
            return _json({"classes": [str(p) for p in t.partitions], "class_sizes": list(t.class_sizes),
                          "rows": {str(p): list(r) for p, r in zip(t.partitions, t.rows)}})
        return _header("chars table") + _csv(["label"] + [str(p) for p in t.partitions], [[str(p)] + list(r) for p, r in zip(t.partitions, t.rows)])
    if args.action == "kostka":
        if not args.shape or not args.content:
            raise UsageError("chars kostka needs --shape and --content")
        k = sc.kostka(sc.Partition(_ints(args.shape)), _ints(args.content))
        return _json({"shape": args.shape, "content": args.content, "kostka": k}) if args.fmt == "json" else f"{k}\n"
    raise UsageError(f"unknown chars action {args.action!r}")


def cmd_field(args, cfg: Config) -> str:
    inv = field_invariants(args.disc, cfg.precision)
    d = inv.to_json_dict()
    if args.fmt == "csv":
        return _header("field") + _dict_csv(d)
    return _json(d)


def cmd_biquad(args, cfg: Config) -> str:
    from .lfunc import Field, artin_product_coefficients, dedekind_coefficients

    inv = biquadratic_invariants(args.d1, args.d2, cfg.precision)
    if args.coefficients:
        fld = Field((args.d1, args.d2))
        data = dedekind_coefficients(fld, args.coefficients)
        if args.fmt == "json":
            same = bool((data.coefficients == artin_product_coefficients(fld, args.coefficients)).all())
            return _json({"field": str(fld), "X": args.coefficients, "matches_artin_product": same})
        return _header(f"biquad coefficients {fld}") + data.to_csv()
    d = {
        "D1": inv.D1,
        "D2": inv.D2,
        "D3": inv.D3,
        "disc": inv.disc,
        "r1": inv.r1,
        "r2": inv.r2,
        "rho": mpf_str(inv.rho, cfg.precision),
        "g": mpf_str(inv.g, cfg.precision),
        "precision": cfg.precision,
    }
    return _header("biquad") + _dict_csv(d) if args.fmt == "csv" else _json(d)


def cmd_sweep(args, cfg: Config) -> str:
    from .family_sweep import InvariantCache, sweep

    cache = InvariantCache(cfg.cache_path) if cfg.cache_path else None
    buf = io.StringIO()
    summary = sweep(args.sign, args.lo, args.hi, buf, cfg.precision, cfg.threads, cache)
    if args.fmt == "json":
        return _json(summary.to_json_dict(cfg.precision))
    return _header(f"sweep {args.sign} {args.lo} {args.hi} precision={cfg.precision}") + buf.getvalue()


def cmd_tower(args, cfg: Config) -> str:
    from .family_sweep import TowerData, gbs_rhs, phi_invariants

    with open(args.input, encoding="utf-8") as fh:
        tower = TowerData.from_csv(fh.read(), cfg.precision)
    phi = phi_invariants(tower, cfg.q_max, prec=cfg.precision)
    rhs = gbs_rhs(phi, cfg.q_max, cfg.precision)
    p = cfg.precision
    if args.fmt == "csv":
        keys = ["R", "C"] + list(phi.phi_q)
        rows = []
        for k, lv in enumerate(tower.levels):
            rows.append([lv.level] + [mpf_str(phi.diagnostics[key][k], p) for key in keys])
        return _header("tower ratio sequences") + _csv(["level", "r1/g", "r2/g"] + [f"Nq_{q}/g" for q in phi.phi_q], rows)
    return _json(
        {
            "phi_R": mpf_str(phi.phi_R, p),
            "phi_C": mpf_str(phi.phi_C, p),
            "phi_q": {str(q): mpf_str(v, p) for q, v in phi.phi_q.items()},
            "gbs_full": mpf_str(rhs.full, p),
            "gbs_residue_form": mpf_str(rhs.residue_form, p),
            "gbs_tail_bound": mpf_str(rhs.tail, p),
            "levels": len(tower.levels),
            "precision": p,
        }
    )


def cmd_regions(args, cfg: Config) -> str:
    from . import regions as rg

    p = cfg.precision
    kind = args.kind
    need = {
        "stark": ("log_d",),
        "murty": ("n", "log_d"),
        "almost-sn": ("m", "log_d"),
        "ahc": ("n", "log_d"),
        "both-zeros": ("t", "m", "log_d"),
        "theta": ("m", "n", "g"),
        "l1-lower": ("beta", "sigma1"),
    }[kind]
    for name in need:
        if getattr(args, name) is None:
            raise UsageError(f"regions {kind} needs --{name.replace('_', '-')}")
    log_d = _number(args.log_d) if args.log_d is not None else None
    c = _number(args.c)
    extra = {}
    if kind == "stark":
        reg = rg.stark_region(log_d)
    elif kind == "murty":
        _, reg = rg.murty_region(args.n, log_d, c, p)
    elif kind == "almost-sn":
        reg = rg.almost_sn_region(args.m, log_d)
    elif kind == "ahc":
        reg = rg.ahc_region(args.n, log_d)
    elif kind == "both-zeros":
        reg, expo = rg.both_zeros_bound(args.t, args.m, log_d)
        extra["compositum_exponent"] = expo
    elif kind == "theta":
        th = rg.gbs_theta(args.m, args.n, _number(args.g), c, p)
        return _json({"I": mpf_str(th.I, p), "theta": mpf_str(th.theta, p), "log_theta_over_g": mpf_str(th.log_theta_over_g, p)})
    else:
        b = rg.stark_L1_lower(args.r1, args.r2, args.n_L, args.d_L, _number(args.beta), _number(args.sigma1), c, p)
        return _json({"value": mpf_str(b.value, p), "sigma1": mpf_str(b.sigma1, p), "beta_chi": mpf_str(b.beta_chi, p)})
    obj = json.loads(reg.to_json(p))
    obj.update(extra)
    if args.fmt == "csv":
        flat = {"kind": obj["kind"], "lower": obj["lower"], "width": obj["width"]}
        flat.update({k: v for k, v in obj["parameters"].items()})
        flat.update(extra)
        return _header("regions") + _dict_csv(flat)
    return _json(obj)


def cmd_mellin(args, cfg: Config) -> str:
    from .lfunc import Field, chebyshev_trace_csv, mellin_residual

    fld = Field(tuple(args.disc or ()))
    if args.trace:
        return _header(f"chebyshev trace {fld}") + chebyshev_trace_csv(fld, args.X, cfg.precision)
    rep = mellin_residual(fld, mpmath.mpf(args.s), args.X, cfg.precision)
    if args.fmt == "csv":
        return _header("mellin") + _dict_csv(json.loads(rep.to_json()))
    return rep.to_json() + "\n"


def cmd_scan(args, cfg: Config) -> str:
    from .regions import zero_scan

    rep = zero_scan(args.disc, (args.lo, args.hi), args.points, args.X)
    if args.fmt == "json":
        return _json(
            {
                "D": rep.D,
                "interval": list(rep.interval),
                "X": rep.X,
                "points": len(rep.points),
                "certified_fraction": rep.certified_fraction,
                "sign_changes": [list(c) for c in rep.sign_changes],
                "indeterminate_runs": [list(r) for r in rep.indeterminate_runs],
            }
        )
    return _header(f"scan D={rep.D} X={rep.X}") + rep.to_csv()


def cmd_verify(args, cfg: Config) -> tuple[str, int]:
    from .verify import run_suite, render_report

    lines = run_suite(args.suite, cfg, args.check or None)
    code = 1 if any(ln.status == "FAIL" for ln in lines) else 0
    return render_report(lines, args.suite, cfg), code


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="bslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"bslab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("chars", parents=[common], help="symmetric group characters")
    p.add_argument("action", choices=["decompose", "table", "kostka"])
    p.add_argument("--n", type=int)
    p.add_argument("--young", default="", help="composition, e.g. 4,2,2")
    p.add_argument("--signs", help="0/1 per block: 1 puts the sign character on that block")
    p.add_argument("--twist", type=int, choices=[0, 1], help="induce on S_n x Z/2 with theta^twist")
    p.add_argument("--shape")
    p.add_argument("--content")

    p = sub.add_parser("field", parents=[common], help="quadratic field invariants")
    p.add_argument("--disc", type=int, required=True)

    p = sub.add_parser("biquad", parents=[common], help="biquadratic field Q(sqrt D1, sqrt D2)")
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--coefficients", type=int, metavar="X", help="emit Dedekind coefficients up to X")

    p = sub.add_parser("sweep", parents=[common], help="Brauer-Siegel ratios over a discriminant range")
    p.add_argument("--sign", choices=["imaginary", "real"], default="imaginary")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)

    p = sub.add_parser("tower", parents=[common], help="phi invariants and GBS value from tower data")
    p.add_argument("--input", required=True, help="CSV with columns level,n,r1,r2,g,Nq_2,...")

    p = sub.add_parser("regions", parents=[common], help="zero-free region widths")
    p.add_argument("kind", choices=["stark", "murty", "almost-sn", "ahc", "both-zeros", "theta", "l1-lower"])
    p.add_argument("--log-d", dest="log_d")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--g")
    p.add_argument("--c", default="1")
    p.add_argument("--r1", type=int, default=0)
    p.add_argument("--r2", type=int, default=0)
    p.add_argument("--n-L", dest="n_L", type=int, default=0)
    p.add_argument("--d-L", dest="d_L", type=int, default=1)
    p.add_argument("--beta")
    p.add_argument("--sigma1")

    p = sub.add_parser("mellin", parents=[common], help="Mellin identity residual")
    p.add_argument("--disc", type=int, action="append", help="repeat for a biquadratic field; omit for Q")
    p.add_argument("--s", default="2")
    p.add_argument("--X", type=int, default=10**4)
    p.add_argument("--trace", action="store_true", help="emit the Chebyshev step function instead")

    p = sub.add_parser("scan", parents=[common], help="sign scan of L(s, chi_D) on a real interval")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, default=0.999)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--X", type=int)

    p = sub.add_parser("verify", parents=[common], help="run the identity checks")
    p.add_argument("--suite", choices=["all", "quick"], default="quick")
    p.add_argument("--check", action="append", help="run only this check (repeatable)")
    return parser


COMMANDS = {
    "chars": cmd_chars,
    "field": cmd_field,
    "biquad": cmd_biquad,
    "sweep": cmd_sweep,
    "tower": cmd_tower,
    "regions": cmd_regions,
    "mellin": cmd_mellin,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        try:
            cfg = load_config(args.config).with_overrides(precision=args.precision, threads=args.threads, q_max=args.q_max)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
        result = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(result)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(result)
    return code


run = main

if __name__ == "__main__":
    sys.exit(main())
