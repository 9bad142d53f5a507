"""Command-line front end: ``dioph bounds|dim|estimate|verify|catalog``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional

from . import algebra, approx, catalog, hausdorff, psi, sequences, svg
from .errors import BudgetError, DiophError, PrecisionError
from .numeric import Interval, decimal_str, is_inf, to_ext, to_fraction

HINTS = {
    BudgetError: "lower --xmax / --X / --Q or raise the budget in the config file",
    PrecisionError: "try a smaller search bound; the comparison needs more oracle digits than allowed",
}


# ---------------------------------------------------------------- formatting


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def value_payload(v) -> Optional[dict]:
    """Exact ``p/q`` endpoints plus 12-digit decimals."""
    if v is None:
        return None
    if is_inf(v):
        return {"lo": "inf", "hi": "inf", "decimal": ["inf", "inf"]}
    iv = Interval.coerce(v)
    return {"lo": _rat(iv.lo), "hi": _rat(iv.hi),
            "decimal": [decimal_str(iv.lo), decimal_str(iv.hi)]}


def bound_payload(b: algebra.BoundResult) -> dict:
    return {"target": b.target, "kind": b.kind, "applicable": b.applicable,
            "value": value_payload(b.value), "citation": b.citation, "notes": list(b.notes)}


def bound_text(b: algebra.BoundResult) -> str:
    rel = {"lower": ">=", "upper": "<=", "equality": "="}[b.kind]
    if not b.applicable:
        return f"{b.target}: not applicable ({b.citation}; {'; '.join(b.notes)})"
    v = value_payload(b.value)
    notes = f" [{'; '.join(b.notes)}]" if b.notes else ""
    return (f"{b.target} {rel} [{v['decimal'][0]}, {v['decimal'][1]}]  ({b.citation}){notes}\n"
            f"  exact: [{v['lo']}, {v['hi']}]")


def interval_text(name: str, iv: Interval) -> str:
    v = value_payload(iv)
    return f"{name} in [{v['decimal'][0]}, {v['decimal'][1]}]\n  exact: [{v['lo']}, {v['hi']}]"


class Result:
    def __init__(self, payload, text: str, code: int = 0):
        self.payload = payload
        self.text = text
        self.code = code


# ---------------------------------------------------------------- bounds


def cmd_bounds(args) -> Result:
    width = to_fraction(args.width)
    if args.what == "lambda2n":
        b = algebra.lambda2n_upper(args.n, args.mode, args.lambda2n, width)
        return Result(bound_payload(b), bound_text(b))
    if args.what == "alpha":
        series = algebra.alpha_series_root(width)
        closed = algebra.alpha_closed_form_root(width)
        payload = {"series_root": value_payload(series), "closed_form_root": value_payload(closed),
                   "agree": series.overlaps(closed)}
        text = "\n".join([interval_text("alpha (series)", series),
                          interval_text("alpha (exp equation)", closed),
                          f"routes agree: {payload['agree']}"])
        return Result(payload, text)
    if args.what == "wk":
        if args.quantity == "d":
            direct, closed = algebra.w3_constant(width)
            payload = {"d_direct": value_payload(direct), "d_closed_form": value_payload(closed),
                       "agree": direct.overlaps(closed)}
            text = "\n".join([interval_text("d (at (3+sqrt5)/2)", direct),
                              interval_text("d (6+4 sqrt5)", closed)])
            return Result(payload, text)
        if args.w_hat is None:
            raise DiophError("--what bound needs --w-hat")
        b = algebra.w3_bound(args.w_hat)
        return Result(bound_payload(b), bound_text(b))
    if args.what == "transfer":
        w = to_ext(args.w)
        N = args.N
        if N is None:
            if is_inf(w):
                raise DiophError("--N is required when w is infinite")
            c = math.ceil(to_fraction(w))
            N = {"general": c + args.n - 1, "reciprocal": c + 2 * args.n - 1,
                 "short": math.floor(to_fraction(w)) + args.n}[args.variant]
        b = algebra.transfer_upper_lambda(args.variant, args.n, N, w, args.w_hat,
                                          args.w_hat_tail, args.w_aux)
        return Result(bound_payload(b), bound_text(b))
    raise DiophError(f"unknown bounds target {args.what!r}")


# ---------------------------------------------------------------- dim


def _curve_svg(points, N: int) -> str:
    series = {}
    for kind, attr, sources in (("lower", "lowers", hausdorff.LOWER_SOURCES),
                                ("upper", "uppers", hausdorff.UPPER_SOURCES)):
        for src in sources:
            pts = []
            for p in points:
                b = {x.citation: x for x in getattr(p, attr)}[src]
                pts.append((float(p.lam), float(b.value) if b.applicable and b.value <= 1 else None))
            if any(y is not None for _, y in pts):
                series[f"{kind} {src}"] = pts
    series["extended curve"] = [(float(p.lam), float(p.extended_beresnevich)
                                 if p.extended_beresnevich >= 0 else None) for p in points]
    series["lower envelope"] = [(float(p.lam), float(p.lower.value)) for p in points]
    series["upper envelope"] = [(float(p.lam), float(p.upper.value)) for p in points]
    dashed = 'stroke-dasharray="4 3" '
    styles = {name: dashed for name in series if name not in ("lower envelope", "upper envelope")}
    return svg.line_chart(series, title=f"dimension bounds, N = {N}", x_label="lambda",
                          y_label="dimension", y_range=(0, 1), styles=styles)


def cmd_dim(args) -> Result:
    if args.what == "partition":
        rows = []
        for n, (lo, hi) in enumerate(hausdorff.partition(args.N), start=1):
            rows.append({"n": n, "lo": _rat(lo), "hi": "inf" if is_inf(hi) else _rat(hi),
                         "lo_decimal": decimal_str(lo), "hi_decimal": decimal_str(hi)})
        text = "\n".join(f"I_{r['n']} = [{r['lo']}, {r['hi']})  ~ [{r['lo_decimal']}, {r['hi_decimal']})"
                         for r in rows)
        return Result({"N": args.N, "intervals": rows}, text)
    lo, hi = to_fraction(args.lo), to_fraction(args.hi)
    if not 0 < lo < hi:
        raise DiophError("invalid range: need 0 < --from < --to")
    points = hausdorff.figure_data(args.N, hausdorff.uniform_grid(lo, hi, args.points))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_curve_svg(points, args.N))
    text = hausdorff.to_csv(points).rstrip("\n")
    payload = {"N": args.N, "columns": hausdorff.csv_columns(),
               "rows": [dict(zip(hausdorff.csv_columns(), row.split(",")))
                        for row in text.split("\n")[1:]]}
    return Result(payload, text)


# ---------------------------------------------------------------- estimate


def _schedule(args, oracle) -> list[int]:
    kind, _, ratio = args.schedule.partition(":")
    if kind != "geometric":
        raise DiophError("only geometric:<ratio> schedules are supported")
    hints = oracle.hints if args.use_hints else ()
    return approx.geometric_schedule(int(float(args.xmax)), float(ratio or 1.5), args.points, hints)


def cmd_estimate(args) -> Result:
    oracle = catalog.get(args.number)
    if args.what == "lambda":
        if float(args.xmax) * args.n > args.budget:
            raise BudgetError(f"xmax * n exceeds the configured budget {args.budget}")
        est = approx.lambda_estimate(oracle, args.n, _schedule(args, oracle), args.threads)
        payload = est.to_dict()
        payload["number"] = args.number
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(approx.records_csv(est.records))
        text = "\n".join([
            f"{args.number}: n = {args.n} ({est.label})",
            f"limsup estimate  [{payload['limsup_estimate'][0]}, {payload['limsup_estimate'][1]}]",
            f"uniform estimate [{payload['uniform_estimate'][0]}, {payload['uniform_estimate'][1]}]",
            approx.records_csv(est.records).rstrip("\n")])
        return Result(payload, text)
    if args.what == "cf":
        cf = approx.continued_fraction(oracle, args.terms)
        payload = cf.to_dict()
        payload["number"] = args.number
        text = "[" + "; ".join(payload["quotients"][:1]) + "; " + ", ".join(payload["quotients"][1:]) + "]"
        if cf.exhausted:
            text += f"\nprecision exhausted after {len(cf.quotients)} certified terms"
        return Result(payload, text)
    if args.what == "psi":
        s = psi.psi_sample(oracle, args.n, args.j, float(args.Q), args.side)
        payload = s.to_dict()
        payload["number"] = args.number
        text = (f"psi_{args.n},{args.j}({args.side}) at Q = {float(args.Q):g}: "
                f"[{float(s.psi.lo):.12g}, {float(s.psi.hi):.12g}]")
        return Result(payload, text)
    if args.what == "poly":
        if (2 * args.X + 1) ** (args.n + 1) > args.budget:
            raise BudgetError(f"(2X+1)^(n+1) exceeds the configured budget {args.budget}")
        r = approx.best_polynomial(oracle, args.n, args.X, args.threads)
        payload = r.to_dict()
        payload["number"] = args.number
        return Result(payload, approx.records_csv([r]).rstrip("\n"))
    raise DiophError(f"unknown estimate target {args.what!r}")


# ---------------------------------------------------------------- verify


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


def cmd_verify(args) -> Result:
    if args.what == "prefixes":
        if args.file:
            with open(args.file, encoding="utf-8") as fh:
                pref = sequences.load_prefixes(fh.read())
            rep = sequences.validate_prefix(pref.get("w"), pref.get("lambda"))
            text = "pass" if rep.passed else "\n".join(str(v) for v in rep.violations)
            return Result(rep.to_dict(), text, 0 if rep.passed else 1)
        failures = []
        classes = ("S", "T", "U2", "U3", "Liouville")
        for seed in range(args.seeds):
            cls = classes[seed % len(classes)]
            w, lam = sequences.generate_admissible(seed, args.K, cls)
            rep = sequences.validate_prefix(w, lam)
            if not rep.passed:
                failures.append({"seed": seed, "class": cls, **rep.to_dict()})
        payload = {"seeds": args.seeds, "K": args.K, "failures": failures, "passed": not failures}
        text = "pass" if not failures else "\n".join(
            f"seed {f['seed']} ({f['class']}): {v['citation']}" for f in failures for v in f["violations"])
        return Result(payload, text, 0 if not failures else 1)
    if args.what == "identities":
        oracle = catalog.get(args.number)
        qs = [float(q) for q in args.Q.split(",")]
        samples = [psi.psi_sample(oracle, args.n, j, Q, side)
                   for Q in qs for j in range(1, args.n + 2) for side in ("primal", "dual")]
        rep = psi.identity_audit(samples, args.tolerance)
        text = "\n".join(f"{'ok  ' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in rep.checks)
        return Result(rep.to_dict(), text, 0 if rep.passed else 1)
    if args.what == "envelopes":
        bad = []
        Ns = _parse_range(args.N)
        for N in Ns:
            grid = hausdorff.uniform_grid(Fraction(1, N), Fraction(3, 2), args.points)
            bad += hausdorff.envelope_violations(N, grid)
        payload = {"N": Ns, "points": args.points, "violations":
                   [{"N": N, "lambda": _rat(l), "lower": str(lo), "upper": str(up)} for N, l, lo, up in bad]}
        text = "pass" if not bad else "\n".join(f"N={N} lambda={l}: lower {lo} > upper {up}"
                                                 for N, l, lo, up in bad)
        return Result(payload, text, 0 if not bad else 1)
    raise DiophError(f"unknown verify target {args.what!r}")


# ---------------------------------------------------------------- catalog


def cmd_catalog(args) -> Result:
    if args.what == "show":
        o = catalog.get(args.name)
        enc = o.enclose(Fraction(1, 10**30))
        payload = {"name": args.name, "descriptor": catalog.MANIFEST[args.name],
                   "enclosure": value_payload(enc), "hints": [str(h) for h in o.hints]}
        return Result(payload, f"{args.name}: {json.dumps(catalog.MANIFEST[args.name])}\n"
                               + interval_text("value", enc))
    payload = {name: desc for name, desc in sorted(catalog.MANIFEST.items())}
    text = "\n".join(f"{name:18s} {desc['kind']}" for name, desc in payload.items())
    return Result(payload, text)


# ---------------------------------------------------------------- parser


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DiophError(f"bad config line: {raw.rstrip()}")
            out[key.strip().replace("-", "_")] = value.strip().strip('"')
    return out


CONFIG_KEYS = {"format": str, "out": str, "threads": int, "width": str, "budget": int}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (default: DIOPH_THREADS or 1)")
    common.add_argument("--width", default=argparse.SUPPRESS, help="enclosure width target")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value defaults file")

    p = argparse.ArgumentParser(prog="dioph", parents=[common],
                                description="Exponents of Diophantine approximation: bounds, "
                                            "dimension envelopes, estimates and checks.")
    p.set_defaults(format="text", out=None, threads=None, width="1/1000000000000", config=None,
                   budget=approx.BUDGET)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="closed-form exponent bounds")
    bs = b.add_subparsers(dest="what", required=True)
    x = bs.add_parser("lambda2n", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--mode", choices=("unconditional", "schmidt_summerer", "conditional"),
                   default="unconditional")
    x.add_argument("--lambda2n", default=None, help="known lambda_2n (schmidt_summerer mode)")
    bs.add_parser("alpha", parents=[common])
    x = bs.add_parser("wk", parents=[common])
    x.add_argument("--what", dest="quantity", choices=("d", "bound"), default="d")
    x.add_argument("--w-hat", dest="w_hat", default=None)
    x = bs.add_parser("transfer", parents=[common])
    x.add_argument("--variant", choices=("general", "short", "reciprocal"), required=True)
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--N", type=int, default=None, help="target index (default: first applicable)")
    x.add_argument("--w", required=True)
    x.add_argument("--w-hat", dest="w_hat", default=None)
    x.add_argument("--w-hat-tail", dest="w_hat_tail", default=None)
    x.add_argument("--w-aux", dest="w_aux", default=None)
    b.set_defaults(func=cmd_bounds)

    d = sub.add_parser("dim", parents=[common], help="Hausdorff dimension envelopes")
    ds = d.add_subparsers(dest="what", required=True)
    x = ds.add_parser("curve", parents=[common])
    x.add_argument("--N", type=int, required=True)
    x.add_argument("--from", dest="lo", default=None)
    x.add_argument("--to", dest="hi", default="1")
    x.add_argument("--points", type=int, default=400)
    x.add_argument("--svg", default=None, help="also write an SVG chart to this path")
    x = ds.add_parser("partition", parents=[common])
    x.add_argument("--N", type=int, required=True)
    d.set_defaults(func=cmd_dim)

    e = sub.add_parser("estimate", parents=[common], help="empirical exponent measurements")
    es = e.add_subparsers(dest="what", required=True)
    x = es.add_parser("lambda", parents=[common])
    x.add_argument("--number", required=True)
    x.add_argument("--n", type=int, default=1)
    x.add_argument("--xmax", default="1e5")
    x.add_argument("--schedule", default="geometric:1.5")
    x.add_argument("--points", type=int, default=8)
    x.add_argument("--use-hints", action="store_true")
    x.add_argument("--csv", default=None, help="write per-X records as CSV")
    x = es.add_parser("cf", parents=[common])
    x.add_argument("--number", required=True)
    x.add_argument("--terms", type=int, default=10)
    x = es.add_parser("psi", parents=[common])
    x.add_argument("--number", required=True)
    x.add_argument("--n", type=int, default=1)
    x.add_argument("--j", type=int, default=1)
    x.add_argument("--Q", required=True)
    x.add_argument("--side", choices=("primal", "dual"), default="primal")
    x = es.add_parser("poly", parents=[common])
    x.add_argument("--number", required=True)
    x.add_argument("--n", type=int, default=2)
    x.add_argument("--X", type=int, default=10)
    e.set_defaults(func=cmd_estimate)

    v = sub.add_parser("verify", parents=[common], help="consistency checks (exit 1 on violation)")
    vs = v.add_subparsers(dest="what", required=True)
    x = vs.add_parser("prefixes", parents=[common])
    x.add_argument("--seeds", type=int, default=1000)
    x.add_argument("--K", type=int, default=12)
    x.add_argument("--file", default=None, help="JSON prefix pair to validate instead")
    x = vs.add_parser("identities", parents=[common])
    x.add_argument("--number", required=True)
    x.add_argument("--n", type=int, default=1)
    x.add_argument("--Q", default="100,1000,10000")
    x.add_argument("--tolerance", type=float, default=0.1)
    x = vs.add_parser("envelopes", parents=[common])
    x.add_argument("--N", default="2..20")
    x.add_argument("--points", type=int, default=200)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("catalog", parents=[common], help="catalogued numbers")
    cs = c.add_subparsers(dest="what", required=True)
    cs.add_parser("list", parents=[common])
    x = cs.add_parser("show", parents=[common])
    x.add_argument("name")
    c.set_defaults(func=cmd_catalog)
    return p


def parse_args(argv) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config:
        cfg = read_config(known.config)
        for key, value in cfg.items():
            if key not in CONFIG_KEYS:
                raise DiophError(f"unknown config key {key!r}")
            parser.set_defaults(**{key: CONFIG_KEYS[key](value)})
    args = parser.parse_args(argv)
    if args.threads is None and os.environ.get("DIOPH_THREADS"):
        args.threads = int(os.environ["DIOPH_THREADS"])
    if getattr(args, "what", None) == "curve" and args.lo is None:
        args.lo = f"1/{args.N}"
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        result = args.func(args)
    except DiophError as exc:
        hint = next((h for cls, h in HINTS.items() if isinstance(exc, cls)), None)
        print(f"error: {exc}", file=sys.stderr)
        if hint:
            print(f"hint: {hint}", file=sys.stderr)
        return 2
    if args.format == "json":
        out = json.dumps(result.payload, indent=2, sort_keys=True) + "\n"
    else:
        out = result.text + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
