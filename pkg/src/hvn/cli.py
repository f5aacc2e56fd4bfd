"""Command line front end.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from . import cmsearch, congruence, scarcity
from .ellcurve import CurveOverK, reduction_table
from .finitefield import GF
from .heavenly import heavenly_trace_test, three_torsion_heavenly_sample, two_torsion_heavenly
from .pointcount import CurveOverFq, count
from .quadfield import make_field
from .traces import iter_trace_records, predicted_trace


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    p_bound: int = None
    threads: int = 1
    fmt: str = "json"


class UsageError(Exception):
    pass


def _threads(value):
    if value is None:
        value = os.environ.get("HVN_THREADS", "1")
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"bad thread count {value!r}")
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad JSON: {exc}")


def _curve(args):
    coeffs = _json_arg(args.coeffs)
    if not isinstance(coeffs, list) or len(coeffs) != 5:
        raise UsageError("--coeffs must be a JSON list of five entries")
    K = make_field(args.d)
    return CurveOverK(K, [tuple(c) if isinstance(c, list) else c for c in coeffs])


# output

def _emit(payload, fmt, rows=None, header=None, text=None):
    out = io.StringIO()
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=False))
        out.write("\n")
    elif fmt == "csv":
        if rows is None:
            raise UsageError("this command has no CSV form")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        if text is None:
            text = [f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(payload.items())]
        out.write("\n".join(text) + "\n")
    return out.getvalue()


# subcommands

def cmd_curve_info(args, cfg):
    E = _curve(args)
    payload = {
        "field": {"d": E.K.d, "disc": E.K.disc, "min_poly": E.K.min_poly_str()},
        "a": E.to_json(), "c4": E.c4.to_json(), "c6": E.c6.to_json(),
        "disc": E.disc.to_json(), "j": E.j.to_json(),
        "disc_norm_support": E.disc_support(),
        "reduction": [r.to_json() for r in reduction_table(E)],
    }
    return _emit(payload, cfg.fmt)


def cmd_count(args, cfg):
    F = GF(args.p, args.f)
    coeffs = _json_arg(args.coeffs)
    if not isinstance(coeffs, list) or len(coeffs) != 5:
        raise UsageError("--coeffs must be a JSON list of five entries")
    E = CurveOverFq(F, coeffs)
    n = count(E, seed=cfg.seed)
    payload = {"q": F.q, "count": n, "trace": F.q + 1 - n}
    return _emit(payload, cfg.fmt, [[F.q, n, F.q + 1 - n]], ["q", "count", "trace"])


def cmd_traces(args, cfg):
    E = _curve(args)
    ell = args.ell
    p_bound = cfg.p_bound or 25000
    residues, used, match = set(), 0, ell % 4 == 3
    for rec in iter_trace_records(E, p_bound, (ell,), cfg.seed, cfg.threads):
        residues.add(rec.a % ell)
        used += 1
        if match and rec.prime.e == 1 and (rec.a - predicted_trace(rec.q, rec.prime.p, rec.prime.f, ell)) % ell:
            match = False
    payload = {"ell": ell, "p_bound": p_bound, "residues": sorted(residues), "size": len(residues),
               "primes_used": used, "predicted_match": match if ell % 4 == 3 else None}
    return _emit(payload, cfg.fmt, [[r] for r in sorted(residues)], ["residue"])


def cmd_heavenly(args, cfg):
    E = _curve(args)
    ell = args.ell
    if ell == 2:
        v = two_torsion_heavenly(E)
    elif ell == 3:
        v = three_torsion_heavenly_sample(E, cfg.p_bound or 2000, cfg.seed)
    else:
        v = heavenly_trace_test(E, ell, cfg.p_bound or 25000, cfg.seed, cfg.threads,
                                check_prediction=True)
    return _emit(v.to_json(), cfg.fmt, [[v.ell, v.status, v.reason]], ["ell", "status", "reason"])


def cmd_sieve(args, cfg):
    p_bound = cfg.p_bound or 11
    table = congruence.nonbalanced_sieve(p_bound=p_bound, ell_max=args.lmax)
    if args.which == "nonbalanced":
        payload = {"p_bound": p_bound, "ell_max": args.lmax,
                   "rows": [{"j1": j1, "j2": j2, "e": e, "ells": ells} for j1, j2, e, ells in table]}
        rows = [[j1, j2, e, " ".join(map(str, ells))] for j1, j2, e, ells in table]
        return _emit(payload, cfg.fmt, rows, ["j1", "j2", "e", "ells"])
    profiles = congruence.refine_nonbalanced(table)
    payload = {"survivors": [{"ell": p.ell, "e": p.e, "j1": p.j_pair[0], "j2": p.j_pair[1],
                              "i": list(p.i_exponents)} for p in profiles]}
    rows = [[p.ell, p.e, p.j_pair[0], p.j_pair[1], " ".join(map(str, p.i_exponents))]
            for p in profiles]
    return _emit(payload, cfg.fmt, rows, ["ell", "e", "j1", "j2", "i"])


def cmd_scarcity(args, cfg):
    if args.which == "nset":
        s = scarcity.n_set(args.ell)
        return _emit({"ell": args.ell, "n_set": s, "size": len(s)}, cfg.fmt, [[p] for p in s], ["p"])
    if args.which == "vertical":
        rep = scarcity.vertical_report(args.ell, args.max_disc, real_only=args.real)
        return _emit(rep.to_json(), cfg.fmt, [[d] for d in rep.survivors], ["disc"])
    K = make_field(args.d)
    rep = scarcity.horizontal_report(K, args.lmin, args.lmax, args.p_cap)
    return _emit(rep.to_json(), cfg.fmt, [[ell] for ell in rep.survivors], ["ell"])


def cmd_totient(args, cfg):
    sols = congruence.totient_solutions(args.g, args.constrained)
    best = max(s.lcm for s in sols)
    payload = {"g": args.g, "constrained": args.constrained, "solutions": len(sols), "max_lcm": best}
    return _emit(payload, cfg.fmt, [[args.g, len(sols), best]], ["g", "solutions", "max_lcm"])


def cmd_cm_search(args, cfg):
    p_bound = cfg.p_bound or 25000
    rows = cmsearch.run_search(p_bound=p_bound, seed=cfg.seed, threads=cfg.threads)
    comparison = cmsearch.compare_with_reference(rows)
    tot = cmsearch.totals(rows)
    header = cmsearch.CSV_HEADER + ["flags"]
    csv_rows = [r.csv_row() + ["; ".join(r.flags)] for r in rows]
    payload = {"p_bound": p_bound, "totals": tot, "rows": [r.to_json() for r in rows],
               "comparison": comparison}
    text = [f"{r.label}\t{' '.join(map(str, r.ell))}\t{r.min_poly}\t{r.m}\t"
            f"{' '.join(map(str, r.f))}\t{r.r_K}\t{r.r_Q}" + (f"\t{'; '.join(r.flags)}" if r.flags else "")
            for r in rows]
    text.append(f"classes {tot['classes']}  r_K {tot['r_K']}  r_Q {tot['r_Q']}")
    for c in comparison:
        name = c["reference"] or f"unmatched {c['key']}"
        text.append(f"{'match' if c['match'] else 'MISMATCH'}\t{name}\t"
                    f"expected {c['expected_classes']} x {c.get('expected')}\tfound {c['found']}")
    out = _emit(payload, cfg.fmt, csv_rows, header, text)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(_emit(payload, "csv", csv_rows, header))
    return out


# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", default=None)
    common.add_argument("--p-bound", type=int, default=None)

    p = argparse.ArgumentParser(prog="hvn", description="Heavenly elliptic curves over quadratic fields")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("curve-info", parents=[common])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--coeffs", required=True)
    s.set_defaults(func=cmd_curve_info, default_fmt="json")

    s = sub.add_parser("count", parents=[common])
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--f", type=int, default=1)
    s.add_argument("--coeffs", required=True)
    s.set_defaults(func=cmd_count, default_fmt="json")

    for name, func in (("traces", cmd_traces), ("heavenly", cmd_heavenly)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--d", type=int, required=True)
        s.add_argument("--coeffs", required=True)
        s.add_argument("--ell", type=int, required=True)
        s.set_defaults(func=func, default_fmt="json")

    s = sub.add_parser("sieve", parents=[common])
    s.add_argument("which", choices=["nonbalanced", "refine"])
    s.add_argument("--lmax", type=int, default=1000)
    s.set_defaults(func=cmd_sieve, default_fmt="csv")

    s = sub.add_parser("scarcity")
    ss = s.add_subparsers(dest="which", required=True)
    t = ss.add_parser("nset", parents=[common])
    t.add_argument("--ell", type=int, required=True)
    t = ss.add_parser("vertical", parents=[common])
    t.add_argument("--ell", type=int, required=True)
    t.add_argument("--max-disc", type=int, required=True)
    t.add_argument("--real", action="store_true")
    t = ss.add_parser("horizontal", parents=[common])
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--lmin", type=int, required=True)
    t.add_argument("--lmax", type=int, required=True)
    t.add_argument("--p-cap", type=int, default=250)
    s.set_defaults(func=cmd_scarcity, default_fmt="json")

    s = sub.add_parser("cm-search", parents=[common])
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_cm_search, default_fmt="csv")

    s = sub.add_parser("totient", parents=[common])
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--constrained", action="store_true")
    s.set_defaults(func=cmd_totient, default_fmt="json")
    return p


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = RunConfig(args.seed, args.p_bound, _threads(args.threads), args.fmt or args.default_fmt)
        out = args.func(args, cfg)
    except UsageError as exc:
        print(f"hvn: usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"hvn: {exc}", file=sys.stderr)
        return 1
    stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
