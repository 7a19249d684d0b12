"""Command-line front end.

Exit codes: 0 success, 1 certificate/property failure, 2 parse error,
3 resource limit, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from relaycap import bounds, netfile
from relaycap._backend import BACKEND
from relaycap.core import build_snr_profile
from relaycap.cut_oracle import verify_prefix_reduction
from relaycap.ensemble import EnsembleConfig, GainDist, bench_scaling, run_trial, sample_network
from relaycap.errors import ConfigError, ResourceError

EXIT_OK, EXIT_CERT, EXIT_PARSE, EXIT_RESOURCE, EXIT_IO = 0, 1, 2, 3, 4

SWEEP_COLUMNS = [
    "trial", "seed", "n", "l", "cutset_prefix_bits", "cutset_exhaustive_bits", "pdf_dms_bits",
    "pdf_co_bits", "ddf_bits", "capprox_bits", "gap_pdf_dms", "gap_ddf", "cert_pdf", "cert_ddf",
]
BENCH_COLUMNS = ["n", "l", "algo", "median_seconds", "evals"]

_BOUND_ROWS = [
    ("exact", "exact"),
    ("cutset_exhaustive", "cutset_exhaustive"),
    ("cutset_prefix", "cutset_prefix"),
    ("capprox", "capacity_approx"),
    ("pdf_dms", "pdf_dms"),
    ("pdf_co", "pdf_co"),
    ("ddf", "ddf"),
]


class CliError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


def _fmt(x, prec):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.{prec}g}"
    return str(x)


def _cut_text(b, n):
    if b.witness_prefix is not None:
        return f"k={b.witness_prefix}"
    if b.witness_mask is not None:
        width = max(1, (n + 3) // 4)
        return f"0x{b.witness_mask:0{width}x}"
    return ""


def _open_output(path):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", newline="", encoding="utf-8"), True
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror}", EXIT_IO) from None


def _write(text, path):
    fh, close = _open_output(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _report_rows(rep):
    rows = []
    for attr, label in _BOUND_ROWS:
        b = getattr(rep, attr)
        if b is not None:
            rows.append((label, b))
    return rows


def _render_bounds(net, prof, rep, fmt, prec):
    perm = [int(i) + 1 for i in prof.ordering]
    gaps = {"gap_pdf_dms": rep.gap_pdf_dms, "gap_ddf": rep.gap_ddf, "gap_pdf_co": rep.gap_pdf_co}
    certs = {"cert_pdf": rep.cert_pdf, "cert_ddf": rep.cert_ddf, "cert_pdf_co": rep.cert_pdf_co,
             "cert_approx": rep.cert_approx, "ordering_ok": rep.ordering_ok}
    rows = _report_rows(rep)
    if fmt == "json":
        doc = {
            "name": net.name, "n": rep.n, "l": rep.l, "backend": BACKEND,
            "sorted_to_original": perm, "exhaustive_used": rep.exhaustive_used,
            "penalty_mode": rep.penalty_mode, "capprox_radius": rep.capprox_radius,
            "bounds": {
                label: {"bits": b.value_bits,
                        "dest": None if b.witness_dest is None else b.witness_dest + 1,
                        "cut_prefix": b.witness_prefix,
                        "cut_mask": None if b.witness_mask is None else hex(b.witness_mask),
                        "evals": b.eval_count}
                for label, b in rows},
            "gaps": gaps, "certificates": certs,
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "bits", "dest", "cut"])
        for label, b in rows:
            dest = "" if b.witness_dest is None else b.witness_dest + 1
            w.writerow([label, _fmt(b.value_bits, prec), dest, _cut_text(b, rep.n)])
        for k, v in gaps.items():
            w.writerow([k, _fmt(v, prec), "", ""])
        for k, v in certs.items():
            w.writerow([k, _fmt(v, prec), "", ""])
        return buf.getvalue()
    lines = [f"network: {net.name or '-'}  N={rep.n}  L={rep.l}  P={_fmt(net.power, prec)}"
             f"  backend={BACKEND}",
             "sorted relay -> original relay: "
             + ", ".join(f"{i + 1}->{p}" for i, p in enumerate(perm)),
             f"{'bound':<18} {'bits':>14} {'dest':>5}  cut"]
    for label, b in rows:
        dest = "" if b.witness_dest is None else str(b.witness_dest + 1)
        lines.append(f"{label:<18} {_fmt(b.value_bits, prec):>14} {dest:>5}  {_cut_text(b, rep.n)}")
    lines.append(f"capacity = {_fmt(rep.capprox.value_bits, prec)} +- "
                 f"{_fmt(rep.capprox_radius, prec)} bits")
    for k, v in gaps.items():
        if v is not None:
            lines.append(f"{k:<18} {_fmt(v, prec):>14}")
    for k, v in certs.items():
        if v is not None:
            lines.append(f"{k:<18} {'PASS' if v else 'FAIL':>14}")
    return "\n".join(lines) + "\n"


def cmd_bounds(args):
    try:
        net = netfile.load(args.input)
    except OSError as e:
        raise CliError(f"cannot read {args.input}: {e.strerror}", EXIT_IO) from None
    except netfile.NetworkFileError as e:
        raise CliError(f"{args.input}: {e}", EXIT_PARSE) from None
    if args.emit_normalized:
        _write(netfile.dumps(net), args.emit_normalized)
    prof = build_snr_profile(net)
    if prof.n > args.exhaustive_limit and not args.no_exhaustive:
        raise CliError(
            f"N={prof.n} exceeds the exhaustive limit {args.exhaustive_limit}; "
            "pass --no-exhaustive or raise --exhaustive-limit", EXIT_RESOURCE)
    rep = bounds.bound_report(prof, args.exhaustive_limit, args.penalty_mode,
                              exhaustive=not args.no_exhaustive)
    _write(_render_bounds(net, prof, rep, args.format, args.precision), args.output)
    if not rep.all_certificates:
        print("certificate violation: this indicates an implementation bug", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _config(args, n, trials=None, exhaustive=True):
    return EnsembleConfig(trials or args.trials, n, args.l, power=args.power,
                          gain_dist=GainDist.parse(args.dist), seed=args.seed,
                          exhaustive_limit=args.exhaustive_limit,
                          penalty_mode=getattr(args, "penalty_mode", "exact"),
                          exhaustive=exhaustive)


def cmd_verify(args):
    if args.n > args.exhaustive_limit:
        raise CliError(f"--n {args.n} exceeds the exhaustive limit {args.exhaustive_limit}",
                       EXIT_RESOURCE)
    cfg = _config(args, args.n)
    counts = {"prefix-reduction": 0, "ordering-chain": 0, "cert-pdf-dms": 0,
              "cert-approx": 0, "cert-ddf": 0}
    if cfg.l == 1:
        counts["cert-pdf-co"] = 0
    for t in range(cfg.trials):
        prof = build_snr_profile(sample_network(cfg, t))
        counts["prefix-reduction"] += verify_prefix_reduction(prof, cfg.exhaustive_limit).passed
        rep = bounds.bound_report(prof, cfg.exhaustive_limit, cfg.penalty_mode)
        counts["ordering-chain"] += rep.ordering_ok
        counts["cert-pdf-dms"] += rep.cert_pdf
        counts["cert-approx"] += rep.cert_approx
        counts["cert-ddf"] += bool(rep.cert_ddf)
        if "cert-pdf-co" in counts:
            counts["cert-pdf-co"] += bool(rep.cert_pdf_co)
    ok = True
    for name, c in counts.items():
        status = "PASS" if c == cfg.trials else "FAIL"
        ok &= c == cfg.trials
        print(f"{name}: {c}/{cfg.trials} {status}")
    return EXIT_OK if ok else EXIT_CERT


def sweep_rows(args):
    n_values = _n_values(args)
    rows = []
    for n in n_values:
        cfg = _config(args, n, exhaustive=not args.no_exhaustive)
        for t in range(cfg.trials):
            r = run_trial(cfg, t)
            v = r.values
            rows.append({
                "trial": t, "seed": cfg.seed, "n": n, "l": cfg.l,
                "cutset_prefix_bits": v["cutset_prefix"], "cutset_exhaustive_bits": v["cutset_exhaustive"],
                "pdf_dms_bits": v["pdf_dms"], "pdf_co_bits": v["pdf_co"], "ddf_bits": v["ddf"],
                "capprox_bits": v["capprox"], "gap_pdf_dms": r.gaps["gap_pdf_dms"],
                "gap_ddf": r.gaps["gap_ddf"], "cert_pdf": r.certs["cert_pdf"],
                "cert_ddf": r.certs["cert_ddf"],
            })
    return rows


def _n_values(args):
    if args.n_list:
        try:
            return [int(x) for x in args.n_list.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad --n-list {args.n_list!r}") from None
    if args.n is None:
        raise ConfigError("give --n or --n-list")
    return [args.n]


def _csv_text(columns, rows, prec):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c], prec) for c in columns])
    return buf.getvalue()


def cmd_sweep(args):
    rows = sweep_rows(args)
    fh, close = _open_output(args.output)
    try:
        fh.write(_csv_text(SWEEP_COLUMNS, rows, args.precision))
    finally:
        if close:
            fh.close()
    bad = any(r["cert_pdf"] is False or r["cert_ddf"] is False for r in rows)
    return EXIT_CERT if bad else EXIT_OK


def cmd_bench(args):
    if args.n is None and args.n_list is None:
        args.n_list = "4,8,12,16,20"
    n_values = _n_values(args)
    fh, close = _open_output(args.output)
    try:
        rows = bench_scaling(n_values, args.l, args.reps, exhaustive_limit=args.exhaustive_limit,
                             seed=args.seed, gain_dist=args.dist)
        fh.write(_csv_text(BENCH_COLUMNS, [r.__dict__ for r in rows], args.precision))
    finally:
        if close:
            fh.close()
    return EXIT_OK


def _precision(text):
    p = int(text)
    if not 1 <= p <= 15:
        raise argparse.ArgumentTypeError("precision must be in [1, 15]")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exhaustive-limit", type=int, default=bounds.EXHAUSTIVE_LIMIT,
                        help="largest N for 2**N cut enumeration (default %(default)s)")
    common.add_argument("--precision", type=_precision, default=6,
                        help="significant digits in numeric output (default 6)")
    common.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument("--l", type=int, default=1, help="number of destinations")
    ens.add_argument("--dist", default="rayleigh:1",
                     help="gain distribution: constant:c | uniform:lo,hi | rayleigh:scale | "
                          "lognormal:mu,sigma")
    ens.add_argument("--power", type=float, default=1.0, help="transmit power P")
    ens.add_argument("--seed", type=int, default=0, help="base seed; trial t uses [seed, t]")

    p = argparse.ArgumentParser(prog="relaycap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="all bounds for one network file")
    b.add_argument("input", nargs="?", help="network JSON file")
    b.add_argument("--input", dest="input_flag", default=None, help="same as the positional input")
    b.add_argument("--format", choices=["table", "csv", "json"], default="table")
    b.add_argument("--no-exhaustive", action="store_true", help="prefix-cut bounds only")
    b.add_argument("--penalty-mode", choices=bounds.PENALTY_MODES, default="exact",
                   help="DDF quantization penalty (default exact)")
    b.add_argument("--emit-normalized", metavar="PATH", default=None,
                   help="also write the parsed network back out as JSON")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", parents=[common, ens], help="property suite over an ensemble")
    v.add_argument("--n", type=int, required=True, help="number of relays")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--penalty-mode", choices=bounds.PENALTY_MODES, default="exact",
                   help="DDF quantization penalty (default exact)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common, ens], help="per-trial bounds as CSV")
    s.add_argument("--n", type=int, default=None, help="number of relays")
    s.add_argument("--n-list", default=None, help="comma-separated relay counts")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--penalty-mode", choices=bounds.PENALTY_MODES, default="exact",
                   help="DDF quantization penalty (default exact)")
    s.add_argument("--no-exhaustive", action="store_true", help="prefix-cut bounds only")
    s.set_defaults(func=cmd_sweep)

    k = sub.add_parser("bench", parents=[common, ens], help="timing table as CSV")
    k.add_argument("--n", type=int, default=None, help="single relay count")
    k.add_argument("--n-list", default=None, help="comma-separated relay counts (default 4,8,12,16,20)")
    k.add_argument("--reps", type=int, default=5, help="timed repetitions per cell (median)")
    k.set_defaults(func=cmd_bench, l=2)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bounds":
        args.input = args.input or args.input_flag
        if not args.input:
            print("relaycap bounds: a network file is required", file=sys.stderr)
            return EXIT_PARSE
    try:
        return args.func(args)
    except CliError as e:
        print(f"relaycap: {e}", file=sys.stderr)
        return e.code
    except ResourceError as e:
        print(f"relaycap: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as e:
        print(f"relaycap: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
