"""Command-line interface: ``vicsek {generate,analyze,scaling,errata,spectrum}``.

Exit codes: 0 ok, 2 usage/validation, 3 resource cap, 4 internal cross-check
failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import closed_form as cf
from .errors import (BadParameter, CrossCheckError, ResourceCapError,
                     SizeCapExceeded, ValidationError)
from .fractal import cap_vertices, generate, single_seed, star_seed, write_fractal
from .spectral import (DENSE_CAP, decimation_report, mfpt_eigen,
                       multiplicity_hints, spectrum)
from .tree import read_tree, wiener_brute, wiener_fast_tree
from .walks import mc_mfpt, mfpt_oracle

log = logging.getLogger("vicsek")

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_CHECK = 0, 2, 3, 4
ORACLE_CAP = 10_000
ERRATA_ORACLE_CAP = 3000
SPECTRAL_REL_TOL = 1e-6
MC_HALF_WIDTHS = 4.0
MODES = ("closed", "oracle", "spectral", "mc")


class UsageError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _count(text):
    """Positive integer, also accepting forms like ``1e6``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_args(p, required):
    group = p.add_mutually_exclusive_group(required=required)
    group.add_argument("--star", type=int, metavar="S", help="star seed with S leaves")
    group.add_argument("--single", action="store_true", help="single-vertex seed")
    group.add_argument("--seed-file", type=Path, metavar="PATH",
                       help="seed tree in edge-list format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vicsek", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="build a fractal and write its edge list")
    _seed_args(p, True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--cap-vertices", type=_count)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["edgelist"], default="edgelist")

    p = sub.add_parser("analyze", help="Wiener index and MFPT by several methods")
    _seed_args(p, True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--mode", default="closed,oracle",
                   help="comma-separated subset of closed,oracle,spectral,mc")
    p.add_argument("--samples", type=_count, default=100_000,
                   help="total Monte Carlo walks")
    p.add_argument("--pair-samples", type=_count, default=1000)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--cap-vertices", type=_count)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("scaling", help="ln A / ln |V| over a (s, t) grid, as CSV")
    _seed_args(p, False)
    p.add_argument("--s-list", type=_int_list, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["csv"], default="csv")

    p = sub.add_parser("errata", help="compare published formulas with oracles")
    _seed_args(p, False)
    p.add_argument("--s-list", type=_int_list, default=[2, 3, 4])
    p.add_argument("--t-max", type=int, default=2)
    p.add_argument("--cap-vertices", type=_count, default=ERRATA_ORACLE_CAP,
                   help="largest graph on which oracles are run")
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("spectrum", help="Laplacian spectrum and decimation check")
    _seed_args(p, True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--cap-vertices", type=_count, default=DENSE_CAP)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["csv"], default="csv")
    return parser


def load_seed(args, s=None):
    """Seed tree from the flags; with no flag, the star with ``s`` leaves."""
    if args.seed_file is not None:
        return read_tree(args.seed_file)
    if args.single:
        return single_seed()
    if args.star is not None:
        return star_seed(args.star)
    if s is None:
        raise UsageError("a seed source is required")
    return star_seed(s)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


def _frac(x):
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    seed = load_seed(args)
    fractal = generate(seed, args.s, args.t, cap=args.cap_vertices)
    out = args.out or Path(f"vicsek_n{seed.n}_s{args.s}_t{args.t}.txt")
    sidecar = write_fractal(fractal, out)
    log.info("wrote %s and %s", out, sidecar)
    print(fractal.n)
    return EXIT_OK


def cmd_analyze(args) -> int:
    modes = [m.strip() for m in args.mode.split(",") if m.strip()]
    bad = [m for m in modes if m not in MODES]
    if bad or not modes:
        raise UsageError(f"unknown mode(s) {bad}; choose from {', '.join(MODES)}")
    seed = load_seed(args)
    params = cf.ClosedFormParams(seed.n, wiener_fast_tree(seed), args.s, args.t)
    size = params.vertex_count
    if size < 2:
        raise BadParameter("the fractal has a single vertex; nothing to analyze")

    report = {"seed": {"n": seed.n, "W": str(params.W)}, "s": args.s, "t": args.t,
              "vertex_count": str(size), "results": {}, "cross_checks": []}
    exact = {}
    floats = {}
    fractal = None
    if set(modes) - {"closed"}:
        fractal = generate(seed, args.s, args.t, cap=args.cap_vertices)

    for mode in modes:
        if mode == "closed":
            w = cf.wiener_closed(params)
            a = cf.mfpt_closed(params)
            report["results"]["closed"] = {"method": "closed-form", "wiener": str(w),
                                           "mfpt": _frac(a)}
            exact["closed"] = a
        elif mode == "oracle":
            if size > ORACLE_CAP:
                raise SizeCapExceeded(f"oracle mode is limited to {ORACLE_CAP} vertices")
            w = wiener_brute(fractal)
            a = mfpt_oracle(fractal)
            if a != cf.mfpt_from_wiener(w, size):
                raise CrossCheckError("exact hitting times disagree with 2W/n")
            report["results"]["oracle"] = {"method": "bfs+hitting-times",
                                           "wiener": str(w), "mfpt": _frac(a)}
            exact["oracle"] = a
        elif mode == "spectral":
            spec = spectrum(fractal)
            a = mfpt_eigen(spec)
            report["results"]["spectral"] = {"method": "laplacian-eigenvalues",
                                             "wiener_float": size * spec.reciprocal_sum,
                                             "mfpt_float": a}
            floats["spectral"] = (a, None)
        elif mode == "mc":
            walks = max(1, args.samples // args.pair_samples)
            est = mc_mfpt(fractal, args.pair_samples, walks, args.rng_seed)
            report["results"]["mc"] = {"method": "monte-carlo",
                                       "pair_samples": args.pair_samples,
                                       "walks_per_pair": walks, **est.to_json()}
            floats["mc"] = (est.mean, est.half_width_95)

    ok = True
    names = list(exact)
    for other in names[1:]:
        diff = exact[other] - exact[names[0]]
        good = diff == 0
        ok &= good
        report["cross_checks"].append({"modes": [names[0], other],
                                       "delta": _frac(diff), "ok": good})
    if names:
        ref_name = names[0]
        ref = exact[ref_name]
        for name, (value, hw) in floats.items():
            err = abs(value - float(ref))
            if hw is None:
                good = err <= SPECTRAL_REL_TOL * float(ref)
                tol = f"{SPECTRAL_REL_TOL} relative"
            else:
                good = err <= MC_HALF_WIDTHS * hw
                tol = f"{MC_HALF_WIDTHS} half-widths"
            ok &= good
            report["cross_checks"].append({"modes": [ref_name, name], "delta": value - float(ref),
                                           "tolerance": tol, "ok": bool(good)})
    report["ok"] = bool(ok)
    _emit(_dump(report), args.out)
    return EXIT_OK if ok else EXIT_CHECK


SCALING_HEADER = ["s", "t", "vertex_count", "mfpt_num", "mfpt_den", "delta", "lambda"]


def scaling_rows(seed_for, s_list, t_max):
    rows = []
    for s in s_list:
        seed = seed_for(s)
        if s < 2 or seed.max_degree() > s:
            raise BadParameter(f"s={s} is invalid for a seed of max degree {seed.max_degree()}")
        W = wiener_fast_tree(seed)
        lam = cf.scaling_exponents(s).lambda_
        for t in range(t_max + 1):
            p = cf.ClosedFormParams(seed.n, W, s, t)
            if p.vertex_count < 2:
                continue
            a = cf.mfpt_closed(p)
            rows.append([s, t, p.vertex_count, a.numerator, a.denominator,
                         repr(cf.delta(p)), repr(lam)])
    return rows


def cmd_scaling(args) -> int:
    if not args.s_list or args.t_max < 0:
        raise UsageError("need a non-empty --s-list and --t-max >= 0")
    rows = scaling_rows(lambda s: load_seed(args, s), args.s_list, args.t_max)
    if not rows:
        raise UsageError("grid has no graph with at least 2 vertices")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCALING_HEADER)
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _verdict(value, oracle):
    if value is None or oracle is None:
        return "n/a"
    return "agree" if Fraction(value) == Fraction(oracle) else "mismatch"


def errata_rows(seed_for, s_list, t_max, oracle_cap=ERRATA_ORACLE_CAP):
    """One record per (s, t): derived, printed and (when affordable) oracle values."""
    rows = []
    for s in s_list:
        seed = seed_for(s)
        if s < 2 or seed.max_degree() > s:
            raise BadParameter(f"s={s} is invalid for a seed of max degree {seed.max_degree()}")
        W = wiener_fast_tree(seed)
        for t in range(t_max + 1):
            p = cf.ClosedFormParams(seed.n, W, s, t)
            size = p.vertex_count
            if size < 2:
                continue
            derived = cf.derived_report(p)
            oracle_w = oracle_a = None
            if size <= oracle_cap:
                g = generate(seed, s, t)
                oracle_w = wiener_brute(g)
                oracle_a = mfpt_oracle(g)
            checks = []
            checks.append(("wiener", "derived", derived.wiener_t))
            checks.append(("mfpt", "derived", derived.mfpt_t))
            for rep in cf.eval_printed_formulas(p):
                if rep.wiener_t is not None:
                    checks.append(("wiener", rep.variant, rep.wiener_t))
                checks.append(("mfpt", rep.variant, rep.mfpt_t))
            entries = []
            for quantity, variant, value in checks:
                oracle = oracle_w if quantity == "wiener" else oracle_a
                entries.append({"quantity": quantity, "variant": variant,
                                "value": _frac(value),
                                "oracle": None if oracle is None else _frac(oracle),
                                "verdict": _verdict(value, oracle)})
            rows.append({"s": s, "t": t, "seed_n": seed.n, "seed_W": str(W),
                         "vertex_count": str(size), "entries": entries})
    return rows


def cmd_errata(args) -> int:
    if not args.s_list or args.t_max < 0:
        raise UsageError("need a non-empty --s-list and --t-max >= 0")
    rows = errata_rows(lambda s: load_seed(args, s), args.s_list, args.t_max,
                       args.cap_vertices)
    broken = [(r["s"], r["t"], e["quantity"]) for r in rows for e in r["entries"]
              if e["variant"] == "derived" and e["verdict"] == "mismatch"]
    if args.format == "json":
        text = _dump({"rows": rows, "derived_agrees_with_oracle": not broken})
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["s", "t", "vertex_count", "quantity", "variant", "value_num",
                         "value_den", "oracle_num", "oracle_den", "verdict"])
        for r in rows:
            for e in r["entries"]:
                o = e["oracle"] or {"num": "", "den": ""}
                writer.writerow([r["s"], r["t"], r["vertex_count"], e["quantity"],
                                 e["variant"], e["value"]["num"], e["value"]["den"],
                                 o["num"], o["den"], e["verdict"]])
        text = buf.getvalue()
    _emit(text, args.out)
    if broken:
        log.error("derived closed form disagrees with oracle at %s", broken)
        return EXIT_CHECK
    return EXIT_OK


def cmd_spectrum(args) -> int:
    seed = load_seed(args)
    fractal = generate(seed, args.s, args.t, cap=max(args.cap_vertices, seed.n))
    if fractal.n < 2:
        raise BadParameter("single vertex has no nonzero Laplacian eigenvalues")
    spec = spectrum(fractal, cap=args.cap_vertices)
    hints = multiplicity_hints(spec.eigenvalues)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "eigenvalue", "multiplicity_hint"])
    for i, (ev, h) in enumerate(zip(spec.eigenvalues.tolist(), hints.tolist())):
        writer.writerow([i, repr(ev), h])
    _emit(buf.getvalue(), args.out)
    if args.t < 1:
        return EXIT_OK
    parent = generate(seed, args.s, args.t - 1)
    if parent.n < 2:
        return EXIT_OK
    report = decimation_report(spectrum(parent, cap=args.cap_vertices), spec, args.s)
    report.update({"t_parent": args.t - 1, "t_child": args.t})
    target = (args.out.with_name(args.out.name + ".decimation.json") if args.out
              else Path(f"spectrum_n{seed.n}_s{args.s}_t{args.t}.decimation.json"))
    target.write_text(_dump(report), newline="\n")
    return EXIT_OK if report["all_matched"] else EXIT_CHECK


COMMANDS = {"generate": cmd_generate, "analyze": cmd_analyze, "scaling": cmd_scaling,
            "errata": cmd_errata, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "cap_vertices", None) is None and hasattr(args, "cap_vertices"):
        args.cap_vertices = cap_vertices()
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
