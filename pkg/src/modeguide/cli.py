"""Command-line front end: solve, sweep, verify, and persist results.

Subcommands
-----------
single     bound states of the one-window strip (both parities merged)
split      two-window pair sweep over a range of half-separations, with
           an exponential fit of the splitting against the prediction
critical   critical window half-lengths and their resonance amplitudes
threshold  near-threshold sweep of the emergent eigenvalue at a critical
           width, fitted against the 4*sqrt(3) decay law
oracle     independent finite-difference eigenvalues with extrapolation
verify     run the acceptance suite (exit 0 only if every criterion holds)

All data outputs are deterministic: identical flags produce byte-identical
CSV/JSON (17 significant digits, no timestamps); the reproducibility
sidecar written next to them carries the provenance.  A flat key=value
config file can override defaults, and explicit flags override both.
Exit codes: 0 success, 2 usage error, 3 solver non-convergence, 4 failed
precondition (e.g. threshold sweep at a non-critical width).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .asymptotics import THRESHOLD_RATE, fit_exponential, predict_splitting, predict_threshold
from .fd_oracle import GridAlignmentError, OracleConfig, oracle_eigenvalues, refine_and_extrapolate
from .matching import Truncation
from .modes import GeometryError, ProblemKind, StripConfig, canonicalize
from .records import RunRecord, cache_get, cache_put
from .solve import (
    extract_tail,
    refine_eigenvalue,
    find_critical_widths,
    find_eigenvalues,
    find_near_threshold,
    window_integral,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_PRECONDITION = 4


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(row[c]) for c in columns) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(args, name: str, rows: list[dict], columns: list[str],
          extra_lines: list[str] | None = None, record: RunRecord | None = None) -> None:
    if args.format == "json":
        payload = json.dumps({"rows": rows, "notes": extra_lines or []}, indent=2)
        text = payload + "\n"
    else:
        text = _csv(rows, columns)
        if extra_lines:
            text += "".join(f"# {line}\n" for line in extra_lines)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        suffix = "json" if args.format == "json" else "csv"
        (out / f"{name}.{suffix}").write_text(text)
        if record is not None:
            (out / f"{name}.record.json").write_text(record.to_json())


def _parse_range(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) == 2:
        parts.append("1")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop[:step], got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"empty range {text!r}")
    out = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-9:
            break
        out.append(round(v, 12))
        k += 1
    return out


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line is not key=value: {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


_CONFIG_CASTS = {"d": float, "a": float, "modes": int, "tol": float, "jobs": int,
                 "l": str, "format": str, "out": str, "h": float, "L": float,
                 "n": int, "k": int, "end": str}


def _apply_config(args: argparse.Namespace) -> None:
    cfg = _load_config(getattr(args, "config", None))
    for key, raw in cfg.items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None:
            cast = _CONFIG_CASTS.get(key, str)
            setattr(args, key, cast(raw))


def _defaults(args: argparse.Namespace, **pairs) -> None:
    for key, value in pairs.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _provenance(args, **extra) -> dict:
    prov = {"version": __version__, "modes": args.modes, "tol": args.tol}
    prov.update(extra)
    return prov


def _config_snapshot(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _physical_columns(cfg, rows: list[dict]) -> list[str]:
    """Append physical-unit columns when the strip width is not pi."""
    if cfg.lambda_scale == 1.0:
        return []
    for row in rows:
        row["lambda_phys"] = cfg.to_physical(row["lambda"])
    return ["lambda_phys"]


def cmd_single(args) -> int:
    _defaults(args, d=math.pi, modes=40, tol=1e-12, format="csv")
    if args.a is None:
        print("single: --a is required", file=sys.stderr)
        return EXIT_USAGE
    trunc = Truncation(args.modes)
    rows = []
    pairs = []
    for kind in (ProblemKind.SINGLE_WINDOW_EVEN, ProblemKind.SINGLE_WINDOW_ODD):
        cfg = canonicalize(StripConfig(d=args.d, a=args.a, kind=kind))
        pairs.extend((p, cfg) for p in find_eigenvalues(cfg, trunc, tol=args.tol))
    pairs.sort(key=lambda pc: pc[0].lam)
    columns = ["index", "parity", "lambda"]
    for idx, (p, cfg) in enumerate(pairs, start=1):
        alpha = extract_tail(p).alpha
        integral = window_integral(p, p.kappa1)
        pred = predict_splitting(p.lam, alpha=alpha, window_integral=integral)
        row = {
            "index": idx, "parity": p.parity, "lambda": p.lam, "alpha": alpha,
            "mu_alpha": pred.mu_alpha, "mu_integral": pred.mu_integral,
            "residual": p.residual,
        }
        if args.refine:
            refined = refine_eigenvalue(cfg, p.lam, trunc, tol=args.tol)
            row["lambda_refined"] = refined.value
            row["refine_error"] = refined.error
        rows.append(row)
    cfg0 = canonicalize(StripConfig(d=args.d, a=args.a, kind=ProblemKind.SINGLE_WINDOW_EVEN))
    columns += _physical_columns(cfg0, rows)
    if args.refine:
        columns += ["lambda_refined", "refine_error"]
    columns += ["alpha", "mu_alpha", "mu_integral", "residual"]
    record = RunRecord("single",
                       _config_snapshot(args, ("d", "a", "modes", "tol", "format", "refine")),
                       {"eigenvalues": [r["lambda"] for r in rows]}, _provenance(args))
    _emit(args, "single", rows, columns, record=record)
    return EXIT_OK


def cmd_split(args) -> int:
    _defaults(args, d=math.pi, modes=40, tol=1e-12, format="csv", jobs=1)
    if args.a is None or args.l is None:
        print("split: --a and --l are required", file=sys.stderr)
        return EXIT_USAGE
    ls = _parse_range(args.l)
    if not ls or min(ls) <= args.a:
        print(f"split: need l > a, got l range {args.l!r} with a={args.a}", file=sys.stderr)
        return EXIT_USAGE
    trunc = Truncation(args.modes)
    single = canonicalize(StripConfig(d=args.d, a=args.a, kind=ProblemKind.SINGLE_WINDOW_EVEN))
    base = find_eigenvalues(single, trunc, tol=args.tol)
    if not base:
        print("split: no single-window eigenvalue to split", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    lam1 = base[0].lam
    pred = predict_splitting(lam1, window_integral=window_integral(base[0], base[0].kappa1))

    tasks = [(args.d, args.a, l, args.modes, args.tol) for l in ls]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_split_point, tasks))
    else:
        results = [_split_point(t) for t in tasks]

    rows = []
    for (l, lam_p, lam_m) in results:
        gap = pred.mu * math.exp(-pred.rate * l)
        rows.append({
            "l": l, "lambda_plus": lam_p, "lambda_minus": lam_m,
            "delta_plus": lam1 - lam_p, "delta_minus": lam_m - lam1,
            "delta_predicted": gap,
        })
    deltas = [(r["l"], math.sqrt(r["delta_plus"] * r["delta_minus"]))
              for r in rows if r["delta_plus"] > 0 and r["delta_minus"] > 0]
    notes = [f"lambda_1 = {_fmt(lam1)}", f"predicted rate = {_fmt(pred.rate)}",
             f"predicted prefactor = {_fmt(pred.mu)}"]
    if len(deltas) >= 3:
        fit = fit_exponential(deltas)
        notes += [f"fitted rate = {_fmt(fit.rate)}", f"fitted prefactor = {_fmt(fit.prefactor)}",
                  f"fit r2 = {_fmt(fit.r2)}", f"fit points = {fit.n_points}"]
    record = RunRecord("split", _config_snapshot(args, ("d", "a", "l", "modes", "tol", "format", "jobs")),
                       {"rows": rows}, _provenance(args))
    _emit(args, "split", rows,
          ["l", "lambda_plus", "lambda_minus", "delta_plus", "delta_minus", "delta_predicted"],
          extra_lines=notes, record=record)
    if args.out:
        (Path(args.out) / "split_plot.py").write_text(_plot_script(rows, pred))
    return EXIT_OK


def _split_point(task):
    d, a, l, modes, tol = task
    trunc = Truncation(modes)
    lam_p = find_eigenvalues(canonicalize(StripConfig(d=d, a=a, l=l, kind=ProblemKind.TWO_WINDOW_EVEN)),
                             trunc, tol=tol)[0].lam
    lam_m = find_eigenvalues(canonicalize(StripConfig(d=d, a=a, l=l, kind=ProblemKind.TWO_WINDOW_ODD)),
                             trunc, tol=tol)[0].lam
    return l, lam_p, lam_m


def _plot_script(rows: list[dict], pred) -> str:
    ls = [r["l"] for r in rows]
    dps = [r["delta_plus"] for r in rows]
    dms = [r["delta_minus"] for r in rows]
    return (
        "#!/usr/bin/env python3\n"
        '"""Render ln(delta) against half-separation l with the predicted line."""\n'
        "import math\n"
        "import matplotlib.pyplot as plt\n"
        f"ls = {ls!r}\n"
        f"delta_plus = {dps!r}\n"
        f"delta_minus = {dms!r}\n"
        f"rate, mu = {pred.rate!r}, {pred.mu!r}\n"
        "plt.semilogy(ls, delta_plus, 'o', label='even gap')\n"
        "plt.semilogy(ls, delta_minus, 's', label='odd gap')\n"
        "plt.semilogy(ls, [mu * math.exp(-rate * l) for l in ls], '-', label='predicted')\n"
        "plt.xlabel('half-separation l')\n"
        "plt.ylabel('splitting')\n"
        "plt.legend()\n"
        "plt.savefig('split.png', dpi=150)\n"
    )


def cmd_critical(args) -> int:
    _defaults(args, d=math.pi, modes=40, tol=1e-12, format="csv", n=1)
    if args.n < 1:
        print("critical: need --n >= 1", file=sys.stderr)
        return EXIT_USAGE
    trunc = Truncation(args.modes)
    scan = find_critical_widths(args.n, trunc, tol=args.tol)
    rows = []
    for w in scan.widths:
        integral = window_integral(w.resonance, math.sqrt(3.0))
        pred = predict_threshold(beta=w.beta, window_integral=integral)
        rows.append({
            "index": w.index, "a": w.a, "parity": w.parity, "beta": w.beta,
            "mu_beta": pred.mu_beta, "mu_integral": pred.mu_integral,
            "kappa_formula": f"sqrt({_fmt(pred.mu_beta)})*exp(-2*sqrt(3)*l)",
        })
    notes = []
    if scan.exhausted:
        notes.append(f"range exhausted: only {len(scan.widths)} roots below a={scan.a_max}")
    record = RunRecord("critical", _config_snapshot(args, ("n", "modes", "tol", "format")),
                       {"widths": [r["a"] for r in rows]}, _provenance(args))
    _emit(args, "critical", rows,
          ["index", "a", "parity", "beta", "mu_beta", "mu_integral", "kappa_formula"],
          extra_lines=notes, record=record)
    return EXIT_OK


def cmd_threshold(args) -> int:
    _defaults(args, d=math.pi, modes=40, tol=1e-12, format="csv", n=1)
    if args.l is None:
        print("threshold: --l range is required", file=sys.stderr)
        return EXIT_USAGE
    ls = _parse_range(args.l)
    trunc = Truncation(args.modes)
    scan = find_critical_widths(args.n, trunc, tol=args.tol)
    if len(scan.widths) < args.n:
        print(f"threshold: fewer than {args.n} critical widths found", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    width = scan.widths[args.n - 1]
    if args.a is not None and abs(args.a - width.a) > 1e-4:
        print(f"threshold: a={args.a} is not a critical width at this truncation "
              f"(nearest: a_{width.index} = {width.a:.8f}); run the critical command first",
              file=sys.stderr)
        return EXIT_PRECONDITION
    integral = window_integral(width.resonance, math.sqrt(3.0))
    pred = predict_threshold(beta=width.beta, window_integral=integral)
    rows = []
    for l in ls:
        cfg = canonicalize(StripConfig(d=math.pi, a=width.a, l=l, kind=ProblemKind.TWO_WINDOW_EVEN))
        roots = find_near_threshold(cfg, trunc)
        if not roots:
            print(f"threshold: no near-threshold eigenvalue at l={l}", file=sys.stderr)
            return EXIT_NO_CONVERGENCE
        kappa = min(p.kappa1 for p in roots)
        rows.append({"l": l, "kappa": kappa, "gap": kappa * kappa,
                     "gap_predicted": pred.gap(l)})
    notes = [f"critical width a_{width.index} = {_fmt(width.a)} ({width.parity})",
             f"beta = {_fmt(width.beta)}", f"mu = {_fmt(pred.mu_beta)}",
             f"predicted rate = {_fmt(THRESHOLD_RATE)}"]
    if len(rows) >= 3:
        fit = fit_exponential([(r["l"], r["gap"]) for r in rows])
        notes += [f"fitted rate = {_fmt(fit.rate)}", f"fitted prefactor = {_fmt(fit.prefactor)}",
                  f"fit r2 = {_fmt(fit.r2)}"]
    record = RunRecord("threshold", _config_snapshot(args, ("a", "l", "n", "modes", "tol", "format")),
                       {"rows": rows}, _provenance(args))
    _emit(args, "threshold", rows, ["l", "kappa", "gap", "gap_predicted"],
          extra_lines=notes, record=record)
    return EXIT_OK


def cmd_oracle(args) -> int:
    _defaults(args, d=math.pi, modes=40, tol=1e-12, format="csv", h=1 / 64, k=4, end="dirichlet")
    if args.a is None:
        print("oracle: --a is required", file=sys.stderr)
        return EXIT_USAGE
    if args.l is not None:
        l = float(args.l)
        kinds = (ProblemKind.TWO_WINDOW_EVEN, ProblemKind.TWO_WINDOW_ODD)
    else:
        l = None
        kinds = (ProblemKind.SINGLE_WINDOW_EVEN, ProblemKind.SINGLE_WINDOW_ODD)
    if args.L is None:
        args.L = math.ceil((l or 0.0) + args.a + 12.0)
    rows = []
    for kind in kinds:
        cfg = canonicalize(StripConfig(d=args.d, a=args.a, l=l, kind=kind))
        per_grid = []
        for h in (2 * args.h, args.h):
            key = {"what": "oracle", "kind": kind.value, "d": args.d, "a": args.a,
                   "l": l, "L": args.L, "h": h, "k": args.k, "end": args.end}
            vals = cache_get(key)
            if vals is None:
                vals = [float(v) for v in
                        oracle_eigenvalues(cfg, OracleConfig(L=args.L, h=h, k=args.k, end=args.end))]
                cache_put(key, vals)
            per_grid.append(vals)
        coarse, fine = per_grid
        extrap, err, p = refine_and_extrapolate(coarse, fine)
        for i in range(args.k):
            rows.append({"parity": kind.parity, "index": i + 1,
                         "lambda_h": float(fine[i]), "lambda_extrapolated": float(extrap[i]),
                         "error_bound": float(err[i])})
    record = RunRecord("oracle", _config_snapshot(args, ("d", "a", "l", "h", "L", "k", "end", "format")),
                       {"rows": rows}, _provenance(args, h=args.h, L=args.L))
    _emit(args, "oracle", rows,
          ["parity", "index", "lambda_h", "lambda_extrapolated", "error_bound"], record=record)
    return EXIT_OK


def cmd_verify(args) -> int:
    _defaults(args, modes=40, tol=1e-12, format="csv")
    from .acceptance import run_acceptance
    results = run_acceptance(quick=bool(args.quick))
    for res in results:
        for line in res.lines():
            print(line)
    summary = {
        "passed": sum(1 for r in results if r.passed),
        "failed": [r.cid for r in results if not r.passed],
        "criteria": [{"id": r.cid, "title": r.title, "passed": r.passed,
                      "checks": [{"text": t, "ok": ok} for t, ok in r.checks],
                      "seconds": round(r.seconds, 2)} for r in results],
    }
    print(json.dumps(summary, indent=2))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify.json").write_text(json.dumps(summary, indent=2))
    return EXIT_OK if not summary["failed"] else 1


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modeguide",
                                     description="Bound states of a Dirichlet strip with Neumann windows")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def common(p, *, l_flag=True):
        p.add_argument("--d", type=float, default=None, help="strip width (default pi)")
        p.add_argument("--a", type=float, default=None, help="window half-length")
        if l_flag:
            p.add_argument("--l", type=str, default=None,
                           help="half-separation or range start:stop:step")
        p.add_argument("--modes", type=int, default=None, help="transverse modes per region (default 40)")
        p.add_argument("--tol", type=float, default=None, help="bracketing tolerance (default 1e-12)")
        p.add_argument("--jobs", type=int, default=None, help="parallel sweep workers")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--config", type=str, default=None, help="flat key=value config file")

    p = sub.add_parser("single", help="single-window bound states")
    common(p, l_flag=False)
    p.add_argument("--refine", action="store_true",
                   help="add truncation-ladder extrapolated eigenvalues")
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("split", help="two-window pair sweep and splitting fit")
    common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("critical", help="critical window half-lengths")
    common(p, l_flag=False)
    p.add_argument("--n", type=int, default=None, help="number of critical widths (default 1)")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("threshold", help="near-threshold sweep at a critical width")
    common(p)
    p.add_argument("--n", type=int, default=None, help="critical-width index (default 1)")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("oracle", help="finite-difference oracle eigenvalues")
    common(p)
    p.add_argument("--h", type=float, default=None, help="grid step (default 1/64)")
    p.add_argument("--L", type=float, default=None, help="truncation half-length")
    p.add_argument("--k", type=int, default=None, help="eigenvalues to report (default 4)")
    p.add_argument("--end", choices=("dirichlet", "neumann"), default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run the acceptance suite")
    common(p, l_flag=False)
    p.add_argument("--quick", action="store_true", help="skip oracle grid refinement")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        _apply_config(args)
        return args.func(args)
    except (GeometryError, GridAlignmentError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"{args.command}: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
