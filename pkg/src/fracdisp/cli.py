"""Command-line front end.

Subcommands: ml, bessel, kernel, sweep, fit, besov, verify, plotdata.
Outputs are deterministic: fixed 17-significant-digit formatting, LF line
endings, sorted JSON keys; identical inputs give byte-identical files.
Exit status: 0 on success (for ``verify``: every assertion passed),
1 on a failed check, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import besov as besov_mod
from . import estimates as est
from .config import GridSpec, RunConfig
from .errors import FracdispError
from .freq import DyadicBand, RadialProfile
from .kernel import (KernelSpec, expansion_residual, kernel_band_profile,
                     kernel_full, kernel_full_rescaled, w1_eval)
from .specfun import bessel_j, ml_eval

__all__ = ["main"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit_json(doc: dict, out_path=None) -> str:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out_path:
        _write_text(out_path, text)
    sys.stdout.write(text)
    return text


def _load_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = RunConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    for name in ("n", "alpha", "beta", "threads"):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    if getattr(args, "out", None):
        cfg.out_dir = args.out
    if getattr(args, "t_min", None) is not None:
        cfg.t_grid = GridSpec(args.t_min, args.t_max or args.t_min,
                              args.t_points or 9)
    return cfg


# ---------------------------------------------------------------------------
# Simple evaluator commands
# ---------------------------------------------------------------------------

def _cmd_ml(args) -> int:
    re_z, im_z = (float(p) for p in args.z.split(","))
    val, diag = ml_eval(args.alpha, complex(re_z, im_z))
    doc = {
        "alpha": args.alpha,
        "z": {"re": re_z, "im": im_z},
        "value": {"re": val.real, "im": val.imag},
        "diagnostics": {"method": diag.method, "terms_or_nodes": diag.terms_or_nodes,
                        "est_error": diag.est_error},
    }
    _emit_json(doc)
    return 0


def _cmd_bessel(args) -> int:
    val, diag = bessel_j(args.nu, args.x)
    _emit_json({
        "nu": args.nu, "x": args.x, "value": val,
        "diagnostics": {"method": diag.method, "terms_or_nodes": diag.terms_or_nodes,
                        "est_error": diag.est_error},
    })
    return 0


# ---------------------------------------------------------------------------
# Kernel profiles and sweeps
# ---------------------------------------------------------------------------

def _kernel_csv(spec: KernelSpec, t: float, band_j, xs) -> str:
    lines = ["t,N,x,re,im,abs,panels,tail_bound"]
    if band_j is not None:
        band = DyadicBand(band_j)
        vals = kernel_band_profile(spec, t, band, xs, check=True)
        for x, v in zip(xs, vals):
            lines.append(",".join([_fmt(t), _fmt(band.N), _fmt(x), _fmt(v.real),
                                   _fmt(v.imag), _fmt(abs(v)), "11", _fmt(0.0)]))
    else:
        for x in xs:
            s = kernel_full(spec, t, x)
            lines.append(",".join([_fmt(t), _fmt(0.0), _fmt(x), _fmt(s.value.real),
                                   _fmt(s.value.imag), _fmt(abs(s.value)),
                                   str(s.diagnostics.panels),
                                   _fmt(s.diagnostics.tail_bound)]))
    return "\n".join(lines) + "\n"


def _cmd_kernel(args) -> int:
    cfg = _load_config(args)
    spec = cfg.kernel_spec()
    if args.x_scale == "log":
        xs = np.geomspace(args.x_min, args.x_max, args.x_points)
    else:
        xs = np.linspace(args.x_min, args.x_max, args.x_points)
    text = _kernel_csv(spec, args.t, args.band, xs)
    if args.out_file:
        _write_text(args.out_file, text)
    else:
        sys.stdout.write(text)
    return 0


def _sweep_csv(records) -> str:
    lines = ["t,N,sup_K,x_star,t_alpha_N_beta,status"]
    for r in records:
        lines.append(",".join([_fmt(r.t), _fmt(r.N), _fmt(r.sup_K), _fmt(r.x_star),
                               _fmt(r.t_alpha_N_beta), r.status]))
    return "\n".join(lines) + "\n"


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    spec = cfg.kernel_spec()
    records = est.decay_sweep(spec, cfg.t_grid.values(), cfg.band_values(),
                              threads=cfg.threads)
    text = _sweep_csv(records)
    if args.out_file:
        _write_text(args.out_file, text)
    else:
        sys.stdout.write(text)
    return 0


def _read_csv_columns(path) -> dict:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    cols = {h: [] for h in header}
    for ln in lines[1:]:
        if not ln.strip():
            continue
        for h, tok in zip(header, ln.split(",")):
            cols[h].append(tok)
    return cols


def _cmd_fit(args) -> int:
    cols = _read_csv_columns(args.input)
    xs = [float(v) for v in cols[args.x_col]]
    ys = [float(v) for v in cols[args.y_col]]
    ok = [i for i in range(len(xs)) if cols.get("status", ["ok"] * len(xs))[i] == "ok"]
    fit = est.fit_exponent([(xs[i], ys[i]) for i in ok])
    _emit_json({
        "input": str(args.input), "x_col": args.x_col, "y_col": args.y_col,
        "slope": fit.slope, "intercept": fit.intercept,
        "r_squared": fit.r_squared, "n_points": fit.n_points,
        "residual_max": fit.residual_max,
    })
    return 0


def _cmd_besov(args) -> int:
    prof = RadialProfile.from_csv(args.input)
    spec = besov_mod.BesovSpec(s=args.s, p=args.p, q=args.q,
                               j_min=args.j_min, j_max=args.j_max)
    norm, table = besov_mod.besov_norm(prof, spec)
    lines = ["j,two_pow_js,block_lp,weighted"]
    for j, bj in table:
        w = 2.0 ** (j * args.s)
        lines.append(",".join([str(j), _fmt(w), _fmt(bj), _fmt(w * bj)]))
    text = "\n".join(lines) + "\n"
    if args.out_file:
        _write_text(args.out_file, text)
    _emit_json({"norm": norm, "s": args.s, "p": args.p, "q": args.q,
                "j_min": args.j_min, "j_max": args.j_max})
    return 0


def _cmd_plotdata(args) -> int:
    cols = _read_csv_columns(args.input)
    if not cols or not cols.get(args.x_col):
        sys.stderr.write("plotdata: empty or missing input columns\n")
        return 2
    xs = np.array([float(v) for v in cols[args.x_col]])
    ys = np.array([float(v) for v in cols[args.y_col]])
    keep = ys > 0
    if keep.sum() < 3:
        sys.stderr.write("plotdata: fewer than 3 positive samples\n")
        return 2
    fit = est.fit_exponent(list(zip(xs[keep], ys[keep])))
    out = Path(args.out or ".")
    pts = ["log10_" + args.x_col + ",log10_" + args.y_col]
    for x, y in zip(xs[keep], ys[keep]):
        pts.append(f"{_fmt(math.log10(x))},{_fmt(math.log10(y))}")
    _write_text(out / "points.csv", "\n".join(pts) + "\n")
    lns = ["log10_" + args.x_col + ",fitted_log10_" + args.y_col]
    for x in xs[keep]:
        yhat = (fit.slope * math.log(x) + fit.intercept) / math.log(10.0)
        lns.append(f"{_fmt(math.log10(x))},{_fmt(yhat)}")
    _write_text(out / "fit.csv", "\n".join(lns) + "\n")
    _emit_json({"slope": fit.slope, "intercept": fit.intercept,
                "r_squared": fit.r_squared,
                "files": ["points.csv", "fit.csv"]})
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check_thm12(cfg: RunConfig) -> dict:
    spec = cfg.kernel_spec()
    tol_t = cfg.tolerances["t_slope"]
    tol_n = cfg.tolerances["n_slope"]
    n_min = 2.0 ** cfg.band_j_min
    t_lo = max(cfg.t_grid.start, (10.0 / n_min ** spec.beta) ** (1.0 / spec.alpha))
    tg = GridSpec(t_lo, max(cfg.t_grid.stop, t_lo * 10.0), cfg.t_grid.points).values()
    recs_t = est.decay_sweep(spec, tg, [n_min], threads=cfg.threads)
    fit_t = est.fit_exponent([(r.t, r.sup_K) for r in recs_t if r.status == "ok"])
    t_fixed = (10.0 / n_min ** spec.beta) ** (1.0 / spec.alpha)
    recs_n = est.decay_sweep(spec, [t_fixed], cfg.band_values(), threads=cfg.threads)
    fit_n = est.fit_exponent([(r.N, r.sup_K) for r in recs_n if r.status == "ok"])
    ok = (abs(fit_t.slope + spec.alpha) <= tol_t and fit_t.r_squared >= 0.99
          and abs(fit_n.slope - (spec.n - spec.beta)) <= tol_n)
    return {
        "check": "thm12",
        "params": {"n": spec.n, "alpha": spec.alpha, "beta": spec.beta},
        "pass": bool(ok),
        "metrics": {
            "slope": fit_t.slope, "expected": -spec.alpha, "tolerance": tol_t,
            "r_squared": fit_t.r_squared,
            "n_slope": fit_n.slope, "n_expected": spec.n - spec.beta,
            "n_tolerance": tol_n,
        },
        "cells_excluded": sum(1 for r in recs_t + recs_n if r.status != "ok"),
    }


def _check_sharpness(cfg: RunConfig) -> dict:
    spec = cfg.kernel_spec()
    rep = est.verify_sharpness(spec, cfg.t_grid.values(), cfg.band_values(),
                               spread_max=cfg.tolerances["sharpness_spread"])
    rep.pop("records", None)
    return rep


def _check_besov(cfg: RunConfig, variant: str) -> dict:
    spec = cfg.kernel_spec()
    tg = GridSpec(1e-1, 1e4, 11).values()
    spread_tol = cfg.tolerances["ratio_spread"]
    rows = []
    ok = True
    if variant in ("eq7", "eq8"):
        inputs = [("gaussian", est.gaussian_profile(spec.n)),
                  ("lowpass", est.lowpass_profile(spec.n))]
        svp = [(0.0, 2.0)]
    else:
        inputs = [("graded", est.graded_band_profile(spec.n, 1.0, j_lo=-8, j_hi=2))]
        svp = [(1.0, 2.0)]
    for name, fn in inputs:
        for r in (2.0, 4.0, math.inf):
            for s, p in svp:
                reps = est.verify_dispersive_besov(spec, tg, fn, r, s=s, p=p,
                                                   variant=variant)
                ratios = [rp.ratio for rp in reps]
                spread = max(ratios) / min(ratios)
                ok &= spread <= spread_tol
                rows.append({"input": name, "r": "inf" if math.isinf(r) else r,
                             "spread": spread, "ratio_max": max(ratios)})
    return {
        "check": f"besov-{variant}",
        "params": {"n": spec.n, "alpha": spec.alpha, "beta": spec.beta},
        "pass": bool(ok),
        "metrics": {"ratio_spread": max(r["spread"] for r in rows),
                    "tolerance": spread_tol, "rows": rows},
        "cells_excluded": 0,
    }


def _check_cor33(cfg: RunConfig) -> dict:
    spec = cfg.kernel_spec()
    if spec.beta <= spec.n:
        raise FracdispError("cor33 needs beta > n; adjust --beta")
    tol = cfg.tolerances["lp_rate"]
    tg = GridSpec(1e3, 1e5, 8).values()
    rows, ok = [], True
    for p, gamma, jlo in ((2.0, 0.5, -12), (4.0, 0.25, -9), (math.inf, 0.0, 0)):
        fn = est.graded_band_profile(spec.n, gamma, j_lo=jlo, j_hi=2) if gamma > 0 \
            else est.gaussian_profile(spec.n)
        fit, expected = est.verify_lp_interpolation(spec, p, tg, fn)
        ok &= abs(fit.slope - expected) <= tol
        rows.append({"p": "inf" if math.isinf(p) else p, "slope": fit.slope,
                     "expected": expected, "r_squared": fit.r_squared})
    return {
        "check": "cor33",
        "params": {"n": spec.n, "alpha": spec.alpha, "beta": spec.beta},
        "pass": bool(ok),
        "metrics": {"tolerance": tol, "rows": rows},
        "cells_excluded": 0,
    }


def _check_ode(cfg: RunConfig, lam: float) -> dict:
    tol = 1e-10 if cfg.alpha == 1.0 else cfg.tolerances["ode_residual"]
    return est.verify_mode_ode(cfg.alpha, lam, [0.5, 1.0, 2.0], tol=tol)


def _check_lemma31(cfg: RunConfig) -> dict:
    spec = cfg.kernel_spec()
    metrics = {}
    ok = True
    # self-similar scaling identity on a deterministic sample of (t, x)
    worst = 0.0
    pairs = [(10.0 ** (0.4 * i), 10.0 ** (-2 + 0.3 * i)) for i in range(8)]
    for t, x in pairs:
        k1 = kernel_full(spec, t, x).value
        eta = x * t ** (-spec.alpha / spec.beta)
        k2 = t ** (-spec.n * spec.alpha / spec.beta) * kernel_full(spec, 1.0, eta).value
        worst = max(worst, abs(k1 - k2) / abs(k1))
    metrics["scaling_rel_err"] = worst
    ok &= worst <= 1e-8
    if spec.beta <= spec.n:
        etas = np.geomspace(1e-3, 1e-1, 7)
        res = [expansion_residual(spec, 1.0, e) for e in etas]
        raw = abs(kernel_full_rescaled(spec, etas[0]).value)
        metrics["residual_spread"] = max(res) / min(res)
        metrics["kernel_over_residual_at_small_eta"] = raw / res[0]
        ok &= metrics["residual_spread"] <= 10.0
        ok &= metrics["kernel_over_residual_at_small_eta"] >= 10.0
    if spec.n == 2:
        r1 = w1_eval(2, 1e-3).real / math.log(1e3)
        r2 = w1_eval(2, 1e-5).real / math.log(1e5)
        metrics["w1_log_ratio_variation"] = abs(r1 - r2) / abs(r2)
        ok &= metrics["w1_log_ratio_variation"] <= 0.05
    return {
        "check": "lemma31",
        "params": {"n": spec.n, "alpha": spec.alpha, "beta": spec.beta},
        "pass": bool(ok),
        "metrics": metrics,
        "cells_excluded": 0,
    }


_CHECKS = ("thm12", "sharpness", "besov7", "besov8", "besov9", "cor33",
           "ode", "lemma31")


def _cmd_verify(args) -> int:
    cfg = _load_config(args)
    check = args.check
    if check == "thm12":
        rep = _check_thm12(cfg)
    elif check == "sharpness":
        rep = _check_sharpness(cfg)
    elif check in ("besov7", "besov8", "besov9"):
        rep = _check_besov(cfg, "eq" + check[-1])
    elif check == "cor33":
        rep = _check_cor33(cfg)
    elif check == "ode":
        rep = _check_ode(cfg, args.lam)
    elif check == "lemma31":
        rep = _check_lemma31(cfg)
    else:  # pragma: no cover - argparse restricts choices
        return 2
    out_path = Path(cfg.out_dir) / f"report_{check}.json"
    _emit_json(rep, out_path)
    return 0 if rep["pass"] else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracdisp",
                                 description="fractional-dispersive kernel laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run-configuration file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--tol", type=float, default=None,
                       help="override the primary tolerance of the command")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--beta", type=float, default=None)

    p = sub.add_parser("ml", help="evaluate the Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--z", required=True, help="complex argument as re,im")
    p.set_defaults(fn=_cmd_ml)

    p = sub.add_parser("bessel", help="evaluate J_nu(x)")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(fn=_cmd_bessel)

    p = sub.add_parser("kernel", help="kernel profile CSV over a radius range")
    common(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--band", type=int, default=None,
                   help="dyadic band index j (omit for the full kernel)")
    p.add_argument("--x-min", type=float, default=1e-3)
    p.add_argument("--x-max", type=float, default=1e2)
    p.add_argument("--x-points", type=int, default=65)
    p.add_argument("--x-scale", choices=("log", "linear"), default="log")
    p.add_argument("--out-file", default=None)
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("sweep", help="decay sweep over the (t, N) grid")
    common(p)
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--t-points", type=int, default=None)
    p.add_argument("--out-file", default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("fit", help="log-log exponent fit of sweep columns")
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default="t")
    p.add_argument("--y-col", default="sup_K")
    p.set_defaults(fn=_cmd_fit)

    p = sub.add_parser("besov", help="dyadic-block norm of a profile CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--j-min", type=int, default=-8)
    p.add_argument("--j-max", type=int, default=8)
    p.add_argument("--out-file", default=None)
    p.set_defaults(fn=_cmd_besov)

    p = sub.add_parser("verify", help="run one verification check")
    common(p)
    p.add_argument("--check", choices=_CHECKS, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="mode frequency for the ode check")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("plotdata", help="columnar log-log plot files from a sweep")
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default="t")
    p.add_argument("--y-col", default="sup_K")
    p.add_argument("--out", default=".")
    p.set_defaults(fn=_cmd_plotdata)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except FracdispError as exc:
        _emit_json({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 2
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"fracdisp: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
