"""Command-line entry point: every operation as a subcommand, deterministic
outputs, exit 0 on success / 1 on computation failure / 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance
from .config import Config, load_config, parse_rect
from .errors import NuzetaError


def _point(text: str) -> complex:
    re, _, im = text.partition(",")
    return complex(float(re), float(im or 0.0))


def _range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(",")
    return float(lo), float(hi)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nuzeta",
        description="zeta * zeta'' - zeta'^2: evaluation, zeros, certificates, figures")
    ap.add_argument("--config", help="flat key=value config file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="nu, (zeta'/zeta)' and identity residual at a point")
    p.add_argument("--s", required=True, type=_point, metavar="RE,IM")

    p = sub.add_parser("coeff", help="Lambda, tau, a, b at one index")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--limit", type=int, default=None)

    p = sub.add_parser("sum-check", help="summatory A(x) against its cubic main term")
    p.add_argument("--xmax", required=True, type=float)
    p.add_argument("--report", required=True, help="CSV output path")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--no-figure", action="store_true")

    p = sub.add_parser("fe-check", help="reflection identity residuals")
    p.add_argument("--s", type=_point, metavar="RE,IM")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=55)

    p = sub.add_parser("zeros", help="localize zeros of nu in a rectangle")
    p.add_argument("--rect", required=True, type=parse_rect, metavar="A,B,C,D")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("count-check", help="census vs the counting main term")
    p.add_argument("--T", required=True, type=float)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default=None, help="optional JSON path")
    p.add_argument("--figure", default=None, help="optional PNG path")

    p = sub.add_parser("predict-trivial", help="first-kind zero predictions")
    p.add_argument("--trange", required=True, type=_range, metavar="LO,HI")

    p = sub.add_parser("certify", help="zero-free region certificate")
    p.add_argument("--x", type=float, default=40.0)
    p.add_argument("--sigma0", type=float, default=4.25)
    p.add_argument("--limit", type=int, default=10 ** 5)
    p.add_argument("--json", dest="json_path", default=None)

    p = sub.add_parser("stencil", help="9-point scheme diagnostics / grid files")
    p.add_argument("--h", type=float, default=0.01)
    p.add_argument("--selftest", action="store_true")
    p.add_argument("--grid", type=parse_rect, default=None, metavar="A,B,C,D")
    p.add_argument("--out", default=None, help="binary grid output path")

    p = sub.add_parser("plot", help="argument phase plot as binary PPM")
    p.add_argument("--rect", required=True, type=parse_rect, metavar="A,B,C,D")
    p.add_argument("--ppu", type=float, default=10.0)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", default=None, help="zeros JSON from the zeros command")
    p.add_argument("--png", default=None, help="optional matplotlib companion")

    p = sub.add_parser("resurgence", help="Re (zeta'/zeta)'(1+2it) curve")
    p.add_argument("--trange", type=_range, default=(0.5, 50.0), metavar="LO,HI")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--out", required=True)
    p.add_argument("--no-figure", action="store_true")

    p = sub.add_parser("verify-all", help="run the full acceptance table")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    return ap


def _json_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def cmd_eval(args, cfg: Config) -> int:
    from .nu import fe_residual, nu
    v = nu(args.s)
    out = {
        "s": _json_complex(args.s),
        "nu": _json_complex(v.nu),
        "log2nd": _json_complex(v.log2nd),
        "method": v.method,
        "region": v.region,
    }
    try:
        out["fe_residual"] = fe_residual(args.s)
    except NuzetaError:
        out["fe_residual"] = None
    print(json.dumps(out))
    return 0


def cmd_coeff(args, cfg: Config) -> int:
    from .coeffs import build_table
    limit = args.limit or max(2, args.n)
    if limit < args.n:
        raise NuzetaError(f"--limit {limit} below n = {args.n}")
    tb = build_table(limit)
    print(json.dumps({
        "n": args.n,
        "lambda": tb.lam[args.n],
        "tau": int(tb.tau[args.n]),
        "a": tb.a[args.n],
        "b": tb.b[args.n],
    }))
    return 0


def cmd_sum_check(args, cfg: Config) -> int:
    import csv as _csv
    import math

    import numpy as np

    from .coeffs import build_table, lemma_residual, p_eval, summatory
    xmax = args.xmax
    tb = build_table(int(math.ceil(xmax)))
    xs = np.geomspace(10.0, xmax, args.points)
    xs = np.minimum(np.floor(xs) + 0.5, xmax - 0.5)
    rows = []
    for x in xs:
        x = float(x)
        r, bound = lemma_residual(x, tb)
        rows.append((x, summatory(x, "A", tb), x * p_eval(math.log(x)), r, bound))
    report = Path(args.report)
    with open(report, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(["x", "A", "x_p_log_x", "residual", "bound"])
        for row in rows:
            w.writerow([f"{v:.12g}" for v in row])
    ok = all(abs(r) <= b for *_x, r, b in rows)
    if not args.no_figure:
        from .render import figure_sum_check
        fig = report.with_suffix(".png")
        figure_sum_check([r[0] for r in rows], [r[3] for r in rows],
                         [r[4] for r in rows], fig)
        print(f"wrote {report} and {fig}")
    else:
        print(f"wrote {report}")
    print(f"envelope holds at all {len(rows)} points: {ok}")
    return 0 if ok else 1


def cmd_fe_check(args, cfg: Config) -> int:
    import numpy as np

    from .nu import fe_residual, fe_residual_reflected_log2nd
    if args.s is None and args.samples <= 0:
        raise NuzetaError("need --s or --samples")
    pts = []
    if args.s is not None:
        pts.append(args.s)
    rng = np.random.default_rng(args.seed)
    for _ in range(args.samples):
        pts.append(complex(rng.uniform(-5, 5),
                           rng.uniform(5, 100) * rng.choice([-1.0, 1.0])))
    rows = [{"s": _json_complex(s),
             "eq5": fe_residual(s),
             "eq7": fe_residual_reflected_log2nd(s)} for s in pts]
    worst = max(max(r["eq5"], r["eq7"]) for r in rows)
    print(json.dumps({"points": rows, "worst": worst}))
    return 0


def _records_json(records) -> list[dict]:
    return [{
        "re": r.location.real, "im": r.location.imag, "kind": r.kind,
        "winding": r.winding, "newton_residual": r.newton_residual,
        "local_scale": r.local_scale, "predicted_from": r.predicted_from,
    } for r in records]


def cmd_zeros(args, cfg: Config) -> int:
    import csv as _csv

    from .zeros import localize
    jobs = args.jobs or cfg.workers
    recs = localize(args.rect, jobs=jobs)
    rows = _records_json(recs)
    if args.out is None:
        print(json.dumps(rows))
        return 0
    out = Path(args.out)
    if args.format == "json" or out.suffix == ".json":
        out.write_text(json.dumps(rows, indent=1))
    else:
        with open(out, "w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["re", "im", "kind", "winding", "newton_residual",
                        "local_scale", "predicted_from"])
            for r in rows:
                w.writerow([r["re"], r["im"], r["kind"], r["winding"],
                            r["newton_residual"], r["local_scale"],
                            r["predicted_from"]])
    print(f"wrote {len(rows)} records to {out}")
    return 0


def cmd_count_check(args, cfg: Config) -> int:
    from .zeros import census, census_compare
    jobs = args.jobs or cfg.workers
    recs = census(args.T, jobs=jobs)
    n_comp, n_form, resid = census_compare(args.T, records=recs)
    out = {"T": args.T, "N_computed": n_comp, "N_formula": n_form,
           "residual": resid}
    print(json.dumps(out))
    if args.out:
        Path(args.out).write_text(json.dumps(
            {**out, "records": _records_json(recs)}, indent=1))
    if args.figure:
        from .render import figure_count_check
        ts = sorted({args.T, args.T / 2, args.T / 4})
        rows = []
        for t in ts:
            nc, nf, _ = census_compare(t, records=recs)
            rows.append({"T": t, "n_computed": nc, "n_formula": nf})
        figure_count_check(rows, args.figure)
    return 0


def cmd_predict_trivial(args, cfg: Config) -> int:
    from .zeros import predict_first_kind
    lo, hi = args.trange
    preds = predict_first_kind(lo, hi)
    print(json.dumps([{"n": p.n, "t": p.t, "sigma": p.sigma,
                       "re": 1.0 - p.sigma, "im": p.t} for p in preds]))
    return 0


def cmd_certify(args, cfg: Config) -> int:
    from .certificate import verify_theorem2_constants, verify_theorem1
    from .coeffs import build_table
    tb = build_table(args.limit)
    rep = verify_theorem1(tb, x=args.x, sigma0=args.sigma0)
    rep2 = verify_theorem2_constants(tb)
    print(f"zero-free certificate at x = {rep.x}, sigma0 = {rep.sigma0}")
    print(f"  inequality 1 margin: {rep.ineq1_margin:.6e}")
    print(f"  inequality 2 margin: {rep.ineq2_margin:.6e}")
    for s, m in rep.lb_margins:
        print(f"  series bound margin over 0.5/40^(s/2) at sigma={s}: {m:.6e}")
    for row in rep.margins_by_sigma:
        print(f"  sigma={row['sigma']:<6} ineq1={row['ineq1']:.4e} "
              f"ineq2={row['ineq2']:.4e}")
    print(f"  eq13 slack {rep2.eq13:.4f} (> 0.0025); est1 max {rep2.est1_max:.6f}"
          f" (< {1/140:.6f}); est2 bound {rep2.est2_bound:.6f} (>= 0.0075)")
    print(f"  |zeta^2/nu| max {rep2.quotient_max_sampled:.2f} (< 135); "
          f"product {rep2.product:.3f} (< 1)")
    print(f"  certificate valid: {rep.valid and rep2.valid}")
    if args.json_path:
        blob = {
            "x": rep.x, "sigma0": rep.sigma0,
            "ineq1_margin": rep.ineq1_margin, "ineq2_margin": rep.ineq2_margin,
            "lb_margins": rep.lb_margins, "margins_by_sigma": rep.margins_by_sigma,
            "eq13": rep2.eq13, "est1_max": rep2.est1_max,
            "est2_bound": rep2.est2_bound,
            "quotient_max": rep2.quotient_max_sampled,
            "valid": rep.valid and rep2.valid,
        }
        Path(args.json_path).write_text(json.dumps(blob, indent=1))
    return 0 if (rep.valid and rep2.valid) else 1


def cmd_stencil(args, cfg: Config) -> int:
    from .stencil import grid_nu, self_test, write_grid
    h = args.h or cfg.grid_h
    if args.selftest:
        st = self_test(h)
        print(json.dumps(st, default=float))
    if args.grid is not None:
        if not args.out:
            raise NuzetaError("--grid needs --out")
        g = grid_nu(args.grid, h)
        write_grid(g, args.out)
        print(f"wrote {g.shape[0]}x{g.shape[1]} grid ({g.zeta_evals} zeta evals) "
              f"to {args.out}")
    return 0


def cmd_plot(args, cfg: Config) -> int:
    from .render import figure_phase_png, phase_plot, write_ppm
    overlay = []
    if args.overlay:
        data = json.loads(Path(args.overlay).read_text())
        overlay = [complex(d["re"], d["im"]) for d in data]
    img = phase_plot(args.rect, args.ppu, overlay=overlay)
    write_ppm(img, args.out)
    print(f"wrote {img.width}x{img.height} phase plot to {args.out}")
    if args.png:
        figure_phase_png(img, args.png)
        print(f"wrote companion {args.png}")
    return 0


def cmd_resurgence(args, cfg: Config) -> int:
    from .render import figure_resurgence, resurgence_curve, write_resurgence_csv
    lo, hi = args.trange
    curve = resurgence_curve(lo, hi, args.samples)
    out = Path(args.out)
    write_resurgence_csv(curve, out)
    msg = f"wrote {out}"
    if not args.no_figure:
        fig = out.with_suffix(".png")
        figure_resurgence(curve, fig)
        msg += f" and {fig}"
    print(msg)
    return 0


def cmd_verify_all(args, cfg: Config) -> int:
    jobs = args.jobs or cfg.workers
    out_dir = args.out_dir or cfg.output_dir
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    results = acceptance.run_all(jobs=jobs, out_dir=out_dir)
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} criteria pass")
    return 0 if n_pass == len(results) else 1


COMMANDS = {
    "eval": cmd_eval,
    "coeff": cmd_coeff,
    "sum-check": cmd_sum_check,
    "fe-check": cmd_fe_check,
    "zeros": cmd_zeros,
    "count-check": cmd_count_check,
    "predict-trivial": cmd_predict_trivial,
    "certify": cmd_certify,
    "stencil": cmd_stencil,
    "plot": cmd_plot,
    "resurgence": cmd_resurgence,
    "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config)
        if cfg.em_truncation_floor is not None:
            from .special import set_truncation_floor
            set_truncation_floor(cfg.em_truncation_floor)
        return COMMANDS[args.command](args, cfg)
    except (NuzetaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
