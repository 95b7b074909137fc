"""Command-line interface: ``simulate``, ``estimate`` and ``rates``.

Exit status is 0 on success, 1 when a diagnostic verdict fails and 2 on
invalid input or I/O errors.
"""
import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import diagnostics, dgp, fileio, moments, pca
from .errors import ConfigurationError, NumericalError, ValidationError

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_ERROR = 2

log = logging.getLogger("npcfactors")


def _fail(message):
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _load_config(path, seed):
    run = fileio.read_config(path)
    if seed is not None:
        run.model = run.model.with_seed(seed)
    return run


def cmd_simulate(args):
    run = _load_config(args.config, args.seed)
    model = run.model
    panel = dgp.simulate_panel(model, args.n, args.t, replicate=args.replicate)
    limits = pca.limit_objects(model, panel.loadings, panel.factors)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    if not os.path.isdir(out_dir):
        raise OSError(f"output directory {out_dir} does not exist")
    fileio.write_panel_csv(args.out, panel.observations)
    fileio.write_truth(fileio.truth_path(args.out), model, args.replicate,
                       panel.factors, panel.loadings, limits)
    print(f"wrote {args.out} ({panel.T} x {panel.n}) and {fileio.truth_path(args.out)}")
    return EXIT_OK


def cmd_estimate(args):
    _, data = fileio.read_panel_csv(args.panel)
    T, n = data.shape
    if args.r < 1 or args.r > min(n, T):
        return _fail(f"r = {args.r} must lie in [1, min(n, T)] = [1, {min(n, T)}]")
    if args.demean:
        data = moments.demean(data)
    est = pca.estimate_from_panel(data, args.r)
    os.makedirs(args.out, exist_ok=True)
    r = args.r
    fac_header = ["t"] + [f"factor_{j + 1}" for j in range(r)]
    fileio.write_matrix_csv(os.path.join(args.out, "factors.csv"), fac_header, range(T),
                            est.factors)
    fileio.write_matrix_csv(os.path.join(args.out, "loadings.csv"),
                            ["series"] + [f"factor_{j + 1}" for j in range(r)],
                            [f"series_{i + 1}" for i in range(n)], est.loadings)
    fileio.write_matrix_csv(os.path.join(args.out, "eigenvalues.csv"), ["j", "eigenvalue"],
                            range(1, r + 1), est.eigen.values[:, None])
    resid = data - est.common
    recon = float(np.linalg.norm(resid) / max(np.linalg.norm(data), np.finfo(float).tiny))
    print(f"reconstruction relative error: {recon:.3e}")

    truth_file = fileio.truth_path(args.panel)
    if os.path.exists(truth_file):
        truth = fileio.read_truth(truth_file)
        f_inf = truth["f_infinity"]
        if f_inf.shape != est.factors.shape:
            return _fail(f"truth sidecar factors {f_inf.shape} do not match panel "
                         f"estimate {est.factors.shape}")
        aligned = pca.align_signs(est.factors, f_inf)
        rms = float(np.sqrt(np.mean(np.sum((aligned - f_inf) ** 2, axis=1))))
        scores = {
            "rms_factor_error": rms,
            "reconstruction_rel_error": recon,
            "demeaned": bool(args.demean),
        }
        try:
            h = pca.rotation_h(est.factors, truth["factors"])
            scores["h_n"] = h.tolist()
            scores["h_n_minus_p_lambda"] = float(np.linalg.norm(h - truth["p_lambda"], 2))
        except NumericalError as exc:
            scores["h_n"] = None
            scores["h_n_error"] = str(exc)
        with fileio.atomic_write(os.path.join(args.out, "scores.json")) as fh:
            json.dump(scores, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"rms |Fhat - F_inf| = {rms:.6g}")
    return EXIT_OK


def build_grid(suite, run):
    """Default grid for ``suite`` with overrides from the run config."""
    model = run.model
    grid = diagnostics.default_grid(suite, model)
    ns = run.get("n_values")
    reps = run.get("replications", grid.replications)
    if suite == "lemma2":
        return diagnostics.RateGrid(run.get("lemma2_n_values", grid.n_values),
                                    run.get("lemma2_t_values", grid.t_values), reps, model)
    t_values = grid.t_values
    if suite == "theorem1" and run.get("theorem1_t"):
        t_values = f"fixed({run.get('theorem1_t')})"
    if suite == "theorem3-fixedT" and run.get("theorem3_fixed_t"):
        t_values = f"fixed({run.get('theorem3_fixed_t')})"
    return diagnostics.RateGrid(ns or grid.n_values, t_values, reps, model)


def _suite_options(suite, run):
    if suite == "theorem3":
        opts = {}
        if run.get("theorem3_floor_t"):
            opts["floor_t"] = run.get("theorem3_floor_t")
        if run.get("theorem3_floor_n_values"):
            opts["floor_n_values"] = run.get("theorem3_floor_n_values")
        return opts
    if suite == "theorem2" and run.get("unit_indices"):
        return {"unit_indices": tuple(i - 1 for i in run.get("unit_indices"))}
    return {}


def cmd_rates(args):
    valid = diagnostics.SUITES + ("all",)
    if args.suite not in valid:
        return _fail(f"unknown suite {args.suite!r}; valid suites: {', '.join(valid)}")
    run = _load_config(args.config, args.seed)
    out = args.out or run.get("out") or "."
    os.makedirs(out, exist_ok=True)
    suites = diagnostics.SUITES if args.suite == "all" else (args.suite,)
    workers = run.get("workers", 1)
    prefixes = run.get("metrics")
    unknown = [p for p in prefixes or () if not diagnostics.is_known_metric(p)]
    if unknown:
        return _fail(f"unknown metrics {unknown}; known families: "
                     + ", ".join(f for fams in diagnostics.METRIC_REGISTRY.values()
                                 for f in fams))
    if prefixes:
        suites = tuple(s for s in suites if any(
            f.startswith(p) or p.startswith(f)
            for p in prefixes for f in diagnostics.METRIC_REGISTRY[s]))
        if not suites:
            return _fail(f"metrics {list(prefixes)} select nothing in suite {args.suite!r}")
    all_passed = True
    for suite in suites:
        grid = build_grid(suite, run)
        start = time.perf_counter()
        report = diagnostics.run_suite(suite, grid, workers=workers,
                                       **_suite_options(suite, run))
        elapsed = time.perf_counter() - start
        if prefixes:
            report.verdicts = {k: v for k, v in report.verdicts.items()
                               if any(k.startswith(p) for p in prefixes)}
        stem = suite.replace("-", "_")
        report.write_csv(os.path.join(out, f"{stem}_report.csv"))
        report.write_plot_data(os.path.join(out, f"{stem}_plot.dat"))
        for line in report.summary_lines():
            print(line)
        print(f"{suite}: {'PASS' if report.passed else 'FAIL'} in {elapsed:.1f}s")
        all_passed &= report.passed
    return EXIT_OK if all_passed else EXIT_VERDICT


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npcfactors",
        description="Normalized principal components for approximate factor models.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a panel and its truth sidecar")
    p.add_argument("--config", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out", required=True, help="panel CSV path")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--replicate", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate factors from a panel CSV")
    p.add_argument("--panel", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--demean", action="store_true", help="subtract series means first")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("rates", help="run Monte Carlo rate diagnostics")
    p.add_argument("--config", required=True)
    p.add_argument("--suite", required=True,
                   help=f"one of {', '.join(diagnostics.SUITES)}, all")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_rates)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, ConfigurationError, NumericalError) as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(f"{exc.__class__.__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
