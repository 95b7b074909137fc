"""Monte Carlo rate harness.

Each suite simulates replicated panels over an (n, T) grid, records
mean-square errors of the quantities whose rates the theory predicts, fits
log-log slopes and renders pass/fail verdicts.

Replicate ``k`` uses its own loadings seed, ``derive_seed(config.seed, k)``.
With frozen loadings the population-level errors are deterministic functions
of a single loadings path, so averaging over shocks alone would leave the
slope at the mercy of one random walk; drawing loadings per replicate makes
the rms a genuine mean-square quantity. Within a replicate the panel is
simulated once at the largest (T, n) and sliced, which is exact because both
loadings and shocks are nested.
"""
import csv
import logging
import math
import re
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats

from . import dgp, fileio, pca, rng
from .errors import ConfigurationError, ValidationError

log = logging.getLogger(__name__)

HALF_RATE_WINDOW = (-0.65, -0.35)
MAX_SLOPE_STDERR = 0.08
BOUNDED_RATIO = 5.0
WEYL_RTOL = 1e-12

DEFAULT_N = (100, 200, 400, 800, 1600, 3200)
SUITES = ("lemma1", "theorem1", "theorem2", "theorem3", "theorem3-fixedT", "lemma2")

# metric families; concrete names append j/n/T/unit suffixes
METRIC_REGISTRY = {
    "lemma1": ("lemma1_evec_j", "lemma1_evec_scaled_j", "lemma1_eval_gap_j", "lemma1_weyl",
               "lemma1_eval_over_n"),
    "theorem1": ("theorem1_y", "theorem1_c", "theorem1_slope_agreement"),
    "theorem2": ("theorem2_unit", "theorem2_gram_gap"),
    "theorem3": ("theorem3_coupled", "theorem3_fixed_T"),
    "theorem3-fixedT": ("theorem3_space_T",),
    "lemma2": ("lemma2_evec_j", "lemma2_coef_j", "lemma2_eval_n"),
}


def is_known_metric(selector):
    """True when ``selector`` names (a prefix of) some registered metric family."""
    return any(fam.startswith(selector) or selector.startswith(fam)
               for fams in METRIC_REGISTRY.values() for fam in fams)

_FIXED = re.compile(r"^fixed\((\d+)\)$")


@dataclass(frozen=True)
class RateGrid:
    """Grid of cross-section sizes and time lengths.

    ``t_values`` is a tuple of ints (T varies, used by the Lemma 2 suite),
    ``"coupled"`` (T = n) or ``"fixed(T0)"``.
    """

    n_values: Sequence[int]
    t_values: Union[Sequence[int], str]
    replications: int
    config: dgp.ModelConfig

    def __post_init__(self):
        ns = tuple(int(n) for n in self.n_values)
        if not ns or any(n < 1 for n in ns) or list(ns) != sorted(set(ns)):
            raise ValidationError(f"n_values must be ascending positive integers, got {ns}")
        if ns[-1] > self.config.n_max:
            raise ConfigurationError(f"grid n = {ns[-1]} exceeds n_max = {self.config.n_max}")
        object.__setattr__(self, "n_values", ns)
        if isinstance(self.t_values, str):
            if self.t_values != "coupled" and not _FIXED.match(self.t_values):
                raise ValidationError(
                    f"t_values must be 'coupled', 'fixed(T0)' or integers, got {self.t_values!r}")
        else:
            ts = tuple(int(t) for t in self.t_values)
            if not ts or any(t < 1 for t in ts) or list(ts) != sorted(set(ts)):
                raise ValidationError(f"t_values must be ascending positive integers, got {ts}")
            object.__setattr__(self, "t_values", ts)
        if int(self.replications) != self.replications or self.replications < 1:
            raise ValidationError(f"replications must be positive, got {self.replications}")
        object.__setattr__(self, "replications", int(self.replications))
        if not self.has_leverage:
            log.warning("grid has fewer than 4 points or spans less than a decade; "
                        "slope fits will be weak")

    @property
    def mode(self):
        if self.t_values == "coupled":
            return "coupled"
        if isinstance(self.t_values, str):
            return "fixed"
        return "values"

    @property
    def fixed_t(self):
        m = _FIXED.match(self.t_values) if isinstance(self.t_values, str) else None
        return int(m.group(1)) if m else None

    @property
    def has_leverage(self):
        """At least 4 points spanning a decade along the axis the slopes use."""
        xs = self.t_values if self.mode == "values" else self.n_values
        return len(xs) >= 4 and xs[-1] >= 10 * xs[0]

    def t_for(self, n):
        if self.mode == "coupled":
            return n
        if self.mode == "fixed":
            return self.fixed_t
        raise ValidationError("grid has a list of T values; there is no single T per n")

    def replicate_config(self, k):
        return self.config.with_seed(rng.derive_seed(self.config.seed, k))


@dataclass(frozen=True)
class RateRow:
    metric: str
    n: int
    T: Optional[int]
    replications: int
    mse: float
    rms: float
    x: float


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    criterion: str
    statistic: float = math.nan
    slope: float = math.nan
    stderr: float = math.nan


@dataclass
class RateReport:
    suite: str
    rows: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.verdicts) and all(v.passed for v in self.verdicts.values())

    def metric_rows(self, metric):
        return [row for row in self.rows if row.metric == metric]

    def rms(self, metric, n=None, T=None):
        for row in self.metric_rows(metric):
            if (n is None or row.n == n) and (T is None or row.T == T):
                return row.rms
        raise KeyError((metric, n, T))

    def slope(self, metric):
        return self.verdicts[metric].slope

    def extend(self, other):
        self.rows.extend(other.rows)
        self.verdicts.update(other.verdicts)
        return self

    def summary_lines(self):
        lines = []
        for v in self.verdicts.values():
            status = "PASS" if v.passed else "FAIL"
            detail = f"slope={v.slope:+.3f} se={v.stderr:.3f}" if not math.isnan(v.slope) \
                else f"stat={v.statistic:.4g}"
            lines.append(f"[{status}] {self.suite}:{v.name} {detail} ({v.criterion})")
        return lines

    def write_csv(self, path):
        header = ["metric", "n", "T", "replications", "rms", "mse", "slope", "stderr", "verdict"]
        with fileio.atomic_write(path, newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            seen = set()
            for row in self.rows:
                v = self.verdicts.get(row.metric)
                seen.add(row.metric)
                writer.writerow([
                    row.metric, row.n, "" if row.T is None else row.T, row.replications,
                    repr(row.rms), repr(row.mse),
                    "" if v is None or math.isnan(v.slope) else repr(v.slope),
                    "" if v is None or math.isnan(v.stderr) else repr(v.stderr),
                    "" if v is None else ("pass" if v.passed else "fail"),
                ])
            for v in self.verdicts.values():
                if v.name in seen:
                    continue
                writer.writerow([v.name, "", "", "", repr(v.statistic), "", "", "",
                                 "pass" if v.passed else "fail"])

    def write_plot_data(self, path):
        """Per-metric blocks of whitespace-separated ``x rms`` pairs."""
        by_metric = defaultdict(list)
        for row in self.rows:
            by_metric[row.metric].append(row)
        with fileio.atomic_write(path) as fh:
            for metric, rows in by_metric.items():
                axis = "T" if metric.startswith("lemma2_") else "n"
                fh.write(f"# metric {metric} x={axis}\n")
                for row in sorted(rows, key=lambda r: r.x):
                    fh.write(f"{row.x!r} {row.rms!r}\n")
                fh.write("\n\n")


def fit_loglog_slope(points):
    """OLS slope of log y on log x, with its standard error."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValidationError(f"need at least 3 points for a slope fit, got {len(pts)}")
    xs, ys = np.array(pts).T
    if np.any(xs <= 0) or np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        raise ValidationError("log-log fit needs strictly positive finite values")
    lx, ly = np.log(xs), np.log(ys)
    if np.ptp(lx) == 0:
        raise ValidationError("x values are all equal")
    fit = stats.linregress(lx, ly)
    stderr = float(fit.stderr) if len(pts) > 2 else 0.0
    return float(fit.slope), stderr


# -- aggregation helpers -----------------------------------------------------

def _run_replicates(func, grid, workers):
    ks = range(grid.replications)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, ks))
    return [func(k) for k in ks]


def _aggregate(per_replicate, replications):
    """Average squared errors over replicates. Keys are (metric, n, T, x)."""
    sums = defaultdict(float)
    for record in per_replicate:
        for key, sq in record.items():
            sums[key] += sq
    rows = []
    for (metric, n, T, x), total in sums.items():
        mse = total / replications
        rows.append(RateRow(metric=metric, n=n, T=T, replications=replications,
                            mse=mse, rms=math.sqrt(mse), x=x))
    rows.sort(key=lambda r: (r.metric, r.x))
    return rows


def _slope_verdict(report, metric, window=HALF_RATE_WINDOW, max_stderr=MAX_SLOPE_STDERR):
    rows = report.metric_rows(metric)
    lo, hi = window
    criterion = f"slope in [{lo}, {hi}], stderr < {max_stderr}"
    try:
        slope, stderr = fit_loglog_slope([(r.x, r.rms) for r in rows])
    except ValidationError as exc:
        report.verdicts[metric] = Verdict(metric, False, f"{criterion}; {exc}")
        return
    passed = lo <= slope <= hi and stderr < max_stderr
    report.verdicts[metric] = Verdict(metric, passed, criterion, slope=slope, stderr=stderr)


def _info_slope(report, metric):
    rows = report.metric_rows(metric)
    try:
        slope, stderr = fit_loglog_slope([(r.x, r.rms) for r in rows])
    except ValidationError:
        slope = stderr = math.nan
    report.verdicts[metric] = Verdict(metric, True, "reported only", slope=slope, stderr=stderr)


def _monotone_verdict(report, metric):
    rows = sorted(report.metric_rows(metric), key=lambda r: r.x)
    name = f"{metric}_shrinks"
    if len(rows) < 2:
        report.verdicts[name] = Verdict(name, False, "needs two grid points")
        return
    ratio = rows[-1].rms / rows[0].rms if rows[0].rms > 0 else math.inf
    report.verdicts[name] = Verdict(name, ratio < 1.0, "rms(last) < rms(first)",
                                    statistic=ratio)


def _ratio_verdict(report, metric, num, den, lo, hi, key="n"):
    name = f"{metric}_ratio_{num}_{den}"
    try:
        a = report.rms(metric, **{key: num})
        b = report.rms(metric, **{key: den})
    except KeyError:
        return
    ratio = a / b if b > 0 else math.inf
    report.verdicts[name] = Verdict(name, lo <= ratio <= hi,
                                    f"rms({key}={num})/rms({key}={den}) in [{lo}, {hi}]",
                                    statistic=ratio)


def _sq_dist(a, b):
    """Mean over rows of the squared Euclidean distance."""
    return float(np.mean(np.sum((a - b) ** 2, axis=1)))


def _aligned_vec_dist(a, b):
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


# -- suites ------------------------------------------------------------------

def lemma1_eigenstructure_check(grid, workers=1):
    """Population eigenvectors/eigenvalues of Gamma_y versus Gamma_C."""
    r = grid.config.r
    n_top = grid.n_values[-1]
    weyl_failures = []

    def replicate(k):
        cfg = grid.replicate_config(k)
        loadings = dgp.draw_loadings(cfg, n_top)
        d_lambda = np.sort(np.diag(cfg.gamma_lambda))[::-1]
        out = {}
        for n in grid.n_values:
            lam = loadings[:n]
            ey = pca.population_eigen(lam, cfg, r, "y")
            ec = pca.population_eigen(lam, cfg, r, "c")
            mu1e = dgp.idio_top_eigenvalue(cfg, n)
            for j in range(r):
                d = _aligned_vec_dist(ey.vectors[j], ec.vectors[j])
                out[(f"lemma1_evec_j{j + 1}", n, None, n)] = d * d
                out[(f"lemma1_evec_scaled_j{j + 1}", n, None, n)] = n * d * d
                gap = ey.values[j] - ec.values[j]
                out[(f"lemma1_eval_gap_j{j + 1}", n, None, n)] = gap * gap
                tol = WEYL_RTOL * ey.values[0]
                if not (-tol <= gap <= mu1e + tol):
                    weyl_failures.append((k, n, j + 1, gap, mu1e))
            dev = np.linalg.norm(ey.values / n - d_lambda)
            out[("lemma1_eval_over_n", n, None, n)] = dev * dev
        return out

    report = RateReport("lemma1", _aggregate(_run_replicates(replicate, grid, workers),
                                             grid.replications))
    for j in range(1, r + 1):
        _info_slope(report, f"lemma1_evec_j{j}")
        _info_slope(report, f"lemma1_eval_gap_j{j}")
        scaled = [row.rms for row in report.metric_rows(f"lemma1_evec_scaled_j{j}")]
        ratio = max(scaled) / min(scaled) if min(scaled) > 0 else math.inf
        name = f"lemma1_evec_scaled_j{j}_bounded"
        report.verdicts[name] = Verdict(
            name, ratio <= BOUNDED_RATIO,
            f"max/min over grid of sqrt(n)*|p_j(Gy)-p_j(GC)| <= {BOUNDED_RATIO}",
            statistic=ratio)
    worst = max((g - m for _, _, _, g, m in weyl_failures), default=0.0)
    report.verdicts["lemma1_weyl"] = Verdict(
        "lemma1_weyl", not weyl_failures,
        "0 <= mu_j(Gy) - mu_j(GC) <= mu_1(Ge) at every grid point",
        statistic=float(len(weyl_failures) and worst))
    _info_slope(report, "lemma1_eval_over_n")
    _monotone_verdict(report, "lemma1_eval_over_n")
    return report


def theorem1_factor_limit_rate(grid, workers=1):
    """Population NPCs of y_t and C_t against the limit factors F_inf."""
    r = grid.config.r
    n_top = grid.n_values[-1]
    T = grid.t_for(n_top)

    def replicate(k):
        cfg = grid.replicate_config(k)
        panel = dgp.simulate_panel(cfg, n_top, T, replicate=k)
        out = {}
        for n in grid.n_values:
            lam = panel.loadings[:n]
            lim = pca.limit_objects(cfg, lam, panel.factors)
            fy = pca.estimate_population(lam, cfg, panel.observations[:, :n], r, "y").factors
            fc = pca.estimate_population(lam, cfg, panel.common[:, :n], r, "c").factors
            target = lim.f_infinity
            out[("theorem1_y", n, T, n)] = _sq_dist(pca.align_signs(fy, target), target)
            out[("theorem1_c", n, T, n)] = _sq_dist(pca.align_signs(fc, target), target)
        return out

    report = RateReport("theorem1", _aggregate(_run_replicates(replicate, grid, workers),
                                               grid.replications))
    for metric in ("theorem1_y", "theorem1_c"):
        _slope_verdict(report, metric)
        _monotone_verdict(report, metric)
        _ratio_verdict(report, metric, 1600, 400, 0.35, 0.7)
    sy, sc = report.slope("theorem1_y"), report.slope("theorem1_c")
    diff = abs(sy - sc)
    report.verdicts["theorem1_slope_agreement"] = Verdict(
        "theorem1_slope_agreement", bool(diff <= 0.1), "|slope_y - slope_c| <= 0.1",
        statistic=diff)
    return report


def theorem2_loadings_rate(grid, unit_indices=(0,), workers=1):
    """PC loadings of Gamma_y against the limit loadings (0-based unit indices)."""
    r = grid.config.r
    n_top = grid.n_values[-1]
    units = tuple(int(i) for i in unit_indices)
    if any(i < 0 or i >= grid.n_values[0] for i in units):
        raise ValidationError(f"unit indices {units} must lie below the smallest grid n")
    gram_paths = []

    def replicate(k):
        cfg = grid.replicate_config(k)
        loadings = dgp.draw_loadings(cfg, n_top)
        dummy = np.zeros((1, r))
        out = {}
        path = []
        for n in grid.n_values:
            lam = loadings[:n]
            lim = pca.limit_objects(cfg, lam, dummy)
            # columns are identified up to sign; align on the whole cross-section
            est = pca.align_signs(pca.pc_loadings(pca.population_eigen(lam, cfg, r, "y")),
                                  lim.lambda_infinity)
            for i in units:
                d = np.linalg.norm(est[i] - lim.lambda_infinity[i])
                out[(f"theorem2_unit{i + 1}", n, None, n)] = d * d
            li = lim.lambda_infinity
            gap = np.linalg.norm(li.T @ li / n - np.diag(lim.d_lambda), 2)
            out[("theorem2_gram_gap", n, None, n)] = gap * gap
            path.append(gap)
        gram_paths.append(path)
        return out

    report = RateReport("theorem2", _aggregate(_run_replicates(replicate, grid, workers),
                                               grid.replications))
    for i in units:
        _slope_verdict(report, f"theorem2_unit{i + 1}")
    _slope_verdict(report, "theorem2_gram_gap")
    endpoint = np.mean([p[-1] < p[0] for p in gram_paths])
    report.verdicts["theorem2_gram_gap_decreasing"] = Verdict(
        "theorem2_gram_gap_decreasing", bool(endpoint > 0.5),
        "gap(n_max) < gap(n_min) for a majority of loadings seeds", statistic=float(endpoint))
    return report


def theorem3_factor_consistency(grid, floor_t=100, floor_n_values=(400, 800, 1600, 3200),
                                workers=1):
    """Sample NPCs against F_inf: coupled T = n grid plus a fixed-T floor run."""
    if grid.mode != "coupled":
        raise ValidationError("theorem3_factor_consistency needs a coupled (T = n) grid")
    r = grid.config.r
    n_top = grid.n_values[-1]
    floor_ns = tuple(n for n in floor_n_values if n <= n_top)

    def replicate(k):
        cfg = grid.replicate_config(k)
        panel = dgp.simulate_panel(cfg, n_top, n_top, replicate=k)
        out = {}
        for n in grid.n_values:
            y = panel.observations[:n, :n]
            lim = pca.limit_objects(cfg, panel.loadings[:n], panel.factors[:n])
            fhat = pca.estimate_from_panel(y, r).factors
            out[("theorem3_coupled", n, n, n)] = _sq_dist(
                pca.align_signs(fhat, lim.f_infinity), lim.f_infinity)
        if floor_ns:
            fp = dgp.simulate_panel(cfg, floor_ns[-1], floor_t, replicate=k)
            for n in floor_ns:
                lim = pca.limit_objects(cfg, fp.loadings[:n], fp.factors)
                fhat = pca.estimate_from_panel(fp.observations[:, :n], r).factors
                out[(f"theorem3_fixed_T{floor_t}", n, floor_t, n)] = _sq_dist(
                    pca.align_signs(fhat, lim.f_infinity), lim.f_infinity)
        return out

    report = RateReport("theorem3", _aggregate(_run_replicates(replicate, grid, workers),
                                               grid.replications))
    _slope_verdict(report, "theorem3_coupled")
    _monotone_verdict(report, "theorem3_coupled")
    _ratio_verdict(report, "theorem3_coupled", 1600, 400, 0.35, 0.7)
    if floor_ns:
        metric = f"theorem3_fixed_T{floor_t}"
        _info_slope(report, metric)
        rows = sorted(report.metric_rows(metric), key=lambda r: r.n)
        ratio = rows[-1].rms / rows[0].rms
        name = f"{metric}_plateau"
        report.verdicts[name] = Verdict(
            name, ratio >= 0.5, f"rms(n={rows[-1].n})/rms(n={rows[0].n}) >= 0.5",
            statistic=ratio)
    return report


def theorem3_factor_space_fixed_t(grid, workers=1):
    """Sample NPCs against the rotated true factors ``H_n F_t`` with T fixed."""
    if grid.mode != "fixed":
        raise ValidationError("theorem3_factor_space_fixed_t needs a fixed(T0) grid")
    r = grid.config.r
    T0 = grid.fixed_t
    if T0 < r:
        raise ValidationError(f"T0 = {T0} is below r = {r}; the factor gram is singular")
    n_top = grid.n_values[-1]

    def replicate(k):
        cfg = grid.replicate_config(k)
        panel = dgp.simulate_panel(cfg, n_top, T0, replicate=k)
        out = {}
        for n in grid.n_values:
            fhat = pca.estimate_from_panel(panel.observations[:, :n], r).factors
            h = pca.rotation_h(fhat, panel.factors)
            out[(f"theorem3_space_T{T0}", n, T0, n)] = _sq_dist(fhat, panel.factors @ h.T)
        return out

    report = RateReport("theorem3-fixedT",
                        _aggregate(_run_replicates(replicate, grid, workers),
                                   grid.replications))
    _slope_verdict(report, f"theorem3_space_T{T0}")
    return report


def lemma2_sample_rates(grid, workers=1):
    """Sample versus population eigenvectors, eigenvalues and NPC coefficient rows."""
    if grid.mode != "values":
        raise ValidationError("lemma2_sample_rates needs an explicit list of T values")
    r = grid.config.r
    n_top, t_top = grid.n_values[-1], grid.t_values[-1]

    def replicate(k):
        cfg = grid.replicate_config(k)
        panel = dgp.simulate_panel(cfg, n_top, t_top, replicate=k)
        out = {}
        for n in grid.n_values:
            lam = panel.loadings[:n]
            pop = pca.population_eigen(lam, cfg, r, "y")
            kpop = pca.npc_coefficients(pop)
            for T in grid.t_values:
                smp = pca.sample_eigen(panel.observations[:T, :n], r)
                ksmp = pca.npc_coefficients(smp)
                for j in range(r):
                    d = _aligned_vec_dist(smp.vectors[j], pop.vectors[j])
                    out[(f"lemma2_evec_j{j + 1}_n{n}", n, T, T)] = d * d
                    dk = _aligned_vec_dist(ksmp[j], kpop[j])
                    out[(f"lemma2_coef_j{j + 1}_n{n}", n, T, T)] = n * dk * dk
                dev = np.linalg.norm((smp.values - pop.values) / n)
                out[(f"lemma2_eval_n{n}", n, T, T)] = dev * dev
        return out

    report = RateReport("lemma2", _aggregate(_run_replicates(replicate, grid, workers),
                                             grid.replications))
    for n in grid.n_values:
        for j in range(1, r + 1):
            _slope_verdict(report, f"lemma2_evec_j{j}_n{n}")
            _slope_verdict(report, f"lemma2_coef_j{j}_n{n}")
        _slope_verdict(report, f"lemma2_eval_n{n}")
    if len(grid.n_values) >= 2:
        n_lo, n_hi = grid.n_values[0], grid.n_values[-1]
        for j in range(1, r + 1):
            ratios = [report.rms(f"lemma2_coef_j{j}_n{n_hi}", T=T)
                      / report.rms(f"lemma2_coef_j{j}_n{n_lo}", T=T) for T in grid.t_values]
            worst = max(max(ratios), 1.0 / min(ratios))
            name = f"lemma2_coef_j{j}_level"
            report.verdicts[name] = Verdict(
                name, worst <= 2.0,
                f"sqrt(n)-scaled coefficient error at n={n_hi} within factor 2 of n={n_lo}",
                statistic=worst)
    return report


# -- default grids and dispatch ----------------------------------------------

def default_grid(suite, config):
    """Grids used by the acceptance runs and the ``rates`` command."""
    ns = tuple(n for n in DEFAULT_N if n <= config.n_max)
    if suite in ("lemma1", "theorem2"):
        return RateGrid(ns, "fixed(1)", 32, config)
    if suite == "theorem1":
        return RateGrid(ns, "fixed(500)", 32, config)
    if suite == "theorem3":
        return RateGrid(ns, "coupled", 32, config)
    if suite == "theorem3-fixedT":
        return RateGrid(ns, "fixed(20)", 64, config)
    if suite == "lemma2":
        return RateGrid(tuple(n for n in (200, 800) if n <= config.n_max),
                        (100, 200, 400, 800, 1600, 3200), 32, config)
    raise ValidationError(f"unknown suite {suite!r}; valid suites: {', '.join(SUITES)}, all")


def run_suite(suite, grid, workers=1, **options):
    """Dispatch by suite name; ``options`` go to the suite function."""
    funcs = {
        "lemma1": lemma1_eigenstructure_check,
        "theorem1": theorem1_factor_limit_rate,
        "theorem2": theorem2_loadings_rate,
        "theorem3": theorem3_factor_consistency,
        "theorem3-fixedT": theorem3_factor_space_fixed_t,
        "lemma2": lemma2_sample_rates,
    }
    if suite not in funcs:
        raise ValidationError(f"unknown suite {suite!r}; valid suites: {', '.join(SUITES)}, all")
    return funcs[suite](grid, workers=workers, **options)
