"""Sweep H(s) over an s-grid per instance; aggregate ensembles and fit scaling laws.

Each instance is swept from s=0 to s=1 with the iterative eigensolver, warm
starting every grid point from the previous ground vector.  Per-point records
carry both lowest energies, the gap, the block entropy, and the Schmidt
rank.  Ensemble aggregation produces per-size means with 95% confidence
intervals, worst cases, the entropy-vs-size and gap-vs-1/size linear fits,
and the asymmetric fits of the entropy peak.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .eigensolver import DEFAULT_TOL, MAX_KRYLOV, MAX_RESTARTS, lowest_two_iterative
from .entanglement import Bipartition, bipartition_entropy, default_bipartition
from .hamiltonian import InterpolatedOperator, build_problem_diagonal, driver_degrees
from .instances import Instance, generate_instance

logger = logging.getLogger(__name__)

DEFAULT_GRID_STEP = 0.01
ENDPOINT_ENTROPY_TOL = 1e-9
FINAL_ENERGY_TOL = 1e-9
FINAL_GAP_MIN = 1.0 - 1e-9
GAP_NEGATIVE_TOL = -1e-10
# peak fits exclude this many grid steps around the divergent model point
PEAK_EXCLUSION_STEPS = 2
# and this margin at the outer ends of the sweep
PEAK_OUTER_MARGIN = 0.1


class SweepError(RuntimeError):
    """A sweep failed solver convergence or an endpoint invariant."""


@dataclass(frozen=True)
class SweepPoint:
    s: float
    e0: float
    e1: float
    gap: float
    entropy_bits: float
    schmidt_rank: int


@dataclass(frozen=True)
class InstanceResult:
    instance_id: int
    n: int
    points: tuple[SweepPoint, ...]
    s_peak: float
    entropy_max: float
    s_gapmin: float
    gap_min: float


@dataclass(frozen=True)
class EnsembleRun:
    """Per-instance results plus the failures that were excluded."""

    results: tuple[InstanceResult, ...]
    failures: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    rms_residual: float


@dataclass(frozen=True)
class PeakFit:
    """Asymmetric entropy-peak fits around the critical grid point s_c.

    Left flank (s < s_c): E = a + b * log|log(s_c - s)|, with the RMS of a
    plain straight line on the same points for comparison.  Right flank
    (s > s_c): log E = log_amplitude - alpha * log(s - s_c); its RMS is in
    log-entropy space.
    """

    s_c: float
    left_a: float
    left_b: float
    left_rms: float
    left_line_rms: float
    alpha: float
    log_amplitude: float
    right_rms: float
    n_left: int
    n_right: int


@dataclass(frozen=True)
class GroupStats:
    """Aggregates over one ensemble of equal-size instances."""

    n: int
    count: int
    entropy_max_mean: float
    entropy_max_ci95: float
    gap_min_mean: float
    gap_min_ci95: float
    s_peak_mean: float
    s_peak_ci95: float
    s_gapmin_mean: float
    s_gapmin_ci95: float
    worst_entropy_instance: int
    worst_entropy_max: float
    worst_gap_instance: int
    worst_gap_min: float
    gap_entropy_rank_corr: float
    grid_s: np.ndarray = field(repr=False)
    mean_entropy_curve: np.ndarray = field(repr=False)
    mean_gap_curve: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ScalingSummary:
    groups: tuple[GroupStats, ...]
    entropy_fit: LinearFit | None
    gap_fit: LinearFit | None
    peak_fit: PeakFit | None


def s_grid(step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """Grid 0, step, 2*step, ..., 1 (endpoint always included)."""
    if not 0.0 < step <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {step}")
    count = int(math.floor(1.0 / step + 1e-9))
    grid = np.round(step * np.arange(count + 1), 10)
    if grid[-1] < 1.0 - 1e-9:
        grid = np.append(grid, 1.0)
    grid[-1] = 1.0
    return grid


def sweep_instance(
    inst: Instance,
    grid_step: float = DEFAULT_GRID_STEP,
    part: Bipartition | None = None,
    tol: float = DEFAULT_TOL,
    instance_id: int = 0,
    max_krylov: int = MAX_KRYLOV,
    max_restarts: int = MAX_RESTARTS,
) -> InstanceResult:
    """Solve the two lowest pairs at every grid s, warm starting upward.

    Peak and minimum-gap locations are grid argmax/argmin with ties broken
    toward smaller s.  Endpoint invariants (product ground states at s=0 and
    s=1, zero final energy, final gap >= 1) are checked on every sweep.
    """
    if part is None:
        part = default_bipartition(inst.n)
    diag = build_problem_diagonal(inst)
    degrees = driver_degrees(inst)
    grid = s_grid(grid_step)

    points: list[SweepPoint] = []
    warm = None
    for idx, s in enumerate(grid):
        op = InterpolatedOperator(s=float(s), diag=diag, degrees=degrees)
        try:
            res = lowest_two_iterative(
                op,
                tol=tol,
                warm_start=warm,
                seed=(instance_id, idx),
                max_krylov=max_krylov,
                max_restarts=max_restarts,
            )
        except Exception as exc:
            raise SweepError(f"instance {instance_id}: solver failed at s={s}: {exc}") from exc
        record = bipartition_entropy(res.ground, part)
        gap = res.e1 - res.e0
        if gap < GAP_NEGATIVE_TOL:
            raise SweepError(f"instance {instance_id}: negative gap {gap} at s={s}")
        points.append(
            SweepPoint(
                s=float(s),
                e0=res.e0,
                e1=res.e1,
                gap=gap,
                entropy_bits=record.entropy_bits,
                schmidt_rank=record.schmidt_rank,
            )
        )
        warm = res.ground

    _check_endpoints(points, instance_id)
    entropies = np.array([p.entropy_bits for p in points])
    gaps = np.array([p.gap for p in points])
    i_peak = int(np.argmax(entropies))
    i_gap = int(np.argmin(gaps))
    return InstanceResult(
        instance_id=instance_id,
        n=inst.n,
        points=tuple(points),
        s_peak=points[i_peak].s,
        entropy_max=points[i_peak].entropy_bits,
        s_gapmin=points[i_gap].s,
        gap_min=points[i_gap].gap,
    )


def _check_endpoints(points: list[SweepPoint], instance_id: int) -> None:
    first, last = points[0], points[-1]
    for name, p in (("s=0", first), ("s=1", last)):
        if p.entropy_bits >= ENDPOINT_ENTROPY_TOL:
            raise SweepError(f"instance {instance_id}: entropy {p.entropy_bits} at {name} not ~0")
        if p.schmidt_rank != 1:
            raise SweepError(f"instance {instance_id}: Schmidt rank {p.schmidt_rank} at {name} != 1")
    if abs(last.e0) > FINAL_ENERGY_TOL:
        raise SweepError(f"instance {instance_id}: final ground energy {last.e0} not ~0")
    if last.gap < FINAL_GAP_MIN:
        raise SweepError(f"instance {instance_id}: final gap {last.gap} below 1")


def _sweep_worker(args) -> tuple[int, InstanceResult | None, str | None]:
    instance_id, n, child_seed, grid_step, block, tol = args
    try:
        inst = generate_instance(n, child_seed)
        part = Bipartition(block=block) if block is not None else None
        result = sweep_instance(inst, grid_step=grid_step, part=part, tol=tol, instance_id=instance_id)
        return instance_id, result, None
    except Exception as exc:  # failures are recorded, not raised
        return instance_id, None, f"{type(exc).__name__}: {exc}"


def run_ensemble(
    n: int,
    count: int,
    seed,
    grid_step: float = DEFAULT_GRID_STEP,
    part: Bipartition | None = None,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> EnsembleRun:
    """Generate and sweep ``count`` instances of size n, deterministically.

    Instance i gets an independent RNG stream spawned from the master seed,
    so results are identical whatever ``jobs`` is; instances failing to
    converge are excluded and reported in ``failures``.
    """
    if count < 1:
        raise ValueError(f"need at least one instance, got count={count}")
    children = np.random.SeedSequence(seed).spawn(count)
    block = part.block if part is not None else None
    tasks = [(i, n, children[i], grid_step, block, tol) for i in range(count)]

    outcomes: list[tuple[int, InstanceResult | None, str | None]] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for out in pool.map(_sweep_worker, tasks):
                outcomes.append(out)
                _log_outcome(n, out)
    else:
        for task in tasks:
            out = _sweep_worker(task)
            outcomes.append(out)
            _log_outcome(n, out)

    outcomes.sort(key=lambda item: item[0])
    results = tuple(item[1] for item in outcomes if item[1] is not None)
    failures = tuple((item[0], item[2]) for item in outcomes if item[2] is not None)
    if failures:
        logger.warning("ensemble n=%d: %d of %d instances excluded", n, len(failures), count)
    return EnsembleRun(results=results, failures=failures)


def _log_outcome(n: int, out: tuple[int, InstanceResult | None, str | None]) -> None:
    instance_id, result, error = out
    if error is None:
        logger.info(
            "instance %d (n=%d): peak %.4f bits at s=%.2f, min gap %.4f at s=%.2f",
            instance_id, n, result.entropy_max, result.s_peak, result.gap_min, result.s_gapmin,
        )
    else:
        logger.error("instance %d (n=%d) failed: %s", instance_id, n, error)


def _mean_ci(values: np.ndarray) -> tuple[float, float]:
    """Mean and 95% CI half-width (1.96 normal approximation, N-1 std)."""
    if values.size == 1:
        return float(values[0]), 0.0
    std = float(np.std(values, ddof=1))
    return float(np.mean(values)), 1.96 * std / math.sqrt(values.size)


def aggregate(results) -> ScalingSummary:
    """Per-size statistics plus the cross-size scaling fits.

    Results may span several sizes; they are grouped by n.  Sorting by
    instance id first makes the output exactly permutation-invariant.  The
    peak-shape fit runs on the mean entropy curve of the largest size with
    its grid argmax as s_c (None if the flanks are too short to fit).
    """
    results = sorted(results, key=lambda r: (r.n, r.instance_id))
    if not results:
        raise ValueError("cannot aggregate an empty result list")

    groups: list[GroupStats] = []
    for n in sorted({r.n for r in results}):
        group = [r for r in results if r.n == n]
        entropy_max = np.array([r.entropy_max for r in group])
        gap_min = np.array([r.gap_min for r in group])
        s_peak = np.array([r.s_peak for r in group])
        s_gapmin = np.array([r.s_gapmin for r in group])
        ids = np.array([r.instance_id for r in group])

        grid = np.array([p.s for p in group[0].points])
        curves = np.array([[p.entropy_bits for p in r.points] for r in group])
        gap_curves = np.array([[p.gap for p in r.points] for r in group])
        if any(len(r.points) != grid.size for r in group):
            raise ValueError(f"mixed sweep grids inside the n={n} group")

        e_mean, e_ci = _mean_ci(entropy_max)
        g_mean, g_ci = _mean_ci(gap_min)
        sp_mean, sp_ci = _mean_ci(s_peak)
        sg_mean, sg_ci = _mean_ci(s_gapmin)
        if len(group) >= 2 and np.ptp(gap_min) > 0 and np.ptp(entropy_max) > 0:
            corr = float(sps.spearmanr(gap_min, entropy_max).statistic)
        else:
            corr = float("nan")
        groups.append(
            GroupStats(
                n=n,
                count=len(group),
                entropy_max_mean=e_mean,
                entropy_max_ci95=e_ci,
                gap_min_mean=g_mean,
                gap_min_ci95=g_ci,
                s_peak_mean=sp_mean,
                s_peak_ci95=sp_ci,
                s_gapmin_mean=sg_mean,
                s_gapmin_ci95=sg_ci,
                worst_entropy_instance=int(ids[int(np.argmax(entropy_max))]),
                worst_entropy_max=float(np.max(entropy_max)),
                worst_gap_instance=int(ids[int(np.argmin(gap_min))]),
                worst_gap_min=float(np.min(gap_min)),
                gap_entropy_rank_corr=corr,
                grid_s=grid,
                mean_entropy_curve=curves.mean(axis=0),
                mean_gap_curve=gap_curves.mean(axis=0),
            )
        )

    entropy_fit = gap_fit = None
    if len(groups) >= 3:
        ns = np.array([g.n for g in groups], dtype=np.float64)
        entropy_fit = fit_linear(ns, np.array([g.entropy_max_mean for g in groups]))
        gap_fit = fit_linear(1.0 / ns, np.array([g.gap_min_mean for g in groups]))

    peak_fit = None
    top = groups[-1]
    if top.grid_s.size >= 3:
        s_c = float(top.grid_s[int(np.argmax(top.mean_entropy_curve))])
        step = float(top.grid_s[1] - top.grid_s[0])
        try:
            peak_fit = fit_peak_asymmetry(top.grid_s, top.mean_entropy_curve, s_c, step)
        except ValueError:
            peak_fit = None
    return ScalingSummary(groups=tuple(groups), entropy_fit=entropy_fit, gap_fit=gap_fit, peak_fit=peak_fit)


def fit_linear(xs, ys) -> LinearFit:
    """Ordinary least squares line with RMS residual."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size < 3:
        raise ValueError(f"need at least 3 points to fit, got {xs.size}")
    if np.ptp(xs) == 0.0:
        raise ValueError("degenerate fit: all x values equal")
    slope, intercept = np.polyfit(xs, ys, 1)
    rms = float(np.sqrt(np.mean((slope * xs + intercept - ys) ** 2)))
    return LinearFit(slope=float(slope), intercept=float(intercept), rms_residual=rms)


def fit_peak_asymmetry(s, entropy, s_c: float, grid_step: float) -> PeakFit:
    """Fit the two flanks of the entropy peak at grid point s_c.

    Points within PEAK_EXCLUSION_STEPS grid steps of s_c are dropped on both
    sides (the left model diverges there), as are the outer margins
    s < 0.1 and s > 0.9.  Left flank: linear least squares of entropy
    against log|log(s_c - s)|, plus a straight line in s on the same points
    for comparison.  Right flank: line in log-log space, with points of
    non-positive entropy dropped; the power-law exponent is minus its slope.
    """
    s = np.asarray(s, dtype=np.float64)
    entropy = np.asarray(entropy, dtype=np.float64)
    if not s[0] < s_c < s[-1]:
        raise ValueError(f"s_c={s_c} must lie strictly inside the grid")
    window = PEAK_EXCLUSION_STEPS * grid_step

    left = (s >= PEAK_OUTER_MARGIN - 1e-12) & (s <= s_c - window + 1e-12) & (s_c - s > 1e-12)
    if np.count_nonzero(left) < 5:
        raise ValueError(f"only {np.count_nonzero(left)} usable points left of the peak, need 5")
    t = np.log(np.abs(np.log(s_c - s[left])))
    left_b, left_a = np.polyfit(t, entropy[left], 1)
    left_rms = float(np.sqrt(np.mean((left_a + left_b * t - entropy[left]) ** 2)))
    line_q, line_p = np.polyfit(s[left], entropy[left], 1)
    left_line_rms = float(np.sqrt(np.mean((line_p + line_q * s[left] - entropy[left]) ** 2)))

    right = (s >= s_c + window - 1e-12) & (s <= 1.0 - PEAK_OUTER_MARGIN + 1e-12) & (entropy > 0.0)
    if np.count_nonzero(right) < 5:
        raise ValueError(f"only {np.count_nonzero(right)} usable points right of the peak, need 5")
    lx = np.log(s[right] - s_c)
    ly = np.log(entropy[right])
    slope, log_amp = np.polyfit(lx, ly, 1)
    right_rms = float(np.sqrt(np.mean((log_amp + slope * lx - ly) ** 2)))

    return PeakFit(
        s_c=float(s_c),
        left_a=float(left_a),
        left_b=float(left_b),
        left_rms=left_rms,
        left_line_rms=left_line_rms,
        alpha=float(-slope),
        log_amplitude=float(log_amp),
        right_rms=right_rms,
        n_left=int(np.count_nonzero(left)),
        n_right=int(np.count_nonzero(right)),
    )
