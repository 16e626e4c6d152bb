"""Critical-disturbance search and parameter sweeps.

The mean-field verdict is survive below some disturbance mean and complete
outage above it. ``find_d_critical`` brackets that boundary by geometric
scan and closes in by bisection; a coarse linear scan is available to
cross-check the assumed monotonicity. Undetermined verdicts (max_iter
exhausted near the boundary) are conservatively counted as failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bimodal import run_bimodal
from .cascade import BimodalLoads, DeltaLoads
from .meanfield import Verdict, run_recursion

MeanFieldModel = DeltaLoads | BimodalLoads


class NonMonotoneError(RuntimeError):
    """A scan saw failure below survival, breaking the bisection premise."""


@dataclass(frozen=True)
class ThresholdResult:
    d_critical: float
    d_low: float   # survives
    d_high: float  # fails (or Undetermined, counted as failure)
    resolution: float
    method: str    # "scan" or "bisection"
    undetermined_in_bracket: bool = False


def model_verdict(
    model: MeanFieldModel, d_m: float, max_iter: int = 10_000, tol: float = 1e-12
) -> Verdict:
    """Mean-field verdict for one disturbance level."""
    if isinstance(model, DeltaLoads):
        verdict, _ = run_recursion(model.a0, d_m, max_iter=max_iter, tol=tol)
    else:
        verdict, _ = run_bimodal(model.a0, model.b0, model.pa, d_m,
                                 max_iter=max_iter, tol=tol)
    return verdict


def _fails(v: Verdict) -> bool:
    # Undetermined counts as failure: conservative resilience estimate
    return v is not Verdict.SURVIVES


def find_d_critical(
    model: MeanFieldModel,
    tol_d: float = 1e-4,
    d_max: float = 1.0,
    max_iter: int = 10_000,
    tol: float = 1e-12,
) -> ThresholdResult:
    """Bisect the survive/fail boundary in the disturbance mean.

    The final bracket endpoints are re-verified: survives at d_low, fails
    at d_high.
    """
    if tol_d <= 0:
        raise ValueError(f"tol_d must be > 0, got {tol_d}")

    def fails(d: float) -> bool:
        return _fails(model_verdict(model, d, max_iter=max_iter, tol=tol))

    # geometric scan for a surviving lower endpoint
    lo = 1e-3
    while fails(lo):
        lo /= 4.0
        if lo < 1e-15:
            # no headroom at any resolvable disturbance
            return ThresholdResult(0.0, 0.0, 1e-15, tol_d, "bisection")
    # geometric scan for a failing upper endpoint
    hi = lo
    while not fails(hi):
        hi *= 2.0
        if hi > d_max:
            raise NonMonotoneError(
                f"no failing disturbance found below d_max={d_max}"
            )
    lo = hi / 2.0
    saw_undetermined = False
    while hi - lo > tol_d:
        mid = 0.5 * (lo + hi)
        v = model_verdict(model, mid, max_iter=max_iter, tol=tol)
        if v is Verdict.UNDETERMINED:
            saw_undetermined = True
        if _fails(v):
            hi = mid
        else:
            lo = mid
    if fails(lo) or not fails(hi):
        raise NonMonotoneError(
            f"bracket endpoints failed re-verification: lo={lo}, hi={hi}"
        )
    return ThresholdResult(
        d_critical=0.5 * (lo + hi),
        d_low=lo,
        d_high=hi,
        resolution=tol_d,
        method="bisection",
        undetermined_in_bracket=saw_undetermined,
    )


def coarse_scan(
    model: MeanFieldModel,
    d_values: list[float],
    max_iter: int = 10_000,
    tol: float = 1e-12,
) -> list[tuple[float, Verdict]]:
    """Linear verdict scan; raises NonMonotoneError on more than one flip."""
    out = [(d, model_verdict(model, d, max_iter=max_iter, tol=tol)) for d in d_values]
    flips = sum(
        1 for (_, v1), (_, v2) in zip(out, out[1:]) if _fails(v1) != _fails(v2)
    )
    if flips > 1:
        raise NonMonotoneError(f"verdict flipped {flips} times across the scan")
    return out


@dataclass(frozen=True)
class UnimodalSweepRow:
    a0: float
    d_critical: float
    headroom: float  # excess capacity 1 - a0


def sweep_dcrit_vs_a0(a0_grid: list[float], tol_d: float = 1e-4) -> list[UnimodalSweepRow]:
    """Critical disturbance for each constant-load level."""
    rows = []
    for a0 in a0_grid:
        res = find_d_critical(DeltaLoads(a0), tol_d=tol_d)
        rows.append(UnimodalSweepRow(a0=a0, d_critical=res.d_critical, headroom=1.0 - a0))
    return rows


@dataclass(frozen=True)
class FixedMeanSweepRow:
    a0: float
    b0: float
    pa: float
    d_critical: float
    feasible: bool


def sweep_bimodal_fixed_mean(
    mean: float,
    a0_grid: list[float],
    b0_grid: list[float],
    tol_d: float = 1e-4,
) -> list[FixedMeanSweepRow]:
    """Critical disturbance over two-mode splits with a fixed mean load.

    For each (a0, b0) the weight pa = (b0 - mean) / (b0 - a0) is forced by
    the mean constraint; pairs needing pa outside (0, 1) are kept as
    infeasible marker rows (a weight of exactly 0 or 1 leaves a single
    mode and just duplicates the equal-load cell). The a0 = b0 = mean
    cell itself uses the single-mode model.
    """
    rows = []
    for a0 in a0_grid:
        for b0 in b0_grid:
            if a0 == b0:
                if a0 == mean:
                    res = find_d_critical(DeltaLoads(a0), tol_d=tol_d)
                    rows.append(FixedMeanSweepRow(a0, b0, 1.0, res.d_critical, True))
                else:
                    rows.append(FixedMeanSweepRow(a0, b0, math.nan, math.nan, False))
                continue
            pa = (b0 - mean) / (b0 - a0)
            if not 0.0 < pa < 1.0:
                rows.append(FixedMeanSweepRow(a0, b0, math.nan, math.nan, False))
                continue
            res = find_d_critical(BimodalLoads(a0, b0, pa), tol_d=tol_d)
            rows.append(FixedMeanSweepRow(a0, b0, pa, res.d_critical, True))
    return rows
