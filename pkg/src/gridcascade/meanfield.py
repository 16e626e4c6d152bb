"""Scalar recursion for the infinite fully connected network, constant loads.

With every node starting at load a0 and one Exponential(d_m) shock, the
surviving-load distribution stays a truncated shifted exponential at every
stage, so the whole system is captured by four scalars per stage:

    a_n   effective load floor (initial load plus all inherited shares)
    p_n   probability an alive node fails this stage
    D_n   redistributed load added to every survivor
    mu    mean load of the nodes that just failed

The cascade dies out when p_n -> 0 (floor stays below capacity) and ends
in a complete outage when the floor is pushed to capacity 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class Verdict(str, enum.Enum):
    RUNNING = "running"
    SURVIVES = "survives"
    COMPLETE_OUTAGE = "complete_outage"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class MeanFieldState:
    """One stage of the scalar recursion."""

    n: int
    a_n: float
    p_n: float
    D_n: float
    mu_prev: float
    d_m: float
    verdict: Verdict = Verdict.RUNNING


def failure_probability(a0: float, d_m: float) -> float:
    """P(a0 + Exponential(d_m) >= 1) = exp(-(1-a0)/d_m)."""
    return math.exp(-(1.0 - a0) / d_m)


def mean_failed_load(D: float, d_m: float) -> float:
    """Mean load of nodes pushed past capacity by a shift D: always in
    (1, 1+d_m]; the D -> 0 limit is 1 + d_m - d_m = 1."""
    if D <= 0:
        return 1.0
    denom = math.expm1(D / d_m)
    if denom == 0.0 or math.isinf(denom):
        return 1.0 if denom == 0.0 else 1.0 + d_m
    return 1.0 + d_m - D / denom


def _next_p(a: float, D: float, d_m: float) -> float:
    # may overflow for blackout-scale D; caller maps that to an outage
    q = failure_probability(a, d_m)
    return q / (1.0 - q) * math.expm1(D / d_m)


def init_recursion(a0: float, d_m: float) -> MeanFieldState:
    """Stage-1 state: p0, the first redistributed load D1, and p1."""
    if not 0.0 < a0 < 1.0:
        raise ValueError(f"a0 must be in (0, 1), got {a0}")
    if d_m <= 0:
        raise ValueError(f"disturbance mean must be > 0, got {d_m}")
    p0 = failure_probability(a0, d_m)
    if p0 >= 1.0:
        return MeanFieldState(1, a0, 1.0, 0.0, 1.0 + d_m, d_m, Verdict.COMPLETE_OUTAGE)
    D1 = p0 / (1.0 - p0) * (1.0 + d_m)
    try:
        p1 = _next_p(a0, D1, d_m)
    except OverflowError:
        return MeanFieldState(1, a0, 1.0, D1, 1.0 + d_m, d_m, Verdict.COMPLETE_OUTAGE)
    state = MeanFieldState(1, a0, p1, D1, 1.0 + d_m, d_m)
    if p1 >= 1.0:
        state = replace(state, verdict=Verdict.COMPLETE_OUTAGE)
    return state


def recursion_step(state: MeanFieldState) -> MeanFieldState:
    """Advance one stage; classifies blackout when the surviving mass is
    pushed past capacity or the failure probability saturates."""
    if state.verdict is not Verdict.RUNNING:
        raise ValueError(f"cannot step a recursion with verdict {state.verdict}")
    a, p, D, d_m = state.a_n, state.p_n, state.D_n, state.d_m
    if D > (1.0 - a) and a < 1.0:
        return replace(state, verdict=Verdict.COMPLETE_OUTAGE)
    a_next = a + D
    mu = mean_failed_load(D, d_m)
    D_next = p / (1.0 - p) * mu
    try:
        p_next = _next_p(a_next, D_next, d_m)
    except OverflowError:
        return MeanFieldState(
            state.n + 1, a_next, 1.0, D_next, mu, d_m, Verdict.COMPLETE_OUTAGE
        )
    out = MeanFieldState(state.n + 1, a_next, p_next, D_next, mu, d_m)
    if p_next >= 1.0 or a_next >= 1.0:
        out = replace(out, verdict=Verdict.COMPLETE_OUTAGE)
    return out


def run_recursion(
    a0: float,
    d_m: float,
    max_iter: int = 10_000,
    tol: float = 1e-12,
) -> tuple[Verdict, list[MeanFieldState]]:
    """Iterate to a verdict; the trace is a pure function of the inputs.

    Survives when p_n drops below ``tol``; Undetermined when ``max_iter``
    stages pass without resolution (slow dynamics near the threshold).
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    state = init_recursion(a0, d_m)
    trace = [state]
    for _ in range(max_iter):
        if state.verdict is not Verdict.RUNNING:
            return state.verdict, trace
        if state.p_n < tol:
            state = replace(state, verdict=Verdict.SURVIVES)
            trace[-1] = state
            return Verdict.SURVIVES, trace
        state = recursion_step(state)
        trace.append(state)
    if state.verdict is Verdict.RUNNING:
        state = replace(state, verdict=Verdict.UNDETERMINED)
        trace[-1] = state
    return state.verdict, trace
