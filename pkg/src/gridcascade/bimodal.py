"""Two-atom variant of the fully connected scalar recursion.

A fraction ``pa`` of nodes starts at load a0 and the rest at b0 >= a0.
Both floors drift upward by the redistributed load until the upper mode
hits capacity, after which the recursion degenerates to the single-mode
form on the lower floor. Three mutually exclusive branches per stage:

    BOTH_ALIVE    both modes still below capacity after the shift
    UPPER_DIES    the shift kills the b-mode exactly this stage
    LOWER_ONLY    only the a-mode remains

Once the upper mode dies, b_n is clamped to 1 and stays there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .meanfield import Verdict, failure_probability, mean_failed_load


class Branch(str, enum.Enum):
    INIT = "init"
    BOTH_ALIVE = "both_alive"
    UPPER_DIES = "upper_dies"
    LOWER_ONLY = "lower_only"


@dataclass(frozen=True)
class BimodalState:
    """One stage of the two-mode recursion."""

    n: int
    a_n: float
    b_n: float
    p_n: float
    D_n: float
    mu_prev: float
    d_m: float
    pa: float
    pb: float
    branch: Branch = Branch.INIT
    p_tilde: float = math.nan  # intermediate failing mass of the UPPER_DIES branch
    verdict: Verdict = Verdict.RUNNING


def _mode_failure_probability(a: float, b: float, pa: float, pb: float, d_m: float) -> float:
    return pa * failure_probability(a, d_m) + pb * failure_probability(min(b, 1.0), d_m)


def init_bimodal(a0: float, b0: float, pa: float, d_m: float) -> BimodalState:
    """Stage-1 state of the two-mode recursion."""
    if not 0.0 < a0 < 1.0 or not 0.0 < b0 < 1.0:
        raise ValueError(f"mode loads must be in (0, 1), got a0={a0}, b0={b0}")
    if a0 > b0:
        raise ValueError(f"need a0 <= b0, got a0={a0}, b0={b0}")
    if not 0.0 <= pa <= 1.0:
        raise ValueError(f"pa must be in [0, 1], got {pa}")
    if d_m <= 0:
        raise ValueError(f"disturbance mean must be > 0, got {d_m}")
    pb = 1.0 - pa
    p0 = _mode_failure_probability(a0, b0, pa, pb, d_m)
    if p0 >= 1.0:
        return BimodalState(1, a0, b0, 1.0, 0.0, 1.0 + d_m, d_m, pa, pb,
                            verdict=Verdict.COMPLETE_OUTAGE)
    D1 = p0 / (1.0 - p0) * (1.0 + d_m)
    try:
        p1 = p0 / (1.0 - p0) * math.expm1(D1 / d_m)
    except OverflowError:
        return BimodalState(1, a0, b0, 1.0, D1, 1.0 + d_m, d_m, pa, pb,
                            verdict=Verdict.COMPLETE_OUTAGE)
    state = BimodalState(1, a0, b0, p1, D1, 1.0 + d_m, d_m, pa, pb)
    if p1 >= 1.0:
        state = replace(state, verdict=Verdict.COMPLETE_OUTAGE)
    return state


def bimodal_step(state: BimodalState, shifted_floor_in_pn: bool = False) -> BimodalState:
    """Advance one stage, applying exactly one branch.

    ``shifted_floor_in_pn`` switches the UPPER_DIES failure-probability
    denominator from the pre-shift floor to the post-shift floor, for
    sensitivity analysis; the default uses the pre-shift floor.
    """
    if state.verdict is not Verdict.RUNNING:
        raise ValueError(f"cannot step a recursion with verdict {state.verdict}")
    a, b, D = state.a_n, state.b_n, state.D_n
    try:
        if D < (1.0 - b) and b < 1.0:
            return _classify(_step_both_alive(state))
        if (1.0 - a) > D >= (1.0 - b) and b < 1.0:
            return _classify(_step_upper_dies(state, shifted_floor_in_pn))
        if D < (1.0 - a) and a < 1.0 and b == 1.0:
            return _classify(_step_lower_only(state))
    except (OverflowError, ZeroDivisionError):
        return replace(state, n=state.n + 1, verdict=Verdict.COMPLETE_OUTAGE)
    # remaining mass pushed past capacity
    return replace(state, n=state.n + 1, verdict=Verdict.COMPLETE_OUTAGE)


def _classify(state: BimodalState) -> BimodalState:
    if not math.isfinite(state.p_n) or state.p_n >= 1.0 or state.p_n < 0.0:
        return replace(state, verdict=Verdict.COMPLETE_OUTAGE)
    if state.a_n >= 1.0:
        return replace(state, verdict=Verdict.COMPLETE_OUTAGE)
    return state


def _step_both_alive(state: BimodalState) -> BimodalState:
    a, b, p, D, d_m = state.a_n, state.b_n, state.p_n, state.D_n, state.d_m
    a_next, b_next = a + D, b + D
    mu = mean_failed_load(D, d_m)
    D_next = p / (1.0 - p) * mu
    q = _mode_failure_probability(a_next, b_next, state.pa, state.pb, d_m)
    p_next = q / (1.0 - q) * math.expm1(D_next / d_m)
    return replace(state, n=state.n + 1, a_n=a_next, b_n=b_next, p_n=p_next,
                   D_n=D_next, mu_prev=mu, branch=Branch.BOTH_ALIVE, p_tilde=math.nan)


def _step_upper_dies(state: BimodalState, shifted_floor_in_pn: bool) -> BimodalState:
    a, b, p, D, d_m = state.a_n, state.b_n, state.p_n, state.D_n, state.d_m
    pa, pb = state.pa, state.pb
    if pa == 0.0:
        # no lower mode: killing the upper mode kills everyone
        return replace(state, n=state.n + 1, b_n=1.0, branch=Branch.UPPER_DIES,
                       verdict=Verdict.COMPLETE_OUTAGE)
    a_next = a + D
    # failing mass this stage: the slice of the a-mode crossing capacity
    # plus the entire remaining b-mode
    p_tilde = (
        pa * (math.exp(-(1.0 - a - D) / d_m) - math.exp(-(1.0 - a) / d_m))
        + pb * (1.0 - math.exp(-(1.0 - b) / d_m))
    )
    num = (
        pa * math.exp(-(1.0 - a_next) / d_m)
        * (1.0 + d_m - (1.0 + D + d_m) * math.exp(-D / d_m))
        + pb * (b + D + d_m - (1.0 + D + d_m) * math.exp(-(1.0 - b) / d_m))
    )
    mu = num / p_tilde if p_tilde > 0 else 1.0 + d_m
    D_next = p / (1.0 - p) * mu
    floor = a_next if shifted_floor_in_pn else a
    p_next = 1.0 - (
        pa * (1.0 - math.exp(-(1.0 - a_next) / d_m))
        / (1.0 - (pa * math.exp(-(1.0 - floor) / d_m) + pb))
    )
    return replace(state, n=state.n + 1, a_n=a_next, b_n=1.0, p_n=p_next,
                   D_n=D_next, mu_prev=mu, branch=Branch.UPPER_DIES, p_tilde=p_tilde)


def _step_lower_only(state: BimodalState) -> BimodalState:
    a, p, D, d_m = state.a_n, state.p_n, state.D_n, state.d_m
    a_next = a + D
    mu = mean_failed_load(D, d_m)
    D_next = p / (1.0 - p) * mu
    q = failure_probability(a_next, d_m)
    p_next = q / (1.0 - q) * math.expm1(D_next / d_m)
    return replace(state, n=state.n + 1, a_n=a_next, p_n=p_next, D_n=D_next,
                   mu_prev=mu, branch=Branch.LOWER_ONLY, p_tilde=math.nan)


def run_bimodal(
    a0: float,
    b0: float,
    pa: float,
    d_m: float,
    max_iter: int = 10_000,
    tol: float = 1e-12,
    shifted_floor_in_pn: bool = False,
) -> tuple[Verdict, list[BimodalState]]:
    """Iterate the two-mode recursion to a verdict, as in the unimodal case."""
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    state = init_bimodal(a0, b0, pa, d_m)
    trace = [state]
    for _ in range(max_iter):
        if state.verdict is not Verdict.RUNNING:
            return state.verdict, trace
        if state.p_n < tol:
            state = replace(state, verdict=Verdict.SURVIVES)
            trace[-1] = state
            return Verdict.SURVIVES, trace
        state = bimodal_step(state, shifted_floor_in_pn=shifted_floor_in_pn)
        trace.append(state)
    if state.verdict is Verdict.RUNNING:
        state = replace(state, verdict=Verdict.UNDETERMINED)
        trace[-1] = state
    return state.verdict, trace
