"""Mean oscillation, BMO norm sweeps, medians, and vanishing-oscillation profiles.

All integrals are midpoint-rule node averages, so the average of a
constant is that constant exactly.  Supremum-type quantities (the BMO
norm, the three oscillation-limit profiles) are taken over a finite
interval family and are therefore lower bounds for the true suprema;
the default family is every interval with grid-node endpoints and a
dyadic length, which keeps the candidate count at O(N log N).

The median of ``f`` over ``I`` is the smallest node value ``a`` such that
both level sets ``{f > a}`` and ``{f < a}`` occupy at most half of the
nodes in ``I``.  That choice is deterministic, is an exact minimizer of
the node-mean absolute deviation, and keeps the balancing constant of
the oscillation-split family at most one half in modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError
from .sampling import Interval, SampledFunction

# Cap on elements per sliding-window chunk in oscillation sweeps.
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class MedianResult:
    """A median value plus its two half-measure certificates."""

    value: float
    upper_excess: float  # fraction of I where f > value
    lower_excess: float  # fraction of I where f < value


@dataclass(frozen=True)
class VmoProfile:
    """Oscillation suprema along the three vanishing limits.

    ``small_scale`` is keyed by the length cap (oscillation over short
    intervals), ``large_scale`` by the length floor, and ``far_away`` by
    the radius of the excluded ball around the origin.  All values are
    finite-family lower bounds for the true suprema.
    """

    small_scale: Tuple[Tuple[float, float], ...]
    large_scale: Tuple[Tuple[float, float], ...]
    far_away: Tuple[Tuple[float, float], ...]


def _real_on(f: SampledFunction, domain: Interval) -> np.ndarray:
    vals = f.real_values()
    mask = f.node_mask(domain)
    if not np.any(mask):
        raise InputError("interval does not intersect the grid")
    return vals[mask]


def average(f: SampledFunction, domain: Interval) -> float:
    """Node-mean of ``f`` over the interval (midpoint rule for the average)."""
    return float(np.mean(_real_on(f, domain)))


def mean_oscillation(f: SampledFunction, domain: Interval) -> float:
    """Mean deviation from the interval average, ``M(f, I)``."""
    vals = _real_on(f, domain)
    return float(np.mean(np.abs(vals - vals.mean())))


def bmo_norm(f: SampledFunction, sweep: Sequence[Interval]) -> float:
    """Largest mean oscillation over the sweep; a lower bound for the sup."""
    if len(sweep) == 0:
        raise InputError("sweep must be non-empty")
    return max(mean_oscillation(f, I) for I in sweep)


def median(f: SampledFunction, domain: Interval) -> MedianResult:
    """Smallest admissible median node value with its excess fractions."""
    vals = _real_on(f, domain)
    n = vals.size
    ordered = np.sort(vals)
    value = float(ordered[(n - 1) // 2])
    upper = float(np.sum(vals > value)) / n
    lower = float(np.sum(vals < value)) / n
    return MedianResult(value=value, upper_excess=upper, lower_excess=lower)


def mean_deviation(f: SampledFunction, domain: Interval, center: float) -> float:
    """Node-mean of ``|f - center|`` over the interval."""
    vals = _real_on(f, domain)
    return float(np.mean(np.abs(vals - center)))


def dyadic_sweep(f: SampledFunction, window: Optional[Interval] = None,
                 max_length: Optional[float] = None) -> List[Interval]:
    """Every interval with grid-node endpoints and dyadic length in the window.

    Lengths are ``step * 2^m`` for ``m >= 1``; endpoints sit on nodes, so
    each interval holds ``2^m - 1`` interior nodes.
    """
    nodes = f.nodes
    if window is not None:
        keep = window.contains(nodes)
        if not np.any(keep):
            raise InputError("window does not intersect the grid")
        nodes = nodes[keep]
    n = nodes.size
    out: List[Interval] = []
    m = 1
    while (w := 2**m) <= n - 1:
        length = w * f.step
        if max_length is not None and length > max_length:
            break
        for a in range(0, n - w):
            out.append(Interval(0.5 * (nodes[a] + nodes[a + w]), 0.5 * length))
        m += 1
    if not out:
        raise InputError("grid too short for a dyadic interval sweep")
    return out


def oscillation_table(f: SampledFunction, window: Optional[Interval] = None
                      ) -> List[Tuple[Interval, float]]:
    """Mean oscillation of every dyadic-sweep interval, computed in bulk.

    Equivalent to calling :func:`mean_oscillation` per interval, but the
    sliding windows of one dyadic level are evaluated together.
    """
    vals = f.real_values()
    nodes = f.nodes
    if window is not None:
        keep = window.contains(nodes)
        if not np.any(keep):
            raise InputError("window does not intersect the grid")
        vals = vals[keep]
        nodes = nodes[keep]
    n = nodes.size
    out: List[Tuple[Interval, float]] = []
    m = 1
    while (w := 2**m) <= n - 1:
        width = w - 1  # interior nodes per interval
        starts = n - w  # interval with endpoints nodes[a], nodes[a + w]
        view = np.lib.stride_tricks.sliding_window_view(vals, width)[1 : starts + 1]
        oscs = np.empty(starts)
        rows = max(1, _CHUNK_ELEMENTS // width)
        for lo in range(0, starts, rows):
            block = view[lo : lo + rows]
            means = block.mean(axis=1)
            oscs[lo : lo + rows] = np.abs(block - means[:, None]).mean(axis=1)
        for a in range(starts):
            out.append(
                (Interval(0.5 * (nodes[a] + nodes[a + w]), 0.5 * w * f.step), oscs[a])
            )
        m += 1
    if not out:
        raise InputError("grid too short for a dyadic interval sweep")
    return out


def vmo_profile(f: SampledFunction, delta_ladder: Sequence[float],
                R_ladder: Sequence[float],
                window: Optional[Interval] = None) -> VmoProfile:
    """Oscillation suprema along the three vanishing-oscillation limits.

    For each length cap in ``delta_ladder``: the sup of ``M(f, I)`` over
    sweep intervals with ``|I| < delta``.  For each ``R`` in ``R_ladder``:
    the sup over ``|I| > R``, and the sup over intervals disjoint from
    ``I(0, R)``.  Empty families yield zero.
    """
    deltas = [float(d) for d in delta_ladder]
    Rs = [float(R) for R in R_ladder]
    if not deltas or not Rs:
        raise InputError("ladders must be non-empty")
    if any(d <= 0 for d in deltas) or any(R <= 0 for R in Rs):
        raise InputError("ladder entries must be positive")
    table = oscillation_table(f, window)
    measures = np.array([I.measure for I, _ in table])
    lowers = np.array([I.lower for I, _ in table])
    uppers = np.array([I.upper for I, _ in table])
    oscs = np.array([osc for _, osc in table])

    def sup_where(mask: np.ndarray) -> float:
        return float(oscs[mask].max()) if np.any(mask) else 0.0

    small = tuple((d, sup_where(measures < d)) for d in sorted(deltas))
    large = tuple((R, sup_where(measures > R)) for R in sorted(Rs))
    far = tuple(
        (R, sup_where((lowers >= R) | (uppers <= -R))) for R in sorted(Rs)
    )
    return VmoProfile(small_scale=small, large_scale=large, far_away=far)
