"""Lipschitz graph profiles with exact Lipschitz constants.

A curve is the graph ``{x + i A(x)}`` of a real profile ``A``.  Profiles
are closed-form, never sampled, so the stored constant ``L`` equals the
analytic ``sup |A'|`` exactly instead of being an estimate.  The sawtooth
is Lipschitz but has corners, which stresses kernel bounds exactly where
smoothness is absent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import InputError
from .reports import BoundReport


class ProfileKind(enum.Enum):
    FLAT = "flat"
    AFFINE = "affine"
    SAWTOOTH = "sawtooth"
    SMOOTH_BUMP = "smooth_bump"


@dataclass(frozen=True)
class LipschitzCurve:
    """Graph profile plus its exact Lipschitz constant."""

    kind: ProfileKind
    params: Tuple[float, ...]
    lipschitz_constant: float

    @staticmethod
    def flat() -> "LipschitzCurve":
        return LipschitzCurve(ProfileKind.FLAT, (), 0.0)

    @staticmethod
    def affine(slope: float) -> "LipschitzCurve":
        if not np.isfinite(slope):
            raise InputError("affine slope must be finite")
        return LipschitzCurve(ProfileKind.AFFINE, (float(slope),), abs(float(slope)))

    @staticmethod
    def sawtooth(amplitude: float, period: float) -> "LipschitzCurve":
        """Triangle wave with peak ``amplitude`` at one quarter period."""
        if not period > 0:
            raise InputError(f"sawtooth period must be positive, got {period}")
        if not np.isfinite(amplitude):
            raise InputError("sawtooth amplitude must be finite")
        L = 4.0 * abs(float(amplitude)) / float(period)
        return LipschitzCurve(
            ProfileKind.SAWTOOTH, (float(amplitude), float(period)), L
        )

    @staticmethod
    def smooth_bump(height: float, width: float) -> "LipschitzCurve":
        """Gaussian bump ``height * exp(-(x/width)^2)``; max slope in closed form."""
        if not width > 0:
            raise InputError(f"bump width must be positive, got {width}")
        if not np.isfinite(height):
            raise InputError("bump height must be finite")
        L = abs(float(height)) / float(width) * math.sqrt(2.0 / math.e)
        return LipschitzCurve(
            ProfileKind.SMOOTH_BUMP, (float(height), float(width)), L
        )


def eval_A(curve: LipschitzCurve, x):
    """Evaluate the graph profile ``A`` at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    kind = curve.kind
    if kind is ProfileKind.FLAT:
        out = np.zeros_like(x)
    elif kind is ProfileKind.AFFINE:
        (slope,) = curve.params
        out = slope * x
    elif kind is ProfileKind.SAWTOOTH:
        amplitude, period = curve.params
        # Phase in [0, 1); the three linear pieces are written so the
        # subtractions are exact for power-of-two parameters.
        u = np.mod(x, period) / period
        g = np.where(
            u < 0.25, 4.0 * u, np.where(u < 0.75, 4.0 * (0.5 - u), 4.0 * (u - 1.0))
        )
        out = amplitude * g
    elif kind is ProfileKind.SMOOTH_BUMP:
        height, width = curve.params
        out = height * np.exp(-((x / width) ** 2))
    else:  # pragma: no cover
        raise InputError(f"unknown profile kind {kind}")
    if out.ndim == 0:
        return float(out)
    return out


def verify_lipschitz(curve: LipschitzCurve, samples: Sequence[Tuple[float, float]]) -> BoundReport:
    """Check ``|A(x1) - A(x2)| <= L |x1 - x2|`` on sample pairs.

    Reports the difference quotient of every pair; a pair passes when its
    quotient does not exceed ``L (1 + 1e-12)``.  Coincident pairs are
    rejected because the quotient is undefined there.
    """
    pairs = np.asarray(samples, dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] == 0:
        raise InputError("samples must be a non-empty list of (x1, x2) pairs")
    x1, x2 = pairs[:, 0], pairs[:, 1]
    gaps = np.abs(x1 - x2)
    if np.any(gaps == 0):
        raise InputError("coincident sample pair: x1 == x2")
    quotients = np.abs(eval_A(curve, x1) - eval_A(curve, x2)) / gaps
    L = curve.lipschitz_constant
    passed = quotients <= L * (1.0 + 1e-12)
    return BoundReport(
        inequality="|A(x1) - A(x2)| <= L |x1 - x2|",
        columns={
            "x1": x1,
            "x2": x2,
            "lhs": quotients,
            "rhs": np.full_like(quotients, L),
            "pass": passed,
        },
        extras={
            "lipschitz_constant": L,
            "max_quotient": float(np.max(quotients)),
        },
    )
