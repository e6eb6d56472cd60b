import math

import numpy as np
import pytest

from cauchylab import InputError, LipschitzCurve, eval_A, verify_lipschitz

FLAT = LipschitzCurve.flat()
AFFINE = LipschitzCurve.affine(0.5)
SAW = LipschitzCurve.sawtooth(1.0, 4.0)
BUMP = LipschitzCurve.smooth_bump(1.0, 2.0)


def test_eval_examples():
    assert eval_A(FLAT, 3.7) == 0.0
    assert eval_A(AFFINE, 2.0) == 1.0
    assert eval_A(SAW, 1.0) == 1.0


def test_sawtooth_shape():
    # One full period: up to the peak, down through the trough, back to zero.
    xs = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    np.testing.assert_allclose(eval_A(SAW, xs), [0, 1, 0, -1, 0, 1], atol=1e-15)


def test_stored_constants():
    assert FLAT.lipschitz_constant == 0.0
    assert AFFINE.lipschitz_constant == 0.5
    assert SAW.lipschitz_constant == 1.0
    assert BUMP.lipschitz_constant == pytest.approx(0.5 * math.sqrt(2 / math.e))


def test_smooth_bump_slope_is_sharp():
    # Dense difference quotients approach the stored constant from below.
    xs = np.linspace(-6, 6, 200001)
    quot = np.abs(np.diff(eval_A(BUMP, xs))) / np.diff(xs)
    assert np.max(quot) <= BUMP.lipschitz_constant
    assert np.max(quot) >= BUMP.lipschitz_constant * 0.999


def test_verify_lipschitz_flat_affine(rng):
    pairs = rng.uniform(-50, 50, size=(100, 2))
    rep = verify_lipschitz(FLAT, pairs)
    assert rep.passed and rep.extras["max_quotient"] == 0.0
    rep = verify_lipschitz(AFFINE, pairs)
    assert rep.passed
    assert rep.extras["max_quotient"] == pytest.approx(0.5, rel=1e-12)


def test_verify_lipschitz_sawtooth_dense(rng):
    pairs = rng.uniform(-20, 20, size=(5000, 2))
    rep = verify_lipschitz(SAW, pairs)
    assert rep.passed
    assert rep.extras["max_quotient"] <= 1.0 * (1 + 1e-12)


def test_coincident_pair_rejected():
    with pytest.raises(InputError):
        verify_lipschitz(FLAT, [(1.0, 1.0)])


@pytest.mark.parametrize(
    "curve",
    [
        FLAT,
        AFFINE,
        LipschitzCurve.affine(-2.0),
        SAW,
        LipschitzCurve.sawtooth(0.5, 2.0),
        BUMP,
    ],
)
def test_difference_quotient_never_exceeds_L(curve, rng):
    pairs = rng.uniform(-100, 100, size=(10_000, 2))
    gaps = np.abs(pairs[:, 0] - pairs[:, 1])
    pairs = pairs[gaps > 0]
    quot = np.abs(eval_A(curve, pairs[:, 0]) - eval_A(curve, pairs[:, 1])) / np.abs(
        pairs[:, 0] - pairs[:, 1]
    )
    assert np.all(quot <= curve.lipschitz_constant * (1 + 1e-12))


def test_parameter_validation():
    with pytest.raises(InputError):
        LipschitzCurve.sawtooth(1.0, 0.0)
    with pytest.raises(InputError):
        LipschitzCurve.smooth_bump(1.0, -1.0)
