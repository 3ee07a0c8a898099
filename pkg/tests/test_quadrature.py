import math

import numpy as np
import pytest

from sphmax.errors import PrecisionError
from sphmax.quadrature import DEFAULT_QUAD, QuadratureSpec, integrate


def test_polynomial_exact():
    assert integrate(lambda s, a, b: s ** 3, 0, 1) == pytest.approx(0.25, abs=1e-12)


def test_sine():
    val = integrate(lambda s, a, b: np.sin(s), 0, math.pi)
    assert val == pytest.approx(2.0, abs=1e-10)


def test_inverse_sqrt_singularity_at_lower_end():
    # distances to the endpoints arrive precomputed, so 1/sqrt(s - lo)
    # is evaluated as dlo**-0.5 with no cancellation
    val = integrate(lambda s, dlo, dhi: dlo ** -0.5, 0, 1)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_inverse_sqrt_both_ends():
    val = integrate(lambda s, dlo, dhi: (dlo * dhi) ** -0.5, 0, 1)
    assert val == pytest.approx(math.pi, abs=1e-9)


def test_shifted_interval_distances():
    # int_2^5 (s-2)^{-1/2} + (5-s)^{-1/2} ds = 2 sqrt(3) + 2 sqrt(3)
    val = integrate(lambda s, dlo, dhi: dlo ** -0.5 + dhi ** -0.5, 2, 5)
    assert val == pytest.approx(4 * math.sqrt(3), abs=1e-9)


def test_log_singularity():
    val = integrate(lambda s, dlo, dhi: np.log(1.0 / dlo), 0, 0.5)
    assert val == pytest.approx(0.5 * (1 + math.log(2)), abs=1e-9)


def test_breakpoints_for_piecewise_integrand():
    def f(s, dlo, dhi):
        return np.where(s < 1 / 3, 1.0, 2.0)

    val = integrate(f, 0, 1, breakpoints=(1 / 3,))
    assert val == pytest.approx(5 / 3, abs=1e-10)


def test_skip_predicate_drops_dead_panels():
    def f(s, dlo, dhi):
        return np.where(s >= 0.5, s, 0.0)

    full = integrate(f, 0, 1, breakpoints=(0.5,))
    skipped = integrate(f, 0, 1, breakpoints=(0.5,),
                        skip=lambda a, b: b <= 0.5)
    assert full == pytest.approx(3 / 8, abs=1e-10)
    assert skipped == pytest.approx(full, abs=1e-12)


def test_empty_interval_is_zero():
    assert integrate(lambda s, a, b: s, 1, 1) == 0.0
    assert integrate(lambda s, a, b: s, 2, 1) == 0.0


def test_precision_error_when_budget_exhausted():
    tight = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-16, max_refinement=2)
    with pytest.raises(PrecisionError):
        integrate(lambda s, dlo, dhi: np.abs(np.sin(40 / (s + 0.01))), 0, 1,
                  quad=tight)


def test_default_spec_values():
    assert DEFAULT_QUAD.rel_tol == 1e-9
    assert DEFAULT_QUAD.abs_tol == 1e-12
    assert DEFAULT_QUAD.max_refinement == 26


def test_tolerance_scales_with_request():
    loose = QuadratureSpec(rel_tol=1e-4, abs_tol=1e-6, max_refinement=26)
    exact = 2.0
    val = integrate(lambda s, dlo, dhi: dlo ** -0.5, 0, 1, quad=loose)
    assert abs(val - exact) < 1e-4
