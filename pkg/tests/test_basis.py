import math

import numpy as np
import pytest

from berncolloc.basis import (
    BernsteinBasis,
    Interval,
    basis_values,
    binomial,
    derivative_values,
    eval_basis,
    eval_derivative,
    local_maximum,
)

INTERVALS = [Interval(0.0, 1.0), Interval(-1.0, 1.0), Interval(-math.pi, math.pi), Interval(2.5, 7.5)]


# ---------------------------------------------------------------------------
# binomial
# ---------------------------------------------------------------------------


def test_binomial_small_cases():
    assert binomial(5, 2) == 10.0
    for n in (0, 1, 7, 33, 60):
        assert binomial(n, 0) == 1.0
        assert binomial(n, n) == 1.0


def test_binomial_against_exact_integers():
    # big-integer oracle over the full range used by the solver
    worst = 0.0
    for n in range(61):
        for k in range(n + 1):
            exact = math.comb(n, k)
            worst = max(worst, abs(binomial(n, k) - exact) / exact)
    assert worst <= 1e-12


def test_binomial_central_value():
    assert binomial(30, 15) == pytest.approx(155117520, rel=1e-12)


def test_binomial_domain_errors():
    with pytest.raises(ValueError):
        binomial(4, 5)
    with pytest.raises(ValueError):
        binomial(-1, 0)
    with pytest.raises(ValueError):
        binomial(3, -2)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def test_interval_requires_a_below_b():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    with pytest.raises(ValueError):
        Interval(2.0, -1.0)


def test_basis_size_and_degree_guard():
    assert BernsteinBasis(4, Interval(0, 1)).size == 5
    with pytest.raises(ValueError):
        BernsteinBasis(-1, Interval(0, 1))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def test_hand_expansion_midpoint():
    # B_{1,2}(0.5) on [0,1] = 2 * 0.5 * 0.5
    b = BernsteinBasis(2, Interval(0.0, 1.0))
    assert eval_basis(b, 1, 0.5) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("interval", INTERVALS)
def test_endpoint_kronecker_property(interval):
    for n in (1, 2, 9, 24, 60):
        b = BernsteinBasis(n, interval)
        for i in range(n + 1):
            assert abs(eval_basis(b, i, interval.a) - (1.0 if i == 0 else 0.0)) <= 1e-14
            assert abs(eval_basis(b, i, interval.b) - (1.0 if i == n else 0.0)) <= 1e-14


@pytest.mark.parametrize("interval", INTERVALS)
def test_partition_of_unity(interval):
    for n in range(61):
        b = BernsteinBasis(n, interval)
        for x in np.linspace(interval.a, interval.b, 101):
            total = sum(eval_basis(b, i, x) for i in range(n + 1))
            assert abs(total - 1.0) <= 1e-10


def test_positivity():
    rng = np.random.default_rng(7)
    for interval in INTERVALS:
        for n in (3, 11, 40):
            b = BernsteinBasis(n, interval)
            for x in rng.uniform(interval.a, interval.b, size=20):
                assert all(eval_basis(b, i, x) >= 0.0 for i in range(n + 1))


@pytest.mark.parametrize("interval", INTERVALS)
def test_symmetry_about_interval_midpoint(interval):
    # B_{i,n}(x) = B_{n-i,n}(a + b - x)
    for n in (2, 7, 19, 40):
        b = BernsteinBasis(n, interval)
        for x in np.linspace(interval.a, interval.b, 17):
            mirrored = interval.a + interval.b - x
            mirrored = min(max(mirrored, interval.a), interval.b)
            for i in range(n + 1):
                assert eval_basis(b, i, x) == pytest.approx(
                    eval_basis(b, n - i, mirrored), abs=1e-12
                )


def test_evaluation_domain_errors():
    b = BernsteinBasis(3, Interval(0.0, 1.0))
    with pytest.raises(ValueError):
        eval_basis(b, 4, 0.5)
    with pytest.raises(ValueError):
        eval_basis(b, -1, 0.5)
    with pytest.raises(ValueError):
        eval_basis(b, 0, 1.5)
    with pytest.raises(ValueError):
        eval_basis(b, 0, -0.1)
    with pytest.raises(ValueError):
        eval_derivative(b, 1, 5, 0.5)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------


def _central_stencil(fn, p, x, h):
    if p == 1:
        return (fn(x + h) - fn(x - h)) / (2 * h)
    if p == 2:
        return (fn(x + h) - 2 * fn(x) + fn(x - h)) / h**2
    if p == 3:
        return (fn(x + 2 * h) - 2 * fn(x + h) + 2 * fn(x - h) - fn(x - 2 * h)) / (2 * h**3)
    return (fn(x + 2 * h) - 4 * fn(x + h) + 6 * fn(x) - 4 * fn(x - h) + fn(x - 2 * h)) / h**4


def test_zeroth_derivative_is_evaluation():
    b = BernsteinBasis(6, Interval(-1.0, 1.0))
    for i in range(7):
        for x in np.linspace(-1, 1, 7):
            assert eval_derivative(b, 0, i, x) == eval_basis(b, i, x)


def test_linear_member_slope():
    # B_{0,1} = (b - x)/(b - a) has slope -1 on [0,1]
    b = BernsteinBasis(1, Interval(0.0, 1.0))
    for x in (0.0, 0.3, 0.99, 1.0):
        assert eval_derivative(b, 1, 0, x) == pytest.approx(-1.0, abs=1e-13)


def test_second_derivative_matches_spot_finite_difference():
    # central difference at a single well-scaled point; step 1e-4 keeps the
    # stencil's rounding noise (eps/h^2) well under the 1e-6 tolerance
    b = BernsteinBasis(6, Interval(-1.0, 1.0))
    fd = _central_stencil(lambda x: eval_basis(b, 3, x), 2, 0.3, 1e-4)
    assert eval_derivative(b, 2, 3, 0.3) == pytest.approx(fd, rel=1e-6)


def test_order_beyond_degree_is_zero():
    b = BernsteinBasis(3, Interval(0.0, 2.0))
    for i in range(4):
        for p in (4, 5, 9):
            assert eval_derivative(b, p, i, 1.3) == 0.0


def _richardson2(fn, p, x, h):
    # two extrapolation levels: O(h^6) accuracy at a step large enough to
    # stay clear of the eps/h^p rounding floor
    r1a = (4 * _central_stencil(fn, p, x, h / 2) - _central_stencil(fn, p, x, h)) / 3
    r1b = (4 * _central_stencil(fn, p, x, h / 4) - _central_stencil(fn, p, x, h / 2)) / 3
    return (16 * r1b - r1a) / 15


@pytest.mark.parametrize("interval", [Interval(0.0, 1.0), Interval(-1.0, 1.0), Interval(2.5, 7.5)])
def test_derivatives_against_finite_differences(interval):
    # plain central stencils at the nominal step for p <= 2; extrapolated
    # stencils for p >= 3 where plain h^2 stencils drown in rounding noise
    steps = {1: 1e-4, 2: 1e-4, 3: 8e-3, 4: 1.6e-2}
    for n in (4, 8, 14, 20):
        b = BernsteinBasis(n, interval)
        for p in (1, 2, 3, 4):
            if p > n:
                continue
            h = steps[p] * interval.width
            lo = interval.a + 0.1 * interval.width
            hi = interval.b - 0.1 * interval.width
            for x in np.linspace(lo, hi, 11):
                exact = [eval_derivative(b, p, i, x) for i in range(n + 1)]
                scale = max(abs(v) for v in exact)
                for i in range(n + 1):
                    fn = lambda t, _i=i: eval_basis(b, _i, t)
                    if p <= 2:
                        fd = _central_stencil(fn, p, x, h)
                    else:
                        fd = _richardson2(fn, p, x, h)
                    assert abs(exact[i] - fd) <= max(1e-5 * abs(exact[i]), 1e-6 * scale)


def _derivative_by_coefficient_differences(n, interval, p, i, x):
    # iterate the first-derivative coefficient rule p times:
    # D(sum c_i B_{i,d}) = sum_j d/(b-a) (c_{j+1} - c_j) B_{j,d-1}
    coeffs = np.zeros(n + 1)
    coeffs[i] = 1.0
    degree = n
    for _ in range(p):
        coeffs = degree / interval.width * (coeffs[1:] - coeffs[:-1])
        degree -= 1
    reduced = BernsteinBasis(degree, interval)
    return sum(c * eval_basis(reduced, j, x) for j, c in enumerate(coeffs))


def test_derivative_formula_matches_repeated_differentiation():
    interval = Interval(-1.0, 1.0)
    for n in (5, 9, 15):
        b = BernsteinBasis(n, interval)
        for p in (1, 2, 3, 4):
            for x in np.linspace(-0.9, 0.9, 7):
                for i in range(n + 1):
                    expected = _derivative_by_coefficient_differences(n, interval, p, i, x)
                    assert eval_derivative(b, p, i, x) == pytest.approx(
                        expected, rel=1e-9, abs=1e-9
                    )


def test_derivative_sum_rule():
    # differentiating the partition of unity gives zero
    for interval in (Interval(0.0, 1.0), Interval(-math.pi, math.pi)):
        for n in (4, 12, 25):
            b = BernsteinBasis(n, interval)
            for p in (1, 2, 3, 4):
                for x in np.linspace(interval.a, interval.b, 9):
                    values = [eval_derivative(b, p, i, x) for i in range(n + 1)]
                    assert abs(sum(values)) <= 1e-8 * max(abs(v) for v in values)


# ---------------------------------------------------------------------------
# local maximum
# ---------------------------------------------------------------------------


def test_local_maximum_unit_interval():
    b = BernsteinBasis(2, Interval(0.0, 1.0))
    x_star, value = local_maximum(b, 1)
    assert x_star == pytest.approx(0.5)
    assert value == pytest.approx(0.5)


def test_local_maximum_affine_invariance():
    b = BernsteinBasis(2, Interval(0.0, 2.0))
    x_star, value = local_maximum(b, 1)
    assert x_star == pytest.approx(1.0)
    assert value == pytest.approx(0.5)


def test_local_maximum_consistent_with_evaluation():
    for interval in INTERVALS:
        for n in (2, 13, 45):
            b = BernsteinBasis(n, interval)
            for i in (1, n // 2, n - 1):
                x_star, value = local_maximum(b, i)
                assert value == pytest.approx(eval_basis(b, i, x_star), rel=1e-12)


def test_local_maximum_is_a_maximum():
    b = BernsteinBasis(9, Interval(-1.0, 1.0))
    x_star, value = local_maximum(b, 4)
    for dx in (-1e-3, 1e-3):
        assert eval_basis(b, 4, x_star + dx) < value


def test_local_maximum_rejects_endpoint_members():
    b = BernsteinBasis(5, Interval(0.0, 1.0))
    with pytest.raises(ValueError):
        local_maximum(b, 0)
    with pytest.raises(ValueError):
        local_maximum(b, 5)


# ---------------------------------------------------------------------------
# vectorized helpers
# ---------------------------------------------------------------------------


def test_row_helpers_match_scalar_calls():
    b = BernsteinBasis(7, Interval(-2.0, 3.0))
    for x in (-2.0, 0.1, 3.0):
        np.testing.assert_allclose(
            basis_values(b, x), [eval_basis(b, i, x) for i in range(8)], rtol=0, atol=0
        )
        for p in (1, 3, 8):
            np.testing.assert_allclose(
                derivative_values(b, p, x),
                [eval_derivative(b, p, i, x) for i in range(8)],
                rtol=0,
                atol=0,
            )
