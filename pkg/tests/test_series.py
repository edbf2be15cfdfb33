import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bryantflux import (DomainError, GeneralizedSeries, QuadratureGrid,
                        differentiate, eval_at, eval_branch, residue)
from bryantflux.series import combine, radius_estimate, trapezoid_residue


def S(offset, coeffs):
    return GeneralizedSeries.from_coeffs(offset, coeffs)


class TestArithmetic:
    def test_product(self):
        out = S(0.0, [1, 1]) * S(0.0, [1, -1])
        assert out.offset == 0.0
        assert np.allclose(out.coeffs, [1, 0])

    def test_product_with_enough_order(self):
        out = S(0.0, [1, 1, 0]) * S(0.0, [1, -1, 0])
        assert np.allclose(out.coeffs, [1, 0, -1])

    def test_offsets_cancel_in_product(self):
        out = S(0.5, [1.0]) * S(-0.5, [1.0])
        assert out.offset == 0.0
        assert np.allclose(out.coeffs, [1.0])

    def test_geometric_series_division(self):
        out = S(0.0, [1, 0, 0, 0]) / S(0.0, [1, 1, 0, 0])
        assert np.allclose(out.coeffs, [1, -1, 1, -1])

    def test_division_round_trips(self):
        a = S(0.5, [2.0, -1.0, 0.5, 0.25])
        b = S(-1.0, [1.0, 3.0, -2.0, 1.0])
        q = a / b
        assert (q * b).isclose(a, tol=1e-12)

    def test_division_by_zero_series_rejected(self):
        with pytest.raises(DomainError):
            S(0.0, [1.0]) / S(0.0, [0.0, 0.0])

    def test_addition_needs_integer_offset_gap(self):
        with pytest.raises(DomainError):
            S(0.5, [1.0]) + S(0.0, [1.0])

    def test_addition_aligns_offsets(self):
        out = S(-1.0, [1.0, 2.0, 3.0]) + S(0.0, [10.0, 20.0])
        assert out.offset == -1.0
        assert np.allclose(out.coeffs, [1.0, 12.0, 23.0])

    def test_combine_dispatch(self):
        a, b = S(0.0, [1.0, 1.0]), S(0.0, [1.0, 2.0])
        assert combine(a, b, "add").isclose(a + b)
        assert combine(a, b, "mul").isclose(a * b)
        assert combine(a, b, "div").isclose(a / b)
        with pytest.raises(DomainError):
            combine(a, b, "pow")

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_product_evaluates_pointwise(self, seed):
        rng = np.random.default_rng(seed)
        a = S(float(rng.uniform(-2, 2)),
              rng.normal(size=6) + 1j * rng.normal(size=6))
        b = S(float(rng.uniform(-2, 2)),
              rng.normal(size=6) + 1j * rng.normal(size=6))
        grid = QuadratureGrid(0.05, 32)
        lhs = eval_branch(a * b, grid)
        rhs = eval_branch(a, grid) * eval_branch(b, grid)
        # truncated cross terms are O(rho^(order+1)) relative to the values
        scale = max(1.0, float(np.max(np.abs(rhs))))
        assert np.max(np.abs(lhs - rhs)) < 1e-6 * scale


class TestDifferentiate:
    def test_monomial(self):
        out = differentiate(S(1.0, [1.0]))
        assert out.offset == 0.0
        assert np.allclose(out.coeffs, [1.0])

    def test_fractional_power(self):
        out = differentiate(S(0.5, [1.0]))
        assert out.offset == -0.5
        assert np.allclose(out.coeffs, [0.5])

    def test_residue_of_derivative_vanishes(self):
        rng = np.random.default_rng(5)
        a = S(-3.0, rng.normal(size=8))
        assert residue(differentiate(a)) == 0


class TestResidue:
    def test_simple_pole(self):
        assert residue(S(-1.0, [1.0])) == 1.0

    def test_window_lookup(self):
        assert residue(S(-2.0, [1.0, 2.0, 3.0])) == 2.0

    def test_no_minus_one_term(self):
        assert residue(S(0.0, [1.0, 2.0])) == 0.0

    def test_fractional_offset_rejected(self):
        with pytest.raises(DomainError):
            residue(S(0.5, [1.0]))

    def test_linearity(self):
        a = S(-2.0, [1.0, 2.0, 0.5])
        b = S(-1.0, [3.0, -1.0])
        both = a + 2.0 * b
        assert residue(both) == pytest.approx(residue(a) + 2.0 * residue(b))


class TestEvaluation:
    def test_constant_series(self):
        grid = QuadratureGrid(0.3, 16)
        assert np.allclose(eval_branch(S(0.0, [1.0]), grid), 1.0)

    def test_continuous_branch_near_full_turn(self):
        # z^(1/2) at tau just below 2 pi must approach -1, not +1.
        val = eval_at(S(0.5, [1.0]), 1.0, np.array([2.0 * np.pi - 1e-6]))[0]
        assert abs(val + 1.0) < 1e-5

    def test_single_valued_immersion_closes(self):
        from bryantflux import catenoid_cousin_frame
        from bryantflux.bryant import immersion_samples
        frame = catenoid_cousin_frame(0.5)
        taus = np.array([0.0, 2.0 * np.pi])
        zeta, w = immersion_samples(frame, 0.1, taus)
        assert abs(zeta[0] - zeta[1]) < 1e-10
        assert abs(w[0] - w[1]) < 1e-10

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            QuadratureGrid(0.1, 12)
        with pytest.raises(DomainError):
            QuadratureGrid(0.1, 48)
        with pytest.raises(DomainError):
            QuadratureGrid(-0.1, 32)


class TestTrapezoidResidue:
    def test_matches_symbolic_residue(self):
        rng = np.random.default_rng(2)
        a = S(-4.0, rng.normal(size=9) + 1j * rng.normal(size=9))
        grid = QuadratureGrid(0.5, 64)
        assert abs(trapezoid_residue(a, grid) - residue(a)) < 1e-8

    def test_pure_power_no_residue(self):
        grid = QuadratureGrid(0.5, 32)
        assert abs(trapezoid_residue(S(-2.0, [1.0]), grid)) < 1e-12


class TestStructure:
    def test_offset_snapping(self):
        s = S(1.0 + 1e-12, [1.0])
        assert s.offset == 1.0

    def test_normalized_shifts_leading_zeros(self):
        s = S(1.0, [0.0, 0.0, 2.0, 3.0]).normalized()
        assert s.offset == 3.0
        assert np.allclose(s.coeffs, [2.0, 3.0])

    def test_isclose_across_offset_shift(self):
        assert S(0.0, [0.0, 1.0, 2.0]).isclose(S(1.0, [1.0, 2.0]))

    def test_radius_estimate_geometric(self):
        # 1/(1 - z/2): coefficients (1/2)^k, radius 2.
        coeffs = [0.5 ** k for k in range(20)]
        assert radius_estimate(S(0.0, coeffs)) == pytest.approx(2.0)

    def test_radius_estimate_polynomial(self):
        assert radius_estimate(S(0.0, [1.0])) == np.inf
