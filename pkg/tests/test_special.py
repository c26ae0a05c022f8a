"""Special-function tests against independent oracles.

Oracles: a brute-force product series for arg Gamma, adaptive quadrature of
the defining integral for E(m), and the normalization/recurrence identities
plus high-precision reference values for J_n. Reference literals were
computed once with mpmath at 30 significant digits.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from lzsim.errors import OutOfDomain, OutOfValidityRange
from lzsim.special import bessel_j, complete_elliptic_e, complex_gamma_arg

EULER_GAMMA = 0.5772156649015328606


def arg_gamma_series(y: float) -> float:
    """Brute-force oracle: arg Gamma(1 + i y) = -gamma*y + sum_n [y/n - atan(y/n)].

    Terms fall off as y^3/(3 n^3); one million terms plus the analytic tail
    estimate give ~1e-12 absolute accuracy for |y| <= 1.
    """
    n = np.arange(1, 1_000_001, dtype=float)
    total = float(np.sum(y / n - np.arctan(y / n)))
    tail = y ** 3 / (6.0 * n[-1] ** 2)  # y^3/3 * sum_{n>N} n^-3 ~ y^3/(6 N^2)
    return -EULER_GAMMA * y + total + tail


class TestComplexGammaArg:
    def test_zero(self):
        assert complex_gamma_arg(0.0) == 0.0

    @pytest.mark.parametrize("y", [0.1, 0.2353, 0.5, 0.9])
    def test_against_series_oracle(self, y):
        # arg Gamma(1 - iy) = -arg Gamma(1 + iy)
        assert complex_gamma_arg(y) == pytest.approx(-arg_gamma_series(y), abs=1e-10)

    @pytest.mark.parametrize("y,expected", [
        (0.2353, 0.13074292528940146),
        (1.0, 0.3016403204675332),
        (5.0, 2.4672867325646619),
        (49.0, 2.0303699981979775),
    ])
    def test_reference_values(self, y, expected):
        assert complex_gamma_arg(y) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("y", [0.01, 0.2353, 3.7, 22.0])
    def test_odd_in_y(self, y):
        assert complex_gamma_arg(-y) == pytest.approx(-complex_gamma_arg(y), abs=1e-14)

    @pytest.mark.parametrize("y", [50.0, -50.0, 1e6, math.inf, math.nan])
    def test_validity_range(self, y):
        with pytest.raises(OutOfValidityRange):
            complex_gamma_arg(y)


class TestCompleteEllipticE:
    def test_endpoints(self):
        assert complete_elliptic_e(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert complete_elliptic_e(1.0) == 1.0

    def test_half(self):
        assert complete_elliptic_e(0.5) == pytest.approx(1.3506438810476755, abs=1e-12)

    @pytest.mark.parametrize("m", [0.05, 0.25, 0.5, 0.75, 0.9, 0.9827, 0.999])
    def test_against_quadrature_oracle(self, m):
        oracle, err = quad(lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2),
                           0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-13)
        assert err < 1e-10
        assert complete_elliptic_e(m) == pytest.approx(oracle, abs=1e-12)

    def test_monotone_decreasing(self):
        ms = np.linspace(0.0, 1.0, 51)
        values = [complete_elliptic_e(float(m)) for m in ms]
        assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("m", [-0.1, 1.0001, 5.0])
    def test_domain(self, m):
        with pytest.raises(OutOfDomain):
            complete_elliptic_e(m)


class TestBesselJ:
    def test_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(50, 0.0) == 0.0

    def test_first_zero_of_j0(self):
        # Bracketing root-find on the implementation's series branch.
        root = brentq(lambda x: bessel_j(0, x), 2.0, 3.0, xtol=1e-13)
        assert root == pytest.approx(2.4048255576957728, abs=1e-9)

    @pytest.mark.parametrize("n,x,expected", [
        (0, 0.2353, 0.98620630083702288),
        (1, 2.5, 0.49709410246427405),
        (3, 7.5, -0.25806091319346031),
        (10, 4.0, 0.00019504055466003451),
        (0, 100.0, 0.019985850304223122),
        (25, 50.0, -0.09842675129983583),
        (50, 10000.0, 0.0074956304928516628),
    ])
    def test_reference_values(self, n, x, expected):
        assert bessel_j(n, x) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("x", [0.5, 2.0, 5.0, 10.0])
    def test_normalization_identity(self, x):
        total = bessel_j(0, x) ** 2 + 2.0 * sum(bessel_j(n, x) ** 2 for n in range(1, 41))
        assert total == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("x", [1.0, 4.0, 11.5, 13.0, 20.0])
    @pytest.mark.parametrize("n", [1, 4, 10])
    def test_three_term_recurrence(self, n, x):
        lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
        rhs = 2.0 * n / x * bessel_j(n, x)
        assert lhs == pytest.approx(rhs, abs=1e-8)

    def test_series_and_miller_branches_agree(self):
        # The branch switch sits at x = 12.
        for n in (0, 1, 5):
            assert bessel_j(n, 11.999999) == pytest.approx(bessel_j(n, 12.000001), abs=1e-6)

    @pytest.mark.parametrize("n,x", [(-1, 1.0), (51, 1.0), (0, -0.5), (0, 1.0001e4)])
    def test_validity_range(self, n, x):
        with pytest.raises(OutOfValidityRange):
            bessel_j(n, x)

    def test_non_integer_order_rejected(self):
        with pytest.raises(OutOfValidityRange):
            bessel_j(1.5, 1.0)  # type: ignore[arg-type]
