"""Exact finite-N correlator representation and the Gram-reduction identity."""

import math

import numpy as np
import pytest

from rmtlab import (
    ExactRepParams,
    RngStream,
    SpectralParams,
    TheoremOneInstance,
    correlator_exact,
    correlator_mc,
    gram_gaussian_check,
    gram_reduction_constant,
    norm_constant,
    positive_det_integral,
    wishart_mc_check,
)


def _cell(N, n_B, n_F, **overrides):
    mu1 = (0.4 + 1.0j, -0.6 + 1.2j)[:n_B]
    mu2 = (-0.2 - 1.0j, 0.5 - 1.3j)[:n_B]
    muf = (0.7, -0.3, 1.1, -0.9)[:2 * n_F]
    sp = SpectralParams(n_B=n_B, n_F=n_F, mu_1B=mu1, mu_2B=mu2, mu_F=muf)
    return ExactRepParams(N=N, spectral=sp, **overrides)


class TestNormConstant:
    def test_frozen_examples(self):
        # closed-form evaluations of the constant: N^{2 n_B(N-n_B)+n_B+n_F}
        # x phase / ((2 pi)^{n_F} prod_{k<=2n_B} (N-k)!)
        assert norm_constant(5, 2, 0, calibrated=False) == pytest.approx(
            5**14 / 288, rel=1e-12)
        for n in (3, 4):
            assert norm_constant(n, 0, 1, calibrated=False) == pytest.approx(
                (-1) ** n * n / (2 * math.pi), rel=1e-12)

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            norm_constant(200, 2, 2)


class TestCorrelatorExact:
    def test_empty_product_is_one(self):
        res = correlator_exact(_cell(6, 0, 0))
        assert res.value == 1.0 + 0.0j
        assert res.error == 0.0
        assert res.converged

    def test_scalar_closed_form(self):
        # N=1: H ~ Normal(0,1), E[(-i a - H)(-i b - H)] = 1 - a b
        for a, b in ((0.7, 0.3), (1.2, -0.4)):
            sp = SpectralParams(n_B=0, n_F=1, mu_1B=(), mu_2B=(), mu_F=(a, b))
            res = correlator_exact(ExactRepParams(N=1, spectral=sp))
            assert res.value == pytest.approx(1.0 - a * b, rel=1e-10)
            assert res.converged

    def test_pure_boson_cell_matches_monte_carlo(self):
        params = _cell(4, 1, 0)
        res = correlator_exact(params)
        assert res.converged
        est = correlator_mc(params.spectral, N=4, samples=120_000,
                            rng=RngStream(seed=51), threads=2)
        assert abs(est.mean.real - res.value.real) <= 4 * est.stderr_real
        assert abs(est.mean.imag - res.value.imag) <= 4 * est.stderr_imag

    def test_mixed_cell_matches_monte_carlo(self):
        params = _cell(4, 1, 1)
        res = correlator_exact(params)
        assert res.converged
        est = correlator_mc(params.spectral, N=4, samples=120_000,
                            rng=RngStream(seed=52), threads=2)
        assert abs(est.mean.real - res.value.real) <= 4 * est.stderr_real
        assert abs(est.mean.imag - res.value.imag) <= 4 * est.stderr_imag

    def test_numerator_permutation_invariance(self):
        sp = SpectralParams(n_B=0, n_F=2, mu_1B=(), mu_2B=(),
                            mu_F=(0.7, -0.3, 1.1, -0.9))
        swapped = SpectralParams(n_B=0, n_F=2, mu_1B=(), mu_2B=(),
                                 mu_F=(1.1, -0.3, 0.7, -0.9))
        a = correlator_exact(ExactRepParams(N=5, spectral=sp))
        b = correlator_exact(ExactRepParams(N=5, spectral=swapped))
        assert a.value == pytest.approx(b.value, rel=1e-10)

    def test_grid_refinement_is_within_reported_error(self):
        params = _cell(6, 1, 1)
        res = correlator_exact(params)
        fine = correlator_exact(_cell(6, 1, 1, n_q=96, n_p=400))
        assert abs(res.value - fine.value) <= 5 * max(res.error, 1e-13 * abs(res.value))

    def test_validation(self):
        with pytest.raises(ValueError):  # N < 2 n_B leaves a negative power
            _cell(3, 2, 0)
        with pytest.raises(ValueError):  # coincident numerator arguments
            sp = SpectralParams(n_B=0, n_F=1, mu_1B=(), mu_2B=(), mu_F=(0.5, 0.5))
            ExactRepParams(N=4, spectral=sp)
        with pytest.raises(ValueError):  # quadrature needs the rotated form
            sp = SpectralParams(n_B=0, n_F=1, mu_1B=(), mu_2B=(), mu_F=(0.5, -0.5),
                                rotated_fermionic=False)
            ExactRepParams(N=4, spectral=sp)


class TestGramReduction:
    @pytest.mark.parametrize("n,m", [(3, 1), (4, 1), (4, 2), (5, 2)])
    @pytest.mark.parametrize("kind", ["real", "complex"])
    def test_gaussian_identity(self, n, m, kind):
        lhs, rhs = gram_gaussian_check(TheoremOneInstance(N=n, m=m, field_kind=kind))
        assert rhs == pytest.approx(lhs, rel=1e-12)

    def test_constant_values(self):
        # m=1 closed forms: complex C_{N,1} = (2 pi)^N / (N-1)!,
        # real C = pi^{N/2} / Gamma(N/2)
        assert gram_reduction_constant(TheoremOneInstance(N=4, m=1, field_kind="complex")) \
            == pytest.approx((2 * math.pi) ** 4 / math.factorial(3), rel=1e-12)
        assert gram_reduction_constant(TheoremOneInstance(N=5, m=1, field_kind="real")) \
            == pytest.approx(math.pi ** 2.5 / math.gamma(2.5), rel=1e-12)

    def test_positive_det_integral_against_quadrature(self):
        # independent oracle: direct 3-dim quadrature over positive 2x2
        # Hermitian Q = [[q11, x+iy], [x-iy, q22]] of det(Q)^{N-m} e^{-tr Q}
        # with volume element 2 dq11 dq22 dx dy (complex convention)
        inst = TheoremOneInstance(N=4, m=2, field_kind="complex")
        nodes, weights = np.polynomial.laguerre.laggauss(60)
        q1 = nodes[:, None, None]
        q2 = nodes[None, :, None]
        r_nodes, r_weights = np.polynomial.legendre.leggauss(120)
        # off-diagonal radius r in [0, sqrt(q1 q2)): det = q1 q2 - r^2 > 0
        u = (r_nodes + 1) / 2
        w_u = r_weights / 2
        rmax = np.sqrt(q1 * q2)
        r = u[None, None, :] * rmax
        det_q = q1 * q2 - r**2
        integrand = det_q ** (inst.N - inst.m) * 2 * np.pi * r * rmax * w_u
        total = 2.0 * float(np.einsum("i,j,ijk->", weights, weights, integrand))
        assert positive_det_integral(inst) == pytest.approx(total, rel=1e-8)

    def test_validation(self):
        with pytest.raises(ValueError):
            TheoremOneInstance(N=3, m=3, field_kind="real")
        with pytest.raises(ValueError):
            TheoremOneInstance(N=2, m=3, field_kind="complex")
        with pytest.raises(ValueError):
            TheoremOneInstance(N=4, m=1, field_kind="quaternion")


class TestWishartMC:
    def test_moments_within_three_sigma(self):
        inst = TheoremOneInstance(N=5, m=2, field_kind="complex")
        rep = wishart_mc_check(inst, 30_000, RngStream(seed=53))
        assert rep.tr_expected == 10.0  # N m
        assert rep.det_expected == 20.0  # N (N-1)
        assert abs(rep.tr_mean - rep.tr_expected) <= 3 * rep.tr_stderr
        assert abs(rep.det_mean - rep.det_expected) <= 3 * rep.det_stderr
        assert rep.min_eigenvalue > 0.0

    def test_guards(self):
        inst = TheoremOneInstance(N=5, m=2, field_kind="real")
        with pytest.raises(ValueError):
            wishart_mc_check(inst, 30_000, RngStream(seed=1))
        inst_c = TheoremOneInstance(N=5, m=2, field_kind="complex")
        with pytest.raises(ValueError):
            wishart_mc_check(inst_c, 100, RngStream(seed=1))
