"""Group integrals: determinant kernels, Weyl sums, Monte Carlo, quadrature."""

import math

import numpy as np
import pytest

from rmtlab import (
    HcizInput,
    HeatKernelInput,
    PseudoSignature,
    RngStream,
    compact_normalization,
    disk_quadrature_rank1,
    haar_mc_hciz,
    haar_unitary,
    hciz_compact_det,
    hciz_pseudo_det,
    heat_kernel,
    heat_residual,
    pseudo_convergence_flag,
    weyl_sum,
)


class TestHcizInput:
    def test_rejects_degenerate_and_mismatched(self):
        with pytest.raises(ValueError):
            HcizInput(x=(1.0, 1.0 + 1e-12), y=(0.0, 1.0))
        with pytest.raises(ValueError):
            HcizInput(x=(1.0, 2.0), y=(0.0,))


class TestCompactDet:
    def test_haar_normalization_limit(self):
        # as X -> 0 the integrand -> 1, so the normalized integral -> 1
        inp = HcizInput(x=(1e-5, 2e-5, 3e-5), y=(0.4, 1.1, 2.2))
        assert hciz_compact_det(inp) == pytest.approx(1.0, abs=1e-3)

    def test_n1_closed_form(self):
        # N=1: the integral is just e^{i x y}
        inp = HcizInput(x=(0.7,), y=(1.3,))
        assert hciz_compact_det(inp) == pytest.approx(np.exp(1j * 0.7 * 1.3), rel=1e-12)

    def test_n2_closed_form(self):
        # N=2 direct angular integral: c_2 (e^{i(x1 y1 + x2 y2)} - e^{i(x1 y2 + x2 y1)})
        # / ((x1-x2)(y1-y2)) with c_2 = 1/i
        x, y = (0.9, -0.3), (1.4, 0.2)
        expected = ((np.exp(1j * (x[0] * y[0] + x[1] * y[1]))
                     - np.exp(1j * (x[0] * y[1] + x[1] * y[0])))
                    / (1j * (x[0] - x[1]) * (y[0] - y[1])))
        assert hciz_compact_det(HcizInput(x=x, y=y)) == pytest.approx(expected, rel=1e-12)

    def test_symmetry_in_x_and_y_exchange(self):
        inp = HcizInput(x=(0.3, 1.2, -0.8), y=(0.5, -0.1, 2.0))
        swapped = HcizInput(x=inp.y, y=inp.x)
        assert hciz_compact_det(inp) == pytest.approx(hciz_compact_det(swapped), rel=1e-12)


class TestWeylSum:
    def test_compact_identity(self):
        gen = RngStream(seed=31).generator()
        for n in (2, 3, 4):
            x = tuple(np.sort(gen.uniform(-2, 2, n)) + 0.3 * np.arange(n))
            y = tuple(np.sort(gen.uniform(-2, 2, n)) + 0.3 * np.arange(n))
            inp = HcizInput(x=x, y=y)
            lhs = hciz_compact_det(inp)
            rhs = compact_normalization(n) * weyl_sum(inp, (n,))
            assert lhs == pytest.approx(rhs, rel=1e-11)

    def test_pseudo_identity(self):
        inp = HcizInput(x=(1.5, 0.4, -0.9), y=(0.8, -0.2, -1.7))
        lhs = hciz_pseudo_det(inp, PseudoSignature(2, 1)).value
        rhs = (-1.0) ** 2 * weyl_sum(inp, (2, 1))
        assert lhs == pytest.approx(rhs, rel=1e-11)

    def test_guards(self):
        inp = HcizInput(x=(1.0, 2.0), y=(0.0, 1.0))
        with pytest.raises(ValueError):
            weyl_sum(inp, (3,))
        big = HcizInput(x=tuple(range(9)), y=tuple(range(9)))
        with pytest.raises(ValueError):
            weyl_sum(big, (9,))


class TestHaarMC:
    def test_haar_unitary_is_unitary(self):
        u = haar_unitary(5, RngStream(seed=32))
        assert np.max(np.abs(u @ u.conj().T - np.eye(5))) < 1e-12

    def test_matches_determinant_kernel(self):
        inp = HcizInput(x=(0.8, -0.5), y=(1.2, 0.1))
        det_val = hciz_compact_det(inp)
        est = haar_mc_hciz(inp, 50_000, RngStream(seed=33), threads=2)
        assert abs(est.mean.real - det_val.real) <= 3 * est.stderr_real
        assert abs(est.mean.imag - det_val.imag) <= 3 * est.stderr_imag

    def test_thread_count_invariance(self):
        inp = HcizInput(x=(0.8, -0.5), y=(1.2, 0.1))
        a = haar_mc_hciz(inp, 9_000, RngStream(seed=34), threads=1)
        b = haar_mc_hciz(inp, 9_000, RngStream(seed=34), threads=3)
        assert a == b


class TestPseudoUnitary:
    def test_convergence_flag(self):
        sig = PseudoSignature(1, 1)
        good = HcizInput(x=(0.5 + 1j, -0.3), y=(1.0, 0.0))
        assert pseudo_convergence_flag(good, sig)  # Im[(x1-x2)(y1-y2)] = 1 > 0
        bad = HcizInput(x=(0.5 - 1j, -0.3), y=(1.0, 0.0))
        assert not pseudo_convergence_flag(bad, sig)

    def test_disk_quadrature_matches_closed_form(self):
        inp = HcizInput(x=(0.5 + 1j, -0.3), y=(1.0, 0.0))
        closed = hciz_pseudo_det(inp, PseudoSignature(1, 1)).value
        quad = disk_quadrature_rank1(inp, (400, 256))
        assert abs(quad - closed) <= 1e-6 * abs(closed)

    def test_disk_quadrature_rejects_divergent_input(self):
        inp = HcizInput(x=(0.5 - 1j, -0.3), y=(1.0, 0.0))
        with pytest.raises(ValueError):
            disk_quadrature_rank1(inp)

    def test_coarse_grid_warns(self):
        # many oscillations vs few radial nodes must be flagged, not silent
        inp = HcizInput(x=(30.0 + 0.05j, 0.0), y=(30.0, 0.0))
        with pytest.warns(RuntimeWarning):
            disk_quadrature_rank1(inp, (40, 64))


class TestHeatKernel:
    def test_free_kernel_no_permutation(self):
        # blocks (1,1): K = (2 pi t)^{-1} [e^{-(a-b)^2/2t} e^{-(a'-b')^2/2t}]
        # with no within-block exchange terms
        inp = HeatKernelInput(alpha=(0.4, -0.3), beta=(0.1, 0.2), t=0.8)
        expected = (math.exp(-(0.3**2 + 0.5**2) / 1.6) / (2 * math.pi * 0.8))
        assert heat_kernel(inp, PseudoSignature(1, 1)) == pytest.approx(expected, rel=1e-12)

    def test_block_antisymmetry_is_exact(self):
        sig = PseudoSignature(2, 1)
        a = heat_kernel(HeatKernelInput(alpha=(0.7, -0.4, 0.1), beta=(0.6, -0.5, 0.2), t=0.9), sig)
        b = heat_kernel(HeatKernelInput(alpha=(-0.4, 0.7, 0.1), beta=(0.6, -0.5, 0.2), t=0.9), sig)
        assert a + b == 0.0
        assert a != 0.0

    def test_heat_equation_residual(self):
        inp = HeatKernelInput(alpha=(0.9, -0.6, 0.1), beta=(0.8, -0.7, 0.3), t=1.1)
        sig = PseudoSignature(2, 1)
        k = heat_kernel(inp, sig)
        assert heat_residual(inp, sig) <= 1e-5 * abs(k)

    def test_guards(self):
        with pytest.raises(ValueError):
            HeatKernelInput(alpha=(0.1, 0.2), beta=(0.0, 0.1), t=-1.0)
        with pytest.raises(ValueError):
            heat_kernel(HeatKernelInput(alpha=(0.1,), beta=(0.0,), t=1.0),
                        PseudoSignature(2, 1))
