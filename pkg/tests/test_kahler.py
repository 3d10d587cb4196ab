"""Rank-1 coset geometry: potentials, momentum maps, localization."""

import math

import numpy as np
import pytest

from rmtlab import (
    CosetPoint,
    CosetSpace,
    GroupElement2x2,
    RngStream,
    dh_fixed_point_sum,
    dh_integral_numeric,
    generator_basis,
    group_inverse,
    kahler_potential,
    localizability_residual,
    metric_density,
    moebius_action,
    momentum_maps,
    momentum_t_h,
    random_group_element,
    rho_matrix,
)


class TestPotentialsAndMaps:
    def test_potential_values(self):
        assert kahler_potential(CosetSpace.COMPACT_CP1, 1.0 + 0j) == pytest.approx(math.log(2))
        assert kahler_potential(CosetSpace.NONCOMPACT_DISK, 0.5 + 0j) == pytest.approx(math.log(0.75))

    def test_disk_chart_boundary(self):
        with pytest.raises(ValueError):
            kahler_potential(CosetSpace.NONCOMPACT_DISK, 1.0 + 0j)

    def test_momentum_ranges(self):
        # T_h maps the sphere chart onto (-1, 1] and the disk chart onto [1, inf)
        assert momentum_t_h(CosetSpace.COMPACT_CP1, np.array([0.0]))[0] == 1.0
        assert momentum_t_h(CosetSpace.COMPACT_CP1, np.array([100.0]))[0] == pytest.approx(-1.0, abs=1e-3)
        assert momentum_t_h(CosetSpace.NONCOMPACT_DISK, np.array([0.0]))[0] == 1.0
        assert momentum_t_h(CosetSpace.NONCOMPACT_DISK, np.array([0.9]))[0] == pytest.approx(1.81 / 0.19)

    def test_momentum_maps_match_projector_traces(self):
        # T_a = -Tr(rho tau_a) ties the maps to the projector for each generator
        for space in CosetSpace:
            z = 0.3 - 0.4j
            rho = rho_matrix(space, z)
            tau_q, tau_mq, tau_h = generator_basis(space)
            maps = momentum_maps(space, z)
            assert -np.trace(rho @ tau_q) == pytest.approx(maps.T_q, rel=1e-12)
            assert -np.trace(rho @ tau_mq) == pytest.approx(maps.T_minus_q, rel=1e-12)
            assert -np.trace(rho @ tau_h) == pytest.approx(maps.T_h, rel=1e-12)

    def test_total_mass(self):
        # metric_density integrates to exactly 1 over the sphere chart;
        # radial quadrature with the compactifying substitution r = u/(1-u)
        nodes, weights = np.polynomial.legendre.leggauss(200)
        u = (nodes + 1.0) / 2.0
        w = weights / 2.0
        r = u / (1.0 - u)
        dr = 1.0 / (1.0 - u) ** 2
        vals = np.array([metric_density(CosetSpace.COMPACT_CP1, complex(ri)) for ri in r])
        mass = float(np.sum(w * vals * 2.0 * np.pi * r * dr))
        assert mass == pytest.approx(1.0, abs=1e-6)


class TestGroupAction:
    def test_group_elements_satisfy_defining_relation(self):
        gen = RngStream(seed=42).generator()
        lam = {CosetSpace.COMPACT_CP1: np.eye(2),
               CosetSpace.NONCOMPACT_DISK: np.diag([1.0, -1.0])}
        for space in CosetSpace:
            g = random_group_element(space, gen).matrix
            assert np.max(np.abs(g.conj().T @ lam[space] @ g - lam[space])) < 1e-12

    def test_group_inverse_is_exact_inverse(self):
        gen = RngStream(seed=43).generator()
        for space in CosetSpace:
            g = random_group_element(space, gen)
            assert np.max(np.abs(g.matrix @ group_inverse(space, g) - np.eye(2))) < 1e-12

    def test_moebius_pole_is_an_error(self):
        g = GroupElement2x2(a=0.0, b=1.0, c=1.0, d=0.0)
        with pytest.raises(ValueError):
            moebius_action(g, CosetPoint(z=0.0))

    def test_disk_preserved_by_pseudo_unitary_action(self):
        gen = RngStream(seed=44).generator()
        g = random_group_element(CosetSpace.NONCOMPACT_DISK, gen)
        p = moebius_action(g, CosetPoint(z=0.6 + 0.2j))
        assert abs(p.z) < 1.0


class TestLocalization:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 5.0])
    def test_sphere_integral_equals_sine_ratio(self, t):
        numeric = dh_integral_numeric(CosetSpace.COMPACT_CP1, t)
        fixed = dh_fixed_point_sum(CosetSpace.COMPACT_CP1, t)
        assert abs(numeric - math.sin(t) / t) < 1e-9
        assert abs(fixed - math.sin(t) / t) < 1e-14

    @pytest.mark.parametrize("t", [1j, 2j, 1 + 1j])
    def test_disk_integral_matches_fixed_point(self, t):
        numeric = dh_integral_numeric(CosetSpace.NONCOMPACT_DISK, t)
        fixed = dh_fixed_point_sum(CosetSpace.NONCOMPACT_DISK, t)
        assert abs(numeric - fixed) < 1e-9 * abs(fixed)

    def test_disk_requires_damping(self):
        with pytest.raises(ValueError):
            dh_integral_numeric(CosetSpace.NONCOMPACT_DISK, 1.0)
        with pytest.raises(ValueError):
            dh_fixed_point_sum(CosetSpace.NONCOMPACT_DISK, 0.0)

    def test_momentum_map_pdes_hold(self):
        assert localizability_residual(CosetSpace.COMPACT_CP1, CosetPoint(z=0.4 + 0.2j)) < 1e-7
        assert localizability_residual(CosetSpace.NONCOMPACT_DISK, CosetPoint(z=-0.3 + 0.5j)) < 1e-7

    def test_non_localizable_hamiltonian_fails_loudly(self):
        resid = localizability_residual(CosetSpace.COMPACT_CP1, CosetPoint(z=0.4 + 0.2j),
                                        hamiltonian=lambda z: float(abs(z) ** 2))
        assert resid > 1e-2


class TestTransformationLaws:
    @pytest.mark.parametrize("space", list(CosetSpace))
    def test_cocycle_and_conjugation(self, space):
        gen = RngStream(seed=45).generator()
        for _ in range(25):
            g = random_group_element(space, gen)
            r_max = 0.9 if space is CosetSpace.NONCOMPACT_DISK else 2.0
            z = r_max * math.sqrt(gen.uniform(0.01, 1.0)) * np.exp(2j * np.pi * gen.uniform())
            p = CosetPoint(z=complex(z))
            gp = moebius_action(g, p)
            cocycle = (kahler_potential(space, gp) - kahler_potential(space, p)
                       + 2.0 * complex(np.log(g.c * p.z + g.d)).real)
            assert abs(cocycle) < 1e-12
            conj = g.matrix @ rho_matrix(space, p) @ group_inverse(space, g)
            moved = rho_matrix(space, gp)
            # projector entries grow like 1/(1-|gz|^2) near the chart edge,
            # so the defect is measured relative to the matrix scale
            scale = max(1.0, float(np.max(np.abs(moved))))
            assert np.max(np.abs(moved - conj)) < 1e-12 * scale
