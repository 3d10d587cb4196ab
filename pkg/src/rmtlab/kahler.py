"""Rank-1 Kahler geometry on the sphere U(2)/T and the disk U(1,1)/T.

Both spaces are charted by a single complex coordinate z (|z| < 1 on the disk).
Closed forms implemented here:

    potential   K = ln(1 + z zbar)            (sphere)     ln(1 - z zbar)  (disk)
    density     1/(pi (1+r^2)^2)                           1/(pi (1-r^2)^2)
    T_h         (1-r^2)/(1+r^2)                            (1+r^2)/(1-r^2)
    T_q         -zbar/(1+r^2)                              zbar/(1-r^2)
    T_{-q}      z/(1+r^2)                                  -z/(1-r^2)

with the generator basis tau_q = [[0,1],[0,0]], tau_{-q} = -lam tau_q^dag lam,
tau_h = diag(1,-1), where lam = 1 (sphere) or diag(1,-1) (disk), and
T_a = -Tr(rho tau_a). Densities are fixed positive and the sphere volume is
normalized to 1; the holomorphic (1,1)-form coefficient entering the momentum
PDEs is w_form = (i/2pi) d_z d_zbar K, which is -i/(2pi(1-r^2)^2) on the disk.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .matcore import RngLike, as_generator


class CosetSpace(enum.Enum):
    COMPACT_CP1 = "compact_cp1"
    NONCOMPACT_DISK = "noncompact_disk"


@dataclass(frozen=True)
class CosetPoint:
    """Chart coordinate of a coset-space point."""

    z: complex

    def __post_init__(self) -> None:
        z = complex(self.z)
        object.__setattr__(self, "z", z)
        if not np.isfinite(z.real) or not np.isfinite(z.imag):
            raise ValueError("coordinate must be finite")


@dataclass(frozen=True)
class MomentumTriple:
    """Momentum-map values for the generators (q, -q, h); T_h is real."""

    T_q: complex
    T_minus_q: complex
    T_h: float


@dataclass(frozen=True)
class GroupElement2x2:
    """2x2 element of U(2) or U(1,1), validated to 1e-12 at construction."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        if not (self.is_unitary() or self.is_pseudo_unitary()):
            raise ValueError("element is neither unitary nor pseudo-unitary to 1e-12")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "GroupElement2x2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(a=m[0, 0], b=m[0, 1], c=m[1, 0], d=m[1, 1])

    def is_unitary(self, tol: float = 1e-12) -> bool:
        g = self.matrix
        return bool(np.max(np.abs(g.conj().T @ g - np.eye(2))) <= tol)

    def is_pseudo_unitary(self, tol: float = 1e-12) -> bool:
        g = self.matrix
        lam = np.diag([1.0, -1.0])
        return bool(np.max(np.abs(g.conj().T @ lam @ g - lam)) <= tol)


_LAM = {CosetSpace.COMPACT_CP1: np.eye(2), CosetSpace.NONCOMPACT_DISK: np.diag([1.0, -1.0])}

TAU_Q = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
TAU_H = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def generator_basis(space: CosetSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(tau_q, tau_{-q}, tau_h) with tau_{-q} = -lam tau_q^dag lam."""
    lam = _LAM[space]
    tau_mq = -lam @ TAU_Q.conj().T @ lam
    return TAU_Q, tau_mq, TAU_H


def _as_z(p: Union[CosetPoint, complex]) -> complex:
    return p.z if isinstance(p, CosetPoint) else complex(p)


def _require_point(space: CosetSpace, p: Union[CosetPoint, complex]) -> complex:
    z = _as_z(p)
    if space is CosetSpace.NONCOMPACT_DISK and abs(z) >= 1.0:
        raise ValueError(f"disk chart requires |z| < 1, got |z| = {abs(z)}")
    return z


def kahler_potential(space: CosetSpace, p: Union[CosetPoint, complex]) -> float:
    """K = ln(1 + |z|^2) on the sphere, ln(1 - |z|^2) on the disk."""
    z = _require_point(space, p)
    r2 = abs(z) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return float(np.log1p(r2))
    return float(np.log1p(-r2))


def metric_density(space: CosetSpace, p: Union[CosetPoint, complex]) -> float:
    """Positive density of the invariant 2-form against dx dy (sphere mass = 1)."""
    z = _require_point(space, p)
    r2 = abs(z) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return float(1.0 / (np.pi * (1.0 + r2) ** 2))
    return float(1.0 / (np.pi * (1.0 - r2) ** 2))


def form_coefficient(space: CosetSpace, z: complex) -> complex:
    """w_form = (i/2pi) d_z d_zbar K; the signed coefficient in the momentum PDEs."""
    r2 = abs(z) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return 1j / (2.0 * np.pi * (1.0 + r2) ** 2)
    return -1j / (2.0 * np.pi * (1.0 - r2) ** 2)


def rho_matrix(space: CosetSpace, p: Union[CosetPoint, complex]) -> np.ndarray:
    """Rank-1 (pseudo-)projector with rho(0) = diag(0, 1) and T_a = -Tr(rho tau_a)."""
    z = _require_point(space, p)
    r2 = abs(z) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return np.array([[r2, z], [np.conj(z), 1.0]], dtype=complex) / (1.0 + r2)
    return np.array([[-r2, z], [-np.conj(z), 1.0]], dtype=complex) / (1.0 - r2)


def momentum_t_h(space: CosetSpace, z: np.ndarray) -> np.ndarray:
    """Vectorized T_h over an array of chart coordinates."""
    r2 = np.abs(np.asarray(z, dtype=complex)) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return (1.0 - r2) / (1.0 + r2)
    if np.any(r2 >= 1.0):
        raise ValueError("disk chart requires |z| < 1")
    return (1.0 + r2) / (1.0 - r2)


def momentum_maps(space: CosetSpace, p: Union[CosetPoint, complex]) -> MomentumTriple:
    """Momentum maps of the three generators; consistent with rho_matrix."""
    z = _require_point(space, p)
    r2 = abs(z) ** 2
    if space is CosetSpace.COMPACT_CP1:
        return MomentumTriple(T_q=-np.conj(z) / (1.0 + r2),
                              T_minus_q=z / (1.0 + r2),
                              T_h=float((1.0 - r2) / (1.0 + r2)))
    return MomentumTriple(T_q=np.conj(z) / (1.0 - r2),
                          T_minus_q=-z / (1.0 - r2),
                          T_h=float((1.0 + r2) / (1.0 - r2)))


def moebius_action(g: GroupElement2x2, p: Union[CosetPoint, complex]) -> CosetPoint:
    """z -> (a z + b)/(c z + d); errors at the excluded pole c z + d = 0."""
    z = _as_z(p)
    denom = g.c * z + g.d
    if abs(denom) == 0.0:
        raise ValueError(f"Moebius action has a pole at z = {z}: c*z + d = 0")
    return CosetPoint(z=(g.a * z + g.b) / denom)


def group_inverse(space: CosetSpace, g: GroupElement2x2) -> np.ndarray:
    """Exact inverse from the group relation: g^dag (U(2)) or lam g^dag lam (U(1,1))."""
    lam = _LAM[space]
    return lam @ g.matrix.conj().T @ lam


def random_group_element(space: CosetSpace, rng: RngLike) -> GroupElement2x2:
    """Haar-ish random element: exp(i M) for U(2), exp(i lam M) for U(1,1)."""
    import scipy.linalg

    gen = as_generator(rng)
    x = gen.standard_normal((2, 2)) + 1j * gen.standard_normal((2, 2))
    m = (x + x.conj().T) / 2.0
    lam = _LAM[space]
    return GroupElement2x2.from_matrix(scipy.linalg.expm(1j * lam @ m))


# ----------------------------------------------------------------------
# Duistermaat-Heckman pair
# ----------------------------------------------------------------------

def _t_h_grid(space: CosetSpace, u: np.ndarray) -> np.ndarray:
    """Chart radius for given T_h values u (inverse of the radial substitution)."""
    if space is CosetSpace.COMPACT_CP1:
        return np.sqrt((1.0 - u) / (1.0 + u))
    return np.sqrt((u - 1.0) / (u + 1.0))


def dh_integral_numeric(space: CosetSpace, t: complex,
                        grid: tuple[int, int] = (400, 64)) -> complex:
    """Quadrature of integral over the space of Omega * exp(i t T_h).

    Gauss-Legendre in the radial substitution variable u = T_h (which makes the
    invariant measure uniform) times a trapezoid rule in angle. On the disk the
    integral only converges for Im t > 0 and the radial domain is truncated
    where the damping exp(-Im t * (u-1)) has decayed below 1e-20.
    """
    t = complex(t)
    n_rad, n_ang = grid
    if n_rad < 2 or n_ang < 1:
        raise ValueError("grid must have at least 2 radial and 1 angular node")
    if space is CosetSpace.NONCOMPACT_DISK:
        if t.imag <= 0:
            raise ValueError("disk integral converges only for Im t > 0")
        u_lo, u_hi = 1.0, 1.0 + 46.1 / t.imag
    else:
        u_lo, u_hi = -1.0, 1.0
    nodes, weights = np.polynomial.legendre.leggauss(n_rad)
    u = u_lo + (u_hi - u_lo) * (nodes + 1.0) / 2.0
    w = weights * (u_hi - u_lo) / 2.0

    r = _t_h_grid(space, u)
    theta = 2.0 * np.pi * np.arange(n_ang) / n_ang
    z = r[:, None] * np.exp(1j * theta)[None, :]
    f = np.exp(1j * t * momentum_t_h(space, z))
    # measure: Omega r dr dtheta = du dtheta / 2pi, angular weight 1/n_ang each
    return complex(np.sum(w[:, None] * f) / (2.0 * n_ang))


def dh_fixed_point_sum(space: CosetSpace, t: complex) -> complex:
    """Stationary-phase fixed-point sum; exact for these spaces.

    Sphere: two fixed points (z = 0 and the antipode), (e^{it} - e^{-it})/(2it),
    with limit 1 at t = 0. Disk: single fixed point z = 0, e^{it}/(-2it);
    refuses t = 0 (divergent volume) and requires Im t > 0.
    """
    t = complex(t)
    if space is CosetSpace.COMPACT_CP1:
        if t == 0:
            return 1.0 + 0.0j
        return (np.exp(1j * t) - np.exp(-1j * t)) / (2j * t)
    if t == 0:
        raise ValueError("disk volume is divergent: t = 0 has no finite limit")
    if t.imag <= 0:
        raise ValueError("disk sum defined for Im t > 0 (convergence of the integral)")
    return np.exp(1j * t) / (-2j * t)


# ----------------------------------------------------------------------
# finite-difference PDE residuals
# ----------------------------------------------------------------------

# fourth-order central stencils: first derivative (/12h) and second (/12h^2);
# the higher order keeps truncation below the 1e-6 residual budget even where
# chart factors like (1 - |z|^2)^-1 amplify higher derivatives
_D1 = ((2, -1.0), (1, 8.0), (-1, -8.0), (-2, 1.0))
_D2 = ((2, -1.0), (1, 16.0), (0, -30.0), (-1, 16.0), (-2, -1.0))


def _stencil1(f: Callable[[complex], complex], z: complex, step: complex, h: float) -> complex:
    return sum(c * f(z + k * step) for k, c in _D1) / (12 * h)


def _stencil2(f: Callable[[complex], complex], z: complex, step: complex, h: float) -> complex:
    return sum(c * f(z + k * step) for k, c in _D2) / (12 * h**2)


def _wirtinger(f: Callable[[complex], complex], z: complex, h: float):
    """(f, d_z f, d_zbar f, d_z d_zbar f) by 4th-order central differences."""
    fc = f(z)
    fx = _stencil1(f, z, h, h)
    fy = _stencil1(f, z, 1j * h, h)
    lap = _stencil2(f, z, h, h) + _stencil2(f, z, 1j * h, h)
    return fc, (fx - 1j * fy) / 2, (fx + 1j * fy) / 2, lap / 4


def _second_wirtinger(f: Callable[[complex], complex], z: complex, h: float):
    """(d_z^2 f, d_zbar^2 f) by 4th-order central differences."""
    fxx = _stencil2(f, z, h, h)
    fyy = _stencil2(f, z, 1j * h, h)
    fxy = _stencil1(lambda w: _stencil1(f, w, 1j * h, h), z, h, h)
    dzz = (fxx - fyy - 2j * fxy) / 4
    dzbzb = (fxx - fyy + 2j * fxy) / 4
    return dzz, dzbzb


def kappa_fields(space: CosetSpace, z: complex) -> dict[str, tuple[complex, complex]]:
    """(kappa^z, kappa^zbar) for each generator at z.

    kappa^z of tau = [[A,B],[C,D]] is B + (A-D) z - C z^2 (the holomorphic
    Moebius flow); kappa^zbar is the same coefficient field, in zbar, of the
    reflected generator -lam tau^dag lam.
    """
    lam = _LAM[space]
    tau_q, tau_mq, tau_h = generator_basis(space)
    out = {}
    for name, tau in (("q", tau_q), ("minus_q", tau_mq), ("h", tau_h)):
        kz = tau[0, 1] + (tau[0, 0] - tau[1, 1]) * z - tau[1, 0] * z * z
        refl = -lam @ tau.conj().T @ lam
        zb = np.conj(z)
        kzb = refl[0, 1] + (refl[0, 0] - refl[1, 1]) * zb - refl[1, 0] * zb * zb
        out[name] = (complex(kz), complex(kzb))
    return out


def localizability_residual(space: CosetSpace, p: Union[CosetPoint, complex],
                            h_step: float = 1e-4,
                            hamiltonian: Callable[[complex], complex] | None = None) -> float:
    """Max-norm finite-difference residual of the localization PDE system.

    With no explicit hamiltonian this checks, for each momentum map T_a:
    the defining PDEs  d_z T_a = -2 pi i kappa_a^zbar w_form  and
    d_zbar T_a = 2 pi i kappa_a^z w_form  (w_form computed by finite
    differences of the potential), plus the Hamiltonian conditions
    d_z(g^inv d_z T_a) = 0 and d_zbar(g^inv d_zbar T_a) = 0, where g^inv is
    the inverse-metric factor (1 +- r^2)^2.

    With an explicit hamiltonian only the Hamiltonian conditions are checked
    for it; a non-localizable function gives an O(1) residual.
    """
    z = _require_point(space, p)
    h = float(h_step)

    def ginv(w: complex) -> float:
        r2 = abs(w) ** 2
        return (1.0 + r2) ** 2 if space is CosetSpace.COMPACT_CP1 else (1.0 - r2) ** 2

    def hamiltonian_conditions(f: Callable[[complex], complex]) -> float:
        # expand d(g f_z) = g_z f_z + g f_zz by product rule; each factor is an
        # exact evaluation so only single finite-difference errors enter
        _, gz, gzb, _ = _wirtinger(lambda w: complex(ginv(w)), z, h)
        _, fz, fzb, _ = _wirtinger(f, z, h)
        fzz, fzbzb = _second_wirtinger(f, z, h)
        res1 = gz * fz + ginv(z) * fzz
        res2 = gzb * fzb + ginv(z) * fzbzb
        return max(abs(res1), abs(res2))

    if hamiltonian is not None:
        return float(hamiltonian_conditions(hamiltonian))

    _, _, _, k_zzb = _wirtinger(lambda w: kahler_potential(space, w), z, h)
    w_form = 1j * k_zzb / (2.0 * np.pi)
    kap = kappa_fields(space, z)

    def t_component(name: str) -> Callable[[complex], complex]:
        return lambda w: getattr(momentum_maps(space, w), {
            "q": "T_q", "minus_q": "T_minus_q", "h": "T_h"}[name])

    residual = 0.0
    for name in ("q", "minus_q", "h"):
        f = t_component(name)
        _, fz, fzb, _ = _wirtinger(f, z, h)
        kz, kzb = kap[name]
        residual = max(residual,
                       abs(fz + 2j * np.pi * kzb * w_form),
                       abs(fzb - 2j * np.pi * kz * w_form),
                       hamiltonian_conditions(f))
    return float(residual)
