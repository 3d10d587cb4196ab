"""Group integrals of exp(i Tr(X g Y g^-1)) in three independent forms.

Compact U(N): determinant kernel (normalized to Haar probability), Weyl sum,
and Haar Monte Carlo. Pseudo-unitary U(n1,n2)/T: block-determinant kernel,
Weyl sum over S_{n1} x S_{n2}, and (for n1=n2=1) direct quadrature over the
unit disk with the invariant measure from the rank-1 geometry module.
A closed-form diffusion kernel for the pseudo-unitary Weyl chamber is
included together with its heat-equation residual check.
"""

from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kahler
from .calibration import disk_measure_factor
from .gue import MCEstimate, _BATCHES, _CHUNK
from .matcore import RngLike, RngStream, as_generator, det_from_log_entries, permutations, vandermonde


@dataclass(frozen=True)
class HcizInput:
    """Diagonal arguments X, Y of equal length with a pairwise-gap guard."""

    x: tuple[complex, ...]
    y: tuple[complex, ...]
    delta_min: float = 1e-8

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(complex(v) for v in self.x))
        object.__setattr__(self, "y", tuple(complex(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y must have equal length")
        for name, vals in (("x", self.x), ("y", self.y)):
            for i, j in itertools.combinations(range(len(vals)), 2):
                if abs(vals[i] - vals[j]) < self.delta_min:
                    raise ValueError(
                        f"degenerate input: |{name}_{i} - {name}_{j}| < {self.delta_min} "
                        "(confluent kernels are out of scope)")

    @property
    def size(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class PseudoSignature:
    """Block sizes (n1, n2) fixing the metric lam = diag(+1 x n1, -1 x n2)."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive")

    @property
    def total(self) -> int:
        return self.n1 + self.n2


@dataclass(frozen=True)
class HeatKernelInput:
    """Endpoint vectors and time for the Weyl-chamber diffusion kernel."""

    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have equal length")
        if not self.t > 0:
            raise ValueError("t must be positive")


@dataclass(frozen=True)
class PseudoDetResult:
    """Kernel value plus whether the defining group integral converges."""

    value: complex
    converges: bool


def _kernel_log_det(x: tuple[complex, ...], y: tuple[complex, ...]) -> complex:
    """det[exp(i x_l y_k)] evaluated through the log-domain LU path."""
    xa, ya = np.asarray(x), np.asarray(y)
    logmag, phase = det_from_log_entries(1j * np.outer(xa, ya))
    return np.exp(logmag) * np.exp(1j * phase)


def compact_normalization(n: int) -> complex:
    """c_N = prod_{p<N} p! / i^{N(N-1)/2}: hciz_compact_det = c_N * weyl_sum.

    Fixed so the normalized integral -> 1 as X -> 0 (Haar probability
    measure); derived from the confluent limit of the kernel.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return complex(np.prod([math.factorial(p) for p in range(1, n)])
                   * (1j) ** (-n * (n - 1) // 2))


def hciz_compact_det(inp: HcizInput) -> complex:
    """Normalized U(N) integral: c_N det[e^{i x_l y_k}] / (Delta(X) Delta(Y))."""
    return complex(compact_normalization(inp.size) * _kernel_log_det(inp.x, inp.y)
                   / (vandermonde(inp.x) * vandermonde(inp.y)))


def pseudo_convergence_flag(inp: HcizInput, sig: PseudoSignature) -> bool:
    """True when every mixed-block Gaussian direction has positive damping.

    At each stationary point the non-compact fluctuation coordinate pairing
    block-1 index k with block-2 index l carries the quadratic coefficient
    (x_k - x_l)(y_a - y_b) with (a, b) the paired targets; ranging over all
    stationary points this requires Im[(x_k - x_l)(y_a - y_b)] > 0 for all
    k, a <= n1 < l, b.
    """
    n1 = sig.n1
    x, y = inp.x, inp.y
    for k in range(n1):
        for l in range(n1, sig.total):
            for a in range(n1):
                for b in range(n1, sig.total):
                    if ((x[k] - x[l]) * (y[a] - y[b])).imag <= 0:
                        return False
    return True


def hciz_pseudo_det(inp: HcizInput, sig: PseudoSignature) -> PseudoDetResult:
    """Pseudo-unitary kernel: (-1)^{n1 n2} det_1 det_2 / (Delta(X) Delta(Y)).

    det_1 and det_2 are the kernel determinants of the first n1 and last n2
    arguments; the Vandermondes run over all n1+n2. The convergence flag
    reports whether the defining integral exists for these arguments.
    """
    if inp.size != sig.total:
        raise ValueError("input length must equal n1 + n2")
    n1 = sig.n1
    det1 = _kernel_log_det(inp.x[:n1], inp.y[:n1])
    det2 = _kernel_log_det(inp.x[n1:], inp.y[n1:])
    value = ((-1.0) ** (sig.n1 * sig.n2) * det1 * det2
             / (vandermonde(inp.x) * vandermonde(inp.y)))
    return PseudoDetResult(value=complex(value), converges=pseudo_convergence_flag(inp, sig))


def weyl_sum(inp: HcizInput, blocks: tuple[int, ...]) -> complex:
    """Sum over W = prod_b S_{block_b} of (-1)^w e^{i sum_k x_k y_w(k)} / (Dx Dy).

    Permutations act within blocks only; equals the corresponding determinant
    form by the Leibniz expansion. Guarded at N <= 8.
    """
    blocks = tuple(int(b) for b in blocks)
    if sum(blocks) != inp.size:
        raise ValueError("blocks must partition the input indices")
    if inp.size > 8:
        raise ValueError("N > 8 refused (factorial guard)")
    offsets = np.cumsum((0,) + blocks[:-1])
    x = np.asarray(inp.x)
    y = np.asarray(inp.y)
    total = 0.0 + 0.0j
    for parts in itertools.product(*(list(permutations(b)) for b in blocks)):
        sign = 1
        image = np.empty(inp.size, dtype=int)
        for off, block_perm in zip(offsets, parts):
            sign *= block_perm.parity
            for k, pk in enumerate(block_perm.image):
                image[off + k] = off + pk
        total += sign * np.exp(1j * np.sum(x * y[image]))
    return complex(total / (vandermonde(inp.x) * vandermonde(inp.y)))


def haar_unitary(N: int, rng: RngLike) -> np.ndarray:
    """Haar-distributed U(N) matrix (QR of a complex Ginibre, phases fixed)."""
    return _haar_batch(N, 1, as_generator(rng))[0]


def _haar_batch(N: int, count: int, gen: np.random.Generator) -> np.ndarray:
    z = (gen.standard_normal((count, N, N)) + 1j * gen.standard_normal((count, N, N))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def haar_mc_hciz(inp: HcizInput, samples: int, rng: RngStream,
                 threads: int = 1) -> MCEstimate:
    """Monte Carlo mean of e^{i Tr(X U Y U^dag)} over Haar-distributed U.

    Same substream chunking and batch-means stderr as the GUE estimator, so the
    result is reproducible for fixed (seed, samples) under any thread count.
    """
    if not isinstance(rng, RngStream):
        raise TypeError("haar_mc_hciz requires an RngStream so the seed can be recorded")
    if samples < 100:
        raise ValueError("samples must be at least 100")
    n = inp.size
    x = np.asarray(inp.x)
    y = np.asarray(inp.y)

    counts = [_CHUNK] * (samples // _CHUNK)
    if samples % _CHUNK:
        counts.append(samples % _CHUNK)

    def work(j: int) -> np.ndarray:
        u = _haar_batch(n, counts[j], rng.substream_generator(j))
        tr = np.einsum("skl,k,l->s", np.abs(u) ** 2, x, y)
        return np.exp(1j * tr)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(counts))))
    else:
        parts = [work(j) for j in range(len(counts))]
    r = np.concatenate(parts)

    mean = complex(r.mean())
    blocks = np.array_split(r, _BATCHES)
    bmeans = np.array([b.mean() for b in blocks])
    return MCEstimate(mean=mean,
                      stderr_real=float(np.std(bmeans.real, ddof=1) / np.sqrt(len(bmeans))),
                      stderr_imag=float(np.std(bmeans.imag, ddof=1) / np.sqrt(len(bmeans))),
                      samples=samples, seed=rng.seed)


def disk_quadrature_rank1(inp: HcizInput, grid: tuple[int, int] = (400, 256)) -> complex:
    """U(1,1)/T integral of e^{iH} over the unit disk, n1 = n2 = 1 only.

    The Hamiltonian is built from the rank-1 pseudo-projector of the geometry
    module: H(z) = Tr[X (y_1 + (y_2 - y_1) rho(z))] = x1 y1 + x2 y2 +
    (x2 - x1)(y2 - y1) (T_h(z) - 1)/2, integrated against the invariant
    measure density 1/(pi (1-r^2)^2). Quadrature is Gauss-Legendre in the
    measure-uniform radial variable t = r^2/(1-r^2) (clustering nodes near
    r = 1) times a trapezoid rule in angle. The measure normalization is the
    stored calibration factor (exactly i; see calibration.json provenance).
    """
    if inp.size != 2:
        raise ValueError("disk quadrature implemented for n1 = n2 = 1 only")
    a = (inp.x[1] - inp.x[0]) * (inp.y[1] - inp.y[0])
    if a.imag <= 0:
        raise ValueError("integral diverges: need Im[(x1-x2)(y1-y2)] > 0")
    n_rad, n_ang = grid
    if n_rad < 2 or n_ang < 1:
        raise ValueError("grid must have at least 2 radial and 1 angular node")

    t_cut = 46.1 / a.imag
    cycles = abs(a.real) * t_cut / (2.0 * np.pi)
    if n_rad < 3 * cycles + 32:
        warnings.warn(f"radial grid ({n_rad}) may be too coarse for ~{cycles:.0f} "
                      "oscillations of the integrand; increase the grid",
                      RuntimeWarning, stacklevel=2)

    nodes, wts = np.polynomial.legendre.leggauss(n_rad)
    t = t_cut * (nodes + 1.0) / 2.0
    w = wts * t_cut / 2.0
    r = np.sqrt(t / (1.0 + t))
    theta = 2.0 * np.pi * np.arange(n_ang) / n_ang
    z = r[:, None] * np.exp(1j * theta)[None, :]
    t_h = kahler.momentum_t_h(kahler.CosetSpace.NONCOMPACT_DISK, z)
    h = inp.x[0] * inp.y[0] + inp.x[1] * inp.y[1] + a * (t_h - 1.0) / 2.0
    # invariant measure: density r dr dtheta = dt dtheta / (2 pi)
    raw = np.sum(w[:, None] * np.exp(1j * h)) / n_ang
    return complex(disk_measure_factor() * raw)


# ----------------------------------------------------------------------
# diffusion kernel on the pseudo-unitary Weyl chamber
# ----------------------------------------------------------------------

def _block_permutations(sig: PseudoSignature):
    for p1 in permutations(sig.n1):
        for p2 in permutations(sig.n2):
            image = list(p1.image) + [sig.n1 + k for k in p2.image]
            yield p1.parity * p2.parity, image


def heat_kernel(inp: HeatKernelInput, sig: PseudoSignature) -> float:
    """Signed diffusion kernel K(alpha, beta, t) on the S_{n1} x S_{n2} chamber.

    K = (2 pi t)^{-(n1+n2)/2} sum_P (-1)^P exp(-(1/2t) sum_i (alpha_i - beta_P(i))^2)
    with P ranging over within-block permutations and unit normalization.
    """
    m = sig.total
    if len(inp.alpha) != m:
        raise ValueError("alpha/beta length must equal n1 + n2")
    if m > 6:
        raise ValueError("n1 + n2 > 6 refused (factorial guard)")
    alpha = np.asarray(inp.alpha)
    beta = np.asarray(inp.beta)
    total = 0.0
    for sign, image in _block_permutations(sig):
        total += sign * np.exp(-np.sum((alpha - beta[image]) ** 2) / (2.0 * inp.t))
    return float(total / (2.0 * np.pi * inp.t) ** (m / 2.0))


def heat_residual(inp: HeatKernelInput, sig: PseudoSignature, h: float = 1e-3) -> float:
    """|d_t K - 1/2 sum_i d^2_{alpha_i} K| by central finite differences."""
    def k_at(alpha: np.ndarray, t: float) -> float:
        return heat_kernel(HeatKernelInput(alpha=tuple(alpha), beta=inp.beta, t=t), sig)

    alpha = np.asarray(inp.alpha)
    dt = (k_at(alpha, inp.t + h) - k_at(alpha, inp.t - h)) / (2.0 * h)
    k0 = k_at(alpha, inp.t)
    lap = 0.0
    for i in range(len(alpha)):
        e = np.zeros_like(alpha)
        e[i] = h
        lap += (k_at(alpha + e, inp.t) - 2.0 * k0 + k_at(alpha - e, inp.t)) / h**2
    return float(abs(dt - 0.5 * lap))
