"""Dense complex linear algebra, permutation combinatorics, and seeded RNG streams.

All other modules build on this one. Determinants are available in log-domain
(log-magnitude, phase) so kernel matrices with exponentially large entries can
be handled without overflow.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Union

import numpy as np
import scipy.linalg


# ----------------------------------------------------------------------
# seeded RNG contract
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RngStream:
    """Reproducible RNG handle: (seed, stream_id) pins the output sequence.

    Backed by numpy's counter-based Philox generator keyed by
    SeedSequence(entropy=seed, spawn_key=(stream_id,)). Parallel work uses
    substream generators keyed by (stream_id, j), merged in j order, so
    results do not depend on thread count. The generator family is part of
    the reproducibility contract and is never changed silently.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a nonnegative 64-bit integer")
        if self.stream_id < 0:
            raise ValueError("stream_id must be nonnegative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(seq))

    def substream_generator(self, j: int) -> np.random.Generator:
        """Child generator j of this stream, for deterministic data-parallel merges."""
        if j < 0:
            raise ValueError("substream index must be nonnegative")
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id, j))
        return np.random.Generator(np.random.Philox(seq))


RngLike = Union[RngStream, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Accept an RngStream (converted once) or a Generator (consumed statefully)."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


# ----------------------------------------------------------------------
# matrices and spectra
# ----------------------------------------------------------------------

class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix: ascending real values, unitary basis."""

    values: np.ndarray
    vectors: np.ndarray


def check_hermitian(H: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Validate H = H^dagger entrywise (tolerance scaled by max |entry|)."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(H))) if H.size else 1.0)
    if not np.all(np.abs(H - H.conj().T) <= tol * scale):
        raise ValueError("matrix is not Hermitian within tolerance")
    return H


def vandermonde(x: Sequence[complex]) -> complex:
    """prod_{i<j} (x_i - x_j); empty or singleton input gives 1."""
    x = np.asarray(x, dtype=complex).ravel()
    n = x.size
    if n <= 1:
        return 1.0 + 0.0j
    i, j = np.triu_indices(n, k=1)
    return complex(np.prod(x[i] - x[j]))


def eig_hermitian(H: np.ndarray) -> Spectrum:
    """Real ascending eigenvalues and eigenvectors of a Hermitian matrix."""
    H = check_hermitian(H)
    try:
        values, vectors = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return Spectrum(values=values, vectors=vectors)


def det(M: np.ndarray) -> complex:
    """Determinant; exact arithmetic for 1x1 and 2x2."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    n = M.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(M[0, 0])
    if n == 2:
        return complex(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    return complex(np.linalg.det(M))


def log_det(M: np.ndarray) -> tuple[float, float]:
    """Determinant as (log-magnitude, phase) via partially pivoted LU.

    Phases are accumulated as unit-modulus complex products, not summed angles,
    to avoid wraparound. A singular matrix gives (-inf, 0.0).
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if M.shape[0] == 0:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M)
    diag = np.diagonal(lu)
    mags = np.abs(diag)
    if np.any(mags == 0.0):
        return -np.inf, 0.0
    sign = 1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 == 0 else -1.0
    phase_factor = sign * np.prod(diag / mags)
    return float(np.sum(np.log(mags))), float(np.angle(phase_factor))


def det_from_log_entries(L: np.ndarray) -> tuple[float, float]:
    """Determinant of the matrix with entries exp(L_ij), as (log-magnitude, phase).

    Rows are rescaled by their largest entry before the LU pass, so kernel
    matrices like exp(i x_l y_k) stay representable at large |x||y|.
    """
    L = np.asarray(L, dtype=complex)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("matrix must be square")
    if L.shape[0] == 0:
        return 0.0, 0.0
    shift = np.max(L.real, axis=1)
    logmag, phase = log_det(np.exp(L - shift[:, None]))
    return logmag + float(np.sum(shift)), phase


# ----------------------------------------------------------------------
# permutations
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A permutation of 0..m-1 with its parity (-1)^{inversion count}."""

    image: tuple[int, ...]
    parity: int

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self*other)(i) = self(other(i))."""
        image = tuple(self.image[k] for k in other.image)
        return Permutation(image=image, parity=self.parity * other.parity)


def permutation_parity(image: Sequence[int]) -> int:
    """Parity via cycle decomposition: (-1)^{m - #cycles}."""
    m = len(image)
    seen = [False] * m
    sign = 1
    for start in range(m):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = image[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutations(m: int) -> Iterator[Permutation]:
    """All m! permutations of 0..m-1 with parities; refuses m > 10."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    if m > 10:
        raise ValueError("m > 10 refused (factorial guard)")
    for image in itertools.permutations(range(m)):
        yield Permutation(image=image, parity=permutation_parity(image))
