"""Dense complex matrix kernels: products, SVD, rank decisions, random synthesis.

All values are immutable-by-convention numpy ``complex128`` 2-D arrays; every
operation returns a fresh array and never mutates its inputs.  Randomness flows
only through explicit seeds (or caller-supplied ``numpy.random.Generator``
objects), so everything here is safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MatrixFormatError, SingularMatrix, SvdFailure

EPS = float(np.finfo(np.float64).eps)


def as_matrix(values, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a finite complex128 2-D array.

    Rejects non-2-D input, empty axes, and NaN/Inf entries; this is the single
    validation choke point for every public entry of the library.
    """
    a = np.asarray(values, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name}: expected a 2-D array, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"{name}: empty dimension in shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError(f"{name}: non-finite entries are not allowed")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name}: expected square, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy knobs.

    ``rank_factor`` is the relative cutoff factor applied to the largest
    singular value when deciding numerical rank; ``None`` selects the standard
    max(rows, cols) * machine-epsilon convention.  ``resid`` is the relative
    Frobenius tolerance used by every residual verdict.
    """

    rank_factor: float | None = None
    resid: float = 1e-8

    def __post_init__(self):
        if self.rank_factor is not None and not self.rank_factor > 0:
            raise ValueError("rank_factor must be strictly positive")
        if not self.resid > 0:
            raise ValueError("resid must be strictly positive")

    def rank_cutoff(self, shape: tuple[int, int], sigma_max: float) -> float:
        factor = self.rank_factor if self.rank_factor is not None else max(shape) * EPS
        return factor * sigma_max

    def as_dict(self) -> dict:
        return {"rank_factor": self.rank_factor, "resid": self.resid}


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD container: a = u @ diag(s) @ vh with s non-increasing."""

    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"matmul: inner dimensions {a.shape} x {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"add: shapes {a.shape} != {b.shape}")
    return a + b


def sub(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"sub: shapes {a.shape} != {b.shape}")
    return a - b


def scale(factor: complex, a) -> np.ndarray:
    return complex(factor) * as_matrix(a, name="a")


def transpose(a) -> np.ndarray:
    return as_matrix(a, name="a").T.copy()


def conj_transpose(a) -> np.ndarray:
    return as_matrix(a, name="a").conj().T.copy()


def frob(a) -> float:
    return float(np.linalg.norm(a))


def svd(a) -> SvdResult:
    a = as_matrix(a, name="a")
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(f"SVD failed to converge on shape {a.shape}: {exc}", matrix=a)
    return SvdResult(u=u, s=s, vh=vh)


def singular_values(a) -> np.ndarray:
    a = as_matrix(a, name="a")
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(f"SVD failed to converge on shape {a.shape}: {exc}", matrix=a)


def rank_with_tol(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: number of singular values above the relative cutoff."""
    a = as_matrix(a, name="a")
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cutoff(a.shape, float(s[0]))))


def invert(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse of a square matrix that is nonsingular under ``tol``."""
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    s = singular_values(a)
    if s[0] == 0.0 or s[-1] <= tol.rank_cutoff(a.shape, float(s[0])):
        raise SingularMatrix(
            f"matrix is singular to tolerance (sigma_min={s[-1]:.3e}, sigma_max={s[0]:.3e})"
        )
    return np.linalg.solve(a, np.eye(n, dtype=np.complex128))


def solve(a, b, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Solve a @ x = b with the same singularity guard as :func:`invert`."""
    a = as_matrix(a, square=True, name="a")
    b = as_matrix(b, name="b")
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"solve: shapes {a.shape} x {b.shape}")
    s = singular_values(a)
    if s[0] == 0.0 or s[-1] <= tol.rank_cutoff(a.shape, float(s[0])):
        raise SingularMatrix("matrix is singular to tolerance")
    return np.linalg.solve(a, b)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_general(rows: int, cols: int, seed) -> np.ndarray:
    """Complex Ginibre matrix (iid standard complex normal entries)."""
    if rows < 1 or cols < 1:
        raise DimensionMismatch("random_general: rows and cols must be >= 1")
    rng = _rng(seed)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if n < 1:
        raise DimensionMismatch("random_unitary: n must be >= 1")
    rng = _rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    # Normalize column phases so the distribution does not depend on the QR sign convention.
    ph = d / np.abs(d)
    return q * ph


def random_invertible(n: int, cond_bound: float, seed) -> np.ndarray:
    """Invertible matrix with condition number at most ``cond_bound``.

    Synthesized as U @ diag(sigma) @ V* with unitary factors and log-uniform
    singular values in [1/cond_bound, 1], so the bound holds by construction.
    """
    if n < 1:
        raise DimensionMismatch("random_invertible: n must be >= 1")
    if not cond_bound > 1.0:
        raise ValueError("cond_bound must exceed 1")
    rng = _rng(seed)
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    log_sigma = rng.uniform(-np.log(cond_bound), 0.0, size=n)
    sigma = np.sort(np.exp(log_sigma))[::-1]
    if n >= 2:
        # Pin the extremes so tiny n does not collapse to a near-identity spectrum.
        sigma[0] = 1.0
    return (u * sigma) @ v.conj().T
