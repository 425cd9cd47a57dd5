"""Group inverse, Moore-Penrose pseudoinverse, spectral projectors, and the
axiom checker.

The primary algorithm is the full-rank factorization read off the SVD:
with a = F @ G, F = U_r diag(s_r), G = V_r*, the matrix is group invertible
exactly when the r-by-r core G @ F is invertible, and then

    a^# = F @ (G F)^-2 @ G.

Cline's route a @ pinv(a^3) @ a is kept as an independent cross-check and is
never the primary path (cubing the matrix cubes its condition number).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import DEFAULT_TOL, Tolerance, as_matrix, frob, rank_with_tol, singular_values, svd
from .errors import ConditionViolated, DimensionMismatch, IllConditionedCore, NotGroupInvertible

# Condition bound on the invertible core beyond which results are refused.
CORE_COND_MAX = 1e12
# Singular values within this factor of the rank cutoff mark a decision as marginal.
MARGINAL_BAND = 10.0


class GroupInvertibility(NamedTuple):
    ok: bool
    rank: int
    rank_sq: int
    marginal: bool


@dataclass(frozen=True)
class GroupInverseResult:
    """Group inverse plus the projectors and diagnostics that come with it.

    ``group_projector`` is a @ ginv (idempotent onto range(a) along ker(a));
    ``spectral_projector`` is its complement I - a @ ginv, computed by direct
    subtraction so the two sum to the identity by construction.
    """

    ginv: np.ndarray
    rank: int
    group_projector: np.ndarray
    spectral_projector: np.ndarray
    core_condition: float
    marginal: bool = False


@dataclass(frozen=True)
class AxiomReport:
    """Relative residuals of the three group-inverse axioms for a pair (a, x)."""

    axa: float
    xax: float
    commute: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.axa <= self.tol and self.xax <= self.tol and self.commute <= self.tol

    def as_dict(self) -> dict:
        return {
            "axiom_axa": self.axa,
            "axiom_xax": self.xax,
            "axiom_commute": self.commute,
            "passed": self.passed,
        }


def _safe_div(num: float, den: float) -> float:
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / den


def is_group_invertible(a, tol: Tolerance = DEFAULT_TOL) -> GroupInvertibility:
    """Decide rank(a) == rank(a @ a), reporting both ranks.

    The decision couples two numerical ranks; when either spectrum has a
    singular value within a factor of MARGINAL_BAND of its cutoff the verdict
    is flagged marginal rather than silently trusted.
    """
    a = as_matrix(a, square=True, name="a")
    marginal = False
    ranks = []
    for m in (a, a @ a):
        s = singular_values(m)
        if s.size == 0 or s[0] == 0.0:
            ranks.append(0)
            continue
        cutoff = tol.rank_cutoff(m.shape, float(s[0]))
        ranks.append(int(np.count_nonzero(s > cutoff)))
        in_band = (s > cutoff / MARGINAL_BAND) & (s < cutoff * MARGINAL_BAND)
        marginal = marginal or bool(np.any(in_band))
    return GroupInvertibility(ranks[0] == ranks[1], ranks[0], ranks[1], marginal)


def group_inverse(
    a,
    tol: Tolerance = DEFAULT_TOL,
    core_cond_max: float = CORE_COND_MAX,
) -> GroupInverseResult:
    """Group inverse via the SVD full-rank factorization.

    Raises NotGroupInvertible when the core G @ F is singular to tolerance
    (equivalent to a rank drop between a and a^2) and IllConditionedCore when
    its condition estimate exceeds ``core_cond_max``.
    """
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)

    dec = svd(a)
    if dec.s[0] == 0.0:
        zero = np.zeros_like(a)
        return GroupInverseResult(
            ginv=zero,
            rank=0,
            group_projector=zero.copy(),
            spectral_projector=eye,
            core_condition=1.0,
        )

    cutoff = tol.rank_cutoff(a.shape, float(dec.s[0]))
    r = int(np.count_nonzero(dec.s > cutoff))
    marginal = bool(np.any((dec.s > cutoff / MARGINAL_BAND) & (dec.s < cutoff * MARGINAL_BAND)))

    f = dec.u[:, :r] * dec.s[:r]
    g = dec.vh[:r]
    core = g @ f
    cs = singular_values(core)
    core_cutoff = tol.rank_cutoff(core.shape, float(cs[0])) if cs[0] > 0.0 else 0.0
    if cs[0] == 0.0 or cs[-1] <= core_cutoff:
        raise NotGroupInvertible(
            "rank drops between a and a^2; no group inverse",
            rank=r,
            rank_sq=rank_with_tol(a @ a, tol),
        )
    marginal = marginal or bool(cs[-1] <= core_cutoff * MARGINAL_BAND)

    core_condition = float(cs[0] / cs[-1])
    if core_condition > core_cond_max:
        raise IllConditionedCore(
            f"core condition {core_condition:.3e} exceeds bound {core_cond_max:.3e}",
            core_condition=core_condition,
        )

    y = np.linalg.solve(core, g)          # (G F)^-1 G
    ginv = f @ np.linalg.solve(core, y)   # F (G F)^-2 G
    group_projector = f @ y               # a a^#
    spectral_projector = eye - group_projector
    return GroupInverseResult(
        ginv=ginv,
        rank=r,
        group_projector=group_projector,
        spectral_projector=spectral_projector,
        core_condition=core_condition,
        marginal=marginal,
    )


def moore_penrose(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the library's rank cutoff policy."""
    a = as_matrix(a, name="a")
    dec = svd(a)
    if dec.s.size == 0 or dec.s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    cutoff = tol.rank_cutoff(a.shape, float(dec.s[0]))
    r = int(np.count_nonzero(dec.s > cutoff))
    if r == 0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    return (dec.vh[:r].conj().T / dec.s[:r]) @ dec.u[:, :r].conj().T


def group_inverse_cline(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Independent oracle: a @ pinv(a^3) @ a.

    Only meaningful on decently conditioned inputs; the cube inflates the
    condition number, which is exactly why this is never the primary path.
    """
    a = as_matrix(a, square=True, name="a")
    probe = is_group_invertible(a, tol)
    if not probe.ok:
        raise NotGroupInvertible(
            "rank drops between a and a^2; no group inverse",
            rank=probe.rank,
            rank_sq=probe.rank_sq,
        )
    a3 = a @ a @ a
    return a @ moore_penrose(a3, tol) @ a


def spectral_projector(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """I - a @ a^# for a group-invertible a."""
    return group_inverse(a, tol).spectral_projector


def verify_group_axioms(a, x, tol: Tolerance = DEFAULT_TOL) -> AxiomReport:
    """Relative residuals of a@x@a = a, x@a@x = x, a@x = x@a."""
    a = as_matrix(a, square=True, name="a")
    x = as_matrix(x, square=True, name="x")
    if a.shape != x.shape:
        raise DimensionMismatch(f"axiom check: shapes {a.shape} != {x.shape}")
    na, nx = frob(a), frob(x)
    ax = a @ x
    xa = x @ a
    return AxiomReport(
        axa=_safe_div(frob(ax @ a - a), na),
        xax=_safe_div(frob(xa @ x - x), max(nx, np.finfo(float).eps)),
        commute=_safe_div(frob(ax - xa), na * nx),
        tol=tol.resid,
    )


def triangular_block_ginv(x, y, w, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Group inverse of the block upper-triangular matrix [[x, y], [0, w]].

    Requires x and w group invertible and x^pi @ y @ w^pi = 0 to tolerance.
    The off-diagonal block of the inverse is the general three-term expression

        z = (x^#)^2 y w^pi + x^pi y (w^#)^2 - x^# y w^#,

    of which only the surviving terms appear in any particular special case
    (each term is annihilated by a projector when the adjacent factor is
    invertible).
    """
    x = as_matrix(x, square=True, name="x")
    w = as_matrix(w, square=True, name="w")
    y = as_matrix(y, name="y")
    if y.shape != (x.shape[0], w.shape[0]):
        raise DimensionMismatch(
            f"triangular block: y must be {x.shape[0]}x{w.shape[0]}, got {y.shape}"
        )
    rx = group_inverse(x, tol)
    rw = group_inverse(w, tol)
    defect = frob(rx.spectral_projector @ y @ rw.spectral_projector)
    if defect > tol.resid * max(1.0, frob(y)):
        raise ConditionViolated(
            f"x^pi @ y @ w^pi has relative norm {defect:.3e}; block matrix is not group invertible"
        )
    xs, ws = rx.ginv, rw.ginv
    z = xs @ xs @ y @ rw.spectral_projector + rx.spectral_projector @ y @ ws @ ws - xs @ y @ ws
    top = np.hstack([xs, z])
    bottom = np.hstack([np.zeros((w.shape[0], x.shape[0]), dtype=np.complex128), ws])
    return np.vstack([top, bottom])
