"""Additive group-inverse rules for a sum a + b of group invertible matrices.

Each rule couples a hypothesis identity with a closed-form candidate for
(a + b)^#:

  T2.1  a bb^# = lambda b aa^#   ->  branch on lambda = -1 / generic
  C2.2  aa^# b = lambda bb^# a   ->  opposite-order mirror of T2.1
  C2.3  idempotent a, b with ab = lambda ba (specializes C2.2)
  T2.4  a bb^# = lambda b        (lambda != -1)
  C2.5  aa^# b = lambda a        (lambda != -1, mirror of T2.4)

lambda = 0 is rejected for T2.1/C2.2/C2.3: the hypothesis degenerates there
and a concrete 2x2 counterexample breaks the generic formula (see
LAMBDA_ZERO_COUNTEREXAMPLE and the regression tests).  The mirrored rules are
related to their parents by the transpose duality

    rule(a, b, lambda) = transpose(parent(b^T, a^T, lambda)),

which the test suite checks numerically rather than assuming.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, Tolerance, as_matrix, frob
from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    LambdaIsMinusOne,
    NotIdempotent,
    UnsupportedLambda,
)
from .ginv import AxiomReport, GroupInverseResult, group_inverse, verify_group_axioms

# |lambda + 1| at or below this is the exact lambda = -1 branch.
BRANCH_TOL = 1e-12
# Between BRANCH_TOL and this, (1 + lambda)^-1 amplifies error; flag the output.
NEAR_BRANCH = 1e-6

BRANCH_MINUS_ONE = "lambda_minus_one"
BRANCH_GENERIC = "generic"

# Recorded lambda = 0 gap for T2.1: hypothesis residual is exactly zero, yet
# the generic formula returns [[1, 1], [0, 1]] while (a + b)^# = [[1, -1], [0, 1]].
LAMBDA_ZERO_COUNTEREXAMPLE = {
    "a": [[0, 1], [0, 1]],
    "b": [[1, 0], [0, 0]],
}


@dataclass(frozen=True)
class AdditiveScenario:
    """One rule instance: tag, coupling constant, and the two operands."""

    theorem: str
    lam: complex
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a, square=True, name="a")
        b = as_matrix(self.b, square=True, name="b")
        if a.shape != b.shape:
            raise DimensionMismatch(f"operands must match: {a.shape} != {b.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass
class FormulaOutput:
    """Evaluated candidate for (a + b)^# plus everything needed to judge it."""

    candidate: np.ndarray
    branch: str
    hypothesis_residuals: dict[str, float]
    axiom_report: AxiomReport
    near_branch: bool = False
    notes: list[str] = field(default_factory=list)


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(a, square=True, name="a")
    b = as_matrix(b, square=True, name="b")
    if a.shape != b.shape:
        raise DimensionMismatch(f"operands must match: {a.shape} != {b.shape}")
    return a, b


def _pair_scale(a, b) -> float:
    return max(1.0, frob(a) * frob(b))


def _branch_of(lam: complex) -> tuple[str, bool]:
    gap = abs(lam + 1.0)
    if gap <= BRANCH_TOL:
        return BRANCH_MINUS_ONE, False
    return BRANCH_GENERIC, gap < NEAR_BRANCH


def transpose_scenario(s: AdditiveScenario, theorem: str | None = None) -> AdditiveScenario:
    """Duality partner: swap operands and transpose, keeping lambda."""
    return AdditiveScenario(theorem=theorem or s.theorem, lam=s.lam, a=s.b.T.copy(), b=s.a.T.copy())


# ---------------------------------------------------------------------------
# hypothesis residuals
# ---------------------------------------------------------------------------

def residual_T21(a, b, lam: complex, tol: Tolerance = DEFAULT_TOL) -> float:
    """|| a bb^# - lambda b aa^# || / max(1, ||a|| ||b||)."""
    a, b = _pair(a, b)
    ra = group_inverse(a, tol)
    rb = group_inverse(b, tol)
    return frob(a @ rb.group_projector - lam * (b @ ra.group_projector)) / _pair_scale(a, b)


def residual_C22(a, b, lam: complex, tol: Tolerance = DEFAULT_TOL) -> float:
    a, b = _pair(a, b)
    ra = group_inverse(a, tol)
    rb = group_inverse(b, tol)
    return frob(ra.group_projector @ b - lam * (rb.group_projector @ a)) / _pair_scale(a, b)


def residual_C23(a, b, lam: complex) -> dict[str, float]:
    """Idempotency defects of a and b plus || ab - lambda ba ||, normalized."""
    a, b = _pair(a, b)
    return {
        "idempotent_a": frob(a @ a - a) / max(1.0, frob(a) ** 2),
        "idempotent_b": frob(b @ b - b) / max(1.0, frob(b) ** 2),
        "commute": frob(a @ b - lam * (b @ a)) / _pair_scale(a, b),
    }


def residual_T24(a, b, lam: complex, tol: Tolerance = DEFAULT_TOL) -> float:
    """|| a bb^# - lambda b || / max(1, ||a|| ||b||)."""
    a, b = _pair(a, b)
    rb = group_inverse(b, tol)
    group_inverse(a, tol)  # both operands must be group invertible
    return frob(a @ rb.group_projector - lam * b) / _pair_scale(a, b)


def residual_C25(a, b, lam: complex, tol: Tolerance = DEFAULT_TOL) -> float:
    a, b = _pair(a, b)
    ra = group_inverse(a, tol)
    group_inverse(b, tol)
    return frob(ra.group_projector @ b - lam * a) / _pair_scale(a, b)


# ---------------------------------------------------------------------------
# candidate formulas (no policy checks; reused by the fuzzer's forced mode)
# ---------------------------------------------------------------------------

def _candidate_T21(a, b, lam, ra: GroupInverseResult, rb: GroupInverseResult, branch: str):
    asx, bs = ra.ginv, rb.ginv
    if branch == BRANCH_MINUS_ONE:
        s = asx + bs
        return (a + b) @ s @ s
    c1 = 1.0 / (1.0 + lam)
    cl = lam / (1.0 + lam)
    return c1 * (asx + bs - asx @ rb.group_projector) + cl * (
        rb.spectral_projector @ asx + ra.spectral_projector @ bs
    )


def _candidate_C22(a, b, lam, ra, rb, branch: str):
    asx, bs = ra.ginv, rb.ginv
    if branch == BRANCH_MINUS_ONE:
        s = asx + bs
        return s @ s @ (a + b)
    c1 = 1.0 / (1.0 + lam)
    cl = lam / (1.0 + lam)
    return c1 * (asx + bs - ra.group_projector @ bs) + cl * (
        asx @ rb.spectral_projector + bs @ ra.spectral_projector
    )


def _candidate_C23(a, b, lam, branch: str):
    s = a + b
    if branch == BRANCH_MINUS_ONE:
        return s @ s @ s
    return s - ((2.0 + lam) / (1.0 + lam)) * (a @ b)


def _candidate_T24(a, b, lam, ra, rb):
    c1 = 1.0 / (1.0 + lam)
    pb = rb.spectral_projector
    return (
        c1 * rb.ginv
        + pb @ ra.ginv @ pb
        + (lam * c1 * c1) * (rb.ginv @ ra.group_projector @ pb)
        - c1 * (rb.ginv @ a @ pb @ ra.ginv @ pb)
    )


def _candidate_C25(a, b, lam, ra, rb):
    c1 = 1.0 / (1.0 + lam)
    pa = ra.spectral_projector
    return (
        c1 * ra.ginv
        + pa @ rb.ginv @ pa
        + (lam * c1 * c1) * (pa @ rb.group_projector @ ra.ginv)
        - c1 * (pa @ rb.ginv @ pa @ b @ ra.ginv)
    )


def raw_candidate(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, str]:
    """Formula value with no lambda policy or hypothesis gating.

    Used by the fuzzer and the gap regressions to evaluate what a rule's
    formula *would* return outside its supported set.  Operands must still be
    group invertible (the formulas need a^#, b^#).
    """
    branch, _ = _branch_of(s.lam)
    if s.theorem == "C2.3":
        return _candidate_C23(s.a, s.b, s.lam, branch), branch
    ra = group_inverse(s.a, tol)
    rb = group_inverse(s.b, tol)
    if s.theorem == "T2.1":
        return _candidate_T21(s.a, s.b, s.lam, ra, rb, branch), branch
    if s.theorem == "C2.2":
        return _candidate_C22(s.a, s.b, s.lam, ra, rb, branch), branch
    if s.theorem == "T2.4":
        if branch == BRANCH_MINUS_ONE:
            raise LambdaIsMinusOne("T2.4 has no lambda = -1 branch")
        return _candidate_T24(s.a, s.b, s.lam, ra, rb), branch
    if s.theorem == "C2.5":
        if branch == BRANCH_MINUS_ONE:
            raise LambdaIsMinusOne("C2.5 has no lambda = -1 branch")
        return _candidate_C25(s.a, s.b, s.lam, ra, rb), branch
    raise ValueError(f"not an additive theorem tag: {s.theorem!r}")


# ---------------------------------------------------------------------------
# full rule evaluations
# ---------------------------------------------------------------------------

def _reject_lambda_zero(theorem: str, lam: complex) -> None:
    if lam == 0:
        raise UnsupportedLambda(
            f"{theorem} is not supported at lambda = 0: the coupling degenerates and the "
            "generic formula is wrong there (counterexample: a = [[0,1],[0,1]], "
            "b = [[1,0],[0,0]], where the formula fails the axioms)"
        )


def _finish(s: AdditiveScenario, candidate, branch, near, residuals, tol) -> FormulaOutput:
    report = verify_group_axioms(s.a + s.b, candidate, tol)
    out = FormulaOutput(
        candidate=candidate,
        branch=branch,
        hypothesis_residuals=residuals,
        axiom_report=report,
        near_branch=near,
    )
    if near:
        out.notes.append("lambda is within 1e-6 of -1; (1+lambda)^-1 amplifies rounding")
    return out


def sum_ginv_T21(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    _reject_lambda_zero("T2.1", s.lam)
    ra = group_inverse(s.a, tol)
    rb = group_inverse(s.b, tol)
    resid = frob(s.a @ rb.group_projector - s.lam * (s.b @ ra.group_projector)) / _pair_scale(s.a, s.b)
    residuals = {"abbs_minus_lambda_baas": resid}
    if resid > tol.resid:
        raise HypothesisViolated(
            f"a bb^# = lambda b aa^# fails with residual {resid:.3e}", residuals
        )
    branch, near = _branch_of(s.lam)
    cand = _candidate_T21(s.a, s.b, s.lam, ra, rb, branch)
    return _finish(s, cand, branch, near, residuals, tol)


def sum_ginv_C22(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    _reject_lambda_zero("C2.2", s.lam)
    ra = group_inverse(s.a, tol)
    rb = group_inverse(s.b, tol)
    resid = frob(ra.group_projector @ s.b - s.lam * (rb.group_projector @ s.a)) / _pair_scale(s.a, s.b)
    residuals = {"aasb_minus_lambda_bbsa": resid}
    if resid > tol.resid:
        raise HypothesisViolated(
            f"aa^# b = lambda bb^# a fails with residual {resid:.3e}", residuals
        )
    branch, near = _branch_of(s.lam)
    cand = _candidate_C22(s.a, s.b, s.lam, ra, rb, branch)
    return _finish(s, cand, branch, near, residuals, tol)


def idempotent_sum_C23(a, b, lam: complex, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    lam = complex(lam)
    _reject_lambda_zero("C2.3", lam)
    residuals = residual_C23(a, b, lam)
    if residuals["idempotent_a"] > tol.resid or residuals["idempotent_b"] > tol.resid:
        raise NotIdempotent(
            f"operands must be idempotent (defects {residuals['idempotent_a']:.3e}, "
            f"{residuals['idempotent_b']:.3e})"
        )
    if residuals["commute"] > tol.resid:
        raise HypothesisViolated(
            f"ab = lambda ba fails with residual {residuals['commute']:.3e}", residuals
        )
    s = AdditiveScenario(theorem="C2.3", lam=lam, a=a, b=b)
    branch, near = _branch_of(lam)
    cand = _candidate_C23(s.a, s.b, lam, branch)
    return _finish(s, cand, branch, near, residuals, tol)


def sum_ginv_T24(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    branch, near = _branch_of(s.lam)
    if branch == BRANCH_MINUS_ONE:
        raise LambdaIsMinusOne("T2.4 requires lambda != -1")
    ra = group_inverse(s.a, tol)
    rb = group_inverse(s.b, tol)
    resid = frob(s.a @ rb.group_projector - s.lam * s.b) / _pair_scale(s.a, s.b)
    residuals = {"abbs_minus_lambda_b": resid}
    if resid > tol.resid:
        raise HypothesisViolated(f"a bb^# = lambda b fails with residual {resid:.3e}", residuals)
    cand = _candidate_T24(s.a, s.b, s.lam, ra, rb)
    return _finish(s, cand, BRANCH_GENERIC, near, residuals, tol)


def sum_ginv_C25(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    branch, near = _branch_of(s.lam)
    if branch == BRANCH_MINUS_ONE:
        raise LambdaIsMinusOne("C2.5 requires lambda != -1")
    ra = group_inverse(s.a, tol)
    rb = group_inverse(s.b, tol)
    resid = frob(ra.group_projector @ s.b - s.lam * s.a) / _pair_scale(s.a, s.b)
    residuals = {"aasb_minus_lambda_a": resid}
    if resid > tol.resid:
        raise HypothesisViolated(f"aa^# b = lambda a fails with residual {resid:.3e}", residuals)
    cand = _candidate_C25(s.a, s.b, s.lam, ra, rb)
    return _finish(s, cand, BRANCH_GENERIC, near, residuals, tol)


_EVALUATORS = {
    "T2.1": sum_ginv_T21,
    "C2.2": sum_ginv_C22,
    "T2.4": sum_ginv_T24,
    "C2.5": sum_ginv_C25,
}


def evaluate(s: AdditiveScenario, tol: Tolerance = DEFAULT_TOL) -> FormulaOutput:
    """Dispatch a scenario to its rule evaluator."""
    if s.theorem == "C2.3":
        return idempotent_sum_C23(s.a, s.b, s.lam, tol)
    try:
        fn = _EVALUATORS[s.theorem]
    except KeyError:
        raise ValueError(f"not an additive theorem tag: {s.theorem!r}")
    return fn(s, tol)
