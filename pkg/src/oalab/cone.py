"""Membership tests for the cone of elements x with ||1 - x|| <= 1.

Two characterizations are computed for every membership query: the defining
norm inequality, and positivity of x + x* - xx* (equivalent via
``||1-x||^2 = 1 - lambda_min(x + x* - xx*)``).  A violation of that identity
beyond tolerance is a numerical fault and raises :class:`CrossCheckError`
instead of returning a silently wrong boolean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    CrossCheckError,
    Tolerances,
    as_square_matrix,
    operator_norm,
)

__all__ = [
    "in_F",
    "in_halfF",
    "accretive",
    "strictly_real_positive",
    "cone_constant",
    "ConeReport",
    "cone_report",
]


def _membership_margins(x: np.ndarray) -> tuple[float, float]:
    """Return (||1 - x||, lambda_min(x + x* - xx*)) for a square matrix."""
    n = x.shape[0]
    norm_val = operator_norm(np.eye(n) - x)
    h = x + x.conj().T - x @ x.conj().T
    lam_min = float(np.linalg.eigvalsh((h + h.conj().T) / 2.0)[0])
    return norm_val, lam_min


def in_F(x, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``||1 - x|| <= 1`` within ``exact_tol``.

    Both characterizations are evaluated; if their booleans disagree while the
    connecting identity is broken beyond ``10 * exact_tol`` (relative to the
    squared norm) the disagreement is surfaced as :class:`CrossCheckError`.
    """
    a = as_square_matrix(x)
    norm_val, lam_min = _membership_margins(a)
    by_norm = norm_val <= 1.0 + tol.exact_tol
    by_eig = lam_min >= -tol.exact_tol
    if by_norm != by_eig:
        identity_gap = abs(norm_val**2 - (1.0 - lam_min))
        if identity_gap > 10.0 * tol.exact_tol * max(1.0, norm_val**2):
            raise CrossCheckError(
                "cone membership characterizations disagree: "
                f"||1-x|| = {norm_val!r}, lambda_min(x+x*-xx*) = {lam_min!r}, "
                f"identity gap = {identity_gap!r}"
            )
        # threshold skew on a borderline element: the norm route decides
    return by_norm


def in_halfF(x, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``||1 - 2x|| <= 1`` within ``exact_tol``."""
    return in_F(2.0 * as_square_matrix(x), tol)


def accretive(x, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether x + x* is positive semidefinite within ``exact_tol``."""
    a = as_square_matrix(x)
    h = a + a.conj().T
    return float(np.linalg.eigvalsh((h + h.conj().T) / 2.0)[0]) >= -tol.exact_tol


def strictly_real_positive(x, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether Re(x) = (x + x*)/2 is strictly positive definite.

    Precondition: ``in_F(x)`` — raises ``ValueError`` otherwise.
    """
    a = as_square_matrix(x)
    if not in_F(a, tol):
        raise ValueError("strictly_real_positive requires ||1 - x|| <= 1")
    h = (a + a.conj().T) / 2.0
    return float(np.linalg.eigvalsh(h)[0]) > tol.exact_tol


def cone_constant(
    x,
    tol: Tolerances = DEFAULT_TOL,
    max_doublings: int = 80,
    bisection_steps: int = 200,
) -> float | None:
    """Largest C >= 0 with ``x + x* >= C x*x`` (within ``exact_tol``), else None.

    Returns None when no positive constant works (x + x* not PSD) and, by
    convention, for the zero matrix (every constant works vacuously).  The
    returned C satisfies the membership certificate ``C*x`` in the cone:
    ``(Cx)*(Cx) = C^2 x*x <= C(x+x*)``.
    """
    a = as_square_matrix(x)
    if operator_norm(a) <= tol.rank_tol:
        return None
    star = a.conj().T @ a
    herm = a + a.conj().T

    def lam_min(c: float) -> float:
        m = herm - c * star
        return float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])

    if lam_min(0.0) < -tol.exact_tol:
        return None
    lo, hi = 0.0, 1.0
    doublings = 0
    while lam_min(hi) >= -tol.exact_tol:
        lo, hi = hi, 2.0 * hi
        doublings += 1
        if doublings > max_doublings:
            raise ArithmeticError("cone constant did not bound above; x*x appears null")
    for _ in range(bisection_steps):
        mid = 0.5 * (lo + hi)
        if lam_min(mid) >= -tol.exact_tol:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, lo):
            break
    if not in_F(lo * a, Tolerances(tol.exact_tol * 10, tol.iter_tol, tol.rank_tol)):
        raise CrossCheckError(
            f"cone constant self-check failed: C = {lo!r} but C*x is not in the cone"
        )
    return lo


@dataclass(frozen=True)
class ConeReport:
    """Summary of all cone predicates for one matrix."""

    in_F: bool
    in_halfF: bool
    accretive: bool
    strictly_real_positive: bool
    best_cone_constant: float | None

    def to_json(self) -> dict:
        return {
            "in_F": self.in_F,
            "in_halfF": self.in_halfF,
            "accretive": self.accretive,
            "strictly_real_positive": self.strictly_real_positive,
            "best_cone_constant": self.best_cone_constant,
        }


def cone_report(x, tol: Tolerances = DEFAULT_TOL) -> ConeReport:
    """Evaluate every membership predicate on ``x``.

    ``strictly_real_positive`` is reported as False when x is not in the cone
    (the standalone predicate would refuse the call).
    """
    a = as_square_matrix(x)
    member = in_F(a, tol)
    return ConeReport(
        in_F=member,
        in_halfF=in_halfF(a, tol),
        accretive=accretive(a, tol),
        strictly_real_positive=strictly_real_positive(a, tol) if member else False,
        best_cone_constant=cone_constant(a, tol),
    )
