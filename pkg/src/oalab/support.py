"""Support projections of cone elements, computed along independent routes.

For x with ``||1 - x|| <= 1`` the kernel is orthogonal to the range, so the
orthogonal projection onto the closed range is a two-sided support:
``s(x) x = x = x s(x)``.  Three routes compute it:

``svd``
    range projection from the singular value decomposition;
``bai_limit``
    the n -> infinity limit of e_n = 1 - (1/n) sum_k (1-x)^k evaluated in
    closed form through the eigenstructure (the limit function is 0 on the
    kernel eigenvalues and 1 elsewhere), with a Schur/Sylvester spectral
    projector as fallback when the eigenbasis is ill-conditioned;
``power_limit``
    lim (z*z)^n for z = 1 - x/2, computed by repeated squaring, which
    converges to the projection onto the kernel; the route reports 1 - limit.

The routes share no machinery, so their pairwise agreement is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import spectral_idempotent
from .cone import in_F
from .matcore import (
    DEFAULT_TOL,
    ConvergenceError,
    Tolerances,
    as_square_matrix,
    operator_norm,
    range_kernel_projections,
)

__all__ = [
    "SupportResult",
    "support_projection",
    "support_projection_routes",
    "power_limit_projection",
    "join_supports",
    "peak_projection",
    "DensityState",
    "state_vanishing_check",
    "VanishingReport",
]


@dataclass(frozen=True)
class SupportResult:
    projection: np.ndarray
    route: str
    residual: float


def _support_residual(p: np.ndarray, x: np.ndarray) -> float:
    return max(
        operator_norm(p @ p - p),
        operator_norm(p - p.conj().T),
        operator_norm(p @ x - x),
        operator_norm(x @ p - x),
    )


def _require_nonzero(x: np.ndarray, tol: Tolerances) -> None:
    if operator_norm(x) <= tol.rank_tol:
        raise ValueError("support projection requires x != 0")


def support_projection(x, tol: Tolerances = DEFAULT_TOL) -> SupportResult:
    """Support projection of a nonzero x via the SVD range projection."""
    a = as_square_matrix(x)
    _require_nonzero(a, tol)
    p, _, _ = range_kernel_projections(a, tol)
    return SupportResult(projection=p, route="svd", residual=_support_residual(p, a))


def _bai_limit_projection(a: np.ndarray, tol: Tolerances) -> np.ndarray:
    eigvals, v = np.linalg.eig(a)
    scale = float(np.abs(eigvals).max())
    kernel = np.abs(eigvals) <= tol.rank_tol * max(1.0, scale)
    if not np.any(kernel):
        return np.eye(a.shape[0], dtype=complex)
    try:
        vinv = np.linalg.inv(v)
        cond = np.linalg.cond(v)
    except np.linalg.LinAlgError:
        cond = np.inf
    if cond < 1e8:
        limit = np.where(kernel, 0.0, 1.0).astype(complex)
        return v @ np.diag(limit) @ vinv
    # defective or near-defective eigenbasis: use the spectral projector at a
    # radius separating the kernel cluster from the rest
    zero_top = float(np.abs(eigvals[kernel]).max())
    nonzero_bottom = float(np.abs(eigvals[~kernel]).min())
    radius = np.sqrt(max(zero_top, 1e-300) * nonzero_bottom)
    return np.eye(a.shape[0], dtype=complex) - spectral_idempotent(a, radius, tol)


def power_limit_projection(
    x,
    tol: Tolerances = DEFAULT_TOL,
    n_max: int = 2**40,
) -> tuple[np.ndarray, int]:
    """Limit of (z*z)^n for z = 1 - x/2, by repeated squaring.

    Returns ``(limit, n)`` where n is the first power of two at which the
    squaring step moved by less than ``iter_tol``; the limit is the orthogonal
    projection onto the kernel of x.  Near-kernel directions far below
    ``rank_tol`` plateau at eigenvalue ~1 and are captured into the kernel,
    matching the SVD rank decision; directions at intermediate scales either
    resolve (slowly) or exhaust ``n_max``, which raises
    :class:`ConvergenceError` with the final residual.
    """
    a = as_square_matrix(x)
    dim = a.shape[0]
    z = np.eye(dim) - a / 2.0
    w = z.conj().T @ z
    w = (w + w.conj().T) / 2.0
    n = 1
    while n < n_max:
        nxt = w @ w
        nxt = (nxt + nxt.conj().T) / 2.0
        n *= 2
        step = operator_norm(nxt - w)
        w = nxt
        if step < tol.iter_tol:
            return w, n
    raise ConvergenceError(
        f"(z*z)^n did not settle by n = {n_max}: last step {step!r}"
    )


def support_projection_routes(x, tol: Tolerances = DEFAULT_TOL) -> dict:
    """All three support routes with their pairwise residuals."""
    a = as_square_matrix(x)
    _require_nonzero(a, tol)
    svd_route = support_projection(a, tol).projection
    bai_route = _bai_limit_projection(a, tol)
    kernel_proj, n_used = power_limit_projection(a, tol)
    power_route = np.eye(a.shape[0]) - kernel_proj
    return {
        "svd": svd_route,
        "bai_limit": bai_route,
        "power_limit": power_route,
        "power_limit_n": n_used,
        "residuals": {
            "svd_vs_bai_limit": operator_norm(svd_route - bai_route),
            "svd_vs_power_limit": operator_norm(svd_route - power_route),
            "bai_limit_vs_power_limit": operator_norm(bai_route - power_route),
        },
    }


def join_supports(xs, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Join of the supports of a family in the cone, via two routes.

    ``join``: range projection of the horizontally stacked family (SVD).
    ``via_sum``: support of the average (1/k) sum x_k — a convex combination,
    hence again in the cone, whose support is the join.
    """
    mats = [as_square_matrix(m) for m in xs]
    if not mats:
        raise ValueError("need at least one element")
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape != (dim, dim):
            raise ValueError("family members have mismatched dimensions")
        if not in_F(m, tol):
            raise ValueError("join_supports requires every member in the cone")
        _require_nonzero(m, tol)
    stacked = np.hstack(mats)
    u, s, _ = np.linalg.svd(stacked, full_matrices=True)
    cutoff = tol.rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    join = u[:, :rank] @ u[:, :rank].conj().T
    mean = sum(mats) / len(mats)
    via_sum = support_projection(mean, tol).projection
    return {
        "join": join,
        "via_sum": via_sum,
        "residual": operator_norm(join - via_sum),
    }


def peak_projection(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Complement 1 - s(x) of the support projection."""
    a = as_square_matrix(x)
    result = support_projection(a, tol)
    return np.eye(a.shape[0]) - result.projection


@dataclass(frozen=True)
class DensityState:
    """A state given by a density matrix (Hermitian, PSD, unit trace)."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = as_square_matrix(self.matrix)
        object.__setattr__(self, "matrix", rho)
        if operator_norm(rho - rho.conj().T) > 1e-9 * max(1.0, operator_norm(rho)):
            raise ValueError("density matrix must be Hermitian")
        if float(np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]) < -1e-9:
            raise ValueError("density matrix must be positive semidefinite")
        if abs(np.trace(rho).real - 1.0) > 1e-8:
            raise ValueError("density matrix must have unit trace")

    def __call__(self, x) -> complex:
        return complex(np.trace(self.matrix @ as_square_matrix(x)))


@dataclass(frozen=True)
class VanishingReport:
    value_on_x: complex
    value_on_support: float
    vanishes_on_x: bool
    vanishes_on_support: bool

    @property
    def consistent(self) -> bool:
        return self.vanishes_on_x == self.vanishes_on_support


def state_vanishing_check(x, rho, tol: Tolerances = DEFAULT_TOL) -> VanishingReport:
    """Check phi(x) = 0 iff phi(s(x)) = 0 for a state phi = tr(rho .).

    Both values are reported with booleans at ``iter_tol``; for x in the cone
    the exact-zero equivalence is a theorem, so the booleans agree except on
    threshold-straddling inputs.
    """
    a = as_square_matrix(x)
    state = rho if isinstance(rho, DensityState) else DensityState(rho)
    s = support_projection(a, tol).projection
    value_x = state(a)
    value_s = float(state(s).real)
    return VanishingReport(
        value_on_x=value_x,
        value_on_support=value_s,
        vanishes_on_x=abs(value_x) <= tol.iter_tol,
        vanishes_on_support=abs(value_s) <= tol.iter_tol,
    )
