"""Shared finite-dimensional linear algebra: tolerances, norms, spectra, subspaces.

Everything downstream works with explicit square complex matrices.  All rank
decisions go through singular values compared against ``Tolerances.rank_tol``;
nothing is ever decided by an exact floating-point comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SpectrumError",
    "CrossCheckError",
    "SpectralGapError",
    "ConvergenceError",
    "as_square_matrix",
    "operator_norm",
    "spectrum",
    "spectral_radius",
    "range_kernel_projections",
    "Subspace",
    "matrix_span",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerance bundle.

    exact_tol
        slack for algebraic identities evaluated in floating point
    iter_tol
        convergence target for iterative limits and optimization gaps
    rank_tol
        singular-value threshold for every rank/membership decision
    """

    exact_tol: float = 1e-9
    iter_tol: float = 1e-6
    rank_tol: float = 1e-8

    def __post_init__(self):
        for name in ("exact_tol", "iter_tol", "rank_tol"):
            value = getattr(self, name)
            if not (value > 0.0 and np.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = Tolerances()


class SpectrumError(np.linalg.LinAlgError):
    """Eigenvalue/Schur iteration failed to converge."""


class CrossCheckError(ArithmeticError):
    """Two supposedly equivalent numerical routes disagreed beyond tolerance."""


class SpectralGapError(ValueError):
    """A separating circle passes too close to the spectrum."""


class ConvergenceError(RuntimeError):
    """An iterative limit did not converge within its budget."""


def as_square_matrix(x) -> np.ndarray:
    """Validate and return ``x`` as a square complex ndarray."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValueError("matrix contains non-finite entries")
    return a


def operator_norm(x) -> float:
    """Largest singular value of ``x``."""
    return float(np.linalg.norm(as_square_matrix(x), 2))


def spectrum(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of ``x`` in nonincreasing modulus order.

    Computed from a unitary (complex Schur) triangularization; an iteration
    failure surfaces as :class:`SpectrumError` rather than silently.
    """
    a = as_square_matrix(x)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    try:
        t, _ = scipy.linalg.schur(a, output="complex")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SpectrumError(f"Schur iteration failed: {exc}") from exc
    eigs = np.diag(t)
    return eigs[np.argsort(-np.abs(eigs), kind="stable")]


def spectral_radius(x, tol: Tolerances = DEFAULT_TOL) -> float:
    eigs = spectrum(x, tol)
    return float(np.abs(eigs[0])) if eigs.size else 0.0


def range_kernel_projections(x, tol: Tolerances = DEFAULT_TOL):
    """Orthogonal projections onto the range and the kernel of ``x``.

    Returns ``(p_range, p_kernel, rank)``.  The rank is the number of
    singular values above ``rank_tol`` relative to the largest one, so
    ``p_range @ x == x`` and ``x @ p_kernel == 0`` hold within that scale.
    """
    a = as_square_matrix(x)
    u, s, vh = np.linalg.svd(a)
    cutoff = tol.rank_tol * (s[0] if s.size and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    p_range = u[:, :rank] @ u[:, :rank].conj().T
    p_kernel = vh[rank:].conj().T @ vh[rank:]
    return p_range, p_kernel, rank


class Subspace:
    """A subspace of C^d stored as orthonormal rows.

    Membership and equality decisions compare projection residuals against
    ``rank_tol`` (relative to ``max(1, |v|)``), never exact comparisons.
    """

    def __init__(self, basis: np.ndarray, ambient_dim: int, rank_tol: float):
        self.basis = np.asarray(basis, dtype=complex).reshape(-1, ambient_dim)
        self.ambient_dim = int(ambient_dim)
        self.rank_tol = float(rank_tol)

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        arr = np.asarray(vectors, dtype=complex)
        if arr.size == 0:
            return cls(np.zeros((0, ambient_dim)), ambient_dim, tol.rank_tol)
        arr = arr.reshape(len(arr), -1)
        if arr.shape[1] != ambient_dim:
            raise ValueError(
                f"generators live in dimension {arr.shape[1]}, ambient is {ambient_dim}"
            )
        _, s, vh = np.linalg.svd(arr, full_matrices=False)
        if s.size == 0 or s[0] <= 0:
            return cls(np.zeros((0, ambient_dim)), ambient_dim, tol.rank_tol)
        keep = s > tol.rank_tol * s[0]
        return cls(vh[keep], ambient_dim, tol.rank_tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def project(self, v) -> np.ndarray:
        vec = np.asarray(v, dtype=complex).ravel()
        if vec.size != self.ambient_dim:
            raise ValueError(f"vector has dimension {vec.size}, ambient is {self.ambient_dim}")
        if self.dim == 0:
            return np.zeros_like(vec)
        return self.basis.T @ (self.basis.conj() @ vec)

    def residual(self, v) -> float:
        vec = np.asarray(v, dtype=complex).ravel()
        return float(np.linalg.norm(vec - self.project(vec)))

    def membership(self, v) -> bool:
        vec = np.asarray(v, dtype=complex).ravel()
        scale = max(1.0, float(np.linalg.norm(vec)))
        return self.residual(vec) <= self.rank_tol * scale

    def equals(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient dimensions")
        if self.dim != other.dim:
            return False
        return all(other.membership(b) for b in self.basis) and all(
            self.membership(b) for b in other.basis
        )


def matrix_span(matrices, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Span of a family of equally-shaped matrices, flattened row-major."""
    mats = [as_square_matrix(m) for m in matrices]
    if not mats:
        raise ValueError("need at least one generator")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ValueError(f"generator shapes differ: {m.shape} vs {(n, n)}")
    return Subspace.from_vectors([m.ravel() for m in mats], n * n, tol)


def matrix_to_json(x) -> dict:
    """Serialize to ``{"dim": n, "entries": [[re, im], ...]}`` (row-major)."""
    a = as_square_matrix(x)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return {"dim": int(a.shape[0]), "entries": entries}


def matrix_from_json(payload: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; rejects non-square payloads."""
    try:
        dim = int(payload["dim"])
        entries = payload["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix payload: {exc}") from exc
    if dim < 0 or len(entries) != dim * dim:
        raise ValueError(
            f"non-square payload: dim={dim} expects {dim * dim} entries, got {len(entries)}"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return as_square_matrix(flat.reshape(dim, dim))
