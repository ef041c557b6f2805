"""Concrete example algebras and operators used by the verification suites.

Three constructions:

* :func:`example_two_dim` -- the unital two-dimensional algebra of
  upper-triangular ``2x2`` matrices whose corner entry is the difference of
  the diagonal entries, ``{[[s, s-t], [0, t]]}``.  Every non-scalar ball
  element of this algebra has powers decaying to zero (no nontrivial
  idempotents of norm one), making it the standard pass case for
  :func:`~oalab.algebra.nor_battery`.
* :func:`example_rdr` -- the conjugated diagonal algebra ``R D R^{-1}`` on
  ``C^n`` with ``R = I + S/2`` (``S`` the backward shift).  The point of the
  construction: no nontrivial diagonal 0/1 projection commutes with
  ``R* R``, witnessed exhaustively.
* :func:`volterra` -- the midpoint-rule discretization of the integration
  operator ``(Vf)(t) = integral of f over [0, t]`` on the unit interval.
  Lower-triangular with quasinilpotent truncations: the spectral radius is
  the diagonal value ``1/(2n)`` while the operator norm converges to the
  continuous value ``2/pi``.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .algebra import FDAlgebra
from .matcore import DEFAULT_TOL, Tolerances, operator_norm

__all__ = [
    "RdrExample",
    "example_two_dim",
    "example_rdr",
    "volterra",
]


def example_two_dim(tol: Tolerances = DEFAULT_TOL) -> FDAlgebra:
    """The algebra ``{[[s, s-t], [0, t]] : s, t complex}`` in ``M_2``.

    Basis ``{identity, [[1,1],[0,0]]}``; unital with the ambient identity.
    Closure under multiplication is verified at construction.
    """
    basis = [
        np.eye(2, dtype=complex),
        np.array([[1.0, 1.0], [0.0, 0.0]], dtype=complex),
    ]
    return FDAlgebra.build(basis, tol)


@dataclasses.dataclass(frozen=True)
class RdrExample:
    """Generator data for the conjugated diagonal algebra on ``C^n``.

    ``r`` is ``I + S/2`` with ``S`` the backward shift; ``basis`` stacks the
    conjugated diagonal units ``R E_kk R^{-1}`` (already closed under
    multiplication: they are commuting idempotents summing to the identity).
    ``min_commutator`` is the minimum over all ``2^n - 2`` nontrivial
    diagonal 0/1 projections ``p`` of ``||p (R*R) - (R*R) p||`` -- strictly
    positive, witnessing that the commutant of ``R* R`` meets the diagonal
    only in scalars.
    """

    n: int
    r: np.ndarray
    r_inv: np.ndarray
    basis: np.ndarray
    min_commutator: float


def example_rdr(n: int) -> RdrExample:
    """Build the ``R D R^{-1}`` truncation and its projection-commutator gap.

    ``2 <= n <= 12`` (the projection enumeration is exhaustive over ``2^n``
    diagonal patterns, excluding 0 and the identity).
    """
    if not 2 <= n <= 12:
        raise ValueError("n must lie in [2, 12] (enumeration is 2^n)")
    s = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        s[i, i + 1] = 1.0
    r = np.eye(n, dtype=complex) + s / 2.0
    r_inv = np.linalg.inv(r)
    basis = np.stack(
        [r @ np.diag(np.eye(n)[k]).astype(complex) @ r_inv for k in range(n)]
    )
    gram = r.conj().T @ r
    best = np.inf
    for mask in range(1, 2**n - 1):
        diag = np.array([(mask >> k) & 1 for k in range(n)], dtype=float)
        p = np.diag(diag).astype(complex)
        best = min(best, operator_norm(p @ gram - gram @ p))
    return RdrExample(n=n, r=r, r_inv=r_inv, basis=basis, min_commutator=float(best))


def volterra(n: int) -> np.ndarray:
    """Midpoint-rule discretization of the integration operator on ``[0, 1]``.

    On the grid ``t_i = (i - 1/2)/n`` the matrix has entries ``1/n`` strictly
    below the diagonal, ``1/(2n)`` on it, and zero above: integrating up to
    the midpoint contributes half a cell.  The half-weight diagonal keeps the
    matrix invertible while its norm converges to the continuous value
    ``2/pi`` at first order; the spectral radius is exactly ``1/(2n)``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    v = np.tril(np.full((n, n), 1.0 / n), k=-1).astype(complex)
    np.fill_diagonal(v, 1.0 / (2.0 * n))
    return v
