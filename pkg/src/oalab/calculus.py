"""Fractional powers, series approximants, and spectral idempotents.

The r-th power of x with ``||1 - x|| <= 1`` uses the principal branch on the
spectrum (which lies in the closed disk |1 - z| <= 1, hence in the closed
right half-plane, so the branch cut is never crossed; 0^r = 0).  The kernel is
a complex Schur triangularization followed by a blocked Parlett recurrence:
eigenvalues are grouped into clusters (tolerance ``cluster_tol``), clusters are
made contiguous by unitary swaps, each diagonal cluster block is evaluated
atomically, and off-diagonal blocks come from Sylvester solves whose
well-posedness is exactly the cluster separation.

An independent polynomial route (:func:`series_power_oracle`) evaluates the
truncated binomial series; it exists so the triangular kernel can be checked
against something that shares none of its machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cone import in_F
from .matcore import (
    DEFAULT_TOL,
    CrossCheckError,
    SpectralGapError,
    Tolerances,
    as_square_matrix,
    operator_norm,
)

__all__ = [
    "BinomialSeries",
    "binomial_coefficients",
    "RecurrenceBreakdown",
    "matrix_power_r",
    "series_power_oracle",
    "bai_element",
    "bai_sequence",
    "root_cai",
    "spectral_idempotent",
]

DEFAULT_CLUSTER_TOL = 1e-4
_ZERO_SNAP = 1e-12


class RecurrenceBreakdown(ArithmeticError):
    """The Parlett recurrence met a confluent cluster it cannot resolve."""


@dataclass(frozen=True)
class BinomialSeries:
    """Coefficients a_1..a_N of 1 - (1-z)^r = sum_k a_k z^k, with tail mass."""

    r: float
    coefficients: np.ndarray
    tail_bound: float


def binomial_coefficients(r: float, n_terms: int) -> BinomialSeries:
    """Binomial series coefficients for exponent r in (0, 1].

    Recurrence: a_1 = r, a_{k+1} = a_k (k - r)/(k + 1).  All coefficients are
    nonnegative and sum to 1; the tail bound is 1 - sum(a_1..a_N).
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"exponent must lie in (0, 1], got {r!r}")
    if n_terms < 1:
        raise ValueError("need at least one term")
    coeffs = np.empty(n_terms)
    coeffs[0] = r
    for k in range(1, n_terms):
        coeffs[k] = coeffs[k - 1] * (k - r) / (k + 1)
    tail = max(0.0, 1.0 - float(coeffs.sum()))
    return BinomialSeries(r=float(r), coefficients=coeffs, tail_bound=tail)


def _principal_power(lam: complex, r: float) -> complex:
    if abs(lam) <= _ZERO_SNAP:
        return 0.0 + 0.0j
    return complex(lam) ** r


def _divided_difference(a: complex, b: complex, r: float) -> complex:
    """Stable (a^r - b^r)/(a - b) on the principal branch."""
    big = max(abs(a), abs(b))
    if big <= _ZERO_SNAP:
        return 0.0 + 0.0j
    if abs(a - b) <= 1e-10 * big:
        mid = 0.5 * (a + b)
        return r * complex(mid) ** (r - 1.0)
    if abs(a - b) <= 0.01 * big and min(abs(a), abs(b)) > _ZERO_SNAP:
        # cancellation regime: a^r - b^r = b^r expm1(r log1p((a-b)/b))
        z = (a - b) / b
        return complex(b) ** r * np.expm1(r * np.log1p(np.complex128(z))) / (a - b)
    return (_principal_power(a, r) - _principal_power(b, r)) / (a - b)


def _cluster_labels(diag: np.ndarray, cluster_tol: float) -> np.ndarray:
    """Union-find transitive clustering of eigenvalues within cluster_tol."""
    n = diag.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(diag[i] - diag[j]) <= cluster_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    roots = [find(i) for i in range(n)]
    order: dict[int, int] = {}
    labels = np.empty(n, dtype=int)
    for i, root in enumerate(roots):
        if root not in order:
            order[root] = len(order)
        labels[i] = order[root]
    return labels


def _swap_adjacent(t: np.ndarray, z: np.ndarray, k: int) -> None:
    """Unitary swap of diagonal positions k, k+1 of a triangular t (in place)."""
    a, b, d = t[k, k], t[k, k + 1], t[k + 1, k + 1]
    v = np.array([b, d - a], dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        t[[k, k + 1]] = t[[k + 1, k]]
        t[:, [k, k + 1]] = t[:, [k + 1, k]]
        z[:, [k, k + 1]] = z[:, [k + 1, k]]
        return
    w = v / norm
    g = np.array([[w[0], -np.conj(w[1])], [w[1], np.conj(w[0])]], dtype=complex)
    t[k : k + 2, :] = g.conj().T @ t[k : k + 2, :]
    t[:, k : k + 2] = t[:, k : k + 2] @ g
    z[:, k : k + 2] = z[:, k : k + 2] @ g
    t[k + 1, k] = 0.0


def _sort_clusters(t: np.ndarray, z: np.ndarray, labels: np.ndarray) -> list[slice]:
    """Bubble cluster labels into contiguous ascending blocks via unitary swaps."""
    labels = labels.copy()
    n = labels.size
    changed = True
    while changed:
        changed = False
        for k in range(n - 1):
            if labels[k] > labels[k + 1]:
                _swap_adjacent(t, z, k)
                labels[[k, k + 1]] = labels[[k + 1, k]]
                changed = True
    blocks = []
    start = 0
    for k in range(1, n + 1):
        if k == n or labels[k] != labels[k - 1]:
            blocks.append(slice(start, k))
            start = k
    return blocks


def _atomic_power(block: np.ndarray, r: float) -> np.ndarray:
    """r-th power of a triangular block whose eigenvalues form one cluster."""
    k = block.shape[0]
    d = np.diag(block)
    if k == 1:
        return np.array([[_principal_power(d[0], r)]])
    scale = max(1.0, float(np.abs(block).max()))
    if np.all(np.abs(d) <= _ZERO_SNAP * scale):
        # exact kernel cluster: the block is numerically zero and 0^r = 0
        return np.zeros_like(block)
    if k == 2:
        f = np.zeros_like(block)
        f[0, 0] = _principal_power(d[0], r)
        f[1, 1] = _principal_power(d[1], r)
        f[0, 1] = block[0, 1] * _divided_difference(d[0], d[1], r)
        return f
    sigma = complex(d.mean())
    spread = float(np.max(np.abs(d - sigma)))
    if abs(sigma) > 10.0 * (spread + 1e-300) * k:
        return _taylor_power(block, sigma, r)
    return _guarded_parlett(block, r)


def _taylor_power(block: np.ndarray, sigma: complex, r: float, max_terms: int = 300) -> np.ndarray:
    """Taylor expansion of z^r about sigma; converges because the cluster
    spread is small relative to |sigma| (distance to the branch point)."""
    k = block.shape[0]
    m = (block - sigma * np.eye(k)) / sigma
    total = np.eye(k, dtype=complex)
    term = np.eye(k, dtype=complex)
    coeff = 1.0
    stall = 0
    for j in range(1, max_terms):
        coeff *= (r - (j - 1)) / j
        term = term @ m
        incr = coeff * term
        total += incr
        if np.abs(incr).max() <= 1e-18 * max(1.0, np.abs(total).max()):
            stall += 1
            if stall >= 3 and j > k:
                break
        else:
            stall = 0
    else:
        raise RecurrenceBreakdown(
            f"Taylor evaluation did not converge for cluster at {sigma!r}"
        )
    return (complex(sigma) ** r) * total


def _guarded_parlett(block: np.ndarray, r: float) -> np.ndarray:
    """Scalar Parlett recurrence inside a near-zero cluster, with guarded
    divisions; degenerate confluence raises instead of amplifying noise."""
    k = block.shape[0]
    d = np.diag(block)
    f = np.zeros_like(block)
    for i in range(k):
        f[i, i] = _principal_power(d[i], r)
    for off in range(1, k):
        for i in range(k - off):
            j = i + off
            if off == 1:
                f[i, j] = block[i, j] * _divided_difference(d[i], d[j], r)
                continue
            denom = d[i] - d[j]
            scale = max(abs(d[i]), abs(d[j]), _ZERO_SNAP)
            if abs(denom) < 1e-3 * scale:
                raise RecurrenceBreakdown(
                    "confluent eigenvalues too close to the branch point: "
                    f"{d[i]!r} vs {d[j]!r}"
                )
            rhs = block[i, j] * (f[i, i] - f[j, j])
            for p in range(i + 1, j):
                rhs += f[i, p] * block[p, j] - block[i, p] * f[p, j]
            f[i, j] = rhs / denom
    return f


def _triangular_power(t: np.ndarray, z: np.ndarray, r: float, cluster_tol: float) -> np.ndarray:
    """Blocked Parlett evaluation of the principal power on a Schur pair."""
    labels = _cluster_labels(np.diag(t), cluster_tol)
    t = t.copy()
    z = z.copy()
    blocks = _sort_clusters(t, z, labels)
    f = np.zeros_like(t)
    for blk in blocks:
        f[blk, blk] = _atomic_power(t[blk, blk], r)
    for off in range(1, len(blocks)):
        for bi in range(len(blocks) - off):
            bj = bi + off
            si, sj = blocks[bi], blocks[bj]
            rhs = f[si, si] @ t[si, sj] - t[si, sj] @ f[sj, sj]
            for bk in range(bi + 1, bj):
                sk = blocks[bk]
                rhs += f[si, sk] @ t[sk, sj] - t[si, sk] @ f[sk, sj]
            f[si, sj] = scipy.linalg.solve_sylvester(t[si, si], -t[sj, sj], rhs)
    return z @ f @ z.conj().T


def matrix_power_r(
    x,
    r: float,
    tol: Tolerances = DEFAULT_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> np.ndarray:
    """Principal r-th power (0 < r <= 1) of x with ``||1 - x|| <= 1``.

    Guarantees on return: ``||1 - x^r|| <= 1 + 10*exact_tol``, commutation
    with x within ``iter_tol``, and ``0^r = 0``.  Violations (possible only if
    a confluent cluster defeated the recurrence) raise instead of returning.
    """
    a = as_square_matrix(x)
    if not 0.0 < r <= 1.0:
        raise ValueError(f"exponent must lie in (0, 1], got {r!r}")
    if not in_F(a, tol):
        raise ValueError("matrix_power_r requires ||1 - x|| <= 1")
    if r == 1.0:
        return a.copy()
    t, z = scipy.linalg.schur(a, output="complex")
    out = _triangular_power(t, z, r, cluster_tol)
    n = a.shape[0]
    if operator_norm(np.eye(n) - out) > 1.0 + 10.0 * tol.exact_tol:
        raise RecurrenceBreakdown(
            "computed power left the cone: ||1 - x^r|| = "
            f"{operator_norm(np.eye(n) - out)!r}"
        )
    comm = operator_norm(out @ a - a @ out)
    if comm > tol.iter_tol * max(1.0, operator_norm(a)):
        raise RecurrenceBreakdown(f"computed power does not commute with x: {comm!r}")
    return out


def series_power_oracle(
    x,
    r: float,
    n_terms: int,
    zero_corrected: bool = True,
) -> tuple[np.ndarray, BinomialSeries]:
    """Truncated binomial series for x^r, an independent check on the kernel.

    With ``zero_corrected`` the polynomial is q_N(x) = sum a_k (1 - (1-x)^k),
    which has q_N(0) = 0 and no constant term, so it lies in span{x, x^2, ...}
    exactly; its error is at most ``2 * tail_bound``.  Without the correction
    the plain truncation 1 - sum a_k (1-x)^k is returned, with error at most
    ``tail_bound`` (both because ``||1 - x|| <= 1``).
    """
    a = as_square_matrix(x)
    series = binomial_coefficients(r, n_terms)
    n = a.shape[0]
    y = np.eye(n) - a
    acc = np.zeros_like(a)
    power = np.eye(n, dtype=complex)
    for coeff in series.coefficients:
        power = power @ y
        acc += coeff * power
    if zero_corrected:
        value = float(series.coefficients.sum()) * np.eye(n) - acc
    else:
        value = np.eye(n) - acc
    return value, series


def bai_element(x, n: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """e_n = 1 - (1/n) sum_{k=1}^n (1-x)^k, with the averaged-sum norm check.

    The partial-sum average has norm at most 1 whenever ``||1 - x|| <= 1``;
    that bound is verified and a violation raises :class:`CrossCheckError`.
    """
    a = as_square_matrix(x)
    if n < 1:
        raise ValueError("n must be a positive integer")
    dim = a.shape[0]
    y = np.eye(dim) - a
    acc = np.zeros_like(a)
    power = np.eye(dim, dtype=complex)
    for _ in range(n):
        power = power @ y
        acc += power
    avg = acc / n
    if operator_norm(avg) > 1.0 + 10.0 * tol.exact_tol:
        raise CrossCheckError(
            f"averaged geometric sum exceeded norm one: {operator_norm(avg)!r}"
        )
    return np.eye(dim) - avg


def bai_sequence(x, n_max: int, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """The elements e_1 .. e_{n_max} (see :func:`bai_element`)."""
    a = as_square_matrix(x)
    if not in_F(a, tol):
        raise ValueError("bai_sequence requires ||1 - x|| <= 1")
    dim = a.shape[0]
    y = np.eye(dim) - a
    out = []
    acc = np.zeros_like(a)
    power = np.eye(dim, dtype=complex)
    for n in range(1, n_max + 1):
        power = power @ y
        acc += power
        avg = acc / n
        if operator_norm(avg) > 1.0 + 10.0 * tol.exact_tol:
            raise CrossCheckError(
                f"averaged geometric sum exceeded norm one at n={n}"
            )
        out.append(np.eye(dim) - avg)
    return out


def root_cai(x, n_max: int, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """u_n = (x/2)^{1/n} for n = 1..n_max; each u_n stays in the cone."""
    a = as_square_matrix(x)
    if not in_F(a, tol):
        raise ValueError("root_cai requires ||1 - x|| <= 1")
    half = a / 2.0
    return [matrix_power_r(half, 1.0 / n, tol) for n in range(1, n_max + 1)]


def spectral_idempotent(x, radius: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Idempotent onto the spectral subspace for eigenvalues with |lam| < radius.

    Requires a genuine gap: any eigenvalue modulus within +-10% of ``radius``
    raises :class:`SpectralGapError`.  The idempotent is built from a sorted
    Schur form and one Sylvester solve (block diagonalization), then verified
    to be idempotent and to commute with x.
    """
    a = as_square_matrix(x)
    if radius <= 0:
        raise ValueError("radius must be positive")
    eigs = np.linalg.eigvals(a)
    near = np.abs(np.abs(eigs) - radius) <= 0.1 * radius
    if np.any(near):
        raise SpectralGapError(
            f"eigenvalue modulus within 10% of radius {radius!r}: "
            f"{eigs[near]!r}"
        )
    t, z, sdim = scipy.linalg.schur(
        a, output="complex", sort=lambda lam: abs(lam) < radius
    )
    n = a.shape[0]
    if sdim == 0:
        return np.zeros_like(a)
    if sdim == n:
        return np.eye(n, dtype=complex)
    t11, t12, t22 = t[:sdim, :sdim], t[:sdim, sdim:], t[sdim:, sdim:]
    # S = [[I, -Y], [0, I]] block-diagonalizes T when T11 Y - Y T22 = T12;
    # the idempotent onto the leading block is then [[I, Y], [0, 0]]
    y = scipy.linalg.solve_sylvester(t11, -t22, t12)
    e_tri = np.zeros_like(t)
    e_tri[:sdim, :sdim] = np.eye(sdim)
    e_tri[:sdim, sdim:] = y
    e = z @ e_tri @ z.conj().T
    scale = max(1.0, operator_norm(e) ** 2)
    if operator_norm(e @ e - e) > 100.0 * tol.exact_tol * scale:
        raise CrossCheckError("spectral idempotent failed e^2 = e")
    if operator_norm(e @ a - a @ e) > 100.0 * tol.exact_tol * max(1.0, operator_norm(a)) * max(
        1.0, operator_norm(e)
    ):
        raise CrossCheckError("spectral idempotent does not commute with x")
    return e
