"""Linear maps between matrix algebras and their complete-positivity data.

A :class:`MatrixMap` stores a linear map ``T: M_n -> M_m`` through its
action on the matrix units ``E_ij`` (row-major).  The Choi matrix
``C = sum_ij E_ij (x) T(E_ij)`` linearizes the map: ``T`` is completely
positive exactly when ``C`` is positive semidefinite, and an
eigendecomposition of ``C`` yields a Kraus/Stinespring factorization.

Amplification ``id_k (x) T`` acts blockwise on ``M_k(M_n)``; whether a map
stays bounded on the scaled cones ``{x: ||1 - x|| <= 1}`` *uniformly over
all amplification levels* is a genuinely stronger condition than at level
one, and :func:`ocp_falsify` searches for explicit level-``k`` witnesses
against a proposed bound.  The transpose map is the canonical failure: its
level-2 value on twice the maximally entangled projection exceeds any
level-1 bound by exactly 1.
"""

from __future__ import annotations

import dataclasses
import functools
import json
from typing import Callable, List, Optional, Sequence

import numpy as np

from .cone import in_F
from .matcore import (
    DEFAULT_TOL,
    CrossCheckError,
    Tolerances,
    as_square_matrix,
    matrix_from_json,
    matrix_to_json,
    operator_norm,
)

__all__ = [
    "MatrixMap",
    "StinespringTriple",
    "DiskTestReport",
    "ExtensionResult",
    "matrix_map_from_function",
    "matrix_map_from_kraus",
    "identity_map",
    "transpose_map",
    "is_cp",
    "amplify",
    "entangled_cone_element",
    "ocp_falsify",
    "disk_test",
    "stinespring",
    "cp_extension_search",
]

_DIM_CAP = 64


@dataclasses.dataclass(frozen=True)
class MatrixMap:
    """A linear map ``M_n -> M_m`` given by its images of the matrix units.

    ``action[i, j]`` is ``T(E_ij)`` as an ``m x m`` array; the map extends
    by linearity: ``T(x) = sum_ij x_ij T(E_ij)``.
    """

    in_dim: int
    out_dim: int
    action: np.ndarray

    def __post_init__(self):
        n, m = self.in_dim, self.out_dim
        if n < 1 or m < 1:
            raise ValueError("dimensions must be positive")
        arr = np.asarray(self.action, dtype=complex)
        if arr.shape != (n, n, m, m):
            raise ValueError(
                f"action must have shape {(n, n, m, m)}, got {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("action entries must be finite")
        object.__setattr__(self, "action", arr)

    def apply(self, x) -> np.ndarray:
        x = as_square_matrix(x)
        if x.shape != (self.in_dim, self.in_dim):
            raise ValueError(
                f"expected a {self.in_dim}x{self.in_dim} argument, got {x.shape}"
            )
        return np.tensordot(x, self.action, axes=([0, 1], [0, 1]))

    def adjoint_apply(self, y) -> np.ndarray:
        """The Frobenius adjoint: ``<T(x), y> = <x, adjoint_apply(y)>``."""
        y = as_square_matrix(y)
        if y.shape != (self.out_dim, self.out_dim):
            raise ValueError(
                f"expected a {self.out_dim}x{self.out_dim} argument, got {y.shape}"
            )
        return np.tensordot(self.action.conj(), y, axes=([2, 3], [0, 1]))

    @functools.cached_property
    def choi(self) -> np.ndarray:
        """``sum_ij E_ij (x) T(E_ij)``, indexed ``(i*m + a, j*m + b)``."""
        n, m = self.in_dim, self.out_dim
        return self.action.transpose(0, 2, 1, 3).reshape(n * m, n * m).copy()

    def to_json(self) -> str:
        images = [
            matrix_to_json(self.action[i, j])
            for i in range(self.in_dim)
            for j in range(self.in_dim)
        ]
        return json.dumps(
            {"in_dim": self.in_dim, "out_dim": self.out_dim, "action": images}
        )

    @staticmethod
    def from_json(text: str) -> "MatrixMap":
        payload = json.loads(text)
        n, m = int(payload["in_dim"]), int(payload["out_dim"])
        images = payload["action"]
        if len(images) != n * n:
            raise ValueError(f"expected {n * n} images, got {len(images)}")
        action = np.zeros((n, n, m, m), dtype=complex)
        for i in range(n):
            for j in range(n):
                action[i, j] = matrix_from_json(images[i * n + j])
        return MatrixMap(in_dim=n, out_dim=m, action=action)


def matrix_map_from_function(n: int, m: int, fn: Callable) -> MatrixMap:
    """Tabulate ``fn`` on the matrix units of ``M_n``."""
    action = np.zeros((n, n, m, m), dtype=complex)
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=complex)
            unit[i, j] = 1.0
            action[i, j] = as_square_matrix(
                np.ascontiguousarray(fn(unit), dtype=complex)
            )
    return MatrixMap(in_dim=n, out_dim=m, action=action)


def matrix_map_from_kraus(kraus: Sequence[np.ndarray]) -> MatrixMap:
    """``T(x) = sum_s K_s x K_s^*`` -- completely positive by construction."""
    mats = [np.asarray(k, dtype=complex) for k in kraus]
    if not mats:
        raise ValueError("need at least one Kraus operator")
    m, n = mats[0].shape
    if any(k.shape != (m, n) for k in mats):
        raise ValueError("Kraus operators must share one shape")
    return matrix_map_from_function(
        n, m, lambda x: sum(k @ x @ k.conj().T for k in mats)
    )


def identity_map(n: int) -> MatrixMap:
    return matrix_map_from_function(n, n, lambda x: x)


def transpose_map(n: int) -> MatrixMap:
    return matrix_map_from_function(n, n, lambda x: x.T)


def is_cp(t: MatrixMap, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Complete positivity via the Choi matrix.

    ``T`` is completely positive iff its Choi matrix is PSD; a
    non-Hermitian Choi matrix already rules that out.  The eigenvalue
    threshold is ``exact_tol`` relative to the Choi scale.
    """
    c = t.choi
    scale = max(1.0, operator_norm(c))
    if operator_norm(c - c.conj().T) > tol.exact_tol * scale:
        return False
    lam = np.linalg.eigvalsh((c + c.conj().T) / 2.0)
    return bool(lam[0] >= -tol.exact_tol * scale)


def amplify(t: MatrixMap, k: int, tol: Tolerances = DEFAULT_TOL) -> MatrixMap:
    """``id_k (x) T`` on ``M_k(M_n)``, block row/column index ``(i, a) = i*n + a``.

    The Choi matrix of the amplification is cross-checked against the
    permuted Kronecker product ``C(id_k) (x) C(T)`` whenever the sizes stay
    modest; a mismatch raises :class:`CrossCheckError`.
    """
    if k < 1:
        raise ValueError("amplification level must be positive")
    n, m = t.in_dim, t.out_dim
    kn, km = k * n, k * m
    if kn > _DIM_CAP or km > _DIM_CAP:
        raise ValueError(
            f"amplified dimensions {kn}x{km} exceed the {_DIM_CAP} cap"
        )
    action = np.zeros((kn, kn, km, km), dtype=complex)
    for i in range(k):
        for j in range(k):
            for a in range(n):
                for b in range(n):
                    block = np.zeros((km, km), dtype=complex)
                    block[i * m : (i + 1) * m, j * m : (j + 1) * m] = t.action[a, b]
                    action[i * n + a, j * n + b] = block
    amplified = MatrixMap(in_dim=kn, out_dim=km, action=action)
    if kn * km <= 1024:
        _verify_choi_shuffle(t, amplified, k, tol)
    return amplified


def _verify_choi_shuffle(
    t: MatrixMap, amplified: MatrixMap, k: int, tol: Tolerances
) -> None:
    """Check ``C(id_k (x) T) = P [C(id_k) (x) C(T)] P^T`` for the regrouping P."""
    n, m = t.in_dim, t.out_dim
    size = k * n * k * m
    kron = np.kron(identity_map(k).choi, t.choi)
    perm = np.empty(size, dtype=int)
    for i in range(k):
        for u in range(k):
            for a in range(n):
                for b in range(m):
                    src = ((i * k + u) * n + a) * m + b
                    dst = (i * n + a) * (k * m) + u * m + b
                    perm[dst] = src
    shuffled = kron[np.ix_(perm, perm)]
    defect = operator_norm(amplified.choi - shuffled)
    if defect > tol.exact_tol * max(1.0, operator_norm(kron)):
        raise CrossCheckError(
            f"amplified Choi matrix disagrees with the permuted Kronecker "
            f"product by {defect:.3e}"
        )


# --------------------------------------------------------------------------
# falsification of uniform cone bounds


def entangled_cone_element(n: int) -> np.ndarray:
    """``2p`` for the maximally entangled projection ``p`` in ``M_n (x) M_n``.

    ``2p - 1`` is a reflection, so ``||1 - 2p|| = 1`` and ``2p`` lies in the
    cone ``{x: ||1 - x|| <= 1}`` at amplification level ``n``.
    """
    size = n * n
    vec = np.zeros(size, dtype=complex)
    for i in range(n):
        vec[i * n + i] = 1.0
    p = np.outer(vec, vec.conj()) / n
    return 2.0 * p


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _polar_unitary(g: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(g)
    return u @ vh


def ocp_falsify(
    t: MatrixMap,
    c: float,
    k: int,
    budget: int = 10000,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> Optional[dict]:
    """Search for a level-``k`` witness against ``||c 1 - T_k(x)|| <= c``.

    The claim under attack: for every ``x`` in the cone
    ``{x in M_kn : ||1 - x|| <= 1}``, the amplified image satisfies
    ``||c 1 - (id_k (x) T)(x)|| <= c``.  The objective is convex in ``x``
    and the cone is ``1 +`` (unit ball), so the supremum is attained at
    ``x = 1 + u`` with ``u`` unitary; the search draws Haar unitaries, adds
    the entangled element ``2p`` when ``k`` equals the input dimension, and
    polishes the best candidate by conditional-gradient steps (each step
    maximizes the linearized objective over the ball, which lands on a
    unitary again).

    Returns a certified witness dict (the matrix, its value, the margin)
    or ``None``.  ``None`` is *not* a proof that the bound holds -- only a
    failed search.  Every returned witness is independently re-verified:
    cone membership via the membership predicate and the value by a fresh
    norm evaluation; ``value > c + iter_tol`` is required.
    """
    if c <= 0:
        raise ValueError("the bound constant must be positive")
    amp = amplify(t, k, tol)
    kn, km = amp.in_dim, amp.out_dim
    rng = np.random.default_rng(seed)
    target = c * np.eye(km, dtype=complex)
    eye = np.eye(kn, dtype=complex)

    def value(x: np.ndarray) -> float:
        return operator_norm(target - amp.apply(x))

    evaluations = 0
    candidates = [eye + eye, np.zeros((kn, kn), dtype=complex)]
    if k == t.in_dim:
        candidates.append(entangled_cone_element(t.in_dim))
    best_x, best_val = None, -np.inf
    for x in candidates:
        val = value(x)
        evaluations += 1
        if val > best_val:
            best_x, best_val = x, val
    while evaluations < max(budget // 2, len(candidates) + 1):
        x = eye + _haar_unitary(rng, kn)
        val = value(x)
        evaluations += 1
        if val > best_val:
            best_x, best_val = x, val

    # Conditional-gradient polish: move to the unitary maximizing the
    # linearization of the convex objective (monotone for convex objectives).
    x = best_x
    while evaluations < budget:
        mat = target - amp.apply(x)
        svd_u, _, svd_vh = np.linalg.svd(mat)
        grad = -amp.adjoint_apply(np.outer(svd_u[:, 0], svd_vh[0].conj()))
        x_next = eye + _polar_unitary(grad)
        val = value(x_next)
        evaluations += 1
        if val <= best_val + tol.exact_tol:
            break
        best_x, best_val, x = x_next, val, x_next

    # Independent certification of the best candidate.
    witness = best_x
    certified_value = operator_norm(target - amp.apply(witness))
    if in_F(witness, tol) and certified_value > c + tol.iter_tol:
        return {
            "x": matrix_to_json(witness),
            "level": k,
            "bound": float(c),
            "value": float(certified_value),
            "margin": float(certified_value - c),
        }
    return None


# --------------------------------------------------------------------------
# disk test


@dataclasses.dataclass(frozen=True)
class DiskTestReport:
    """Sampled and algebraic verdicts for the scaling-disk condition.

    ``member`` means ``z x`` stays in the cone ``{y: ||1-y|| <= 1}`` for
    every ``z`` in the closed disk ``|1 - z| <= 1``; by subharmonicity of
    ``z -> ||1 - z x||`` the boundary circle decides this.  The condition
    holds exactly for positive-semidefinite contractions (for ``w`` in the
    numerical range, ``w . disk c disk`` forces ``w in [0, 1]``), which is
    the independent cross-check.
    """

    member: bool
    worst_excess: float
    worst_z: complex
    circle_points: int
    slack: float
    hermitian_psd: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "member": bool(self.member),
                "worst_excess": float(self.worst_excess),
                "worst_z": [self.worst_z.real, self.worst_z.imag],
                "circle_points": int(self.circle_points),
                "slack": float(self.slack),
                "hermitian_psd": bool(self.hermitian_psd),
            }
        )


def disk_test(
    x, circle_points: int = 500, tol: Tolerances = DEFAULT_TOL
) -> DiskTestReport:
    """Sample ``||1 - z x|| <= 1`` over the circle ``|1 - z| = 1`` plus 0, 1, 2.

    The sampled verdict must agree with the algebraic one (Hermitian with
    eigenvalues in ``[0, 1]``) up to the grid slack
    ``(2 pi / N) ||x|| + 10 exact_tol``; disagreement beyond the slack
    raises :class:`CrossCheckError`.
    """
    x = as_square_matrix(x)
    if circle_points < 8:
        raise ValueError("need at least 8 circle points")
    n = x.shape[0]
    eye = np.eye(n, dtype=complex)
    thetas = 2.0 * np.pi * np.arange(circle_points) / circle_points
    zs = [1.0 + np.exp(1j * th) for th in thetas] + [0.0, 1.0, 2.0]
    worst_excess, worst_z = -np.inf, 0.0 + 0.0j
    for z in zs:
        excess = operator_norm(eye - z * x) - 1.0
        if excess > worst_excess:
            worst_excess, worst_z = excess, complex(z)
    slack = (2.0 * np.pi / circle_points) * operator_norm(x) + 10.0 * tol.exact_tol
    sampled_member = worst_excess <= tol.exact_tol * 10.0

    hermitian_defect = operator_norm(x - x.conj().T)
    lam = np.linalg.eigvalsh((x + x.conj().T) / 2.0)
    algebraic_excess = max(
        hermitian_defect, float(-lam[0]), float(lam[-1] - 1.0), 0.0
    )
    hermitian_psd = algebraic_excess <= tol.exact_tol

    # The two verdicts must agree up to boundary rounding: a sampled pass
    # with a clear algebraic failure (or a sampled failure beyond the grid
    # slack with an algebraic pass) is a genuine inconsistency.
    if sampled_member and algebraic_excess > 100.0 * tol.exact_tol:
        raise CrossCheckError(
            f"disk sweep passed but the PSD-contraction check fails by "
            f"{algebraic_excess:.3e}"
        )
    if hermitian_psd and not sampled_member and worst_excess > slack:
        raise CrossCheckError(
            f"PSD-contraction check passed but the disk sweep fails by "
            f"{worst_excess:.3e} (slack {slack:.3e})"
        )
    return DiskTestReport(
        member=hermitian_psd,
        worst_excess=float(worst_excess),
        worst_z=worst_z,
        circle_points=circle_points,
        slack=float(slack),
        hermitian_psd=hermitian_psd,
    )


# --------------------------------------------------------------------------
# Stinespring factorization


@dataclasses.dataclass(frozen=True)
class StinespringTriple:
    """Kraus operators and the stacked dilation isometry-like factor.

    ``T(x) = sum_s kraus[s] x kraus[s]^*`` and, with ``v`` the vertical
    stack of the ``kraus[s]^*``, ``T(x) = v^* (I_r (x) x) v`` so that
    ``||v||^2 = ||T(1)||``.
    """

    kraus: List[np.ndarray]
    v: np.ndarray
    residual: float

    @property
    def rank(self) -> int:
        return len(self.kraus)


def stinespring(t: MatrixMap, tol: Tolerances = DEFAULT_TOL) -> StinespringTriple:
    """Factor a completely positive map through its Choi eigendecomposition.

    Eigenvectors of the Choi matrix with eigenvalue above
    ``rank_tol * max-eigenvalue`` become Kraus operators
    ``K_s = sqrt(mu_s) reshape(v_s, (n, m)).T``; the reported residual is
    the worst Frobenius error of ``T(E_ij) - sum_s K_s E_ij K_s^*`` and the
    reconstruction is verified against the recomputed map.
    """
    if not is_cp(t, tol):
        raise ValueError("Stinespring factorization needs a completely positive map")
    n, m = t.in_dim, t.out_dim
    c = (t.choi + t.choi.conj().T) / 2.0
    lam, vecs = np.linalg.eigh(c)
    top = max(float(lam[-1]), 0.0)
    kraus = []
    for s in range(len(lam) - 1, -1, -1):
        if lam[s] <= tol.rank_tol * max(top, 1.0):
            break
        kraus.append(np.sqrt(lam[s]) * vecs[:, s].reshape(n, m).T.copy())
    if not kraus:
        kraus = [np.zeros((m, n), dtype=complex)]
    rebuilt = matrix_map_from_kraus(kraus)
    residual = float(
        max(
            np.linalg.norm(t.action[i, j] - rebuilt.action[i, j])
            for i in range(n)
            for j in range(n)
        )
    )
    v = np.vstack([k.conj().T for k in kraus])
    return StinespringTriple(kraus=kraus, v=v, residual=residual)


# --------------------------------------------------------------------------
# completely positive extension search


@dataclasses.dataclass(frozen=True)
class ExtensionResult:
    """Outcome of the alternating-projection search for a CP extension.

    ``status`` is ``"FEASIBLE"`` (a certified extension was found; its
    Choi matrix, agreement residual, and PSD defect are reported) or
    ``"INCONCLUSIVE"`` (the iteration did not certify within the budget --
    which is *not* an infeasibility proof).
    """

    status: str
    choi: Optional[np.ndarray]
    agreement_residual: float
    psd_defect: float
    iterations: int

    @property
    def feasible(self) -> bool:
        return self.status == "FEASIBLE"


def cp_extension_search(
    pairs: Sequence,
    in_dim: int,
    out_dim: int,
    budget: int = 400,
    tol: Tolerances = DEFAULT_TOL,
) -> ExtensionResult:
    """Search for a completely positive ``T: M_n -> M_m`` with ``T(a) = b``.

    ``pairs`` lists ``(a, b)`` agreement constraints on a unital domain:
    the identity must lie in the span of the ``a`` (otherwise the
    normalization of the extension is unconstrained and the cone argument
    breaks down; a ``ValueError`` reports it).  The search runs Dykstra's
    alternating projections between the PSD cone (eigenvalue clipping of
    the candidate Choi matrix) and the affine agreement set (least-squares
    correction).  Success requires both residuals below ``iter_tol`` *and*
    an independent re-verification of the rebuilt map.
    """
    n, m = in_dim, out_dim
    if n * m > _DIM_CAP:
        raise ValueError(f"Choi dimension {n * m} exceeds the {_DIM_CAP} cap")
    mats = [(as_square_matrix(a), as_square_matrix(b)) for a, b in pairs]
    for a, b in mats:
        if a.shape != (n, n) or b.shape != (m, m):
            raise ValueError("agreement pairs must match the stated dimensions")
    if not mats:
        raise ValueError("need at least one agreement pair")
    stack = np.stack([a.ravel() for a, _ in mats]).T
    unit_coeffs, res, _, _ = np.linalg.lstsq(
        stack, np.eye(n, dtype=complex).ravel(), rcond=None
    )
    unit_residual = float(
        np.linalg.norm(stack @ unit_coeffs - np.eye(n, dtype=complex).ravel())
    )
    if unit_residual > tol.rank_tol * n:
        raise ValueError("the identity must lie in the span of the domain elements")

    size = n * m
    # Affine constraints: sum_ij a[i,j] C[(i,:),(j,:)] = b, one m x m block
    # of rows per pair.
    rows = []
    rhs = []
    for a, b in mats:
        for out_r in range(m):
            for out_c in range(m):
                row = np.zeros((n, m, n, m), dtype=complex)
                row[:, out_r, :, out_c] = a
                rows.append(row.reshape(size * size))
                rhs.append(b[out_r, out_c])
    constraint = np.stack(rows)
    rhs = np.asarray(rhs, dtype=complex)
    pinv = np.linalg.pinv(constraint, rcond=1e-12)

    def project_affine(c_mat: np.ndarray) -> np.ndarray:
        vec = c_mat.reshape(size * size)
        correction = pinv @ (constraint @ vec - rhs)
        return (vec - correction).reshape(size, size)

    def project_psd(c_mat: np.ndarray) -> np.ndarray:
        herm = (c_mat + c_mat.conj().T) / 2.0
        lam, vecs = np.linalg.eigh(herm)
        return (vecs * np.maximum(lam, 0.0)) @ vecs.conj().T

    c_mat = project_affine(np.zeros((size, size), dtype=complex))
    p_corr = np.zeros_like(c_mat)
    q_corr = np.zeros_like(c_mat)
    agreement = np.inf
    psd_defect = np.inf
    iterations = 0
    for iterations in range(1, budget + 1):
        y = project_psd(c_mat + p_corr)
        p_corr = c_mat + p_corr - y
        c_mat = project_affine(y + q_corr)
        q_corr = y + q_corr - c_mat
        lam_min = float(np.linalg.eigvalsh((c_mat + c_mat.conj().T) / 2.0)[0])
        psd_defect = max(0.0, -lam_min)
        agreement = float(np.linalg.norm(constraint @ c_mat.ravel() - rhs))
        if psd_defect < tol.iter_tol / 2 and agreement < tol.iter_tol / 2:
            break

    if psd_defect < tol.iter_tol and agreement < tol.iter_tol:
        candidate = project_psd(c_mat)
        rebuilt = MatrixMap(
            in_dim=n,
            out_dim=m,
            action=candidate.reshape(n, m, n, m).transpose(0, 2, 1, 3).copy(),
        )
        # Independent certification of the rebuilt map.
        worst = max(
            float(np.linalg.norm(rebuilt.apply(a) - b)) for a, b in mats
        )
        if is_cp(rebuilt, tol) and worst <= tol.iter_tol * 10:
            return ExtensionResult(
                status="FEASIBLE",
                choi=candidate,
                agreement_residual=worst,
                psd_defect=0.0,
                iterations=iterations,
            )
    return ExtensionResult(
        status="INCONCLUSIVE",
        choi=None,
        agreement_residual=float(agreement),
        psd_defect=float(psd_defect),
        iterations=iterations,
    )
