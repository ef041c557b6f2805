"""Finite-dimensional operator algebras as explicit matrix subspaces.

An :class:`FDAlgebra` is a multiplication-closed subspace of ``M_n`` given by
a linearly independent basis, together with its internal unit when one exists
(the unit of the algebra need not be the ambient identity -- for the algebra
spanned by ``diag(1, 0)`` the unit is ``diag(1, 0)`` itself).

On top of the container the module provides

* :func:`generated_algebra` -- the algebra generated by a single matrix
  (span of its powers, without adjoining a unit);
* :func:`ideal_subspaces` -- the one-sided ideals ``xA``, ``Ax`` and the
  corner ``xAx`` as subspaces;
* :func:`left_identity_search` / :func:`one_minus_ideal` -- left identities
  of right ideals, and the right ideal ``(1-x)A`` for a contraction ``x``;
* :func:`nor_battery` -- sampled verification that in a given unital algebra
  every non-scalar ball element ``a`` satisfies the radical-free conditions
  (powers decay, spectral radius / numerical radius / ``||1+a||`` strictly
  below their ceilings, ``1-a`` invertible);
* :func:`ws_battery` -- the pseudo-inverse equivalence chain for a single
  element (membership of ``x`` in ``x*oa(x)``, unitality of ``oa(x)``,
  solvability of ``xyx = x``, corner membership, spectral-gap condition,
  semisimplicity flag);
* :func:`quotient_norm` / :func:`quotient_cone_check` -- certified quotient
  norms ``min_j ||a - j||`` and the two inclusions between the image of the
  unit ball's shifted cone and the quotient's cone;
* :func:`compression_invertibility` -- invertibility of corner compressions
  ``pxp`` for strictly accretive ``x``.
"""

from __future__ import annotations

import dataclasses
import json
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .cone import in_F, strictly_real_positive
from .matcore import (
    DEFAULT_TOL,
    CrossCheckError,
    Subspace,
    Tolerances,
    as_square_matrix,
    matrix_from_json,
    matrix_span,
    matrix_to_json,
    operator_norm,
    spectral_radius,
    spectrum,
)
from .spectral import numerical_radius

__all__ = [
    "FDAlgebra",
    "IdealTriple",
    "NorBatteryReport",
    "WsBatteryReport",
    "QuotientNormResult",
    "QuotientConeReport",
    "CompressionResult",
    "full_matrix_algebra",
    "upper_triangular_algebra",
    "block_diagonal_algebra",
    "block_ideal_subspace",
    "generated_algebra",
    "ideal_subspaces",
    "left_identity_search",
    "one_minus_ideal",
    "nor_battery",
    "ws_battery",
    "quotient_norm",
    "quotient_cone_check",
    "compression_invertibility",
]


# --------------------------------------------------------------------------
# linear-solve helpers


def _lstsq_combination(columns: Sequence[np.ndarray], rhs: np.ndarray):
    """Least-squares coefficients c with ``sum c_k columns[k] ~ rhs``.

    Inputs are flattened; returns ``(c, residual)`` with the residual in the
    Frobenius (Euclidean) norm of the stacked system.
    """
    mat = np.stack([np.asarray(c, dtype=complex).ravel() for c in columns], axis=1)
    vec = np.asarray(rhs, dtype=complex).ravel()
    coeffs, *_ = np.linalg.lstsq(mat, vec, rcond=None)
    residual = float(np.linalg.norm(mat @ coeffs - vec))
    return coeffs, residual


def _combine(coeffs: np.ndarray, mats: np.ndarray) -> np.ndarray:
    return np.tensordot(coeffs, mats, axes=(0, 0))


# --------------------------------------------------------------------------
# FDAlgebra


@dataclasses.dataclass(frozen=True)
class FDAlgebra:
    """A multiplication-closed subspace of ``M_n`` with optional unit.

    ``basis`` is a stack of linearly independent ``ambient_dim x ambient_dim``
    matrices; ``unit`` (when ``unital``) is the two-sided identity *of the
    algebra*, found by a linear solve -- it need not be the ambient identity.
    Construct through :meth:`build`, which verifies the closure invariant.
    """

    ambient_dim: int
    basis: np.ndarray
    unital: bool
    unit: Optional[np.ndarray]
    tol: Tolerances = DEFAULT_TOL

    @classmethod
    def build(cls, matrices, tol: Tolerances = DEFAULT_TOL) -> "FDAlgebra":
        mats = np.stack([as_square_matrix(m) for m in matrices])
        n = mats.shape[1]
        span = matrix_span(mats, tol)
        if span.dim != len(mats):
            raise ValueError(
                f"basis is not linearly independent: {len(mats)} generators "
                f"span only {span.dim} dimensions"
            )
        for i, a in enumerate(mats):
            for b in mats:
                prod = a @ b
                scale = max(1.0, float(np.linalg.norm(prod)))
                if span.residual(prod.ravel()) > tol.rank_tol * scale:
                    raise ValueError(
                        f"basis is not closed under multiplication "
                        f"(product {i} escapes the span)"
                    )
        unit = _find_unit(mats, tol)
        return cls(
            ambient_dim=n,
            basis=mats,
            unital=unit is not None,
            unit=unit,
            tol=tol,
        )

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def span(self) -> Subspace:
        return matrix_span(self.basis, self.tol)

    def contains(self, x) -> bool:
        x = as_square_matrix(x)
        if x.shape[0] != self.ambient_dim:
            return False
        return self.span.membership(x.ravel())

    def element(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"need {self.dim} coefficients, got {coeffs.shape}")
        return _combine(coeffs, self.basis)

    def to_json(self) -> str:
        return json.dumps(
            {
                "ambient_dim": int(self.ambient_dim),
                "basis": [matrix_to_json(b) for b in self.basis],
                "unital": bool(self.unital),
            }
        )

    @classmethod
    def from_json(cls, text: str, tol: Tolerances = DEFAULT_TOL) -> "FDAlgebra":
        payload = json.loads(text)
        mats = [matrix_from_json(b) for b in payload["basis"]]
        alg = cls.build(mats, tol)
        if alg.ambient_dim != int(payload["ambient_dim"]):
            raise ValueError("ambient_dim does not match the basis matrices")
        if bool(payload["unital"]) != alg.unital:
            raise ValueError("declared unitality disagrees with the basis")
        return alg


def _find_unit(mats: np.ndarray, tol: Tolerances) -> Optional[np.ndarray]:
    """Two-sided identity of span(mats), or None.

    Solves ``e * b = b * e = b`` for all basis elements ``b`` by least
    squares over the span's coefficients.
    """
    columns = [
        np.concatenate([(m @ b).ravel() for b in mats]
                       + [(b @ m).ravel() for b in mats])
        for m in mats
    ]
    rhs = np.concatenate([b.ravel() for b in mats] * 2)
    coeffs, residual = _lstsq_combination(columns, rhs)
    scale = max(1.0, float(np.linalg.norm(rhs)))
    if residual <= tol.iter_tol * scale:
        return _combine(coeffs, mats)
    return None


def full_matrix_algebra(n: int, tol: Tolerances = DEFAULT_TOL) -> FDAlgebra:
    """All of ``M_n``, with the matrix units as basis."""
    if n < 1:
        raise ValueError("n must be positive")
    basis = np.zeros((n * n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            basis[i * n + j, i, j] = 1.0
    return FDAlgebra.build(basis, tol)


def upper_triangular_algebra(n: int, tol: Tolerances = DEFAULT_TOL) -> FDAlgebra:
    """Upper-triangular matrices in ``M_n``."""
    if n < 1:
        raise ValueError("n must be positive")
    basis = []
    for i in range(n):
        for j in range(i, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return FDAlgebra.build(np.stack(basis), tol)


def block_diagonal_algebra(
    dims: Sequence[int], tol: Tolerances = DEFAULT_TOL
) -> FDAlgebra:
    """Direct sum ``M_{d_1} + ... + M_{d_k}`` embedded block-diagonally."""
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise ValueError("dims must be a nonempty list of positive integers")
    n = sum(dims)
    basis = []
    offset = 0
    for d in dims:
        for i in range(d):
            for j in range(d):
                e = np.zeros((n, n), dtype=complex)
                e[offset + i, offset + j] = 1.0
                basis.append(e)
        offset += d
    return FDAlgebra.build(np.stack(basis), tol)


def block_ideal_subspace(
    dims: Sequence[int], block_indices: Sequence[int], tol: Tolerances = DEFAULT_TOL
) -> Subspace:
    """Span of the matrix units of the selected blocks of a block-diagonal sum.

    The result is a two-sided ideal of :func:`block_diagonal_algebra(dims)`
    and possesses an identity (the sum of the selected blocks' identities).
    """
    dims = [int(d) for d in dims]
    chosen = set(int(i) for i in block_indices)
    if not chosen or not chosen.issubset(range(len(dims))):
        raise ValueError("block_indices must select existing blocks")
    n = sum(dims)
    mats = []
    offset = 0
    for idx, d in enumerate(dims):
        if idx in chosen:
            for i in range(d):
                for j in range(d):
                    e = np.zeros((n, n), dtype=complex)
                    e[offset + i, offset + j] = 1.0
                    mats.append(e)
        offset += d
    return matrix_span(mats, tol)


# --------------------------------------------------------------------------
# generated algebras and ideals


def generated_algebra(x, tol: Tolerances = DEFAULT_TOL) -> FDAlgebra:
    """The algebra generated by ``x``: span of ``{x, x^2, ...}``.

    The span stabilizes after at most ``ambient_dim`` powers (minimal
    polynomial), but raw powers form an ill-conditioned generating family,
    so the subspace is computed by repeatedly adjoining normalized pairwise
    products of an orthonormal basis until the dimension stops growing --
    the same span, without Vandermonde blow-up.  No unit is adjoined; the
    result is unital exactly when some polynomial in ``x`` without constant
    term acts as a two-sided identity on the span.
    """
    x = as_square_matrix(x)
    if operator_norm(x) <= tol.rank_tol:
        raise ValueError("generated_algebra requires a nonzero generator")
    n = x.shape[0]
    span = matrix_span([x / np.linalg.norm(x)], tol)
    for _ in range(12):
        basis = span.basis.reshape(span.dim, n, n)
        products = []
        for a in basis:
            for b in basis:
                prod = a @ b
                scale = float(np.linalg.norm(prod))
                if scale > 1e-12:
                    products.append(prod / scale)
        candidate = matrix_span(list(basis) + products, tol)
        if candidate.dim == span.dim:
            break
        span = candidate
    basis = span.basis.reshape(span.dim, n, n)
    return FDAlgebra.build(basis, tol)


class IdealTriple(NamedTuple):
    """The subspaces ``xA``, ``Ax``, and ``xAx`` inside ``M_n``."""

    xA: Subspace
    Ax: Subspace
    xAx: Subspace


def ideal_subspaces(x, A: FDAlgebra, tol: Tolerances = DEFAULT_TOL) -> IdealTriple:
    """Spans of ``{x b}``, ``{b x}``, ``{x b x}`` over the basis of ``A``.

    Requires ``x`` to lie in the span of ``A``.  For ``x`` with
    ``||1 - x|| <= 1`` in a unital algebra, ``x`` itself lies in the corner
    span ``xAx`` (the corner is the hereditary subalgebra matching the right
    ideal ``xA``).
    """
    x = as_square_matrix(x)
    if not A.contains(x):
        raise ValueError("x does not lie in the span of A")
    xa = matrix_span([x @ b for b in A.basis], tol)
    ax = matrix_span([b @ x for b in A.basis], tol)
    xax = matrix_span([x @ b @ x for b in A.basis], tol)
    return IdealTriple(xA=xa, Ax=ax, xAx=xax)


def left_identity_search(
    J: Subspace, A: FDAlgebra, tol: Tolerances = DEFAULT_TOL
) -> Optional[np.ndarray]:
    """Find ``e`` in the right ideal ``J`` with ``e j = j`` for all ``j``.

    ``J`` must be a right ideal of ``A`` (``J * A`` stays in ``J``; checked).
    Solves the linear system by least squares over the coordinates of ``J``;
    returns the solution when the residual is below ``iter_tol`` and ``None``
    otherwise.  A found solution is necessarily idempotent (``e*e = e``
    follows from ``e`` acting as a left identity on ``J`` while belonging to
    ``J``); that forced property is verified and a violation raises
    :class:`~oalab.matcore.CrossCheckError`.

    A zero ideal returns the zero matrix (degenerate left identity).
    """
    n = A.ambient_dim
    if J.ambient_dim != n * n:
        raise ValueError("J must be a subspace of flattened ambient matrices")
    if J.dim == 0:
        return np.zeros((n, n), dtype=complex)
    j_mats = J.basis.reshape(J.dim, n, n)
    for j in j_mats:
        for b in A.basis:
            prod = j @ b
            scale = max(1.0, float(np.linalg.norm(prod)))
            if J.residual(prod.ravel()) > tol.rank_tol * scale:
                raise ValueError("J is not a right ideal of A")
    columns = [
        np.concatenate([(jk @ jm).ravel() for jm in j_mats]) for jk in j_mats
    ]
    rhs = np.concatenate([jm.ravel() for jm in j_mats])
    coeffs, residual = _lstsq_combination(columns, rhs)
    if residual > tol.iter_tol * max(1.0, float(np.linalg.norm(rhs))):
        return None
    e = _combine(coeffs, j_mats)
    idem_defect = operator_norm(e @ e - e)
    if idem_defect > tol.iter_tol * max(1.0, operator_norm(e) ** 2):
        raise CrossCheckError(
            f"left identity is not idempotent (defect {idem_defect:.3g}); "
            "the solve produced an inconsistent element"
        )
    return e


def one_minus_ideal(x, A: FDAlgebra, tol: Tolerances = DEFAULT_TOL):
    """The right ideal ``(1 - x) A`` for a contraction ``x``, with left identity.

    ``A`` must be unital and ``x`` a contraction in its span.  Returns the
    pair ``(J, left_id)`` where ``J`` is the span of ``{(unit - x) b}`` and
    ``left_id`` is the left identity of ``J`` found by
    :func:`left_identity_search` (guaranteed to exist here: a right ideal of
    this form in a unital finite-dimensional algebra always has one).
    """
    x = as_square_matrix(x)
    if not A.unital:
        raise ValueError("one_minus_ideal requires a unital algebra")
    if operator_norm(x) > 1.0 + tol.exact_tol:
        raise ValueError("x must be a contraction")
    if not A.contains(x):
        raise ValueError("x does not lie in the span of A")
    u = A.unit
    shift = u - x
    # A numerically-zero shift (x is the unit up to solve noise) must give
    # the zero ideal; a relative span of all-tiny generators would instead
    # orthonormalize the noise.
    if operator_norm(shift) <= tol.rank_tol * max(1.0, operator_norm(x)):
        n = A.ambient_dim
        J = Subspace(np.zeros((0, n * n)), n * n, tol.rank_tol)
    else:
        J = matrix_span([shift @ b for b in A.basis], tol)
    left_id = left_identity_search(J, A, tol)
    return J, left_id


# --------------------------------------------------------------------------
# sampled batteries


def _distance_to_scalars(a: np.ndarray, unit: np.ndarray) -> float:
    """Operator-norm distance from ``a`` to multiples of ``unit``.

    Uses the Frobenius-optimal multiple; an upper bound for the true
    operator-norm distance, which is the conservative side for rejection
    sampling (the sampler never keeps an element closer than reported).
    """
    lam = np.vdot(unit, a) / np.vdot(unit, unit)
    return operator_norm(a - lam * unit)


@dataclasses.dataclass(frozen=True)
class ConditionStats:
    """Per-condition tally of a sampled battery run."""

    name: str
    passes: int
    failures: int
    worst_margin: float
    worst_witness: Optional[np.ndarray]

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "passes": int(self.passes),
            "failures": int(self.failures),
            "worst_margin": float(self.worst_margin),
        }
        if self.worst_witness is not None:
            payload["worst_witness"] = matrix_to_json(self.worst_witness)
        return payload


@dataclasses.dataclass(frozen=True)
class NorBatteryReport:
    """Sampled verification of the radical-free ball conditions.

    Conditions evaluated per sample ``a`` in ``Ball(A)`` at distance more
    than ``rejection_margin`` from the scalar line:

    * ``power_decay``   -- margin ``1 - ||a^64||^(1/64)``;
    * ``spectral_gap``  -- margin ``||a|| - r(a)``;
    * ``radius_gap``    -- margin ``||a|| - nu(a)`` (numerical radius);
    * ``shift_norm``    -- margin ``2 - ||unit + a||``;
    * ``quasi_invert``  -- margin ``sigma_min(unit - a)``.

    A condition passes on a sample when its margin is strictly positive.
    ``idempotent_witnesses`` lists non-scalar idempotent basis elements of
    norm at most one (each is a deterministic counterexample: it fails all
    five conditions).  ``all_pass`` requires every sampled condition to pass
    and the witness list to be empty.
    """

    trials_requested: int
    trials_sampled: int
    rejection_margin: float
    conditions: dict
    margins: dict
    idempotent_witnesses: list

    @property
    def all_pass(self) -> bool:
        sampled_ok = all(c.failures == 0 for c in self.conditions.values())
        return sampled_ok and not self.idempotent_witnesses

    @property
    def vacuous(self) -> bool:
        return self.trials_sampled == 0

    def worst_margins(self) -> dict:
        return {name: c.worst_margin for name, c in self.conditions.items()}

    def to_json(self) -> str:
        return json.dumps(
            {
                "trials_requested": int(self.trials_requested),
                "trials_sampled": int(self.trials_sampled),
                "rejection_margin": float(self.rejection_margin),
                "all_pass": bool(self.all_pass),
                "vacuous": bool(self.vacuous),
                "conditions": {
                    name: c.to_dict() for name, c in self.conditions.items()
                },
                "idempotent_witnesses": [
                    matrix_to_json(w) for w in self.idempotent_witnesses
                ],
            }
        )


_NOR_CONDITIONS = (
    "power_decay",
    "spectral_gap",
    "radius_gap",
    "shift_norm",
    "quasi_invert",
)


def _nor_margins(a: np.ndarray, unit: np.ndarray, theta_count: int) -> dict:
    b = a.copy()
    for _ in range(6):
        b = b @ b
    norm_a = operator_norm(a)
    return {
        "power_decay": 1.0 - operator_norm(b) ** (1.0 / 64.0),
        "spectral_gap": norm_a - spectral_radius(a),
        "radius_gap": norm_a - numerical_radius(a, theta_count=theta_count),
        "shift_norm": 2.0 - operator_norm(unit + a),
        "quasi_invert": float(np.linalg.svd(unit - a, compute_uv=False)[-1]),
    }


def nor_battery(
    A: FDAlgebra,
    trials: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    rejection_margin: float = 0.05,
    theta_count: int = 360,
) -> NorBatteryReport:
    """Sample ``Ball(A)`` away from the scalars and test the five conditions.

    Elements are drawn as Gaussian combinations of the basis, rescaled to a
    uniformly random operator norm in ``(0, 1]``, and rejected when their
    distance to the scalar line ``C*unit`` is at most ``rejection_margin``
    (the conditions degenerate continuously as ``a`` approaches a scalar, so
    margins must be bounded away).  Basis elements that are themselves
    non-scalar idempotent contractions are recorded as deterministic
    witnesses -- such an element fails every condition (``a^n = a``).

    With an algebra admitting no admissible samples (the scalar line itself)
    the report is a vacuous pass.
    """
    if not A.unital:
        raise ValueError("nor_battery requires a unital algebra")
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    rng = np.random.default_rng(seed)
    unit = A.unit
    samples = []
    attempts = 0
    cap = 60 * max(trials, 1)
    while len(samples) < trials and attempts < cap:
        attempts += 1
        coeffs = rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim)
        raw = _combine(coeffs, A.basis)
        nrm = operator_norm(raw)
        if nrm <= 1e-12:
            continue
        a = raw * (rng.uniform(0.0, 1.0) / nrm)
        if _distance_to_scalars(a, unit) <= rejection_margin:
            continue
        samples.append(a)

    margins = {name: [] for name in _NOR_CONDITIONS}
    worst = {name: (np.inf, None) for name in _NOR_CONDITIONS}
    passes = {name: 0 for name in _NOR_CONDITIONS}
    for a in samples:
        sample_margins = _nor_margins(a, unit, theta_count)
        for name in _NOR_CONDITIONS:
            m = sample_margins[name]
            margins[name].append(m)
            if m > 0.0:
                passes[name] += 1
            if m < worst[name][0]:
                worst[name] = (m, a)

    witnesses = []
    for b in A.basis:
        idem = operator_norm(b @ b - b) <= tol.exact_tol * max(
            1.0, operator_norm(b) ** 2
        )
        in_ball = operator_norm(b) <= 1.0 + tol.exact_tol
        nonscalar = _distance_to_scalars(b, unit) > rejection_margin
        if idem and in_ball and nonscalar:
            witnesses.append(b)

    conditions = {
        name: ConditionStats(
            name=name,
            passes=passes[name],
            failures=len(samples) - passes[name],
            worst_margin=(worst[name][0] if samples else np.inf),
            worst_witness=(
                worst[name][1] if samples and worst[name][0] <= 0.0 else None
            ),
        )
        for name in _NOR_CONDITIONS
    }
    return NorBatteryReport(
        trials_requested=trials,
        trials_sampled=len(samples),
        rejection_margin=rejection_margin,
        conditions=conditions,
        margins=margins,
        idempotent_witnesses=witnesses,
    )


def _solve_xyx(x: np.ndarray, basis, tol: Tolerances):
    """Least-squares ``y`` in span(basis) with ``x y x = x``."""
    columns = [(x @ b @ x).ravel() for b in basis]
    coeffs, residual = _lstsq_combination(columns, x.ravel())
    y = _combine(coeffs, np.stack([np.asarray(b) for b in basis]))
    ok = residual <= tol.iter_tol * max(1.0, float(np.linalg.norm(x)))
    return ok, y, residual


@dataclasses.dataclass(frozen=True)
class WsBatteryReport:
    """Pseudo-inverse equivalence chain for one element ``x``.

    Conditions (finite-dimensional surrogates):

    * ``i``   -- ``x`` lies in the span of ``x * oa(x)``;
    * ``ii``  -- ``oa(x)`` is unital (rank test
      ``dim(x*oa(x)) = dim(oa(x))``, cross-checked with the unit solve);
    * ``iii`` -- some ``y`` in ``oa(x)`` solves ``x y x = x``;
    * ``iv``  -- ``x`` lies in the corner span ``x A x``;
    * ``v``   -- ``x`` lies in both ``x A`` and ``A x``;
    * ``vi``  -- some ``y`` in ``A`` solves ``x y x = x``;
    * ``vii`` -- the spectrum of ``x`` has a gap at 0: every eigenvalue is
      either inside the zero cluster or at least a decade above it.

    ``semisimple`` reports whether ``oa(x)`` is semisimple, decided by
    diagonalizability of ``x`` (square-free minimal polynomial) with
    eigenvalue clustering at ``cluster_tol``.  ``consistent`` asserts the
    chain: (i)--(vi) agree mutually, (vi) implies (vii), and -- only under
    semisimplicity -- (vii) implies (ii).
    """

    conditions: dict
    semisimple: bool
    cluster_tol: float
    y_in_oa: Optional[np.ndarray]
    y_in_A: Optional[np.ndarray]
    residual_oa: float
    residual_A: float

    @property
    def consistent(self) -> bool:
        c = self.conditions
        core = [c["i"], c["ii"], c["iii"], c["iv"], c["v"], c["vi"]]
        if len(set(core)) != 1:
            return False
        if c["vi"] and not c["vii"]:
            return False
        if self.semisimple and c["vii"] and not c["ii"]:
            return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "conditions": {k: bool(v) for k, v in self.conditions.items()},
                "semisimple": bool(self.semisimple),
                "cluster_tol": float(self.cluster_tol),
                "consistent": bool(self.consistent),
                "residual_oa": float(self.residual_oa),
                "residual_A": float(self.residual_A),
            }
        )


def _is_diagonalizable(x: np.ndarray, cluster_tol: float) -> bool:
    """Square-free minimal polynomial test via clustered multiplicities."""
    lams = spectrum(x)
    scale = max(1.0, float(np.max(np.abs(lams))))
    threshold = cluster_tol * scale
    used = np.zeros(len(lams), dtype=bool)
    n = x.shape[0]
    eye = np.eye(n, dtype=complex)
    for i in range(len(lams)):
        if used[i]:
            continue
        cluster = np.abs(lams - lams[i]) <= threshold
        used |= cluster
        center = np.mean(lams[cluster])
        algebraic = int(np.sum(cluster))
        sigmas = np.linalg.svd(x - center * eye, compute_uv=False)
        geometric = int(np.sum(sigmas <= threshold))
        if geometric != algebraic:
            return False
    return True


def ws_battery(
    x,
    A: FDAlgebra,
    tol: Tolerances = DEFAULT_TOL,
    require_cone: bool = True,
    cluster_tol: float = 1e-4,
) -> WsBatteryReport:
    """Evaluate the pseudo-inverse equivalence chain for ``x`` inside ``A``.

    By default requires ``||1 - x|| <= 1`` (the regime where the chain's
    equivalences hold and, at finite dimension, all conditions are true).
    Passing ``require_cone=False`` admits arbitrary ``x`` -- in particular
    elements with nilpotent parts, for which (vii) can hold while (i)--(vi)
    fail and the semisimple flag is false.
    """
    x = as_square_matrix(x)
    if x.shape[0] != A.ambient_dim:
        raise ValueError("x and A live in different ambient dimensions")
    if not A.contains(x):
        raise ValueError("x does not lie in the span of A")
    if require_cone and not in_F(x, tol):
        raise ValueError(
            "x is outside the unit-shifted cone; pass require_cone=False "
            "to evaluate the chain anyway"
        )
    oax = generated_algebra(x, tol)
    x_oax = matrix_span([x @ b for b in oax.basis], tol)
    cond_i = x_oax.membership(x.ravel())
    cond_ii = x_oax.dim == oax.dim
    if cond_ii != oax.unital:
        raise CrossCheckError(
            "rank test for unitality of oa(x) disagrees with the unit solve: "
            f"rank says {cond_ii}, solve says {oax.unital}"
        )
    cond_iii, y_oa, res_oa = _solve_xyx(x, oax.basis, tol)
    triple = ideal_subspaces(x, A, tol)
    cond_iv = triple.xAx.membership(x.ravel())
    cond_v = triple.xA.membership(x.ravel()) and triple.Ax.membership(x.ravel())
    cond_vi, y_a, res_a = _solve_xyx(x, A.basis, tol)

    lams = spectrum(x)
    scale = max(1.0, float(np.max(np.abs(lams))))
    threshold = cluster_tol * scale
    zero_cluster = np.abs(lams) <= threshold
    if not zero_cluster.any():
        cond_vii = True
    else:
        nonzero = np.abs(lams[~zero_cluster])
        cond_vii = nonzero.size == 0 or float(np.min(nonzero)) >= 10.0 * threshold

    return WsBatteryReport(
        conditions={
            "i": bool(cond_i),
            "ii": bool(cond_ii),
            "iii": bool(cond_iii),
            "iv": bool(cond_iv),
            "v": bool(cond_v),
            "vi": bool(cond_vi),
            "vii": bool(cond_vii),
        },
        semisimple=_is_diagonalizable(x, cluster_tol),
        cluster_tol=cluster_tol,
        y_in_oa=y_oa if cond_iii else None,
        y_in_A=y_a if cond_vi else None,
        residual_oa=res_oa,
        residual_A=res_a,
    )


# --------------------------------------------------------------------------
# quotient norms and the quotient cone


@dataclasses.dataclass(frozen=True)
class QuotientNormResult:
    """Certified interval for ``min_j ||a - j||`` over a subspace ``J``.

    ``upper`` comes from the best minimizer found (an explicit ``j``);
    ``lower`` from a dual certificate: a matrix ``G`` with unit nuclear norm,
    Frobenius-orthogonal to ``J``, giving ``|<G, a>| <= min ||a - j||``.
    ``status`` is CERTIFIED when the gap closed below the requested
    tolerance, INCONCLUSIVE otherwise -- never a silent point estimate.
    """

    lower: float
    upper: float
    status: str
    minimizer_coeffs: Optional[np.ndarray]

    @property
    def value(self) -> float:
        return self.upper

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> str:
        return json.dumps(
            {
                "lower": float(self.lower),
                "upper": float(self.upper),
                "gap": float(self.gap),
                "status": self.status,
            }
        )


def _dual_lower_bound(m: np.ndarray, j_mats: np.ndarray) -> float:
    """Lower bound on the quotient norm from the top singular pair of ``m``.

    Projects the rank-one dual candidate ``u v*`` onto the Frobenius
    annihilator of ``J`` and renormalizes in nuclear norm; any such matrix
    ``G`` certifies ``|<G, a>| <= min_j ||a - j||`` (and ``<G, a> = <G, m>``).
    """
    u, s, vh = np.linalg.svd(m)
    if s.size == 0 or s[0] <= 0.0:
        return 0.0
    g = np.outer(u[:, 0], vh[0])
    if len(j_mats):
        for jk in j_mats:
            g = g - np.vdot(jk, g) * jk
    nuc = float(np.sum(np.linalg.svd(g, compute_uv=False)))
    if nuc <= 1e-14:
        return 0.0
    return abs(np.vdot(g, m)) / nuc


def quotient_norm(
    a,
    J: Subspace,
    tol: Tolerances = DEFAULT_TOL,
    budget: int = 2000,
    restarts: int = 10,
) -> QuotientNormResult:
    """Certified quotient norm ``min_{j in J} ||a - j||`` (operator norm).

    The upper bound is minimized by subgradient descent on the largest
    singular value over the real coordinates of ``J`` (Frobenius-projection
    warm start plus random restarts, Polyak step sizes driven by the best
    dual bound).  The lower bound is a dual certificate built from top
    singular pairs.  When the final gap is below ``iter_tol`` the result is
    CERTIFIED; otherwise INCONCLUSIVE with both bounds reported.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    if J.ambient_dim != n * n:
        raise ValueError("J must be a subspace of flattened ambient matrices")
    if J.dim == 0:
        nrm = operator_norm(a)
        return QuotientNormResult(
            lower=nrm, upper=nrm, status="CERTIFIED",
            minimizer_coeffs=np.zeros(0, dtype=complex),
        )
    j_mats = J.basis.reshape(J.dim, n, n)
    d = J.dim

    def matrix_at(c: np.ndarray) -> np.ndarray:
        return a - _combine(c, j_mats)

    # Frobenius warm start: orthonormal basis makes projection coefficients
    # plain inner products.
    warm = np.array([np.vdot(jk, a) for jk in j_mats])
    rng = np.random.default_rng(0)

    best_upper = np.inf
    best_coeffs = warm
    best_lower = 0.0
    iters_per = max(budget // max(restarts, 1), 1)
    for attempt in range(restarts):
        c = warm if attempt == 0 else warm + (
            rng.standard_normal(d) + 1j * rng.standard_normal(d)
        ) * max(1.0, np.linalg.norm(warm)) * 0.3
        local_best = np.inf
        for _ in range(iters_per):
            m = matrix_at(c)
            u, s, vh = np.linalg.svd(m)
            f = float(s[0])
            if f < local_best:
                local_best = f
            if f < best_upper:
                best_upper = f
                best_coeffs = c.copy()
                best_lower = max(best_lower, _dual_lower_bound(m, j_mats))
                if best_upper - best_lower <= tol.iter_tol:
                    return QuotientNormResult(
                        lower=best_lower,
                        upper=best_upper,
                        status="CERTIFIED",
                        minimizer_coeffs=best_coeffs,
                    )
            # Subgradient of sigma_max with respect to the complex
            # coefficients: d sigma / d c_k = -conj(<u, J_k v>).
            top_u, top_v = u[:, 0], vh[0].conj()
            grad = np.array(
                [-np.conj(top_u.conj() @ (jk @ top_v)) for jk in j_mats]
            )
            gnorm2 = float(np.sum(np.abs(grad) ** 2))
            if gnorm2 <= 1e-24:
                break
            step = (f - max(best_lower, 0.9 * f)) / gnorm2
            c = c - step * grad
    m = matrix_at(best_coeffs)
    best_lower = max(best_lower, _dual_lower_bound(m, j_mats))
    status = "CERTIFIED" if best_upper - best_lower <= tol.iter_tol else "INCONCLUSIVE"
    return QuotientNormResult(
        lower=best_lower,
        upper=best_upper,
        status=status,
        minimizer_coeffs=best_coeffs,
    )


@dataclasses.dataclass(frozen=True)
class QuotientConeReport:
    """Two-directional check that the quotient of the shifted cone is the cone.

    ``forward_excess``: worst of ``quotient_norm(unit - x) - 1`` over sampled
    ``x`` with ``||unit - x|| <= 1`` (the image of the cone must stay in the
    quotient cone).  ``backward_*``: for sampled representatives whose coset
    satisfies the quotient cone condition, an explicit lift ``y`` built from
    the ideal's identity ``e`` as ``y = (1-e) x (1-e) + e`` must land back in
    the cone (``lift_excess``) while keeping the same coset
    (``membership_residual``).
    """

    samples: int
    forward_excess: float
    backward_checked: int
    backward_lift_excess: float
    backward_membership_residual: float
    inconclusive_quotients: int

    @property
    def consistent(self) -> bool:
        return (
            self.forward_excess <= 1e-6
            and self.backward_lift_excess <= 1e-6
            and self.backward_membership_residual <= 1e-6
            and self.inconclusive_quotients == 0
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "samples": int(self.samples),
                "forward_excess": float(self.forward_excess),
                "backward_checked": int(self.backward_checked),
                "backward_lift_excess": float(self.backward_lift_excess),
                "backward_membership_residual": float(
                    self.backward_membership_residual
                ),
                "inconclusive_quotients": int(self.inconclusive_quotients),
                "consistent": bool(self.consistent),
            }
        )


def _ideal_identity(J: Subspace, n: int, tol: Tolerances) -> np.ndarray:
    """Two-sided identity of the ideal ``J``; raises when there is none."""
    if J.dim == 0:
        raise ValueError("the zero ideal has no identity")
    j_mats = J.basis.reshape(J.dim, n, n)
    e = _find_unit(j_mats, tol)
    if e is None:
        raise ValueError("J has no two-sided identity")
    return e


def quotient_cone_check(
    A: FDAlgebra,
    J: Subspace,
    samples: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
) -> QuotientConeReport:
    """Verify both inclusions between ``q(cone of A)`` and the quotient cone.

    ``J`` must be a two-sided ideal of ``A`` possessing an identity ``e``
    (checked; ``ValueError`` otherwise).  Forward direction: sampled
    ``x = unit - c`` with ``||c|| <= 1`` must satisfy
    ``quotient_norm(unit - x, J) <= 1``.  Backward direction: sampled
    representatives ``x'`` whose coset lies in the quotient cone are lifted
    through ``y = (unit - e) x' (unit - e) + e``; the lift must satisfy
    ``||unit - y|| <= 1`` and ``y - x'`` must lie in ``J``.  The lift formula
    assumes ``e`` is central in ``A`` (true for block-diagonal instances,
    where the check is exact).
    """
    if not A.unital:
        raise ValueError("quotient_cone_check requires a unital algebra")
    n = A.ambient_dim
    rng = np.random.default_rng(seed)
    j_mats = J.basis.reshape(J.dim, n, n) if J.dim else np.zeros((0, n, n))
    for j in j_mats:
        for b in A.basis:
            for prod in (j @ b, b @ j):
                scale = max(1.0, float(np.linalg.norm(prod)))
                if J.residual(prod.ravel()) > tol.rank_tol * scale:
                    raise ValueError("J is not a two-sided ideal of A")
    e = _ideal_identity(J, n, tol)
    unit = A.unit
    comp = unit - e

    def random_in_algebra(norm_bound: float) -> np.ndarray:
        coeffs = rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim)
        raw = _combine(coeffs, A.basis)
        nrm = operator_norm(raw)
        if nrm <= 1e-12:
            return np.zeros_like(raw)
        return raw * (rng.uniform(0.0, norm_bound) / nrm)

    forward_excess = 0.0
    backward_checked = 0
    lift_excess = 0.0
    membership_res = 0.0
    inconclusive = 0
    for _ in range(samples):
        x = unit - random_in_algebra(1.0)
        qn = quotient_norm(unit - x, J, tol)
        if qn.status != "CERTIFIED":
            inconclusive += 1
        forward_excess = max(forward_excess, qn.value - 1.0)

        # Backward: wild ideal part, cone-certified complement part.
        rep = comp @ (unit - random_in_algebra(1.0)) @ comp + _combine(
            rng.standard_normal(J.dim) + 1j * rng.standard_normal(J.dim), j_mats
        )
        qn_rep = quotient_norm(unit - rep, J, tol)
        if qn_rep.status != "CERTIFIED":
            inconclusive += 1
            continue
        if qn_rep.value <= 1.0 + tol.iter_tol:
            y = comp @ rep @ comp + e
            backward_checked += 1
            lift_excess = max(lift_excess, operator_norm(unit - y) - 1.0)
            diff = y - rep
            scale = max(1.0, float(np.linalg.norm(diff)))
            membership_res = max(membership_res, J.residual(diff.ravel()) / scale)
    return QuotientConeReport(
        samples=samples,
        forward_excess=forward_excess,
        backward_checked=backward_checked,
        backward_lift_excess=lift_excess,
        backward_membership_residual=membership_res,
        inconclusive_quotients=inconclusive,
    )


# --------------------------------------------------------------------------
# compressions


@dataclasses.dataclass(frozen=True)
class CompressionResult:
    """Invertibility of a corner compression, with the deciding singular value."""

    invertible: bool
    sigma_min: float

    def __bool__(self) -> bool:
        return self.invertible


def compression_invertibility(
    x, p, tol: Tolerances = DEFAULT_TOL
) -> CompressionResult:
    """Invertibility of ``p x p`` on the range of the projection ``p``.

    Requires ``x`` strictly accretive inside the unit-shifted cone
    (``strictly_real_positive``) and ``p`` a Hermitian idempotent.  Under
    that hypothesis the compression is invertible for every projection; this
    operation verifies it through the rank oracle and reports the smallest
    singular value of the compressed matrix.  The zero projection counts as
    (vacuously) invertible with ``sigma_min = inf``.
    """
    x = as_square_matrix(x)
    p = as_square_matrix(p)
    if not strictly_real_positive(x, tol):
        raise ValueError("x must be strictly real positive")
    herm = operator_norm(p - p.conj().T)
    idem = operator_norm(p @ p - p)
    if herm > tol.exact_tol or idem > tol.exact_tol:
        raise ValueError("p must be a Hermitian idempotent")
    evals, evecs = np.linalg.eigh((p + p.conj().T) / 2.0)
    cols = evecs[:, evals > 0.5]
    if cols.shape[1] == 0:
        return CompressionResult(invertible=True, sigma_min=np.inf)
    comp = cols.conj().T @ x @ cols
    sigmas = np.linalg.svd(comp, compute_uv=False)
    sigma_min = float(sigmas[-1])
    invertible = sigma_min > tol.rank_tol * max(1.0, float(sigmas[0]))
    return CompressionResult(invertible=invertible, sigma_min=sigma_min)
