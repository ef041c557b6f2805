"""Discretized radical weighted convolution algebra on the half line.

A *radical weight* is a continuous ``omega: [0, inf) -> (0, inf)`` with
``omega(0) = 1``, submultiplicative (``omega(s+t) <= omega(s) omega(t)``),
and ``omega(t)^(1/t)`` decreasing toward zero -- the model example is
``omega(t) = exp(-t^2)``.  Functions are represented on a uniform grid with
left-endpoint sampling and step ``h``; convolution is the Cauchy product
scaled by ``h``, which makes the discrete delta ``(1/h at index 0)`` an
*exact* identity, so approximate-identity behavior is purely a weight
effect.

The module provides the support functional :func:`alpha` (exactly additive
under convolution: the discrete counterpart of the Titchmarsh convolution
theorem), weighted norms with the Young inequality, iterated-convolution
quasinilpotence estimates with the closed-form root bound, the convexity /
superlinearity / square-integrability criterion for weights, triangular
density solves for principal ideals, and normalized-bump approximate
identities.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.integrate

from .matcore import DEFAULT_TOL, Tolerances

__all__ = [
    "RadicalWeight",
    "GridFunction",
    "TitchmarshReport",
    "WeightCriterionReport",
    "PrincipalDensityResult",
    "BumpCaiReport",
    "make_weight",
    "grid_delta",
    "grid_indicator",
    "weighted_l1",
    "weighted_l2",
    "convolve",
    "alpha",
    "alpha_index",
    "titchmarsh_check",
    "quasinilpotence_estimate",
    "quasinilpotence_root_bound",
    "domar_criterion_check",
    "principal_density_check",
    "bump_cai_check",
]


# --------------------------------------------------------------------------
# weights


@dataclasses.dataclass(frozen=True)
class RadicalWeight:
    """A positive weight with sampled-verified radical-weight invariants.

    ``epsilon`` is the superlinearity exponent used by the criterion check:
    the weight qualifies when ``eta(t)/t^(1+epsilon)`` grows along the tail,
    where ``eta = -log(omega)``.  ``horizon`` bounds the interval on which
    the invariants were verified (and, for interpolated weights, the domain
    of validity).
    """

    kind: str
    epsilon: float
    horizon: float
    description: str
    omega_fn: Callable[[np.ndarray], np.ndarray] = dataclasses.field(repr=False)

    def omega(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < -1e-12):
            raise ValueError("omega is defined on [0, infinity)")
        if self.kind != "gaussian" and np.any(arr > self.horizon * (1 + 1e-12)):
            raise ValueError(
                f"t={float(np.max(arr)):.3g} beyond the verified horizon "
                f"{self.horizon:.3g} of a sampled weight"
            )
        value = self.omega_fn(np.maximum(arr, 0.0))
        return float(value) if np.isscalar(t) else np.asarray(value, dtype=float)

    def eta(self, t):
        return -np.log(self.omega(t))

    def to_json(self) -> str:
        if self.kind == "gaussian":
            return json.dumps({"kind": "gaussian", "horizon": self.horizon})
        ts = np.linspace(0.0, self.horizon, 1001)
        return json.dumps(
            {
                "kind": "custom",
                "epsilon": self.epsilon,
                "horizon": self.horizon,
                "samples": [[float(t), float(w)] for t, w in zip(ts, self.omega(ts))],
            }
        )

    @staticmethod
    def from_json(text: str) -> "RadicalWeight":
        payload = json.loads(text)
        if payload["kind"] == "gaussian":
            return make_weight("gaussian", horizon=payload.get("horizon", 24.0))
        samples = np.array(payload["samples"], dtype=float)
        ts, ws = samples[:, 0], samples[:, 1]

        def interpolated(t):
            return np.interp(t, ts, ws)

        return make_weight(
            "custom",
            omega=interpolated,
            epsilon=float(payload["epsilon"]),
            horizon=float(payload["horizon"]),
            description="interpolated from samples",
        )


def _verify_weight_invariants(w: RadicalWeight, tol: Tolerances) -> None:
    ts = np.linspace(0.0, w.horizon, 1000)
    vals = w.omega(ts)
    if np.any(vals <= 0.0) or not np.all(np.isfinite(vals)):
        raise ValueError("weight must be positive and finite on [0, horizon]")
    if abs(w.omega(0.0) - 1.0) > tol.exact_tol:
        raise ValueError(f"omega(0) must be 1, got {w.omega(0.0)!r}")
    # Submultiplicativity on a coarse pair grid.
    coarse = np.linspace(0.0, w.horizon, 40)
    for s in coarse:
        for t in coarse:
            if s + t > w.horizon:
                continue
            lhs = w.omega(s + t)
            rhs = w.omega(s) * w.omega(t)
            if lhs > rhs * (1.0 + tol.exact_tol) + tol.exact_tol:
                raise ValueError(
                    f"submultiplicativity fails at s={s:.3g}, t={t:.3g}: "
                    f"{lhs:.6g} > {rhs:.6g}"
                )
    # t-th roots must not increase along the horizon (constant is allowed;
    # the limit itself is not decidable from finitely many samples).
    tail = np.linspace(w.horizon / 100.0, w.horizon, 100)
    roots = w.omega(tail) ** (1.0 / tail)
    if np.any(np.diff(roots) > tol.exact_tol):
        raise ValueError("omega(t)^(1/t) increases along the horizon")


def make_weight(
    kind: str,
    omega: Optional[Callable] = None,
    epsilon: float = 0.5,
    horizon: float = 24.0,
    description: str = "",
    tol: Tolerances = DEFAULT_TOL,
) -> RadicalWeight:
    """Construct a verified weight.

    ``kind="gaussian"`` builds ``omega(t) = exp(-t^2)`` with
    ``epsilon = 0.5`` (``eta(t) = t^2``, so ``eta/t^1.5`` grows without
    bound).  ``kind="custom"`` takes any positive callable; the sampled
    invariants (positivity, ``omega(0)=1``, submultiplicativity, and
    non-increasing ``t``-th roots) are verified on ``[0, horizon]`` and a
    violation raises ``ValueError``.
    """
    if kind == "gaussian":
        if horizon > 27.0:
            raise ValueError("gaussian weight underflows beyond horizon 27")
        w = RadicalWeight(
            kind="gaussian",
            epsilon=0.5,
            horizon=float(horizon),
            description=description or "omega(t) = exp(-t^2)",
            omega_fn=lambda t: np.exp(-np.square(t)),
        )
    elif kind == "custom":
        if omega is None:
            raise ValueError("custom weights need an omega callable")
        w = RadicalWeight(
            kind="custom",
            epsilon=float(epsilon),
            horizon=float(horizon),
            description=description or "custom weight",
            omega_fn=lambda t, fn=omega: np.asarray(fn(t), dtype=float),
        )
    else:
        raise ValueError(f"unknown weight kind: {kind!r}")
    _verify_weight_invariants(w, tol)
    return w


# --------------------------------------------------------------------------
# grid functions


@dataclasses.dataclass(frozen=True)
class GridFunction:
    """A finitely supported function on the uniform grid ``t_k = k h``.

    ``coeffs[k]`` is the value at the left endpoint ``k h``; the function is
    treated as constant on each cell for quadrature purposes, so sums are
    scaled by ``h``.
    """

    h: float
    coeffs: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("grid step must be positive")
        arr = np.asarray(self.coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise ValueError("grid functions need at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", arr)

    @property
    def horizon(self) -> float:
        return self.h * len(self.coeffs)

    def times(self) -> np.ndarray:
        return self.h * np.arange(len(self.coeffs))

    def to_json(self) -> str:
        return json.dumps(
            {
                "h": float(self.h),
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            }
        )

    @staticmethod
    def from_json(text: str) -> "GridFunction":
        payload = json.loads(text)
        coeffs = [complex(re, im) for re, im in payload["coeffs"]]
        return GridFunction(h=float(payload["h"]), coeffs=np.array(coeffs))


def grid_delta(h: float, index: int = 0, amplitude: complex = None) -> GridFunction:
    """The discrete delta at ``t = index*h``: value ``1/h`` in one cell.

    With the default ``1/h`` scaling this is a two-sided identity for
    :func:`convolve` -- bit-exact for dyadic steps, one rounding of
    ``h * (1/h)`` otherwise.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    coeffs = np.zeros(index + 1, dtype=complex)
    coeffs[index] = (1.0 / h) if amplitude is None else amplitude
    return GridFunction(h=h, coeffs=coeffs)


def grid_indicator(h: float, a: float, b: float) -> GridFunction:
    """Indicator of ``[a, b)`` sampled on the grid (left endpoints)."""
    if not 0.0 <= a < b:
        raise ValueError("need 0 <= a < b")
    n = int(round(b / h))
    k0 = int(round(a / h))
    coeffs = np.zeros(max(n, k0 + 1), dtype=complex)
    coeffs[k0:n] = 1.0
    return GridFunction(h=h, coeffs=coeffs)


def weighted_l1(f: GridFunction, w: RadicalWeight) -> float:
    """``h * sum |f_k| omega(k h)``."""
    return float(f.h * np.sum(np.abs(f.coeffs) * w.omega(f.times())))


def weighted_l2(f: GridFunction, w: RadicalWeight) -> float:
    """``sqrt(h * sum |f_k omega(k h)|^2)``."""
    return float(
        np.sqrt(f.h * np.sum(np.square(np.abs(f.coeffs) * w.omega(f.times()))))
    )


def convolve(f: GridFunction, g: GridFunction, w: RadicalWeight):
    """Discrete convolution ``(f*g)[m] = h sum_{j<=m} f[j] g[m-j]``.

    Returns ``(f*g, norms)`` where ``norms`` carries the weighted norms of
    all three functions and the Young bound ``||f||_1 ||g||_2``.  The bound
    holds *exactly* on the grid: the index additivity ``jh + (m-j)h = mh``
    matches submultiplicativity term by term, with no quadrature slack.
    The output carries the full support (no truncation).
    """
    if abs(f.h - g.h) > 1e-15:
        raise ValueError(f"grid steps differ: {f.h} vs {g.h}")
    coeffs = f.h * np.convolve(f.coeffs, g.coeffs)
    fg = GridFunction(h=f.h, coeffs=coeffs)
    norms = {
        "l1_f": weighted_l1(f, w),
        "l1_g": weighted_l1(g, w),
        "l1_fg": weighted_l1(fg, w),
        "l2_g": weighted_l2(g, w),
        "l2_fg": weighted_l2(fg, w),
    }
    norms["young_bound"] = norms["l1_f"] * norms["l2_g"]
    return fg, norms


def alpha_index(f: GridFunction, tol: Tolerances = DEFAULT_TOL) -> int:
    """Index of the first coefficient above ``rank_tol * max|f|``; -1 if none."""
    mags = np.abs(f.coeffs)
    top = float(mags.max())
    if top <= 0.0:
        return -1
    above = np.nonzero(mags > tol.rank_tol * top)[0]
    return int(above[0]) if above.size else -1


def alpha(f: GridFunction, tol: Tolerances = DEFAULT_TOL) -> float:
    """Infimum of the support: ``h * first-nonzero-index``; +inf for zero.

    The threshold is relative (``rank_tol * max|f|``) so the value is
    invariant under scaling.
    """
    k = alpha_index(f, tol)
    return math.inf if k < 0 else f.h * k


@dataclasses.dataclass(frozen=True)
class TitchmarshReport:
    """Exact-additivity tally for the support functional under convolution."""

    trials: int
    exact_matches: int
    failures: list

    @property
    def all_exact(self) -> bool:
        return self.exact_matches == self.trials and not self.failures

    def to_json(self) -> str:
        return json.dumps(
            {
                "trials": int(self.trials),
                "exact_matches": int(self.exact_matches),
                "failures": self.failures,
            }
        )


def titchmarsh_check(
    trials: int, seed: int, h: float = 0.05, tol: Tolerances = DEFAULT_TOL
) -> TitchmarshReport:
    """Sample random pairs and assert ``alpha(f*g) = alpha(f) + alpha(g)``.

    The identity is checked at the index level (integers), so it is exact,
    not a floating-point near-equality: the leading coefficient of the
    convolution is ``h f[k_f] g[k_g]``, a product of two nonzero numbers.
    Leading coefficients are drawn with modulus in ``[0.5, 1.5]`` so the
    relative support threshold cannot misclassify them.  Supports are built
    inside the workspace, so no truncation can corrupt the sum.
    """
    rng = np.random.default_rng(seed)
    weight = make_weight("gaussian")
    matches = 0
    failures = []
    for trial in range(trials):
        parts = []
        for _ in range(2):
            offset = int(rng.integers(0, 30))
            length = int(rng.integers(1, 25))
            body = rng.standard_normal(length) + 1j * rng.standard_normal(length)
            body[0] = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
            coeffs = np.concatenate([np.zeros(offset, dtype=complex), body])
            parts.append(GridFunction(h=h, coeffs=coeffs))
        f, g = parts
        conv, _ = convolve(f, g, weight)
        expected = alpha_index(f, tol) + alpha_index(g, tol)
        got = alpha_index(conv, tol)
        if got == expected:
            matches += 1
        else:
            failures.append(
                {"trial": trial, "expected_index": expected, "got_index": got,
                 "f": json.loads(f.to_json()), "g": json.loads(g.to_json())}
            )
    return TitchmarshReport(trials=trials, exact_matches=matches, failures=failures)


# --------------------------------------------------------------------------
# quasinilpotence


def quasinilpotence_estimate(
    f: GridFunction,
    w: RadicalWeight,
    n_max: int,
    tol: Tolerances = DEFAULT_TOL,
) -> list:
    """Weighted-norm roots ``||f^{*n}||_1^{1/n}`` for ``n = 1..n_max``.

    Requires ``alpha(f) > 0`` (the decay argument needs the support bounded
    away from zero) and the iterated support ``n_max * horizon(f)`` to stay
    within the weight's verified horizon.
    """
    if alpha(f, tol) <= 0.0:
        raise ValueError("quasinilpotence estimates need alpha(f) > 0")
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max * f.horizon > w.horizon + 1e-9:
        raise ValueError(
            f"iterated support {n_max * f.horizon:.3g} exceeds the weight "
            f"horizon {w.horizon:.3g}"
        )
    roots = []
    power = f
    for n in range(1, n_max + 1):
        if n > 1:
            power, _ = convolve(power, f, w)
        roots.append(weighted_l1(power, w) ** (1.0 / n))
    return roots


def quasinilpotence_root_bound(
    f: GridFunction, w: RadicalWeight, n: int, tol: Tolerances = DEFAULT_TOL
) -> float:
    """n-th root of the closed-form bound on ``||f^{*n}||_1``.

    The iterated convolution is supported in ``[n a, n b]`` for ``f``
    supported in ``[a, b]``, giving
    ``||f^{*n}||_1 <= ||f||_1^n * max(omega on [na, nb]) / min(omega on [a, b])^n``
    where the plain-L1 factor uses the unweighted norm bound
    ``||f||_1 <= (weighted L1) / min(omega)``.
    """
    a = alpha(f, tol)
    if a <= 0.0:
        raise ValueError("the bound requires alpha(f) > 0")
    b = f.horizon
    grid_ab = np.linspace(a, b, 200)
    grid_nab = np.linspace(n * a, min(n * b, w.horizon), 200)
    min_ab = float(np.min(w.omega(grid_ab)))
    max_nab = float(np.max(w.omega(grid_nab)))
    plain_l1 = float(f.h * np.sum(np.abs(f.coeffs)))
    return plain_l1 * (max_nab ** (1.0 / n)) / min_ab


# --------------------------------------------------------------------------
# weight criterion


@dataclasses.dataclass(frozen=True)
class WeightCriterionReport:
    """Convexity, superlinear tail, and ratio-integral data for a weight.

    * ``eta_convex`` -- second differences of ``eta`` on a uniform grid stay
      above ``-exact_tol`` (``worst_second_difference`` records the minimum);
    * ``tail_superlinear`` -- ``eta(t)/t^(1+epsilon)`` is nondecreasing over
      the last quarter of the horizon;
    * ``ratio_integral`` -- quadrature of
      ``integral of (omega(x+t_probe)/omega(x))^2 dx`` over ``[0, inf)``
      (the integrand is decreasing in ``x`` for convex ``eta``).
    """

    eta_convex: bool
    worst_second_difference: float
    tail_superlinear: bool
    t_probe: float
    ratio_integral: float
    ratio_integral_error: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "eta_convex": bool(self.eta_convex),
                "worst_second_difference": float(self.worst_second_difference),
                "tail_superlinear": bool(self.tail_superlinear),
                "t_probe": float(self.t_probe),
                "ratio_integral": float(self.ratio_integral),
                "ratio_integral_error": float(self.ratio_integral_error),
            }
        )


def domar_criterion_check(
    w: RadicalWeight,
    t_probe: float,
    horizon: Optional[float] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> WeightCriterionReport:
    """Report the weight-criterion diagnostics (failures are entries, not errors)."""
    if t_probe <= 0:
        raise ValueError("t_probe must be positive")
    horizon = w.horizon if horizon is None else min(horizon, w.horizon)
    ts = np.linspace(horizon / 400.0, horizon, 400)
    eta = w.eta(ts)
    second = np.diff(eta, 2)
    worst = float(np.min(second)) if second.size else 0.0
    eta_convex = worst >= -tol.exact_tol

    ratio = eta / ts ** (1.0 + w.epsilon)
    tail = ratio[3 * len(ratio) // 4 :]
    tail_superlinear = bool(np.all(np.diff(tail) >= -tol.exact_tol))

    upper = horizon - t_probe

    def integrand(x):
        return (w.omega(x + t_probe) / w.omega(x)) ** 2

    # Integrate over the verified horizon only: beyond it sampled weights
    # are undefined and analytic ones underflow.  The integrand decreases
    # whenever eta is convex, so the discarded tail is estimated by its
    # value at the cutoff and folded into the reported error.
    value, err = scipy.integrate.quad(integrand, 0.0, max(upper, 0.0), limit=200)
    err += float(integrand(max(upper, 0.0)))
    return WeightCriterionReport(
        eta_convex=eta_convex,
        worst_second_difference=worst,
        tail_superlinear=tail_superlinear,
        t_probe=float(t_probe),
        ratio_integral=float(value),
        ratio_integral_error=float(err),
    )


# --------------------------------------------------------------------------
# principal-ideal density


@dataclasses.dataclass(frozen=True)
class PrincipalDensityResult:
    """Triangular-solve witness that ``g`` lies in the ideal generated by ``f``.

    ``residual`` is the relative weighted-L2 error of ``f * u - g`` on the
    truncated grid of ``g``; ``cond_log10`` is a crude growth estimate for
    the forward substitution (length times the log of the per-step
    amplification factor).
    """

    residual: float
    solution: GridFunction
    cond_log10: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "residual": float(self.residual),
                "cond_log10": float(self.cond_log10),
                "solution": json.loads(self.solution.to_json()),
            }
        )


def principal_density_check(
    t_f: GridFunction,
    g: GridFunction,
    w: RadicalWeight,
    budget: int = 10**6,
    tol: Tolerances = DEFAULT_TOL,
) -> PrincipalDensityResult:
    """Solve ``t_f * u = g`` on the truncated grid by forward substitution.

    Requires ``alpha(g) > alpha(t_f)`` strictly (otherwise the support
    additivity forbids solutions).  The lower-triangular Toeplitz system
    with nonzero leading coefficient is exactly solvable on the grid, so
    the residual is at quadrature precision whenever the substitution is
    well conditioned; ``cond_log10`` surfaces the conditioning.
    """
    if abs(t_f.h - g.h) > 1e-15:
        raise ValueError("grid steps differ")
    k0 = alpha_index(t_f, tol)
    j0 = alpha_index(g, tol)
    if k0 < 0:
        raise ValueError("t_f must be nonzero")
    if j0 >= 0 and g.h * j0 <= t_f.h * k0:
        raise ValueError("need alpha(g) > alpha(t_f) strictly")
    h = t_f.h
    length = len(g.coeffs) - k0
    if length > budget:
        raise ValueError(f"solution length {length} exceeds budget {budget}")
    if length <= 0:
        u = GridFunction(h=h, coeffs=np.zeros(1, dtype=complex))
        return PrincipalDensityResult(residual=0.0, solution=u, cond_log10=0.0)
    fcoef = t_f.coeffs
    lead = h * fcoef[k0]
    u = np.zeros(length, dtype=complex)
    for m in range(length):
        acc = g.coeffs[m + k0]
        jmax = min(len(fcoef) - 1, m + k0)
        for j in range(k0 + 1, jmax + 1):
            acc -= h * fcoef[j] * u[m + k0 - j]
        u[m] = acc / lead
    solution = GridFunction(h=h, coeffs=u)
    conv, _ = convolve(t_f, solution, w)
    padded = np.zeros(len(g.coeffs), dtype=complex)
    take = min(len(conv.coeffs), len(g.coeffs))
    padded[:take] = conv.coeffs[:take]
    diff = GridFunction(h=h, coeffs=padded - g.coeffs)
    denom = max(weighted_l2(g, w), 1e-30)
    residual = weighted_l2(diff, w) / denom
    amplifier = float(np.sum(np.abs(fcoef[k0 + 1 :])) / abs(fcoef[k0]) + 1.0)
    cond_log10 = length * math.log10(amplifier)
    return PrincipalDensityResult(
        residual=residual, solution=solution, cond_log10=cond_log10
    )


# --------------------------------------------------------------------------
# bump approximate identity


@dataclasses.dataclass(frozen=True)
class BumpCaiReport:
    """Weighted-norm and probe-defect table for normalized bumps.

    One row per requested width ``eps``: the effective (grid-rounded)
    width, the weighted L1 norm of the bump (tends to 1 from below as the
    width shrinks, since ``omega <= 1`` near 0 with ``omega(0) = 1``), and
    ``||f_eps * p - p||_2`` for each probe ``p`` (tends to 0 until the
    width hits the grid-resolution floor at one cell).
    """

    rows: list

    def to_json(self) -> str:
        return json.dumps({"rows": self.rows})


def bump_cai_check(
    eps_list: Sequence[float],
    w: RadicalWeight,
    probes: Sequence[GridFunction],
    h: Optional[float] = None,
) -> BumpCaiReport:
    """Evaluate normalized bumps ``(1/eps) * indicator([0, eps])`` as identities."""
    if h is None:
        if not probes:
            raise ValueError("need a grid step when no probes are given")
        h = probes[0].h
    for p in probes:
        if abs(p.h - h) > 1e-15:
            raise ValueError("probes must share one grid step")
    rows = []
    for eps in eps_list:
        if eps <= 0:
            raise ValueError("widths must be positive")
        cells = max(1, int(round(eps / h)))
        eff = cells * h
        bump = GridFunction(h=h, coeffs=np.full(cells, 1.0 / eff, dtype=complex))
        defects = []
        for p in probes:
            conv, _ = convolve(bump, p, w)
            padded = np.zeros(len(conv.coeffs), dtype=complex)
            padded[: len(p.coeffs)] = p.coeffs
            diff = GridFunction(h=h, coeffs=conv.coeffs - padded)
            defects.append(weighted_l2(diff, w))
        rows.append(
            {
                "eps": float(eps),
                "eps_effective": float(eff),
                "l1_norm": weighted_l1(bump, w),
                "probe_defects": [float(d) for d in defects],
            }
        )
    return BumpCaiReport(rows=rows)
