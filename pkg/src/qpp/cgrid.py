"""Grid-sampled model of matrix-valued continuous functions on a union of intervals.

An element of M_n(C(Omega)) is stored as its values at the grid points, shape
(N, n, n).  Norms are maxima over the grid.  Range-closure conditions in
C(Omega) become zero-set conditions: the closure of f*C(Omega) is the set of
functions vanishing on Z(f), and the null space of f is the set of functions
supported in the interior of Z(f).  The sum of the two is everything exactly
when Z(f) is open as well as closed, which on the grid means no zero point
sits next to a nonzero point of the same component.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numlin as nl
from .io import matrix_from_json, matrix_to_json
from .numlin import DEFAULT_TOL, InputError, Tolerances

ZERO_ABS_TOL = 1e-9
ZERO_REL_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class GridDomain:
    """Disjoint closed intervals, each sampled at an ordered set of points including its endpoints."""

    components: tuple
    points: np.ndarray
    component_index: np.ndarray = field(repr=False, compare=False)

    def __init__(self, components, points):
        comps = tuple((float(a), float(b)) for a, b in components)
        if not comps:
            raise InputError("domain needs at least one component")
        for a, b in comps:
            if not (np.isfinite(a) and np.isfinite(b) and a < b):
                raise InputError(f"bad interval [{a}, {b}]")
        for (_, b0), (a1, _) in zip(comps, comps[1:]):
            if not b0 < a1:
                raise InputError("components must be disjoint and in increasing order")
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or not np.all(np.isfinite(pts)):
            raise InputError("points must be a finite 1-D list")
        if np.any(np.diff(pts) <= 0):
            raise InputError("points must be strictly increasing")
        idx = np.full(pts.size, -1)
        for k, (a, b) in enumerate(comps):
            inside = (pts >= a) & (pts <= b)
            if np.count_nonzero(inside) < 2 or not (np.any(pts == a) and np.any(pts == b)):
                raise InputError(f"component [{a}, {b}] needs at least its two endpoints")
            idx[inside] = k
        if np.any(idx < 0):
            raise InputError("every point must lie in a component")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "component_index", idx)

    @classmethod
    def uniform(cls, components, points_per_component: int) -> "GridDomain":
        if points_per_component < 2:
            raise InputError("each component needs at least 2 points")
        pts = np.concatenate([np.linspace(a, b, points_per_component) for a, b in components])
        return cls(components, pts)

    def __eq__(self, other):
        if not isinstance(other, GridDomain):
            return NotImplemented
        return self.components == other.components and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.components, self.points.tobytes()))

    @property
    def size(self) -> int:
        return self.points.size

    def neighbours_same_component(self) -> np.ndarray:
        """Boolean mask of adjacent index pairs (i, i+1) lying in the same component."""
        return self.component_index[1:] == self.component_index[:-1]

    def to_json(self) -> dict:
        return {"components": [list(c) for c in self.components], "points": self.points.tolist()}


@dataclass(frozen=True)
class GridElement:
    domain: GridDomain
    values: np.ndarray  # (N, n, n) complex

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 3 or v.shape[1] != v.shape[2] or v.shape[0] != self.domain.size:
            raise InputError(f"values of shape {v.shape} do not fit the domain")
        if not np.all(np.isfinite(v)):
            raise InputError("grid element has non-finite values")
        object.__setattr__(self, "values", v)

    @classmethod
    def scalar(cls, domain: GridDomain, f) -> "GridElement":
        """Scalar function from a vectorised callable or an array of point values."""
        vals = f(domain.points) if callable(f) else f
        vals = np.broadcast_to(np.asarray(vals, dtype=complex), domain.points.shape)
        return cls(domain, vals[:, None, None].copy())

    @classmethod
    def constant(cls, domain: GridDomain, M) -> "GridElement":
        M = nl.as_square(M, "M")
        return cls(domain, np.broadcast_to(M, (domain.size,) + M.shape).copy())

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def _other(self, other) -> np.ndarray:
        if isinstance(other, GridElement):
            if other.domain != self.domain or other.n != self.n:
                raise InputError("grid elements live on different domains or sizes")
            return other.values
        return np.asarray(other, dtype=complex)

    def __add__(self, other):
        return GridElement(self.domain, self.values + self._other(other))

    def __sub__(self, other):
        return GridElement(self.domain, self.values - self._other(other))

    def __mul__(self, scalar):
        return GridElement(self.domain, self.values * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other):
        return GridElement(self.domain, self.values @ self._other(other))

    def adjoint(self) -> "GridElement":
        return GridElement(self.domain, np.conj(np.swapaxes(self.values, 1, 2)))

    def identity(self) -> "GridElement":
        return GridElement.constant(self.domain, np.eye(self.n))

    def pointwise_norms(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(self.domain.size)
        return np.linalg.norm(self.values, ord=2, axis=(1, 2))

    def scalar_values(self) -> np.ndarray:
        if self.n != 1:
            raise InputError("expected a scalar (1x1) grid element")
        return self.values[:, 0, 0]

    def to_json(self) -> dict:
        d = self.domain.to_json()
        d["values"] = [matrix_to_json(v) for v in self.values]
        return d

    @classmethod
    def from_json(cls, obj) -> "GridElement":
        try:
            domain = GridDomain(obj["components"], obj["points"])
            vals = [matrix_from_json(v) for v in obj["values"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed grid JSON: {exc}") from exc
        if not vals:
            raise InputError("grid JSON has no values")
        if len({v.shape for v in vals}) != 1:
            raise InputError("grid values must share one matrix size")
        return cls(domain, np.stack(vals))


def grid_norm(x: GridElement) -> float:
    """max_t ‖x(t)‖."""
    return float(np.max(x.pointwise_norms()))


@dataclass(frozen=True)
class ZeroSetReport:
    zero: tuple
    boundary: tuple
    zero_tol: float

    @property
    def clopen(self) -> bool:
        return not self.boundary

    @property
    def empty(self) -> bool:
        return not self.zero

    def to_json(self) -> dict:
        return {
            "zero": list(self.zero),
            "boundary": list(self.boundary),
            "clopen": self.clopen,
            "zero_tol": self.zero_tol,
        }


def zero_tolerance(values: np.ndarray) -> float:
    return max(ZERO_ABS_TOL, ZERO_REL_TOL * float(np.max(np.abs(values), initial=0.0)))


def zero_set(a: GridElement, tol: Tolerances = DEFAULT_TOL) -> ZeroSetReport:
    """Zero points of a scalar element, and those adjacent (within a component) to a nonzero point."""
    vals = a.scalar_values()
    ztol = zero_tolerance(vals)
    is_zero = np.abs(vals) <= ztol
    same = a.domain.neighbours_same_component()
    left = np.zeros_like(is_zero)
    right = np.zeros_like(is_zero)
    # right neighbour of i is nonzero, and vice versa
    right[:-1] = same & ~is_zero[1:]
    left[1:] = same & ~is_zero[:-1]
    boundary = is_zero & (left | right)
    return ZeroSetReport(
        tuple(int(i) for i in np.flatnonzero(is_zero)),
        tuple(int(i) for i in np.flatnonzero(boundary)),
        ztol,
    )


def _real_values(a: GridElement, tol: Tolerances) -> np.ndarray:
    vals = a.scalar_values()
    if np.max(np.abs(vals.imag), initial=0.0) > tol.residual_tol:
        raise InputError("a must be real-valued")
    return vals.real


def lift_A(a: GridElement, tol: Tolerances = DEFAULT_TOL) -> tuple[GridElement, GridElement]:
    """Pointwise P = diag(1, 0), Q = [[a, -l], [l, 1 - a]] with l = (a^2 - a)^(1/2)."""
    x = _real_values(a, tol)
    g = x * x - x
    window = tol.psd_clamp_tol * max(1.0, float(np.max(x * x, initial=0.0)))
    if np.any(g < -window):
        bad = int(np.argmin(g))
        raise InputError(
            f"a^2 - a < 0 at t = {a.domain.points[bad]!r} (value {g[bad]:.3e})"
        )
    l = np.sqrt(np.maximum(g, 0.0))
    N = a.domain.size
    P = np.zeros((N, 2, 2), dtype=complex)
    P[:, 0, 0] = 1.0
    Q = np.empty((N, 2, 2), dtype=complex)
    Q[:, 0, 0], Q[:, 0, 1] = x, -l
    Q[:, 1, 0], Q[:, 1, 1] = l, 1.0 - x
    Pg, Qg = GridElement(a.domain, P), GridElement(a.domain, Q)
    res = pointwise_pair_residual(Pg, Qg)
    scale = max(1.0, grid_norm(Qg) ** 2)
    if res >= tol.residual_tol * scale:
        raise nl.NumericalError(f"lifted pair fails pointwise by {res:.3e}")
    return Pg, Qg


def pointwise_pair_residual(P: GridElement, Q: GridElement) -> float:
    """max_t of ‖Q² - Q‖ and ‖Q* - (2P - I) Q (2P - I)‖."""
    S = 2 * P - P.identity()
    idem = grid_norm(Q @ Q - Q)
    sym = grid_norm(Q.adjoint() - S @ Q @ S)
    return max(idem, sym)


@dataclass(frozen=True)
class CriterionReport:
    name: str
    verdict: bool
    zero_set: ZeroSetReport
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"criterion": self.name, "verdict": self.verdict,
                "zero_set": self.zero_set.to_json(), **self.details}


def semiharmony_criterion(a: GridElement, tol: Tolerances = DEFAULT_TOL) -> CriterionReport:
    """Semi-harmony of the lift: Z(a - 1) clopen."""
    x = _real_values(a, tol)
    zs = zero_set(GridElement.scalar(a.domain, x - 1.0), tol)
    return CriterionReport("semiharmony", zs.clopen, zs, {"function": "a - 1"})


def harmony_criterion(a: GridElement, tol: Tolerances = DEFAULT_TOL) -> CriterionReport:
    """Harmony of the lift: Z(a^2 - a) clopen."""
    x = _real_values(a, tol)
    zs = zero_set(GridElement.scalar(a.domain, x * x - x), tol)
    return CriterionReport("harmony", zs.clopen, zs, {"function": "a^2 - a"})


def restricted_harmony(a: GridElement, tol: Tolerances = DEFAULT_TOL) -> CriterionReport:
    """Harmony of the lifted pair compressed to M = closure of R(P - Q), by zero-set criterion.

    The compression is harmonious exactly when Z(a) is clopen.  The report
    also carries the comparison Z(l) = Z(1 - a); the two tests agree whenever
    Z(a) is empty or has empty interior.  The compression is always
    semi-harmonious.  a = 1 everywhere makes M trivial, flagged as degenerate.
    """
    x = _real_values(a, tol)
    lift_A(a, tol)  # precondition
    dom = a.domain
    z_a = zero_set(GridElement.scalar(dom, x), tol)
    z_l = zero_set(GridElement.scalar(dom, np.sqrt(np.maximum(x * x - x, 0.0))), tol)
    z_1a = zero_set(GridElement.scalar(dom, 1.0 - x), tol)
    details = {
        "semiharmony": True,
        "degenerate": len(z_1a.zero) == dom.size,
        "zero_sets_equal": z_l.zero == z_1a.zero,
        "zero_set_ell": z_l.to_json(),
        "zero_set_one_minus_a": z_1a.to_json(),
        "basis": "by zero-set criterion",
    }
    return CriterionReport("restricted_harmony", z_a.clopen, z_a, details)


def pointwise_meet(P: GridElement, Q: GridElement, tol: Tolerances = DEFAULT_TOL) -> GridElement:
    """At each t the projector onto R(P(t)) ∩ R(Q(t))."""
    from .qppcore import range_projection_of_idempotent

    if P.domain != Q.domain or P.n != Q.n:
        raise InputError("P and Q must share domain and size")
    out = np.empty_like(P.values)
    for i in range(P.domain.size):
        RP = nl.range_space(P.values[i], tol)
        RQ = nl.range_space(range_projection_of_idempotent(Q.values[i], tol), tol)
        out[i] = nl.projector(nl.subspace_meet(RP, RQ, tol))
    return GridElement(P.domain, out)


def range_projection_grid(Q: GridElement, tol: Tolerances = DEFAULT_TOL) -> GridElement:
    """Pointwise Q (Q + Q* - I)^{-1}."""
    K = Q.values + np.conj(np.swapaxes(Q.values, 1, 2)) - np.eye(Q.n)
    R = Q.values @ np.linalg.inv(K)
    return GridElement(Q.domain, 0.5 * (R + np.conj(np.swapaxes(R, 1, 2))))


@dataclass(frozen=True)
class MaxSplitReport:
    lhs: float
    alpha: float
    meet_gap: float  # ‖P_M - pi(P_H1)‖
    lhs_beta: float
    beta: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - max(self.alpha, self.meet_gap))

    @property
    def residual_beta(self) -> float:
        return abs(self.lhs_beta - max(self.beta, self.meet_gap))

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs, "alpha": self.alpha, "meet_gap": self.meet_gap,
            "rhs": max(self.alpha, self.meet_gap), "residual": self.residual,
            "lhs_beta": self.lhs_beta, "beta": self.beta,
            "rhs_beta": max(self.beta, self.meet_gap), "residual_beta": self.residual_beta,
        }


def max_split_check(
    P: GridElement, Q: GridElement, H1_projector: GridElement, tol: Tolerances = DEFAULT_TOL
) -> MaxSplitReport:
    """Both sides of ‖PQ - P1‖ = max{α, ‖P_M - P1‖} and its P_R(Q) variant under grid evaluation."""
    PM = pointwise_meet(P, Q, tol)
    RQ = range_projection_grid(Q, tol)
    PQ, PR = P @ Q, P @ RQ
    return MaxSplitReport(
        lhs=grid_norm(PQ - H1_projector),
        alpha=grid_norm(PQ - PM),
        meet_gap=grid_norm(PM - H1_projector),
        lhs_beta=grid_norm(PR - H1_projector),
        beta=grid_norm(PR - PM),
    )


def module_meet_is_trivial(meet: GridElement, tol: Tolerances = DEFAULT_TOL) -> bool:
    """A continuous section of the pointwise meet vanishes unless the meet is nonzero on an open set.

    On the grid: no point with nonzero meet has all of its same-component
    neighbours also carrying a nonzero meet.
    """
    nz = meet.pointwise_norms() > 0.5
    same = meet.domain.neighbours_same_component()
    left_ok = np.ones_like(nz)
    right_ok = np.ones_like(nz)
    left_ok[1:] = ~same | nz[:-1]
    right_ok[:-1] = ~same | nz[1:]
    left_ok[0] = right_ok[-1] = True
    interior = nz & left_ok & right_ok
    # an isolated point forming a whole component would be open; treat it as interior
    return not np.any(interior)


def sec2_element(points: int) -> GridElement:
    dom = GridDomain.uniform([(0.0, 1.0)], points)
    return GridElement.scalar(dom, lambda t: 1.0 / np.cos(t) ** 2)


def interval_union_element(points: int) -> GridElement:
    dom = GridDomain.uniform([(-1.0, 0.0), (1.0, 2.0)], points)
    return GridElement.scalar(dom, lambda t: t)


def constant_element(value: float, points: int) -> GridElement:
    dom = GridDomain.uniform([(0.0, 1.0)], points)
    return GridElement.scalar(dom, lambda t: np.full_like(t, value))


def _solution_space(A: np.ndarray, B: np.ndarray, constrain: bool) -> np.ndarray:
    """Null space of X -> X A - B X (column-major vec), optionally with x12 = x21 = 0."""
    I = np.eye(2)
    L = np.kron(A.T, I) - np.kron(I, B)
    if constrain:
        # vec order: x11, x21, x12, x22
        rows = np.zeros((2, 4), dtype=complex)
        rows[0, 2] = rows[1, 1] = 1.0
        L = np.vstack([L, rows])
    return nl.null_space(L).basis


@dataclass(frozen=True)
class CounterexampleReport:
    constrained_dim: int
    constrained_rank: int
    unconstrained_dim: int
    generic_t: float
    generic_invertible: bool
    H1_trivial: bool
    H4_trivial: bool

    @property
    def passed(self) -> bool:
        return (self.constrained_dim == 0 and self.unconstrained_dim == 2
                and self.generic_invertible and self.H1_trivial and self.H4_trivial)

    def to_json(self) -> dict:
        return {
            "constrained_dim": self.constrained_dim,
            "constrained_rank": self.constrained_rank,
            "unconstrained_dim": self.unconstrained_dim,
            "generic_t": self.generic_t,
            "generic_invertible": self.generic_invertible,
            "H1_trivial": self.H1_trivial,
            "H4_trivial": self.H4_trivial,
            "pass": self.passed,
        }


def counterexample_check(
    tol: Tolerances = DEFAULT_TOL, points: int = 1001, generic_t: float = 0.5
) -> CounterexampleReport:
    """W P Q = (I - Q)(I - P) W on the sec^2 lift, with W's off-diagonal entries vanishing at t = 0.

    At t = 0 the constrained solution space is {0}, so W(0) = 0 and no
    invertible W exists; away from 0 invertible pointwise solutions exist.
    """
    a = sec2_element(points)
    P, Q = lift_A(a, tol)
    I = np.eye(2)

    def system(i):
        P0, Q0 = P.values[i], Q.values[i]
        return P0 @ Q0, (I - Q0) @ (I - P0)

    A0, B0 = system(0)
    constrained = _solution_space(A0, B0, True)
    unconstrained = _solution_space(A0, B0, False)
    L = np.vstack([np.kron(A0.T, I) - np.kron(I, B0), np.eye(4)[[2, 1]]])
    k = int(np.argmin(np.abs(a.domain.points - generic_t)))
    Ag, Bg = system(k)
    basis = _solution_space(Ag, Bg, False)
    coeffs = np.random.default_rng(0).standard_normal(basis.shape[1])
    Wg = (basis @ coeffs).reshape(2, 2, order="F")
    generic_invertible = bool(basis.shape[1] > 0 and abs(np.linalg.det(Wg)) > 1e-8)
    meet1 = pointwise_meet(P, Q, tol)
    Ig = P.identity()
    meet4 = pointwise_meet(Ig - P, Ig - Q, tol)
    return CounterexampleReport(
        constrained_dim=constrained.shape[1],
        constrained_rank=nl.rank(L),
        unconstrained_dim=unconstrained.shape[1],
        generic_t=float(a.domain.points[k]),
        generic_invertible=generic_invertible,
        H1_trivial=module_meet_is_trivial(meet1, tol),
        H4_trivial=module_meet_is_trivial(meet4, tol),
    )
