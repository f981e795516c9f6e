"""Numerical design of minimum-power constellations in the 2-D admissible cone.

The design problem: place M points inside the cone s1 >= sqrt(2)|s2| with all
pairwise distances at least one, minimizing either the average or the peak
optical power coefficient.  By scale invariance of the cone this is the dual
of maximizing the minimum distance under a power budget.

Method: multi-start exterior penalty.  Distance and cone violations enter as
quadratic penalties with an increasing weight schedule; the non-smooth pieces
(|s2| in the cone margin, the max in the peak objective) are softened with a
shrinking epsilon and a sharpening log-sum-exp, and each stage is locally
minimized with L-BFGS-B.  A final polish projects near-boundary points onto
the exact cone and rescales to exact unit minimum distance.  One start is
seeded from the cone-boundary lattice (the known average-power optima are
lattice subsets); the rest are drawn uniformly from a cone sector.

Equal-objective optima are genuinely degenerate for some sizes (several
lattice subsets share the same average power), so ties are broken first by
the complementary power metric and then by canonical lexicographic order,
which keeps reports deterministic and selects a stable representative.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from .core import (
    SQRT2,
    BasisConfig,
    Constellation,
    average_optical_coeff,
    canonicalize,
    cone_margins,
    peak_optical_coeff,
)

_SQRT23 = math.sqrt(2.0 / 3.0)
_ISQRT3 = 1.0 / math.sqrt(3.0)
#: Unit vectors along the two cone boundary rays; their angle is acos(1/3).
LATTICE_BASIS = np.array([[_SQRT23, _SQRT23], [_ISQRT3, -_ISQRT3]])

_TIE_TOL = 1e-7
_SNAP_TOL = 1e-6


class SolverFailureError(RuntimeError):
    """No restart produced a feasible constellation."""


class Objective(enum.Enum):
    AVERAGE = "avg"
    PEAK = "peak"


@dataclass(frozen=True)
class DesignProblem:
    """Constellation size and power objective; the signal space is the 2-D cone."""

    size: int
    objective: Objective
    dims: int = 2

    def __post_init__(self):
        object.__setattr__(self, "objective", Objective(self.objective))
        if not 2 <= self.size <= 64:
            raise ValueError(f"size must be between 2 and 64, got {self.size}")
        if self.dims != 2:
            raise ValueError("only the two-dimensional signal space is supported")


@dataclass(frozen=True)
class SolverSettings:
    restarts: int = 32
    seed: int = 0
    max_iterations: int = 600
    penalty_schedule: tuple[float, ...] = (1e2, 1e3, 1e4, 1e5, 1e6, 1e7)
    convergence_tol: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        sched = tuple(float(m) for m in self.penalty_schedule)
        if not sched or any(b <= a for a, b in zip(sched, sched[1:])) or sched[0] <= 0:
            raise ValueError("penalty_schedule must be positive and strictly increasing")
        object.__setattr__(self, "penalty_schedule", sched)
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")


@dataclass(frozen=True)
class SolveReport:
    best: Constellation
    objective_value: float
    restarts_hitting_best: int
    constraint_violation: float


def objective_value(c: Constellation, objective: Objective | str) -> float:
    """Average or peak optical power coefficient, per the requested objective."""
    objective = Objective(objective)
    if objective is Objective.AVERAGE:
        return average_optical_coeff(c)
    return peak_optical_coeff(c)


def is_cone_lattice_subset(c: Constellation, tol: float = 1e-9) -> bool:
    """Whether every point is an integer combination of the cone boundary unit vectors."""
    if c.dim != 2:
        raise ValueError("the cone lattice is defined in the 2-D signal space")
    idx = np.linalg.solve(LATTICE_BASIS, c.points.T)
    residual = LATTICE_BASIS @ (idx - np.round(idx))
    return bool(np.max(np.abs(residual)) <= tol)


# ---------------------------------------------------------------------------
# penalty machinery
# ---------------------------------------------------------------------------


def _penalized(x, M, objective, mu, beta, eps, iu, ju):
    """Penalty value and gradient.  x is the flattened (M, 2) point array."""
    pts = x.reshape(M, 2)
    s1 = pts[:, 0]
    s2 = pts[:, 1]
    grad = np.zeros_like(pts)

    r = np.sqrt(s2 * s2 + eps * eps)
    dr = s2 / r

    if objective is Objective.AVERAGE:
        f = float(s1.mean())
        grad[:, 0] += 1.0 / M
    else:
        g = s1 + SQRT2 * r
        z = np.exp(beta * (g - g.max()))
        w = z / z.sum()
        f = float(g.max() + math.log(z.sum()) / beta)
        grad[:, 0] += w
        grad[:, 1] += w * SQRT2 * dr

    # cone: penalize v = sqrt(2) r - s1 where positive
    v = SQRT2 * r - s1
    act = v > 0.0
    if np.any(act):
        f += mu * float(np.sum(v[act] ** 2))
        grad[act, 0] += mu * 2.0 * v[act] * (-1.0)
        grad[act, 1] += mu * 2.0 * v[act] * SQRT2 * dr[act]

    # pairwise distances: penalize w = 1 - d where positive
    diff = pts[iu] - pts[ju]
    d = np.sqrt(np.sum(diff * diff, axis=1) + 1e-18)
    short = 1.0 - d
    pact = short > 0.0
    if np.any(pact):
        f += mu * float(np.sum(short[pact] ** 2))
        coef = (-2.0 * mu * short[pact] / d[pact])[:, None] * diff[pact]
        np.add.at(grad, iu[pact], coef)
        np.add.at(grad, ju[pact], -coef)

    return f, grad.ravel()


def _project_to_boundary(p: np.ndarray) -> np.ndarray:
    """Orthogonal projection of one point onto the nearer cone boundary ray."""
    sign = 1.0 if p[1] >= 0.0 else -1.0
    ray = np.array([SQRT2, sign]) / math.sqrt(3.0)
    return max(float(p @ ray), 0.0) * ray


def _polish(pts: np.ndarray) -> np.ndarray | None:
    """Exact-feasibility cleanup: rescale to unit d_min, snap boundary points.

    Returns None for collapsed candidates (coincident points), which cannot
    be rescaled into a sane constellation.
    """
    pts = pts.copy()
    for _ in range(4):
        dmin = pdist(pts).min()
        if dmin < 1e-6:
            return None
        pts /= dmin
        margins = cone_margins(pts)
        for i in np.nonzero(np.abs(margins) <= _SNAP_TOL)[0]:
            pts[i] = _project_to_boundary(pts[i])
    return pts / pdist(pts).min()


def _feasibility_violation(pts: np.ndarray) -> float:
    cone_deficit = max(0.0, -float(cone_margins(pts).min()))
    return max(cone_deficit, abs(float(pdist(pts).min()) - 1.0))


def _lattice_seed(M: int, objective: Objective) -> np.ndarray:
    """Greedy best-M lattice subset; exact for the known average-power optima."""
    smax = M  # shells 0..M always contain more than M points
    cells = [(i, j) for s in range(smax + 1) for i in range(s + 1) for j in (s - i,)]
    if objective is Objective.AVERAGE:
        key = lambda ij: (ij[0] + ij[1], max(ij), abs(ij[0] - ij[1]), ij[0])
    else:
        key = lambda ij: (max(ij), ij[0] + ij[1], abs(ij[0] - ij[1]), ij[0])
    chosen = sorted(cells, key=key)[:M]
    return np.array([LATTICE_BASIS @ np.array(ij, dtype=float) for ij in chosen])


def _random_start(M: int, rng: np.random.Generator) -> np.ndarray:
    """Points uniform over a cone sector large enough to hold M unit-spaced points."""
    rmax = 1.6 * math.sqrt(M)
    radius = rmax * np.sqrt(rng.random(M))
    half_apex = math.atan(1.0 / SQRT2)
    angle = rng.uniform(-half_apex, half_apex, M)
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


def _beta_eps(stage: int) -> tuple[float, float]:
    return 50.0 * 4.0**stage, 1e-3 * 10.0 ** (-stage)


def _solve_one(problem: DesignProblem, settings: SolverSettings, restart: int):
    M = problem.size
    if restart == 0:
        x = _lattice_seed(M, problem.objective).ravel()
    else:
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=settings.seed, spawn_key=(restart,))
        )
        x = _random_start(M, rng).ravel()

    iu, ju = np.triu_indices(M, 1)
    for stage, mu in enumerate(settings.penalty_schedule):
        beta, eps = _beta_eps(stage)
        res = minimize(
            _penalized,
            x,
            args=(M, problem.objective, mu, beta, eps, iu, ju),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": settings.max_iterations, "ftol": 1e-15, "gtol": 1e-12},
        )
        x = res.x

    pts = _polish(x.reshape(M, 2))
    if pts is None:
        return math.inf, math.inf, math.inf, x.reshape(M, 2)
    violation = _feasibility_violation(pts)
    primary = Objective(problem.objective)
    secondary = Objective.PEAK if primary is Objective.AVERAGE else Objective.AVERAGE
    obj = _raw_objective(pts, primary)
    sec = _raw_objective(pts, secondary)
    return obj, sec, violation, pts


def _raw_objective(pts: np.ndarray, objective: Objective) -> float:
    if objective is Objective.AVERAGE:
        return float(pts[:, 0].mean())
    return float((pts[:, 0] + SQRT2 * np.abs(pts[:, 1])).max())


def _canonical_points(pts: np.ndarray) -> np.ndarray:
    def sorted_rows(p):
        return p[np.lexsort((p[:, 1], p[:, 0]))]

    direct = sorted_rows(pts)
    reflected = sorted_rows(pts * np.array([1.0, -1.0]))
    return reflected if [tuple(r) for r in reflected] < [tuple(r) for r in direct] else direct


def solve(problem: DesignProblem, settings: SolverSettings, workers: int = 1) -> SolveReport:
    """Best found unit-d_min admissible constellation for the design problem.

    Runs ``settings.restarts`` random starts plus the lattice-seeded start.
    Deterministic for fixed (problem, settings): restarts own sub-seeds derived
    from (seed, restart index) and the reduction over candidates is a total
    order, so serial and parallel runs return identical reports.
    """
    n_starts = settings.restarts + 1
    if workers <= 1:
        raw = [_solve_one(problem, settings, r) for r in range(n_starts)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(
                pool.map(lambda r: _solve_one(problem, settings, r), range(n_starts))
            )

    feasible = [cand for cand in raw if cand[2] <= settings.convergence_tol]
    if not feasible:
        raise SolverFailureError(
            f"no feasible candidate after {n_starts} starts "
            f"(best violation {min(c[2] for c in raw):.3e})"
        )

    best_obj = min(c[0] for c in feasible)
    tied = [c for c in feasible if c[0] <= best_obj + _TIE_TOL]
    best_sec = min(c[1] for c in tied)
    tied = [c for c in tied if c[1] <= best_sec + _TIE_TOL]
    winner = min(tied, key=lambda c: [tuple(r) for r in _canonical_points(c[3])])

    hitting = sum(1 for c in feasible if c[0] <= best_obj + 1e-6)
    name = f"opt-{problem.objective.value}-{problem.size}"
    best = canonicalize(
        Constellation(name, BasisConfig.dc_half_cosine(), winner[3])
    )
    return SolveReport(
        best=best,
        objective_value=winner[0],
        restarts_hitting_best=hitting,
        constraint_violation=winner[2],
    )
