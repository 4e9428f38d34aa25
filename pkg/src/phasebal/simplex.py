"""Bounded-variable revised primal simplex.

Solves  min c.x  s.t.  A x (<=, =, >=) b,  l <= x <= u  by appending one
logical column per row (slack bounds encode the relation) and running a
two-phase primal simplex on the equality system [A | I] z = b.

Phase 1 minimizes the sum of bound violations of the basic variables with
a composite objective (no artificial columns), so any starting basis,
including a warm start whose bounds have since changed, is repaired in
place.  Phase 2 prices with Dantzig's rule and falls back to Bland's rule
after a run of degenerate pivots.

Two factorization engines share the pivoting loop: a dense LU path used
up to DENSE_VAR_LIMIT structural variables and a sparse LU path (SuperLU)
beyond it.  Both maintain product-form eta updates between periodic
refactorizations.  All tie-breaking is by lowest index, so runs are
deterministic for identical input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as dla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .formulation import MilpModel

INF = float("inf")

AT_LOWER = np.int8(0)
AT_UPPER = np.int8(1)
BASIC = np.int8(2)
FREE_ZERO = np.int8(3)

DENSE_VAR_LIMIT = 2000
REFACTOR_INTERVAL = 100
FEAS_TOL = 1e-9
DUAL_TOL = 1e-9
RATIO_TOL = 1e-11
PIVOT_TOL = 1e-8
DEGEN_STEP = 1e-11


class NumericalTroubleError(RuntimeError):
    pass


@dataclass
class Basis:
    """Warm-start state: which columns are basic and the nonbasic statuses."""

    basic: np.ndarray
    status: np.ndarray

    def copy(self) -> "Basis":
        return Basis(self.basic.copy(), self.status.copy())


@dataclass
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float
    iterations: int
    basis: Basis | None = None
    infeasibility: float = 0.0


@dataclass
class LpData:
    """Standard equality form of a model: [A | I] z = b with bounds."""

    c: np.ndarray          # (n_total,), zeros on logicals
    A: sp.csc_matrix       # (m, n_total)
    AT: sp.csr_matrix      # transpose, used for pricing
    b: np.ndarray
    lower: np.ndarray      # (n_total,)
    upper: np.ndarray
    n_structural: int

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n_total(self) -> int:
        return self.A.shape[1]

    @classmethod
    def from_model(cls, model: MilpModel) -> "LpData":
        n = len(model.variables)
        m = len(model.constraints)
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        b = np.zeros(m)
        slack_lo = np.zeros(m)
        slack_hi = np.zeros(m)
        for i, con in enumerate(model.constraints):
            rows.extend([i] * len(con.cols))
            cols.extend(con.cols)
            vals.extend(con.coefs)
            b[i] = con.rhs
            if con.relation == "<=":
                slack_lo[i], slack_hi[i] = 0.0, INF
            elif con.relation == ">=":
                slack_lo[i], slack_hi[i] = -INF, 0.0
            elif con.relation == "=":
                slack_lo[i], slack_hi[i] = 0.0, 0.0
            else:
                raise ValueError(f"unknown relation {con.relation!r}")
        rows.extend(range(m))
        cols.extend(range(n, n + m))
        vals.extend([1.0] * m)
        A = sp.csc_matrix(
            (np.asarray(vals, dtype=float), (np.asarray(rows), np.asarray(cols))),
            shape=(m, n + m),
        )
        lower = np.concatenate([np.array([v.lower for v in model.variables], dtype=float), slack_lo])
        upper = np.concatenate([np.array([v.upper for v in model.variables], dtype=float), slack_hi])
        c = np.concatenate([np.asarray(model.objective, dtype=float), np.zeros(m)])
        return cls(c=c, A=A, AT=A.T.tocsr(), b=b, lower=lower, upper=upper, n_structural=n)


class _DenseEngine:
    """LU factorization of the basis as a dense matrix."""

    def __init__(self, A: sp.csc_matrix):
        self.A = A
        self.m = A.shape[0]
        self._lu = None
        self.etas: list[tuple[int, np.ndarray]] = []

    def refactor(self, basic: np.ndarray) -> None:
        self.etas = []
        if self.m == 0:
            return
        B = self.A[:, basic].toarray()
        try:
            self._lu = dla.lu_factor(B, check_finite=False)
        except (ValueError, dla.LinAlgError) as exc:  # pragma: no cover - defensive
            raise NumericalTroubleError(f"singular basis: {exc}") from exc

    def _base_solve(self, v: np.ndarray, trans: int) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        return dla.lu_solve(self._lu, v, trans=trans, check_finite=False)

    def ftran(self, v: np.ndarray) -> np.ndarray:
        x = self._base_solve(v, 0)
        for r, d in self.etas:
            t = x[r] / d[r]
            if t != 0.0:
                x -= d * t
            x[r] = t
        return x

    def btran(self, v: np.ndarray) -> np.ndarray:
        u = v.copy()
        for r, d in reversed(self.etas):
            u[r] -= (u @ d - u[r]) / d[r]
        return self._base_solve(u, 1)

    def update(self, w: np.ndarray, pos: int) -> None:
        self.etas.append((pos, w.copy()))

    @property
    def pivots_since_refactor(self) -> int:
        return len(self.etas)


class _SparseEngine:
    """SuperLU factorization of the basis kept sparse."""

    def __init__(self, A: sp.csc_matrix):
        self.A = A
        self.m = A.shape[0]
        self._lu = None
        self.etas: list[tuple[int, np.ndarray]] = []

    def refactor(self, basic: np.ndarray) -> None:
        self.etas = []
        if self.m == 0:
            return
        B = self.A[:, basic].tocsc()
        try:
            self._lu = spla.splu(B)
        except RuntimeError as exc:  # pragma: no cover - defensive
            raise NumericalTroubleError(f"singular basis: {exc}") from exc

    def ftran(self, v: np.ndarray) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        x = self._lu.solve(v)
        for r, d in self.etas:
            t = x[r] / d[r]
            if t != 0.0:
                x -= d * t
            x[r] = t
        return x

    def btran(self, v: np.ndarray) -> np.ndarray:
        if self.m == 0:
            return np.zeros(0)
        u = v.copy()
        for r, d in reversed(self.etas):
            u[r] -= (u @ d - u[r]) / d[r]
        return self._lu.solve(u, trans="T")

    def update(self, w: np.ndarray, pos: int) -> None:
        self.etas.append((pos, w.copy()))

    @property
    def pivots_since_refactor(self) -> int:
        return len(self.etas)


class _Simplex:
    def __init__(
        self,
        data: LpData,
        lower: np.ndarray,
        upper: np.ndarray,
        engine: str,
        max_iterations: int,
    ):
        self.d = data
        self.lower = lower
        self.upper = upper
        self.m = data.m
        self.n_total = data.n_total
        if engine == "dense":
            self.engine = _DenseEngine(data.A)
        else:
            self.engine = _SparseEngine(data.A)
        self.max_iterations = max_iterations
        self.iterations = 0
        self.bland = False
        self.degen_streak = 0
        self.bland_threshold = 100 + self.m // 2

        self.basic = np.zeros(self.m, dtype=np.int64)
        self.status = np.zeros(self.n_total, dtype=np.int8)
        self.xB = np.zeros(self.m)

    # -- basis management ---------------------------------------------------

    def _default_status(self, j: int) -> np.int8:
        if self.lower[j] > -INF:
            return AT_LOWER
        if self.upper[j] < INF:
            return AT_UPPER
        return FREE_ZERO

    def init_basis(self, warm: Basis | None) -> None:
        n = self.d.n_structural
        if warm is not None and len(warm.basic) == self.m and len(warm.status) == self.n_total:
            self.basic = warm.basic.astype(np.int64).copy()
            self.status = warm.status.copy()
            in_basis = np.zeros(self.n_total, dtype=bool)
            in_basis[self.basic] = True
            # Repair statuses that no longer make sense for the current bounds.
            for j in range(self.n_total):
                if in_basis[j]:
                    self.status[j] = BASIC
                    continue
                st = self.status[j]
                if st == AT_LOWER and self.lower[j] <= -INF:
                    self.status[j] = self._default_status(j)
                elif st == AT_UPPER and self.upper[j] >= INF:
                    self.status[j] = self._default_status(j)
                elif st in (BASIC, FREE_ZERO):
                    self.status[j] = self._default_status(j)
        else:
            self.basic = np.arange(n, n + self.m, dtype=np.int64)
            self.status[:] = [self._default_status(j) for j in range(self.n_total)]
            self.status[self.basic] = BASIC

    def nonbasic_values(self) -> np.ndarray:
        vals = np.where(self.status == AT_UPPER, self.upper, self.lower)
        vals = np.where(self.status == FREE_ZERO, 0.0, vals)
        vals[self.basic] = 0.0
        return vals

    def recompute_xB(self) -> None:
        rhs = self.d.b - self.d.A @ self.nonbasic_values()
        self.xB = self.engine.ftran(rhs)

    def refactor(self) -> None:
        self.engine.refactor(self.basic)
        self.recompute_xB()

    # -- pricing and ratio test ----------------------------------------------

    def _reduced_costs(self, phase1: bool) -> np.ndarray:
        if phase1:
            lB = self.lower[self.basic]
            uB = self.upper[self.basic]
            cB = np.where(self.xB > uB + FEAS_TOL, 1.0, 0.0) - np.where(
                self.xB < lB - FEAS_TOL, 1.0, 0.0
            )
            cN_full = np.zeros(self.n_total)
        else:
            cB = self.d.c[self.basic]
            cN_full = self.d.c
        if self.m:
            y = self.engine.btran(cB)
            z = self.d.AT @ y
        else:
            z = np.zeros(self.n_total)
        return cN_full - z

    def _choose_entering(self, d: np.ndarray) -> tuple[int, int] | None:
        st = self.status
        can_up = ((st == AT_LOWER) | (st == FREE_ZERO)) & (d < -DUAL_TOL)
        can_dn = ((st == AT_UPPER) | (st == FREE_ZERO)) & (d > DUAL_TOL)
        movable = (self.upper > self.lower) | (st == FREE_ZERO)
        can_up &= movable
        can_dn &= movable
        if not (can_up.any() or can_dn.any()):
            return None
        if self.bland:
            idx_up = np.flatnonzero(can_up)
            idx_dn = np.flatnonzero(can_dn)
            j_up = idx_up[0] if idx_up.size else self.n_total
            j_dn = idx_dn[0] if idx_dn.size else self.n_total
            if j_up <= j_dn:
                return int(j_up), +1
            return int(j_dn), -1
        viol = np.zeros(self.n_total)
        viol[can_up] = -d[can_up]
        viol[can_dn] = d[can_dn]
        j = int(np.argmax(viol))
        return j, (+1 if can_up[j] else -1)

    def _ratio_test(self, j: int, sigma: int, w: np.ndarray, phase1: bool) -> tuple:
        """Largest feasible step along the entering direction.

        Returns ("step", t, pos, to_upper) when a basic variable blocks,
        ("flip", t) when the entering variable reaches its opposite bound
        first, or ("unbounded",) when nothing blocks.
        """
        delta = -sigma * w
        lB = self.lower[self.basic]
        uB = self.upper[self.basic]
        up = delta > RATIO_TOL
        dn = delta < -RATIO_TOL

        target = np.full(self.m, np.nan)
        if phase1:
            # Infeasible basics stop at the bound they are approaching;
            # basics moving deeper into violation impose no limit.
            below = self.xB < lB - FEAS_TOL
            above = self.xB > uB + FEAS_TOL
            target[up] = np.where(below[up], lB[up], uB[up])
            target[up & above] = np.inf
            target[dn] = np.where(above[dn], uB[dn], lB[dn])
            target[dn & below] = -np.inf
        else:
            target[up] = uB[up]
            target[dn] = lB[dn]

        steps = np.full(self.m, INF)
        move = up | dn
        with np.errstate(invalid="ignore", divide="ignore"):
            raw = (target - self.xB) / delta
        steps[move] = np.maximum(raw[move], 0.0)
        steps[move & ~np.isfinite(target)] = INF

        t_basic = steps.min() if self.m else INF
        t_flip = self.upper[j] - self.lower[j] if self.status[j] != FREE_ZERO else INF

        if not np.isfinite(t_basic) and not np.isfinite(t_flip):
            if phase1:  # cannot happen: the violation sum is bounded below
                raise NumericalTroubleError("phase-1 ratio test found no breakpoint")
            return ("unbounded",)

        if t_basic <= t_flip:
            cand = np.flatnonzero(steps <= t_basic + RATIO_TOL)
            if self.bland:
                pos = int(cand[np.argmin(self.basic[cand])])
            else:
                pos = int(cand[np.argmax(np.abs(delta[cand]))])
            to_upper = bool(target[pos] == uB[pos])
            return ("step", float(max(t_basic, 0.0)), pos, to_upper)
        return ("flip", float(t_flip))

    # -- main loop ------------------------------------------------------------

    def _loop(self, phase1: bool) -> str:
        while True:
            if self.iterations >= self.max_iterations:
                raise NumericalTroubleError("simplex iteration limit exceeded")
            if self.engine.pivots_since_refactor >= REFACTOR_INTERVAL:
                self.refactor()
            if phase1:
                lB = self.lower[self.basic]
                uB = self.upper[self.basic]
                infeas = np.maximum(self.xB - uB, 0.0) + np.maximum(lB - self.xB, 0.0)
                infeas[~np.isfinite(infeas)] = 0.0
                if infeas.max(initial=0.0) <= FEAS_TOL:
                    return "feasible"
            d = self._reduced_costs(phase1)
            choice = self._choose_entering(d)
            if choice is None:
                return "optimal" if not phase1 else "infeasible"
            j, sigma = choice
            w = self.engine.ftran(self.d.A[:, j].toarray().ravel()) if self.m else np.zeros(0)
            outcome = self._ratio_test(j, sigma, w, phase1)
            self.iterations += 1
            if outcome[0] == "unbounded":
                return "unbounded"
            if outcome[0] == "flip":
                t = outcome[1]
                self.xB += (-sigma * w) * t
                self.status[j] = AT_UPPER if self.status[j] == AT_LOWER else AT_LOWER
                self._track_degeneracy(t)
                continue
            _, t, pos, to_upper = outcome
            if self.status[j] == AT_LOWER:
                enter_val = self.lower[j] + sigma * t
            elif self.status[j] == AT_UPPER:
                enter_val = self.upper[j] + sigma * t
            else:
                enter_val = sigma * t
            self.xB += (-sigma * w) * t
            leaving = int(self.basic[pos])
            self.status[leaving] = AT_UPPER if to_upper else AT_LOWER
            self.engine.update(w, pos)
            self.basic[pos] = j
            self.status[j] = BASIC
            self.xB[pos] = enter_val
            self._track_degeneracy(t)

    def _track_degeneracy(self, t: float) -> None:
        if t <= DEGEN_STEP:
            self.degen_streak += 1
            if self.degen_streak > self.bland_threshold:
                self.bland = True
        else:
            self.degen_streak = 0
            self.bland = False

    def max_violation(self) -> float:
        if self.m == 0:
            return 0.0
        lB = self.lower[self.basic]
        uB = self.upper[self.basic]
        viol = np.maximum(self.xB - uB, 0.0) + np.maximum(lB - self.xB, 0.0)
        viol[~np.isfinite(viol)] = 0.0
        return float(viol.max(initial=0.0))

    def solution_vector(self) -> np.ndarray:
        z = self.nonbasic_values()
        z[self.basic] = self.xB
        return z

    def run(self, warm: Basis | None) -> LpSolution:
        self.init_basis(warm)
        self.refactor()
        status = None
        for attempt in range(3):
            res = self._loop(phase1=True)
            if res == "infeasible":
                status = "infeasible"
                break
            res = self._loop(phase1=False)
            if res == "unbounded":
                status = "unbounded"
                break
            self.refactor()  # clean recompute for tight residuals
            if self.max_violation() <= 1e-7:
                status = "optimal"
                break
            # Numerical drift left residual infeasibility; repair and retry.
        if status is None:
            raise NumericalTroubleError("simplex failed to reach a clean optimum")
        basis = Basis(self.basic.copy(), self.status.copy())
        if status == "optimal":
            z = self.solution_vector()
            obj = float(self.d.c @ z)
            return LpSolution("optimal", z[: self.d.n_structural], obj, self.iterations, basis)
        if status == "unbounded":
            return LpSolution("unbounded", None, -INF, self.iterations, basis)
        return LpSolution(
            "infeasible", None, INF, self.iterations, basis, infeasibility=self.max_violation()
        )


def solve_lp_data(
    data: LpData,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    warm_basis: Basis | None = None,
    engine: str | None = None,
    max_iterations: int | None = None,
) -> LpSolution:
    """Solve a prepared :class:`LpData`, optionally with bound overrides."""
    lo = data.lower if lower is None else lower
    hi = data.upper if upper is None else upper
    if engine is None:
        engine = "dense" if data.n_structural <= DENSE_VAR_LIMIT else "sparse"
    if max_iterations is None:
        max_iterations = 200 * (data.m + data.n_total) + 20000
    sx = _Simplex(data, lo.copy(), hi.copy(), engine, max_iterations)
    return sx.run(warm_basis)


def solve_lp(
    model: MilpModel,
    warm_basis: Basis | None = None,
    engine: str | None = None,
    max_iterations: int | None = None,
) -> LpSolution:
    """Solve the continuous relaxation of ``model``.

    Binary variables are treated as continuous within their bounds, so a
    model produced by ``fix_assignment`` (all binaries fixed) solves as a
    pure LP.  Infeasible and unbounded outcomes are reported in the
    solution status, never silently.
    """
    data = LpData.from_model(model)
    return solve_lp_data(
        data, warm_basis=warm_basis, engine=engine, max_iterations=max_iterations
    )
