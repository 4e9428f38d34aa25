"""Best-first branch and bound over the model's binary variables.

Node selection is best-bound with depth-first plunging for early
incumbents; branching picks the most fractional binary (ties by lowest
column index).  Child LPs warm-start from the parent basis.  Fixing a
binary propagates through the two-variable consistency rows, so forcing
a phase off upstream turns it off downstream and vice versa.

Whenever a node relaxation comes out integral, the binaries are fixed to
their rounded values and the LP is re-solved once ("polish") so the
incumbent carries exact 0/1 activations and tight continuous residuals.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

import numpy as np

from .formulation import CaseConfig, MilpModel
from .simplex import Basis, LpData, solve_lp_data

INF = float("inf")
INT_TOL = 1e-6
PROVEN_EPS = 1e-9


@dataclass
class MipSolution:
    status: str  # "optimal" | "infeasible" | "gap_limit" | "time_limit"
    incumbent: np.ndarray | None
    objective: float
    bound: float
    nodes_explored: int
    wall_time: float
    iterations: int = 0
    certificate: str | None = None

    @property
    def gap(self) -> float:
        if self.incumbent is None or not np.isfinite(self.bound):
            return INF
        return (self.objective - self.bound) / max(1.0, abs(self.objective))


@dataclass(order=True)
class _Node:
    est_bound: float
    seq: int
    fixings: dict[int, float] = field(compare=False)
    warm: Basis | None = field(compare=False)


def _implication_graph(model: MilpModel) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Up/down implication adjacency from the consistency rows.

    A row xi_parent - xi_child >= 0 forces parent=1 when child=1 and
    child=0 when parent=0.
    """
    up: dict[int, list[int]] = {}
    down: dict[int, list[int]] = {}
    for con in model.constraints_by_tag("consistency"):
        if len(con.cols) != 2:
            continue
        (c1, c2), (a1, a2) = con.cols, con.coefs
        if con.relation == ">=" and a1 == 1.0 and a2 == -1.0 and con.rhs == 0.0:
            parent, child = c1, c2
        elif con.relation == "<=" and a1 == -1.0 and a2 == 1.0 and con.rhs == 0.0:
            parent, child = c1, c2
        else:
            continue
        up.setdefault(child, []).append(parent)
        down.setdefault(parent, []).append(child)
    return up, down


def _propagate(fixings: dict[int, float], col: int, value: float, up, down) -> bool:
    """Fix ``col`` to ``value`` and chase implications; False on conflict."""
    stack = [(col, value)]
    while stack:
        c, v = stack.pop()
        prev = fixings.get(c)
        if prev is not None:
            if prev != v:
                return False
            continue
        fixings[c] = v
        if v == 1.0:
            for p in up.get(c, ()):
                stack.append((p, 1.0))
        else:
            for p in down.get(c, ()):
                stack.append((p, 0.0))
    return True


class _Tree:
    def __init__(self, model: MilpModel, cfg: CaseConfig, trace: list | None):
        self.model = model
        self.cfg = cfg
        self.data = LpData.from_model(model)
        self.binaries = np.asarray(model.binary_columns(), dtype=np.int64)
        self.up, self.down = _implication_graph(model)
        self.trace = trace

        self.heap: list[_Node] = []
        self.seq = 0
        self.incumbent: np.ndarray | None = None
        self.inc_obj = INF
        self.nodes = 0
        self.iterations = 0
        self.start = time.monotonic()

    # -- helpers -------------------------------------------------------------

    def _bounds_for(self, fixings: dict[int, float]):
        lo = self.data.lower.copy()
        hi = self.data.upper.copy()
        if fixings:
            cols = np.fromiter(fixings.keys(), dtype=np.int64, count=len(fixings))
            vals = np.fromiter(fixings.values(), dtype=float, count=len(fixings))
            lo[cols] = vals
            hi[cols] = vals
        return lo, hi

    def _solve(self, fixings: dict[int, float], warm: Basis | None):
        lo, hi = self._bounds_for(fixings)
        res = solve_lp_data(self.data, lower=lo, upper=hi, warm_basis=warm)
        self.nodes += 1
        self.iterations += res.iterations
        return res

    def _time_left(self) -> bool:
        if self.cfg.time_limit is None:
            return True
        return (time.monotonic() - self.start) <= self.cfg.time_limit

    def _prune_eps(self) -> float:
        return PROVEN_EPS * max(1.0, abs(self.inc_obj))

    def _fractionality(self, x: np.ndarray) -> np.ndarray:
        vals = x[self.binaries]
        return np.abs(vals - np.round(vals))

    def _try_incumbent(self, fixings: dict[int, float], x: np.ndarray, warm: Basis | None) -> bool:
        """Polish an integral relaxation into an exact incumbent."""
        rounded = dict(fixings)
        ok = True
        for col in self.binaries:
            v = float(np.round(x[col]))
            if not _propagate(rounded, int(col), v, self.up, self.down):
                ok = False
                break
        if not ok:
            return False
        res = self._solve(rounded, warm)
        if res.status != "optimal":
            return False
        if res.objective < self.inc_obj - 1e-12:
            x_exact = res.x.copy()
            x_exact[self.binaries] = np.round(x_exact[self.binaries])
            self.incumbent = x_exact
            self.inc_obj = res.objective
        return True

    def _global_bound(self, current: float | None = None) -> float:
        vals = [n.est_bound for n in self.heap]
        if current is not None:
            vals.append(current)
        if self.incumbent is not None:
            vals.append(self.inc_obj)
        return min(vals) if vals else INF

    # -- main ------------------------------------------------------------------

    def run(self) -> MipSolution:
        root = _Node(-INF, self.seq, {}, None)
        self.seq += 1
        heapq.heappush(self.heap, root)
        root_infeasibility: float | None = None
        timed_out = False

        while self.heap:
            if not self._time_left():
                timed_out = True
                break
            node = heapq.heappop(self.heap)
            if node.est_bound >= self.inc_obj - self._prune_eps():
                # Best-first order: every remaining node is at least as bad.
                self.heap.clear()
                break
            # Plunge from this node depth-first until fathomed.
            fixings, warm = node.fixings, node.warm
            while True:
                if not self._time_left():
                    timed_out = True
                    break
                res = self._solve(fixings, warm)
                if self.trace is not None:
                    self.trace.append((self.nodes, self._global_bound(res.objective if res.status == "optimal" else None), self.inc_obj))
                if res.status == "unbounded":
                    raise RuntimeError("MILP relaxation is unbounded; model is malformed")
                if res.status == "infeasible":
                    if self.nodes == 1:
                        root_infeasibility = res.infeasibility
                    break
                bound = res.objective
                if bound >= self.inc_obj - self._prune_eps():
                    break
                frac = self._fractionality(res.x)
                if frac.max(initial=0.0) <= INT_TOL:
                    if self._try_incumbent(fixings, res.x, res.basis):
                        break
                    # Polish failed: branch on the least-integral binary anyway.
                    j_local = int(np.argmax(frac))
                else:
                    j_local = int(np.argmax(frac))
                col = int(self.binaries[j_local])
                x_val = res.x[col]
                first = 1.0 if x_val >= 0.5 else 0.0
                other = 1.0 - first
                fix_first = dict(fixings)
                fix_other = dict(fixings)
                ok_first = _propagate(fix_first, col, first, self.up, self.down)
                ok_other = _propagate(fix_other, col, other, self.up, self.down)
                if ok_other:
                    heapq.heappush(self.heap, _Node(bound, self.seq, fix_other, res.basis))
                    self.seq += 1
                if not ok_first:
                    break
                fixings, warm = fix_first, res.basis
            if timed_out:
                break
            # Early stop once the remaining tree cannot improve past the gap.
            gb = self._global_bound()
            if self.incumbent is not None and (self.inc_obj - gb) <= self.cfg.mip_gap * max(
                1.0, abs(self.inc_obj)
            ):
                exhausted = not self.heap
                gap = self.inc_obj - gb
                status = "optimal" if exhausted or gap <= self._prune_eps() else "gap_limit"
                return self._finish(status, gb)

        wall = time.monotonic() - self.start
        if timed_out:
            return self._finish("time_limit", self._global_bound())
        if self.incumbent is None:
            cert = None
            if root_infeasibility is not None:
                cert = f"root relaxation infeasible (max bound violation {root_infeasibility:.3e})"
            else:
                cert = "no integer-feasible assignment (all branches infeasible)"
            return MipSolution(
                "infeasible", None, INF, INF, self.nodes, wall, self.iterations, cert
            )
        return self._finish("optimal", self.inc_obj)

    def _finish(self, status: str, bound: float) -> MipSolution:
        wall = time.monotonic() - self.start
        return MipSolution(
            status=status,
            incumbent=self.incumbent,
            objective=self.inc_obj,
            bound=min(bound, self.inc_obj),
            nodes_explored=self.nodes,
            wall_time=wall,
            iterations=self.iterations,
        )


def solve_mip(
    model: MilpModel,
    cfg: CaseConfig | None = None,
    trace: list | None = None,
) -> MipSolution:
    """Solve ``model`` to proven optimality within ``cfg.mip_gap``.

    ``trace``, when given, collects (nodes_explored, global bound,
    incumbent objective) tuples after every node, which the tests use to
    check bound monotonicity.  Runs are deterministic for identical input;
    only wall_time varies.
    """
    if cfg is None:
        cfg = CaseConfig()
    return _Tree(model, cfg, trace).run()
