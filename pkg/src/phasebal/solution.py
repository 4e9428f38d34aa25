"""Solution extraction from solver output, plus programmatic verification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bnb import MipSolution
from .formulation import MilpModel
from .lin3distflow import PhasorState
from .network import PHASES, Network, Phase


@dataclass
class Solution:
    """Optimized phase assignment with its injections, flows and voltages.

    Power quantities are per-unit on the network's per-phase base; arrays
    are indexed by Phase with NaN on absent phases.
    """

    assignment: dict[str, frozenset[Phase]]
    p_inj: dict[str, np.ndarray]
    q_inj: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    p_flow: dict[str, np.ndarray]
    q_flow: dict[str, np.ndarray]
    objective: float
    status: str
    bound: float
    nodes_explored: int
    iterations: int
    wall_time: float

    def phase_count(self) -> int:
        return sum(len(s) for s in self.assignment.values())

    def state(self) -> PhasorState:
        return PhasorState(v=self.v, p_flow=self.p_flow, q_flow=self.q_flow)


def extract_solution(net: Network, model: MilpModel, mip: MipSolution) -> Solution:
    """Turn an incumbent variable vector into a structured solution."""
    if mip.incumbent is None:
        raise ValueError(f"no incumbent to extract (status {mip.status!r})")
    x = mip.incumbent

    def by_role(role: str) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {
            bid: np.full(3, np.nan) for bid in net.sorted_bus_ids()
        }
        for (bus, phase), col in model.columns_by_role(role).items():
            out[bus][phase] = x[col]
        return out

    assignment: dict[str, frozenset[Phase]] = {}
    xi_cols = model.columns_by_role("xi")
    for bid in net.sorted_bus_ids():
        active = {
            ph for ph in net.buses[bid].phase_set if x[xi_cols[(bid, ph)]] >= 0.5
        }
        assignment[bid] = frozenset(active)

    flows_p = by_role("p_flow")
    flows_q = by_role("q_flow")
    flows_p.pop(net.source_id, None)
    flows_q.pop(net.source_id, None)

    return Solution(
        assignment=assignment,
        p_inj=by_role("p_inj"),
        q_inj=by_role("q_inj"),
        v=by_role("v"),
        p_flow=flows_p,
        q_flow=flows_q,
        objective=mip.objective,
        status=mip.status,
        bound=mip.bound,
        nodes_explored=mip.nodes_explored,
        iterations=mip.iterations,
        wall_time=mip.wall_time,
    )


def constraint_residuals(model: MilpModel, x: np.ndarray) -> dict[str, float]:
    """Max violation per constraint tag, plus variable-bound violations.

    Equality rows report |lhs - rhs|; inequality rows report their
    one-sided excess.  The ``bounds`` entry covers every variable's box.
    """
    out: dict[str, float] = {}
    for con in model.constraints:
        lhs = sum(c * x[col] for col, c in zip(con.cols, con.coefs))
        if con.relation == "=":
            viol = abs(lhs - con.rhs)
        elif con.relation == "<=":
            viol = max(0.0, lhs - con.rhs)
        else:
            viol = max(0.0, con.rhs - lhs)
        out[con.tag] = max(out.get(con.tag, 0.0), viol)
    bound_viol = 0.0
    for col, var in enumerate(model.variables):
        if np.isfinite(var.lower):
            bound_viol = max(bound_viol, var.lower - x[col])
        if np.isfinite(var.upper):
            bound_viol = max(bound_viol, x[col] - var.upper)
    out["bounds"] = max(0.0, bound_viol)
    return out


def check_solution(net: Network, sol: Solution) -> dict[str, float]:
    """Conservation and consistency residuals computed from the solution
    itself (independent of the constraint matrix).

    Returns worst-case values:

    - ``total_p_kw`` / ``total_q_kvar``: per-bus injection totals vs the
      original demands, in kW / kVAr
    - ``flow_balance_pu``: per-line per-phase balance residual
    - ``power_factor_pu``: max of q - p and -q over phases
    - ``consistency``: 1.0 if any child phase is active above its parent
    - ``phase_count``: excess of active phases over the bus's phase set
    """
    s_base = net.s_base_phase_kva
    worst_p = 0.0
    worst_q = 0.0
    for bid in net.sorted_bus_ids():
        bus = net.buses[bid]
        inj_p = np.nansum(sol.p_inj[bid]) * s_base
        inj_q = np.nansum(sol.q_inj[bid]) * s_base
        worst_p = max(worst_p, abs(inj_p - bus.total_p))
        worst_q = max(worst_q, abs(inj_q - bus.total_q))

    worst_balance = 0.0
    for bid in net.sorted_bus_ids():
        if bid == net.source_id:
            continue
        for ph in net.buses[bid].phase_set:
            acc_p = sol.p_inj[bid][ph]
            acc_q = sol.q_inj[bid][ph]
            for child in net.children(bid):
                if ph in net.buses[child].phase_set:
                    acc_p += sol.p_flow[child][ph]
                    acc_q += sol.q_flow[child][ph]
            worst_balance = max(
                worst_balance,
                abs(sol.p_flow[bid][ph] - acc_p),
                abs(sol.q_flow[bid][ph] - acc_q),
            )

    worst_pf = 0.0
    for bid in net.sorted_bus_ids():
        for ph in net.buses[bid].phase_set:
            q = sol.q_inj[bid][ph]
            p = sol.p_inj[bid][ph]
            worst_pf = max(worst_pf, q - p, -q)

    consistency = 0.0
    for bid in net.sorted_bus_ids():
        parent = net.parent(bid)
        if parent is None:
            continue
        if not sol.assignment[bid] <= sol.assignment[parent]:
            consistency = 1.0

    count_excess = 0.0
    for bid in net.sorted_bus_ids():
        excess = len(sol.assignment[bid]) - len(net.buses[bid].phase_set)
        count_excess = max(count_excess, float(excess))

    return {
        "total_p_kw": worst_p,
        "total_q_kvar": worst_q,
        "flow_balance_pu": worst_balance,
        "power_factor_pu": worst_pf,
        "consistency": consistency,
        "phase_count": count_excess,
    }
