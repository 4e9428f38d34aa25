"""Assemble the phase-allocation MILP from a network and a case config.

Per bus n and present phase f the model carries a binary activation
xi[n,f], injections p_inj/q_inj, a squared voltage v and an auxiliary
t_abs linearizing |v_mean - v|; per bus a mean voltage v_mean; per line
and downstream phase a pair of flows.  Constraint groups are tagged so
each one can be queried and counted independently:

    inj_cap_p / inj_cap_q   p_inj <= cap * xi   (cap = multiplier * spot load)
    power_factor            q_inj <= p_inj
    total_p / total_q       per-bus injection totals equal original demands
    phase_count             sum_f xi <= |phases(n)|
    consistency             xi[parent,f] >= xi[child,f]
    balance_p / balance_q   flow into a bus = child flows + local injection
    voltage                 v_down = v_up + MP p + MQ q
    v_mean                  v_mean = mean of v over present phases
    abs_pos / abs_neg       t_abs >= +/-(v_mean - v)

Voltage bounds are carried as variable bounds rather than rows.  The
objective minimizes sum(alpha * t_abs + xi).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .lin3distflow import build_sensitivity
from .network import Network, Phase, phase_str

CONTINUOUS = "continuous"
BINARY = "binary"

ROLES = ("xi", "p_inj", "q_inj", "p_flow", "q_flow", "v", "v_mean", "t_abs")

INF = float("inf")


class ModelBuildError(ValueError):
    """Model is infeasible by construction (raised before any solve)."""


@dataclass(frozen=True)
class CaseConfig:
    """Optimization case parameters.

    ``capacity_multiplier`` scales the per-phase hosting capacity relative
    to the spot load (cases 1/2/3 use 1/2/3).  ``alpha`` weights the
    voltage-unbalance term against the per-phase activation cost; 0 turns
    the objective into pure phase-count minimization.
    """

    alpha: float = 1e-2
    capacity_multiplier: float = 1.0
    v_min: float = 0.95**2
    v_max: float = 1.05**2
    mip_gap: float = 1e-6
    time_limit: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.capacity_multiplier < 1.0:
            raise ValueError("capacity_multiplier must be >= 1")
        if not self.v_min < self.v_max:
            raise ValueError("v_min must be smaller than v_max")
        if self.mip_gap <= 0.0:
            raise ValueError("mip_gap must be positive")
        if self.time_limit is not None and self.time_limit <= 0.0:
            raise ValueError("time_limit must be positive when given")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: float
    upper: float


@dataclass(frozen=True)
class Constraint:
    cols: tuple[int, ...]
    coefs: tuple[float, ...]
    relation: str  # "<=", "=", ">="
    rhs: float
    tag: str
    label: str


@dataclass
class MilpModel:
    """Solver-agnostic intermediate form of the MILP (minimization)."""

    variables: list[Variable]
    constraints: list[Constraint]
    objective: np.ndarray
    metadata: dict[str, tuple[str, Phase | None, str]]
    index: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {v.name: i for i, v in enumerate(self.variables)}

    def column(self, name: str) -> int:
        return self.index[name]

    def constraints_by_tag(self, tag: str) -> list[Constraint]:
        return [c for c in self.constraints if c.tag == tag]

    def binary_columns(self) -> list[int]:
        return [i for i, v in enumerate(self.variables) if v.kind == BINARY]

    def columns_by_role(self, role: str) -> dict[tuple[str, Phase | None], int]:
        out: dict[tuple[str, Phase | None], int] = {}
        for name, (bus, phase, r) in self.metadata.items():
            if r == role:
                out[(bus, phase)] = self.index[name]
        return out


class _Builder:
    def __init__(self) -> None:
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.obj: list[float] = []
        self.metadata: dict[str, tuple[str, Phase | None, str]] = {}
        self.index: dict[str, int] = {}

    def add_var(
        self,
        name: str,
        kind: str,
        lower: float,
        upper: float,
        bus: str,
        phase: Phase | None,
        role: str,
        obj: float = 0.0,
    ) -> int:
        col = len(self.variables)
        self.variables.append(Variable(name, kind, lower, upper))
        self.obj.append(obj)
        self.metadata[name] = (bus, phase, role)
        self.index[name] = col
        return col

    def add_con(self, cols, coefs, relation, rhs, tag, label) -> None:
        self.constraints.append(
            Constraint(tuple(cols), tuple(float(c) for c in coefs), relation, float(rhs), tag, label)
        )


def build_model(net: Network, cfg: CaseConfig) -> MilpModel:
    """Build the full MILP for ``net`` under ``cfg``.

    Raises :class:`ModelBuildError` when a bus's demands are contradictory
    before any solve (total reactive demand above total active demand
    cannot satisfy both the per-phase power-factor cap and the per-bus
    totals).
    """
    for bid in net.sorted_bus_ids():
        bus = net.buses[bid]
        if bus.total_q > bus.total_p + 1e-9 * max(1.0, bus.total_p):
            raise ModelBuildError(
                f"bus {bid}: total reactive demand {bus.total_q} kVAr exceeds total "
                f"active demand {bus.total_p} kW, infeasible under q <= p per phase"
            )

    b = _Builder()
    mult = cfg.capacity_multiplier

    xi: dict[tuple[str, Phase], int] = {}
    p_inj: dict[tuple[str, Phase], int] = {}
    q_inj: dict[tuple[str, Phase], int] = {}
    v: dict[tuple[str, Phase], int] = {}
    t_abs: dict[tuple[str, Phase], int] = {}
    v_mean: dict[str, int] = {}

    vsrc = np.asarray(net.v_source, dtype=float)

    for bid in net.sorted_bus_ids():
        bus = net.buses[bid]
        p_hat = net.load_p_pu(bid)
        q_hat = net.load_q_pu(bid)
        for ph in bus.phases:
            lo, hi = (1.0, 1.0) if bus.is_source else (0.0, 1.0)
            xi[bid, ph] = b.add_var(
                f"xi[{bid},{ph.letter}]", BINARY, lo, hi, bid, ph, "xi", obj=1.0
            )
        for ph in bus.phases:
            p_inj[bid, ph] = b.add_var(
                f"p_inj[{bid},{ph.letter}]", CONTINUOUS, 0.0, mult * p_hat[ph], bid, ph, "p_inj"
            )
        for ph in bus.phases:
            q_inj[bid, ph] = b.add_var(
                f"q_inj[{bid},{ph.letter}]", CONTINUOUS, 0.0, mult * q_hat[ph], bid, ph, "q_inj"
            )
        for ph in bus.phases:
            if bus.is_source:
                v_lo = v_hi = float(vsrc[ph])
            else:
                v_lo, v_hi = cfg.v_min, cfg.v_max
            v[bid, ph] = b.add_var(
                f"v[{bid},{ph.letter}]", CONTINUOUS, v_lo, v_hi, bid, ph, "v"
            )
        for ph in bus.phases:
            t_abs[bid, ph] = b.add_var(
                f"t_abs[{bid},{ph.letter}]", CONTINUOUS, 0.0, INF, bid, ph, "t_abs",
                obj=cfg.alpha,
            )
        v_mean[bid] = b.add_var(f"v_mean[{bid}]", CONTINUOUS, 0.0, INF, bid, None, "v_mean")

    p_flow: dict[tuple[str, Phase], int] = {}
    q_flow: dict[tuple[str, Phase], int] = {}
    sorted_lines = sorted(net.lines, key=lambda ln: ln.key)
    for ln in sorted_lines:
        arc = f"{ln.from_bus}->{ln.to_bus}"
        for ph in net.buses[ln.to_bus].phases:
            p_flow[ln.to_bus, ph] = b.add_var(
                f"p_flow[{arc},{ph.letter}]", CONTINUOUS, -INF, INF, ln.to_bus, ph, "p_flow"
            )
        for ph in net.buses[ln.to_bus].phases:
            q_flow[ln.to_bus, ph] = b.add_var(
                f"q_flow[{arc},{ph.letter}]", CONTINUOUS, -INF, INF, ln.to_bus, ph, "q_flow"
            )

    # (ii) injection caps tied to the phase activations
    for bid in net.sorted_bus_ids():
        bus = net.buses[bid]
        p_hat = net.load_p_pu(bid)
        q_hat = net.load_q_pu(bid)
        for ph in bus.phases:
            b.add_con(
                [p_inj[bid, ph], xi[bid, ph]], [1.0, -mult * p_hat[ph]], "<=", 0.0,
                "inj_cap_p", f"inj_cap_p[{bid},{ph.letter}]",
            )
        for ph in bus.phases:
            b.add_con(
                [q_inj[bid, ph], xi[bid, ph]], [1.0, -mult * q_hat[ph]], "<=", 0.0,
                "inj_cap_q", f"inj_cap_q[{bid},{ph.letter}]",
            )
        # (iii) reactive injection cannot exceed active injection
        for ph in bus.phases:
            b.add_con(
                [q_inj[bid, ph], p_inj[bid, ph]], [1.0, -1.0], "<=", 0.0,
                "power_factor", f"power_factor[{bid},{ph.letter}]",
            )
        # (iv) per-bus totals preserve the original demands
        b.add_con(
            [p_inj[bid, ph] for ph in bus.phases], [1.0] * len(bus.phases), "=",
            float(p_hat.sum()), "total_p", f"total_p[{bid}]",
        )
        b.add_con(
            [q_inj[bid, ph] for ph in bus.phases], [1.0] * len(bus.phases), "=",
            float(q_hat.sum()), "total_q", f"total_q[{bid}]",
        )
        # (v) no bus gains phases
        b.add_con(
            [xi[bid, ph] for ph in bus.phases], [1.0] * len(bus.phases), "<=",
            float(len(bus.phases)), "phase_count", f"phase_count[{bid}]",
        )
        # (x) mean squared voltage over present phases
        k = len(bus.phases)
        b.add_con(
            [v_mean[bid]] + [v[bid, ph] for ph in bus.phases],
            [1.0] + [-1.0 / k] * k, "=", 0.0, "v_mean", f"v_mean[{bid}]",
        )
        # (xi) absolute-value linearization of the unbalance term
        for ph in bus.phases:
            b.add_con(
                [v_mean[bid], v[bid, ph], t_abs[bid, ph]], [1.0, -1.0, -1.0], "<=", 0.0,
                "abs_pos", f"abs_pos[{bid},{ph.letter}]",
            )
        for ph in bus.phases:
            b.add_con(
                [v[bid, ph], v_mean[bid], t_abs[bid, ph]], [1.0, -1.0, -1.0], "<=", 0.0,
                "abs_neg", f"abs_neg[{bid},{ph.letter}]",
            )

    for ln in sorted_lines:
        arc = f"{ln.from_bus}->{ln.to_bus}"
        down = net.buses[ln.to_bus]
        # (vi) phase consistency along the line
        for ph in down.phases:
            b.add_con(
                [xi[ln.from_bus, ph], xi[ln.to_bus, ph]], [1.0, -1.0], ">=", 0.0,
                "consistency", f"consistency[{arc},{ph.letter}]",
            )
        # (vii) per-phase flow balance at the downstream bus
        for ph in down.phases:
            cols = [p_flow[ln.to_bus, ph], p_inj[ln.to_bus, ph]]
            coefs = [1.0, -1.0]
            for child in net.children(ln.to_bus):
                if ph in net.buses[child].phase_set:
                    cols.append(p_flow[child, ph])
                    coefs.append(-1.0)
            b.add_con(cols, coefs, "=", 0.0, "balance_p", f"balance_p[{arc},{ph.letter}]")
        for ph in down.phases:
            cols = [q_flow[ln.to_bus, ph], q_inj[ln.to_bus, ph]]
            coefs = [1.0, -1.0]
            for child in net.children(ln.to_bus):
                if ph in net.buses[child].phase_set:
                    cols.append(q_flow[child, ph])
                    coefs.append(-1.0)
            b.add_con(cols, coefs, "=", 0.0, "balance_q", f"balance_q[{arc},{ph.letter}]")
        # (viii) squared-voltage recursion along the line
        sens = build_sensitivity(ln, z_base=net.z_base_ohm)
        for ph in down.phases:
            cols = [v[ln.to_bus, ph], v[ln.from_bus, ph]]
            coefs = [1.0, -1.0]
            for ph2 in down.phases:
                mp = sens.mp[ph, ph2]
                mq = sens.mq[ph, ph2]
                if mp != 0.0:
                    cols.append(p_flow[ln.to_bus, ph2])
                    coefs.append(-mp)
                if mq != 0.0:
                    cols.append(q_flow[ln.to_bus, ph2])
                    coefs.append(-mq)
            b.add_con(cols, coefs, "=", 0.0, "voltage", f"voltage[{arc},{ph.letter}]")

    return MilpModel(
        variables=b.variables,
        constraints=b.constraints,
        objective=np.asarray(b.obj, dtype=float),
        metadata=b.metadata,
        index=b.index,
    )


def fix_assignment(model: MilpModel, xi: dict[str, frozenset[Phase] | set[Phase]]) -> MilpModel:
    """Return a copy of ``model`` with every binary fixed per ``xi``.

    ``xi`` maps each bus id to its set of active phases.  The assignment
    must respect phase consistency and the per-bus phase-count caps; a
    violating assignment is rejected.  The result has no free binaries,
    so it can be handed to the LP solver directly.
    """
    values: dict[int, float] = {}
    buses_seen: set[str] = set()
    for name, (bus, phase, role) in model.metadata.items():
        if role != "xi":
            continue
        col = model.index[name]
        var = model.variables[col]
        buses_seen.add(bus)
        if bus not in xi:
            if var.lower == var.upper:  # already fixed (source)
                values[col] = var.lower
                continue
            raise ValueError(f"assignment missing bus {bus!r}")
        active = phase in xi[bus]
        val = 1.0 if active else 0.0
        if var.lower == var.upper and var.lower != val:
            raise ValueError(
                f"assignment for bus {bus!r} phase {phase.letter} conflicts with a fixed binary"
            )
        values[col] = val
    unknown = set(xi) - buses_seen
    if unknown:
        raise ValueError(f"assignment references unknown buses: {sorted(unknown)}")

    for con in model.constraints:
        if con.tag not in ("consistency", "phase_count"):
            continue
        lhs = sum(c * values[col] for col, c in zip(con.cols, con.coefs) if col in values)
        if con.tag == "consistency" and lhs < -1e-9:
            raise ValueError(f"assignment violates {con.label}")
        if con.tag == "phase_count" and lhs > con.rhs + 1e-9:
            raise ValueError(f"assignment violates {con.label}")

    new_vars = list(model.variables)
    for col, val in values.items():
        old = new_vars[col]
        new_vars[col] = replace(old, lower=val, upper=val)
    return MilpModel(
        variables=new_vars,
        constraints=model.constraints,
        objective=model.objective.copy(),
        metadata=dict(model.metadata),
        index=dict(model.index),
    )
