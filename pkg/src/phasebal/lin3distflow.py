"""Linearized three-phase DistFlow: sensitivity matrices and sweep solves.

The model drops the quadratic loss term of the branch-flow equations, so
line flows aggregate downstream injections exactly and squared voltage
magnitudes evolve linearly along each line:

    v_down = v_up + MP @ p_flow + MQ @ q_flow

with MP/MQ built from the line's per-phase resistances and reactances.
All quantities are per-unit: flows on the per-phase power base, squared
voltages in pu^2, impedances on the network Z base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import PHASES, Line, Network, Phase

SQRT3 = math.sqrt(3.0)


@dataclass
class SensitivityMatrices:
    """Voltage sensitivities of a line: d(v)/d(p_flow) and d(v)/d(q_flow).

    Units are squared-pu-voltage per pu-power when built from per-unit
    impedances; rows/columns of phases absent downstream are zero.
    """

    mp: np.ndarray
    mq: np.ndarray


def build_sensitivity(line: Line, z_base: float = 1.0) -> SensitivityMatrices:
    """Assemble the 3x3 sensitivity matrices for one line.

    ``z_base`` converts the line's ohmic entries to per-unit; pass 1.0 to
    work in the line's native units.  Diagonals are -2r / -2x.  Off-diagonal
    coefficients carry the +/- sqrt(3) cross terms from the 120-degree
    phase rotation; the pattern depends only on the cyclic offset between
    the row and column phases, which keeps balanced lines symmetric under
    cyclic phase relabeling.
    """
    r = line.r / z_base
    x = line.x / z_base
    mp = np.zeros((3, 3))
    mq = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            if i == j:
                mp[i, j] = -2.0 * r[i, j]
                mq[i, j] = -2.0 * x[i, j]
            elif (j - i) % 3 == 1:
                mp[i, j] = r[i, j] - SQRT3 * x[i, j]
                mq[i, j] = x[i, j] + SQRT3 * r[i, j]
            else:
                mp[i, j] = r[i, j] + SQRT3 * x[i, j]
                mq[i, j] = x[i, j] - SQRT3 * r[i, j]
    return SensitivityMatrices(mp=mp, mq=mq)


@dataclass
class PhasorState:
    """Per-bus squared voltages and per-line flows.

    Arrays are indexed by Phase with NaN marking absent phases.  Flows are
    keyed by the downstream bus id of the line that carries them.
    """

    v: dict[str, np.ndarray]
    p_flow: dict[str, np.ndarray]
    q_flow: dict[str, np.ndarray]


def _masked(net: Network, bus_id: str, values: np.ndarray | None) -> np.ndarray:
    phases = net.buses[bus_id].phase_set
    out = np.full(3, np.nan)
    for ph in phases:
        out[ph] = 0.0 if values is None else values[ph]
    return out


def downstream_flows(
    net: Network,
    p_inj: dict[str, np.ndarray],
    q_inj: dict[str, np.ndarray],
) -> tuple[dict[str, np.ndarray], dict[str, np.ndarray]]:
    """Per-line flows from per-bus injections by one reverse topological sweep.

    The flow on the line into bus k equals the summed injections of k and
    all of its descendants, per phase.  Injections must be zero (or NaN)
    on absent phases; a nonzero injection on an absent phase is an error.
    """
    for bid in net.sorted_bus_ids():
        inj_p = p_inj.get(bid)
        inj_q = q_inj.get(bid)
        absent = [ph for ph in PHASES if ph not in net.buses[bid].phase_set]
        for arr in (inj_p, inj_q):
            if arr is None:
                continue
            for ph in absent:
                val = arr[ph]
                if not (np.isnan(val) or val == 0.0):
                    raise ValueError(
                        f"injection on absent phase {ph.letter} at bus {bid}"
                    )

    p_flow: dict[str, np.ndarray] = {}
    q_flow: dict[str, np.ndarray] = {}
    for bid in reversed(net.topological_order()):
        if bid == net.source_id:
            continue
        phases = net.buses[bid].phase_set
        fp = np.full(3, np.nan)
        fq = np.full(3, np.nan)
        for ph in phases:
            acc_p = 0.0
            acc_q = 0.0
            inj_p = p_inj.get(bid)
            inj_q = q_inj.get(bid)
            if inj_p is not None and not np.isnan(inj_p[ph]):
                acc_p += float(inj_p[ph])
            if inj_q is not None and not np.isnan(inj_q[ph]):
                acc_q += float(inj_q[ph])
            for child in net.children(bid):
                if ph in net.buses[child].phase_set:
                    acc_p += float(p_flow[child][ph])
                    acc_q += float(q_flow[child][ph])
            fp[ph] = acc_p
            fq[ph] = acc_q
        p_flow[bid] = fp
        q_flow[bid] = fq
    return p_flow, q_flow


def propagate_voltages(
    net: Network,
    p_flow: dict[str, np.ndarray],
    q_flow: dict[str, np.ndarray],
    v_source: np.ndarray | None = None,
) -> PhasorState:
    """Assign squared voltages by one forward sweep from the source.

    The source voltage is taken from ``v_source`` (default: the network's
    header value) and is reproduced exactly; every other bus gets
    ``v_parent + MP @ p + MQ @ q`` restricted to its own phases.
    """
    if v_source is None:
        v_source = np.asarray(net.v_source, dtype=float)
    v: dict[str, np.ndarray] = {}
    v[net.source_id] = _masked(net, net.source_id, v_source)
    for bid in net.topological_order():
        if bid == net.source_id:
            continue
        line = net.line_into(bid)
        sens = build_sensitivity(line, z_base=net.z_base_ohm)
        vp = v[line.from_bus]
        fp = np.nan_to_num(p_flow[bid], nan=0.0)
        fq = np.nan_to_num(q_flow[bid], nan=0.0)
        drop = sens.mp @ fp + sens.mq @ fq
        out = np.full(3, np.nan)
        for ph in net.buses[bid].phase_set:
            out[ph] = vp[ph] + drop[ph]
        v[bid] = out
    return PhasorState(v=v, p_flow=dict(p_flow), q_flow=dict(q_flow))


def load_injections(net: Network, multiplier: float = 1.0) -> tuple[dict, dict]:
    """Per-bus spot loads as per-unit injections (scaled by ``multiplier``)."""
    p_inj: dict[str, np.ndarray] = {}
    q_inj: dict[str, np.ndarray] = {}
    for bid in net.sorted_bus_ids():
        p_inj[bid] = _masked(net, bid, net.load_p_pu(bid) * multiplier)
        q_inj[bid] = _masked(net, bid, net.load_q_pu(bid) * multiplier)
    return p_inj, q_inj


def run_power_flow(
    net: Network,
    p_inj: dict[str, np.ndarray] | None = None,
    q_inj: dict[str, np.ndarray] | None = None,
    v_source: np.ndarray | None = None,
) -> PhasorState:
    """Linearized power flow for fixed injections (spot loads by default)."""
    if p_inj is None or q_inj is None:
        lp, lq = load_injections(net)
        p_inj = p_inj if p_inj is not None else lp
        q_inj = q_inj if q_inj is not None else lq
    p_flow, q_flow = downstream_flows(net, p_inj, q_inj)
    return propagate_voltages(net, p_flow, q_flow, v_source=v_source)
