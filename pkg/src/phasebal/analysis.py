"""Evaluation artifacts: voltage unbalance metric and load reassignment table."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lin3distflow import PhasorState
from .network import PHASES, Network, phase_str
from .solution import Solution

CHANGED_THRESHOLD = 0.5  # kW / kVAr granularity for flagging a moved load


@dataclass
class UnbalanceReport:
    """Sum over buses and present phases of |mean squared voltage - phase
    squared voltage|, in pu^2.

    The mean at each bus runs over its present phases only, so a
    single-phase bus contributes zero.
    """

    total_metric: float
    per_bus: dict[str, float]
    v_mean: dict[str, float]


def unbalance_metric(state: PhasorState) -> UnbalanceReport:
    per_bus: dict[str, float] = {}
    v_mean: dict[str, float] = {}
    for bid in sorted(state.v):
        v = state.v[bid]
        present = ~np.isnan(v)
        mean = float(v[present].mean())
        contrib = float(np.abs(mean - v[present]).sum())
        per_bus[bid] = contrib
        v_mean[bid] = mean
    return UnbalanceReport(
        total_metric=float(sum(per_bus.values())), per_bus=per_bus, v_mean=v_mean
    )


@dataclass
class ReassignmentRow:
    bus: str
    original_p: tuple[float, float, float]
    original_q: tuple[float, float, float]
    optimized_p: tuple[float, float, float]
    optimized_q: tuple[float, float, float]
    changed: bool


@dataclass
class ReassignmentTable:
    """Original vs optimized per-phase spot loads (kW / kVAr) for every
    loaded bus, with per-phase grand totals."""

    rows: list[ReassignmentRow]
    total_original_p: tuple[float, float, float]
    total_original_q: tuple[float, float, float]
    total_optimized_p: tuple[float, float, float]
    total_optimized_q: tuple[float, float, float]


def reassignment(net: Network, sol: Solution) -> ReassignmentTable:
    s_base = net.s_base_phase_kva
    rows: list[ReassignmentRow] = []
    tot_op = np.zeros(3)
    tot_oq = np.zeros(3)
    tot_np = np.zeros(3)
    tot_nq = np.zeros(3)
    for bid in net.sorted_bus_ids():
        bus = net.buses[bid]
        if not bus.has_load:
            continue
        new_p = np.nan_to_num(sol.p_inj[bid], nan=0.0) * s_base
        new_q = np.nan_to_num(sol.q_inj[bid], nan=0.0) * s_base
        orig_p = np.asarray(bus.spot_load_p)
        orig_q = np.asarray(bus.spot_load_q)
        changed = bool(
            np.any(np.abs(new_p - orig_p) > CHANGED_THRESHOLD)
            or np.any(np.abs(new_q - orig_q) > CHANGED_THRESHOLD)
        )
        rows.append(
            ReassignmentRow(
                bus=bid,
                original_p=tuple(orig_p),
                original_q=tuple(orig_q),
                optimized_p=tuple(new_p),
                optimized_q=tuple(new_q),
                changed=changed,
            )
        )
        tot_op += orig_p
        tot_oq += orig_q
        tot_np += new_p
        tot_nq += new_q
    return ReassignmentTable(
        rows=rows,
        total_original_p=tuple(tot_op),
        total_original_q=tuple(tot_oq),
        total_optimized_p=tuple(tot_np),
        total_optimized_q=tuple(tot_nq),
    )


# -- export helpers -----------------------------------------------------------


def _f(x: float) -> str:
    return format(float(x), ".10g")


def unbalance_to_csv(report: UnbalanceReport) -> str:
    lines = ["bus,v_mean_pu2,unbalance_pu2"]
    for bid in sorted(report.per_bus):
        lines.append(f"{bid},{_f(report.v_mean[bid])},{_f(report.per_bus[bid])}")
    lines.append(f"TOTAL,,{_f(report.total_metric)}")
    return "\n".join(lines) + "\n"


def reassignment_to_csv(table: ReassignmentTable) -> str:
    lines = [
        "bus,orig_p_a,orig_p_b,orig_p_c,orig_q_a,orig_q_b,orig_q_c,"
        "opt_p_a,opt_p_b,opt_p_c,opt_q_a,opt_q_b,opt_q_c,changed"
    ]
    for row in table.rows:
        cells = (
            [row.bus]
            + [_f(v) for v in row.original_p]
            + [_f(v) for v in row.original_q]
            + [_f(v) for v in row.optimized_p]
            + [_f(v) for v in row.optimized_q]
            + ["1" if row.changed else "0"]
        )
        lines.append(",".join(cells))
    totals = (
        ["TOTAL"]
        + [_f(v) for v in table.total_original_p]
        + [_f(v) for v in table.total_original_q]
        + [_f(v) for v in table.total_optimized_p]
        + [_f(v) for v in table.total_optimized_q]
        + [""]
    )
    lines.append(",".join(totals))
    return "\n".join(lines) + "\n"


def reassignment_to_text(table: ReassignmentTable) -> str:
    """Aligned plain-text rendering, one bus per row, * marking moved loads."""
    header = f"{'bus':>6}  {'phase A (kW/kVAr)':>22} {'phase B (kW/kVAr)':>22} {'phase C (kW/kVAr)':>22}"
    lines = [header, "-" * len(header)]

    def cell(p: float, q: float) -> str:
        return f"{p:.1f} / {q:.1f}"

    for row in table.rows:
        mark = "*" if row.changed else " "
        cells = [
            cell(row.optimized_p[i], row.optimized_q[i]) for i in range(3)
        ]
        lines.append(
            f"{row.bus:>6}{mark} {cells[0]:>22} {cells[1]:>22} {cells[2]:>22}"
        )
    totals = [
        cell(table.total_optimized_p[i], table.total_optimized_q[i]) for i in range(3)
    ]
    lines.append("-" * len(header))
    lines.append(f"{'Total':>6}  {totals[0]:>22} {totals[1]:>22} {totals[2]:>22}")
    return "\n".join(lines) + "\n"


def solution_to_csv(net: Network, sol: Solution) -> str:
    """Per bus-phase activation, injections (kW / kVAr) and voltage (pu^2)."""
    s_base = net.s_base_phase_kva
    lines = ["bus,phase,active,p_inj_kw,q_inj_kvar,v_pu2"]
    for bid in net.sorted_bus_ids():
        for ph in net.buses[bid].phases:
            active = 1 if ph in sol.assignment[bid] else 0
            p = sol.p_inj[bid][ph] * s_base
            q = sol.q_inj[bid][ph] * s_base
            v = sol.v[bid][ph]
            lines.append(f"{bid},{ph.letter},{active},{_f(p)},{_f(q)},{_f(v)}")
    return "\n".join(lines) + "\n"
