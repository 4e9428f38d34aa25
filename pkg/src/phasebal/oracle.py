"""Brute-force certifier for small feeders.

Enumerates every phase-consistent assignment (nonempty subset of each
bus's phase set, contained in the parent's choice; the source keeps its
full set), solves the induced LP for each, and reports the global optimum
with its full tie set.  A guard refuses feeders whose unpruned assignment
space exceeds ENUMERATION_GUARD combinations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .formulation import CaseConfig, MilpModel, build_model
from .network import Network, Phase
from .simplex import LpData, solve_lp_data

ENUMERATION_GUARD = 10**6

Assignment = dict[str, frozenset[Phase]]


class EnumerationGuardError(ValueError):
    """Assignment space too large to enumerate (count included in args)."""

    def __init__(self, count: int, guard: int):
        self.count = count
        self.guard = guard
        super().__init__(
            f"assignment space holds {count} combinations, above the guard of {guard}"
        )


@dataclass
class CertifyResult:
    best_objective: float
    best_assignments: list[Assignment]
    evaluated: int
    feasible: int


def assignment_space_size(net: Network) -> int:
    """Unpruned combination count: product over non-source buses of the
    nonempty subsets of each phase set."""
    total = 1
    for bid in net.sorted_bus_ids():
        if bid == net.source_id:
            continue
        total *= 2 ** len(net.buses[bid].phase_set) - 1
    return total


def _subsets(phases: frozenset[Phase]) -> list[frozenset[Phase]]:
    """Nonempty subsets in deterministic bitmask order (a=1, b=2, c=4)."""
    members = sorted(phases)
    out = []
    for mask in range(1, 2 ** len(members)):
        out.append(frozenset(p for i, p in enumerate(members) if mask >> i & 1))
    out.sort(key=lambda s: sum(1 << int(p) for p in s))
    return out


def enumerate_assignments(net: Network) -> Iterator[Assignment]:
    """Yield every consistent assignment exactly once, in deterministic order.

    Raises :class:`EnumerationGuardError` when the unpruned space exceeds
    the guard.
    """
    count = assignment_space_size(net)
    if count > ENUMERATION_GUARD:
        raise EnumerationGuardError(count, ENUMERATION_GUARD)

    order = [b for b in net.topological_order() if b != net.source_id]
    source_set = net.buses[net.source_id].phase_set

    def rec(i: int, chosen: Assignment) -> Iterator[Assignment]:
        if i == len(order):
            yield dict(chosen)
            return
        bid = order[i]
        parent = net.parent(bid)
        allowed = net.buses[bid].phase_set & chosen[parent]
        for sub in _subsets(net.buses[bid].phase_set):
            if sub <= allowed:
                chosen[bid] = sub
                yield from rec(i + 1, chosen)
        chosen.pop(bid, None)

    base: Assignment = {net.source_id: source_set}
    for full in rec(0, base):
        yield full


def certify(
    net: Network,
    cfg: CaseConfig,
    model: MilpModel | None = None,
    tie_tol: float = 1e-6,
) -> CertifyResult:
    """Exhaustively solve every consistent assignment and return the optimum.

    The per-assignment LPs reuse the shared simplex with warm starts.  Ties
    within ``tie_tol`` of the best objective are all returned.  If every
    assignment is infeasible, the problem itself is reported infeasible.
    """
    if model is None:
        model = build_model(net, cfg)
    data = LpData.from_model(model)
    xi_cols: dict[tuple[str, Phase], int] = {
        (bus, ph): col for (bus, ph), col in model.columns_by_role("xi").items()
    }

    best = float("inf")
    ties: list[tuple[float, Assignment]] = []
    evaluated = 0
    feasible = 0
    warm = None
    for assignment in enumerate_assignments(net):
        evaluated += 1
        lo = data.lower.copy()
        hi = data.upper.copy()
        for (bus, ph), col in xi_cols.items():
            val = 1.0 if ph in assignment[bus] else 0.0
            lo[col] = val
            hi[col] = val
        res = solve_lp_data(data, lower=lo, upper=hi, warm_basis=warm)
        warm = res.basis
        if res.status != "optimal":
            continue
        feasible += 1
        if res.objective < best - tie_tol:
            best = res.objective
            ties = [(res.objective, assignment)]
        elif res.objective <= best + tie_tol:
            ties.append((res.objective, assignment))
            best = min(best, res.objective)

    if feasible == 0:
        return CertifyResult(float("inf"), [], evaluated, 0)
    kept = [a for obj, a in ties if obj <= best + tie_tol]
    return CertifyResult(best, kept, evaluated, feasible)
