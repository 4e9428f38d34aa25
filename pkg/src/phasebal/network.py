"""Radial three-phase feeder model: buses, lines, topology, validation.

A feeder is a tree of buses rooted at the source (substation) bus.  Each
bus carries a subset of the three phases and an optional per-phase spot
load in kW / kVAr.  Each line carries a 3x3 series impedance in ohms whose
rows/columns for phases absent from the downstream bus are zero.  A line
is deemed to carry exactly the phases of its downstream bus.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np


class Phase(IntEnum):
    """One of the three phases.  The total order A < B < C is used for
    every deterministic iteration in the package."""

    A = 0
    B = 1
    C = 2

    @property
    def letter(self) -> str:
        return "abc"[int(self)]


PHASES: tuple[Phase, Phase, Phase] = (Phase.A, Phase.B, Phase.C)


def parse_phases(text: str) -> frozenset[Phase]:
    """Parse a phase string such as ``"abc"`` or ``"bc"`` into a phase set."""
    out: set[Phase] = set()
    for ch in text.lower():
        if ch not in "abc":
            raise ValueError(f"invalid phase letter {ch!r} (expected a, b or c)")
        out.add(PHASES["abc".index(ch)])
    if not out:
        raise ValueError("empty phase string")
    return frozenset(out)


def phase_str(phase_set) -> str:
    """Render a phase set in canonical a<b<c order, e.g. ``"ac"``."""
    return "".join(p.letter for p in sorted(phase_set))


@dataclass(frozen=True)
class Bus:
    """A feeder node.

    Loads are nonnegative demands in kW / kVAr, indexed by Phase, and must
    be zero on phases outside ``phase_set``.
    """

    id: str
    phase_set: frozenset[Phase]
    spot_load_p: tuple[float, float, float] = (0.0, 0.0, 0.0)
    spot_load_q: tuple[float, float, float] = (0.0, 0.0, 0.0)
    is_source: bool = False

    @property
    def phases(self) -> tuple[Phase, ...]:
        return tuple(sorted(self.phase_set))

    @property
    def total_p(self) -> float:
        return float(sum(self.spot_load_p))

    @property
    def total_q(self) -> float:
        return float(sum(self.spot_load_q))

    @property
    def has_load(self) -> bool:
        return self.total_p > 0.0 or self.total_q > 0.0


@dataclass(eq=False)
class Line:
    """Directed line section; ``from_bus`` is upstream of ``to_bus``.

    ``r`` and ``x`` are 3x3 real matrices in ohms, indexed by Phase.
    """

    from_bus: str
    to_bus: str
    r: np.ndarray
    x: np.ndarray

    def __post_init__(self) -> None:
        self.r = np.asarray(self.r, dtype=float).reshape(3, 3)
        self.x = np.asarray(self.x, dtype=float).reshape(3, 3)
        self.r.setflags(write=False)
        self.x.setflags(write=False)

    @property
    def key(self) -> tuple[str, str]:
        return (self.from_bus, self.to_bus)


class NetworkTopologyError(ValueError):
    """Raised when a topology query is made on a non-radial network."""


@dataclass
class Violation:
    code: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - convenience
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


@dataclass
class Network:
    """A radial feeder.  Treated as immutable after construction.

    ``sbase_kva`` is the three-phase power base and ``vbase_kv`` the
    line-to-line voltage base.  Impedances normalize on
    ``Z_base = vbase_kv^2 * 1000 / sbase_kva`` ohms and per-phase powers
    on the line-to-line-referred phase base ``sbase_kva / sqrt(3)`` kVA
    (base line-to-line voltage times base current), which is the scale
    the bundled fixtures' published unbalance figures are quoted on.
    ``v_source`` holds the squared source voltage per phase in pu^2.
    """

    name: str
    buses: dict[str, Bus]
    lines: tuple[Line, ...]
    source_id: str
    sbase_kva: float = 5000.0
    vbase_kv: float = 4.16
    v_source: tuple[float, float, float] = (1.0, 1.0, 1.0)
    _children: dict[str, tuple[str, ...]] | None = field(default=None, repr=False)
    _parent: dict[str, str] | None = field(default=None, repr=False)
    _line_in: dict[str, Line] | None = field(default=None, repr=False)
    _order: tuple[str, ...] | None = field(default=None, repr=False)

    # -- unit bases -------------------------------------------------------

    @property
    def z_base_ohm(self) -> float:
        return self.vbase_kv**2 * 1000.0 / self.sbase_kva

    @property
    def s_base_phase_kva(self) -> float:
        return self.sbase_kva / math.sqrt(3.0)

    def load_p_pu(self, bus_id: str) -> np.ndarray:
        return np.asarray(self.buses[bus_id].spot_load_p, dtype=float) / self.s_base_phase_kva

    def load_q_pu(self, bus_id: str) -> np.ndarray:
        return np.asarray(self.buses[bus_id].spot_load_q, dtype=float) / self.s_base_phase_kva

    def line_impedance_pu(self, line: Line) -> tuple[np.ndarray, np.ndarray]:
        zb = self.z_base_ohm
        return line.r / zb, line.x / zb

    # -- topology ----------------------------------------------------------

    def _topology(self) -> None:
        if self._children is not None:
            return
        parent: dict[str, str] = {}
        children: dict[str, list[str]] = {b: [] for b in self.buses}
        line_in: dict[str, Line] = {}
        for ln in self.lines:
            if ln.to_bus in parent or ln.to_bus == self.source_id:
                raise NetworkTopologyError(
                    f"bus {ln.to_bus!r} has more than one upstream line or is the source"
                )
            parent[ln.to_bus] = ln.from_bus
            children[ln.from_bus].append(ln.to_bus)
            line_in[ln.to_bus] = ln
        order: list[str] = []
        queue: deque[str] = deque([self.source_id])
        while queue:
            b = queue.popleft()
            order.append(b)
            kids = tuple(sorted(children[b]))
            children[b] = list(kids)
            queue.extend(kids)
        if len(order) != len(self.buses):
            missing = sorted(set(self.buses) - set(order))
            raise NetworkTopologyError(f"buses not reachable from source: {missing}")
        self._children = {b: tuple(k) for b, k in children.items()}
        self._parent = parent
        self._line_in = line_in
        self._order = tuple(order)

    def children(self, bus_id: str) -> tuple[str, ...]:
        """Direct downstream neighbors of ``bus_id``, lexicographically ordered."""
        if bus_id not in self.buses:
            raise KeyError(f"unknown bus {bus_id!r}")
        self._topology()
        return self._children[bus_id]

    def parent(self, bus_id: str) -> str | None:
        if bus_id not in self.buses:
            raise KeyError(f"unknown bus {bus_id!r}")
        self._topology()
        return self._parent.get(bus_id)

    def line_into(self, bus_id: str) -> Line | None:
        """The line whose downstream end is ``bus_id`` (None for the source)."""
        self._topology()
        return self._line_in.get(bus_id)

    def topological_order(self) -> tuple[str, ...]:
        """Bus ids, parents before children, siblings lexicographic."""
        self._topology()
        return self._order

    def descendants(self, bus_id: str) -> tuple[str, ...]:
        out: list[str] = []
        stack = list(self.children(bus_id))
        while stack:
            b = stack.pop()
            out.append(b)
            stack.extend(self.children(b))
        return tuple(sorted(out))

    def sorted_bus_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.buses))

    @property
    def source(self) -> Bus:
        return self.buses[self.source_id]


def validate(net: Network) -> ValidationReport:
    """Check every structural invariant; the report lists all violations.

    An empty report means the network is a valid radial feeder.
    """
    rep = ValidationReport()

    sources = [b.id for b in net.buses.values() if b.is_source]
    if len(sources) != 1:
        rep.violations.append(
            Violation("source", f"expected exactly one source bus, found {sources}")
        )
    elif sources[0] != net.source_id:
        rep.violations.append(
            Violation("source", f"source_id {net.source_id!r} does not match flagged bus {sources[0]!r}")
        )
    if net.source_id not in net.buses:
        rep.violations.append(Violation("source", f"source bus {net.source_id!r} not present"))

    for bid in sorted(net.buses):
        bus = net.buses[bid]
        if not bus.phase_set:
            rep.violations.append(Violation("empty_phases", f"bus {bid} has an empty phase set"))
        for ph in PHASES:
            p = bus.spot_load_p[ph]
            q = bus.spot_load_q[ph]
            if ph not in bus.phase_set and (p != 0.0 or q != 0.0):
                rep.violations.append(
                    Violation("load_on_absent_phase", f"bus {bid} has load on absent phase {ph.letter}")
                )
            if p < 0.0 or q < 0.0:
                rep.violations.append(
                    Violation("negative_load", f"bus {bid} phase {ph.letter} has a negative load")
                )

    seen_pairs: set[tuple[str, str]] = set()
    for ln in net.lines:
        if ln.from_bus not in net.buses or ln.to_bus not in net.buses:
            rep.violations.append(
                Violation("unknown_bus", f"line {ln.from_bus}->{ln.to_bus} references an unknown bus")
            )
            continue
        if ln.from_bus == ln.to_bus:
            rep.violations.append(Violation("self_loop", f"line {ln.from_bus}->{ln.to_bus} is a self loop"))
        pair = (ln.from_bus, ln.to_bus)
        if pair in seen_pairs:
            rep.violations.append(Violation("duplicate_line", f"duplicate line {pair[0]}->{pair[1]}"))
        seen_pairs.add(pair)

        down = net.buses[ln.to_bus].phase_set
        up = net.buses[ln.from_bus].phase_set
        if not down <= up:
            rep.violations.append(
                Violation(
                    "phase_inconsistent",
                    f"bus {ln.to_bus} carries {phase_str(down)} but its parent "
                    f"{ln.from_bus} carries only {phase_str(up)}",
                )
            )
        for ph in PHASES:
            if ph not in down:
                if np.any(ln.r[ph, :] != 0.0) or np.any(ln.r[:, ph] != 0.0) or np.any(
                    ln.x[ph, :] != 0.0
                ) or np.any(ln.x[:, ph] != 0.0):
                    rep.violations.append(
                        Violation(
                            "impedance_absent_phase",
                            f"line {ln.from_bus}->{ln.to_bus} has nonzero impedance on absent phase {ph.letter}",
                        )
                    )
            elif ln.r[ph, ph] < 0.0:
                rep.violations.append(
                    Violation(
                        "negative_resistance",
                        f"line {ln.from_bus}->{ln.to_bus} has negative diagonal resistance on phase {ph.letter}",
                    )
                )

    if len(net.lines) != len(net.buses) - 1:
        rep.violations.append(
            Violation(
                "not_radial",
                f"expected |lines| = |buses| - 1, got {len(net.lines)} lines for {len(net.buses)} buses",
            )
        )
    elif not any(v.code in ("unknown_bus", "source") for v in rep.violations):
        try:
            net._topology()
        except NetworkTopologyError as exc:
            rep.violations.append(Violation("not_radial", str(exc)))

    return rep


def networks_equal(a: Network, b: Network) -> bool:
    """Field-level structural equality (used by the serialization round trip)."""
    if (
        a.name != b.name
        or a.source_id != b.source_id
        or a.sbase_kva != b.sbase_kva
        or a.vbase_kv != b.vbase_kv
        or a.v_source != b.v_source
        or set(a.buses) != set(b.buses)
        or len(a.lines) != len(b.lines)
    ):
        return False
    for bid, bus in a.buses.items():
        other = b.buses[bid]
        if (
            bus.phase_set != other.phase_set
            or bus.spot_load_p != other.spot_load_p
            or bus.spot_load_q != other.spot_load_q
            or bus.is_source != other.is_source
        ):
            return False
    lines_a = {ln.key: ln for ln in a.lines}
    lines_b = {ln.key: ln for ln in b.lines}
    if set(lines_a) != set(lines_b):
        return False
    for key, ln in lines_a.items():
        other = lines_b[key]
        if not (np.array_equal(ln.r, other.r) and np.array_equal(ln.x, other.x)):
            return False
    return True
