"""Feeder document format: a line-oriented key/value text format.

Grammar (one record per line, ``#`` starts a comment, blank lines ignored)::

    feeder <name>
    sbase_kva <float>              # three-phase power base, kVA
    vbase_kv <float>               # line-to-line voltage base, kV
    source <bus-id>
    vsource <pu2_a> <pu2_b> <pu2_c>   # squared source voltage, optional

    bus <id> <phases>  [p <kw_a> <kw_b> <kw_c>  q <kvar_a> <kvar_b> <kvar_c>]
    line <from> <to>  r <9 floats>  x <9 floats>

``<phases>`` is a string over "abc" such as ``abc`` or ``bc``.  Loads are
always given in three slots (phase a, b, c); entries for absent phases
must be zero.  The nine impedance floats are the 3x3 matrix in row-major
order, in ohms; rows/columns of absent phases must be zero.
"""

from __future__ import annotations

import re

from .network import Bus, Line, Network, parse_phases, phase_str, validate

_HEADER_KEYS = ("feeder", "sbase_kva", "vbase_kv", "source", "vsource")


class FeederFormatError(ValueError):
    """Parse or validation failure; carries line/column when positional."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


def _tokenize(raw: str) -> list[tuple[str, int]]:
    """Tokens with 1-based character columns; comments stripped."""
    body = raw.split("#", 1)[0]
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", body)]


class _Cursor:
    def __init__(self, tokens: list[tuple[str, int]], lineno: int):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0

    def next(self, what: str) -> tuple[str, int]:
        if self.pos >= len(self.tokens):
            last_col = self.tokens[-1][1] if self.tokens else 1
            raise FeederFormatError(f"expected {what}", self.lineno, last_col)
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def next_float(self, what: str) -> float:
        tok, col = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise FeederFormatError(f"expected {what}, got {tok!r}", self.lineno, col) from None

    def expect_literal(self, lit: str) -> None:
        tok, col = self.next(f"keyword {lit!r}")
        if tok != lit:
            raise FeederFormatError(f"expected keyword {lit!r}, got {tok!r}", self.lineno, col)

    def done(self) -> None:
        if self.pos < len(self.tokens):
            tok, col = self.tokens[self.pos]
            raise FeederFormatError(f"unexpected trailing token {tok!r}", self.lineno, col)


def parse_feeder(text: str) -> Network:
    """Parse a feeder document into a validated :class:`Network`.

    Raises :class:`FeederFormatError` on syntax errors (with line/column)
    and on any violated network invariant (duplicate bus, unknown bus,
    non-radial topology, loads on absent phases, phase inconsistency).
    """
    name = "feeder"
    sbase = 5000.0
    vbase = 4.16
    source_id: str | None = None
    vsource = (1.0, 1.0, 1.0)
    buses: dict[str, Bus] = {}
    bus_lineno: dict[str, int] = {}
    lines: list[Line] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno)
        kw, col = cur.next("record keyword")
        if kw == "feeder":
            name = cur.next("feeder name")[0]
        elif kw == "sbase_kva":
            sbase = cur.next_float("power base in kVA")
            if sbase <= 0:
                raise FeederFormatError("power base must be positive", lineno, col)
        elif kw == "vbase_kv":
            vbase = cur.next_float("voltage base in kV")
            if vbase <= 0:
                raise FeederFormatError("voltage base must be positive", lineno, col)
        elif kw == "source":
            source_id = cur.next("source bus id")[0]
        elif kw == "vsource":
            vsource = (
                cur.next_float("squared voltage, phase a"),
                cur.next_float("squared voltage, phase b"),
                cur.next_float("squared voltage, phase c"),
            )
        elif kw == "bus":
            bid, bcol = cur.next("bus id")
            ph_tok, ph_col = cur.next("phase string")
            try:
                phases = parse_phases(ph_tok)
            except ValueError as exc:
                raise FeederFormatError(str(exc), lineno, ph_col) from None
            load_p = (0.0, 0.0, 0.0)
            load_q = (0.0, 0.0, 0.0)
            if cur.pos < len(cur.tokens):
                cur.expect_literal("p")
                load_p = tuple(cur.next_float(f"kW load, phase {c}") for c in "abc")
                cur.expect_literal("q")
                load_q = tuple(cur.next_float(f"kVAr load, phase {c}") for c in "abc")
            if bid in buses:
                raise FeederFormatError(
                    f"duplicate bus id {bid!r} (first defined on line {bus_lineno[bid]})",
                    lineno,
                    bcol,
                )
            buses[bid] = Bus(id=bid, phase_set=phases, spot_load_p=load_p, spot_load_q=load_q)
            bus_lineno[bid] = lineno
        elif kw == "line":
            frm = cur.next("upstream bus id")[0]
            to = cur.next("downstream bus id")[0]
            cur.expect_literal("r")
            r = [cur.next_float(f"r[{i // 3}][{i % 3}]") for i in range(9)]
            cur.expect_literal("x")
            x = [cur.next_float(f"x[{i // 3}][{i % 3}]") for i in range(9)]
            lines.append(Line(from_bus=frm, to_bus=to, r=r, x=x))
        else:
            raise FeederFormatError(f"unknown record keyword {kw!r}", lineno, col)
        cur.done()

    if source_id is None:
        raise FeederFormatError("missing 'source' header record")
    if source_id not in buses:
        raise FeederFormatError(f"source bus {source_id!r} has no bus record")

    src = buses[source_id]
    buses[source_id] = Bus(
        id=src.id,
        phase_set=src.phase_set,
        spot_load_p=src.spot_load_p,
        spot_load_q=src.spot_load_q,
        is_source=True,
    )

    net = Network(
        name=name,
        buses=buses,
        lines=tuple(lines),
        source_id=source_id,
        sbase_kva=sbase,
        vbase_kv=vbase,
        v_source=vsource,
    )
    report = validate(net)
    if not report.ok:
        raise FeederFormatError("invalid feeder:\n" + str(report))
    return net


def _fmt(value: float) -> str:
    """Exact round-trip float formatting."""
    return repr(float(value))


def serialize_feeder(net: Network) -> str:
    """Render a network back into document text (canonical ordering)."""
    out: list[str] = []
    out.append(f"feeder {net.name}")
    out.append(f"sbase_kva {_fmt(net.sbase_kva)}")
    out.append(f"vbase_kv {_fmt(net.vbase_kv)}")
    out.append(f"source {net.source_id}")
    out.append("vsource " + " ".join(_fmt(v) for v in net.v_source))
    out.append("")
    for bid in sorted(net.buses):
        bus = net.buses[bid]
        rec = f"bus {bid} {phase_str(bus.phase_set)}"
        if any(bus.spot_load_p) or any(bus.spot_load_q):
            rec += " p " + " ".join(_fmt(v) for v in bus.spot_load_p)
            rec += " q " + " ".join(_fmt(v) for v in bus.spot_load_q)
        out.append(rec)
    out.append("")
    for ln in sorted(net.lines, key=lambda l: l.key):
        rec = f"line {ln.from_bus} {ln.to_bus}"
        rec += " r " + " ".join(_fmt(v) for v in ln.r.ravel())
        rec += " x " + " ".join(_fmt(v) for v in ln.x.ravel())
        out.append(rec)
    return "\n".join(out) + "\n"
