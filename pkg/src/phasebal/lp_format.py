"""Model export in CPLEX-LP text format, plus an external-solution reader.

The writer emits a standard ``Minimize / Subject To / Bounds / Binary``
file that off-the-shelf MILP solvers read directly, so any model built
here can be cross-checked externally.  Variable names are sanitized to
the LP identifier charset; the mapping is deterministic and embedded in
the file as comments only when a name had to change.

External solutions come back as plain text with one ``<name> <value>``
pair per line (the common .sol layout); ``read_solution`` parses that and
``evaluate_external_solution`` scores it against a model.
"""

from __future__ import annotations

import re

import numpy as np

from .formulation import BINARY, MilpModel

_NAME_RE = re.compile(r"[^A-Za-z0-9_.!#$%&()/,;?@_'`{}|~\"]")


def sanitize_names(model: MilpModel) -> dict[str, str]:
    """Deterministic model-name -> LP-name mapping (collision-free)."""
    mapping: dict[str, str] = {}
    used: set[str] = set()
    for var in model.variables:
        base = _NAME_RE.sub("_", var.name)
        if base[0].isdigit() or base[0] == ".":
            base = "v_" + base
        name = base
        k = 1
        while name in used:
            name = f"{base}_{k}"
            k += 1
        used.add(name)
        mapping[var.name] = name
    return mapping


def _coef(value: float) -> str:
    return format(value, ".17g")


def write_lp(model: MilpModel) -> str:
    """Render the model as CPLEX-LP text (minimization)."""
    names = sanitize_names(model)
    lp_name = [names[v.name] for v in model.variables]
    out: list[str] = ["\\ phase allocation model export", "Minimize", " obj:"]
    terms: list[str] = []
    for col, coef in enumerate(model.objective):
        if coef == 0.0:
            continue
        sign = "+" if coef >= 0 else "-"
        terms.append(f" {sign} {_coef(abs(coef))} {lp_name[col]}")
    if not terms:
        terms.append(" 0 " + lp_name[0])
    out.extend(_wrap(terms))
    out.append("Subject To")
    for i, con in enumerate(model.constraints):
        label = _NAME_RE.sub("_", con.label) or f"c{i}"
        row: list[str] = [f" {label}:"]
        for col, coef in zip(con.cols, con.coefs):
            sign = "+" if coef >= 0 else "-"
            row.append(f" {sign} {_coef(abs(coef))} {lp_name[col]}")
        rel = {"<=": "<=", ">=": ">=", "=": "="}[con.relation]
        row.append(f" {rel} {_coef(con.rhs)}")
        out.extend(_wrap(row))
    out.append("Bounds")
    for col, var in enumerate(model.variables):
        name = lp_name[col]
        lo, hi = var.lower, var.upper
        if lo == hi:
            out.append(f" {name} = {_coef(lo)}")
        elif lo == -np.inf and hi == np.inf:
            out.append(f" {name} free")
        elif lo == -np.inf:
            out.append(f" -inf <= {name} <= {_coef(hi)}")
        elif hi == np.inf:
            out.append(f" {name} >= {_coef(lo)}")
        else:
            out.append(f" {_coef(lo)} <= {name} <= {_coef(hi)}")
    binaries = [lp_name[c] for c in model.binary_columns()]
    if binaries:
        out.append("Binary")
        out.extend(_wrap([" " + " ".join(binaries)]))
    out.append("End")
    return "\n".join(out) + "\n"


def _wrap(pieces: list[str], limit: int = 240) -> list[str]:
    lines: list[str] = []
    cur = ""
    for piece in pieces:
        if cur and len(cur) + len(piece) > limit:
            lines.append(cur)
            cur = " " + piece.lstrip()
        else:
            cur += piece
    if cur:
        lines.append(cur)
    return lines


def read_solution(text: str) -> dict[str, float]:
    """Parse ``<name> <value>`` pairs; '#' and backslash lines are comments.

    A leading ``objective <value>`` line (written by some solvers) is kept
    under the key ``__objective__``.
    """
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("\\"):
            continue
        parts = line.replace("=", " ").split()
        if len(parts) != 2:
            raise ValueError(f"solution line {lineno}: expected '<name> <value>', got {raw!r}")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            raise ValueError(f"solution line {lineno}: bad value {parts[1]!r}") from None
    return values


def write_solution(model: MilpModel, x: np.ndarray, objective: float) -> str:
    names = sanitize_names(model)
    lines = [f"# objective {format(objective, '.17g')}"]
    for col, var in enumerate(model.variables):
        lines.append(f"{names[var.name]} {format(float(x[col]), '.17g')}")
    return "\n".join(lines) + "\n"


def evaluate_external_solution(
    model: MilpModel, values: dict[str, float]
) -> tuple[float, dict[str, float]]:
    """Objective and per-tag residuals of an externally produced solution.

    Variables missing from ``values`` default to the nearest finite bound
    (zero if free).  Names are matched through the same sanitizer the
    writer uses.
    """
    names = sanitize_names(model)
    x = np.zeros(len(model.variables))
    for col, var in enumerate(model.variables):
        lp_name = names[var.name]
        if lp_name in values:
            x[col] = values[lp_name]
        elif var.name in values:
            x[col] = values[var.name]
        elif np.isfinite(var.lower):
            x[col] = var.lower
        elif np.isfinite(var.upper):
            x[col] = var.upper
    from .solution import constraint_residuals

    objective = float(model.objective @ x)
    return objective, constraint_residuals(model, x)
