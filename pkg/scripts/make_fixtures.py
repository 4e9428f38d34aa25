#!/usr/bin/env python3
"""Regenerate the bundled feeder fixtures.

The three documents under src/phasebal/fixtures/ are best-effort
reconstructions of the IEEE 13-, 37- and 123-bus radial test feeders
(spot loads, line impedance matrices in ohms/mile scaled by segment
length, regulators/transformers/switches folded into short series
impedances).  They are not exact replicas of the reference datasets:

- ieee13: the zero-load leaf 680 is omitted and the 645/646 lateral is
  modeled on phase b only, so that every retained phase either carries
  load or feeds load downstream.  Node 670 carries the distributed load
  of the 632-671 section as a spot load; rg60 is the regulator output.
- ieee37: buses fed through the 709-775 transformer are omitted; delta
  loads are treated as per-phase wye demands.
- ieee123: normally-open switches and the 61-610 transformer are
  omitted; closed switches and the regulators appear as short lines.

Run from the repository root:  python scripts/make_fixtures.py
"""

from __future__ import annotations

import pathlib

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "phasebal" / "fixtures"

FT_PER_MILE = 5280.0
TINY = 1e-4  # ohms, for closed switches and regulator series elements

A, B, C = 0, 1, 2
PH = {"a": A, "b": B, "c": C}


def z3(phases: str, entries: dict[tuple[int, int], complex]) -> tuple[list, list]:
    """Embed a per-mile impedance dict into full 3x3 r and x matrices."""
    r = [[0.0] * 3 for _ in range(3)]
    x = [[0.0] * 3 for _ in range(3)]
    for (i, j), z in entries.items():
        r[i][j] = z.real
        x[i][j] = z.imag
        r[j][i] = z.real
        x[j][i] = z.imag
    for k in range(3):
        if "abc"[k] not in phases:
            assert all(r[k][m] == 0 and x[k][m] == 0 for m in range(3))
    return r, x


def diag_tiny(phases: str) -> tuple[list, list]:
    r = [[0.0] * 3 for _ in range(3)]
    x = [[0.0] * 3 for _ in range(3)]
    for ch in phases:
        r[PH[ch]][PH[ch]] = TINY
        x[PH[ch]][PH[ch]] = TINY
    return r, x


def scale(mats: tuple[list, list], length_ft: float) -> tuple[list, list]:
    f = length_ft / FT_PER_MILE
    r, x = mats
    return (
        [[v * f for v in row] for row in r],
        [[v * f for v in row] for row in x],
    )


def fmt_line(frm: str, to: str, mats: tuple[list, list]) -> str:
    r, x = mats
    rs = " ".join(f"{v:.10g}" for row in r for v in row)
    xs = " ".join(f"{v:.10g}" for row in x for v in row)
    return f"line {frm} {to} r {rs} x {xs}"


def fmt_bus(bus: str, phases: str, load=None) -> str:
    rec = f"bus {bus} {phases}"
    if load is not None:
        p, q = load
        rec += " p " + " ".join(f"{v:.10g}" for v in p)
        rec += " q " + " ".join(f"{v:.10g}" for v in q)
    return rec


# ---------------------------------------------------------------------------
# IEEE-13
# ---------------------------------------------------------------------------

MTX601 = {
    (A, A): 0.3465 + 1.0179j, (A, B): 0.1560 + 0.5017j, (A, C): 0.1580 + 0.4236j,
    (B, B): 0.3375 + 1.0478j, (B, C): 0.1535 + 0.3849j, (C, C): 0.3414 + 1.0348j,
}
MTX602 = {
    (A, A): 0.7526 + 1.1814j, (A, B): 0.1580 + 0.4236j, (A, C): 0.1560 + 0.5017j,
    (B, B): 0.7475 + 1.1983j, (B, C): 0.1535 + 0.3849j, (C, C): 0.7436 + 1.2112j,
}
MTX603_BB = {(B, B): 1.3294 + 1.3471j}
MTX604 = {(A, A): 1.3238 + 1.3569j, (A, C): 0.2066 + 0.4591j, (C, C): 1.3294 + 1.3471j}
MTX605 = {(C, C): 1.3292 + 1.3475j}
MTX606 = {
    (A, A): 0.7982 + 0.4463j, (A, B): 0.3192 + 0.0328j, (A, C): 0.2849 - 0.0143j,
    (B, B): 0.7891 + 0.4041j, (B, C): 0.3192 + 0.0328j, (C, C): 0.7982 + 0.4463j,
}
MTX607 = {(A, A): 1.3425 + 0.5124j}

# 633-634 transformer (500 kVA, 1.1 % R / 2 % X on 4.16 kV): series ohms
XFM1_R = 0.011 * 4.16**2 * 1000.0 / 500.0
XFM1_X = 0.020 * 4.16**2 * 1000.0 / 500.0

IEEE13_BUSES = [
    ("650", "abc", None),
    ("rg60", "abc", None),
    ("632", "abc", None),
    ("633", "abc", None),
    ("634", "abc", ((160, 120, 120), (110, 90, 90))),
    ("645", "b", ((0, 170, 0), (0, 125, 0))),
    ("646", "b", ((0, 230, 0), (0, 132, 0))),
    ("670", "abc", ((17, 66, 117), (10, 38, 68))),
    ("671", "abc", ((385, 385, 385), (220, 220, 220))),
    ("692", "abc", ((0, 0, 170), (0, 0, 151))),
    ("675", "abc", ((485, 68, 290), (190, 60, 212))),
    ("684", "ac", None),
    ("611", "c", ((0, 0, 170), (0, 0, 80))),
    ("652", "a", ((128, 0, 0), (86, 0, 0))),
]

IEEE13_LINES = [
    ("650", "rg60", diag_tiny("abc")),                   # substation regulator
    ("rg60", "632", scale(z3("abc", MTX601), 2000)),
    ("632", "633", scale(z3("abc", MTX602), 500)),
    ("633", "634", z3("abc", {(A, A): XFM1_R + 1j * XFM1_X,
                              (B, B): XFM1_R + 1j * XFM1_X,
                              (C, C): XFM1_R + 1j * XFM1_X})),
    ("632", "645", scale(z3("b", MTX603_BB), 500)),
    ("645", "646", scale(z3("b", MTX603_BB), 300)),
    ("632", "670", scale(z3("abc", MTX601), 667)),
    ("670", "671", scale(z3("abc", MTX601), 1333)),
    ("671", "684", scale(z3("ac", MTX604), 300)),
    ("684", "611", scale(z3("c", MTX605), 300)),
    ("684", "652", scale(z3("a", MTX607), 800)),
    ("671", "692", diag_tiny("abc")),                    # closed switch
    ("692", "675", scale(z3("abc", MTX606), 500)),
]


def build_ieee13() -> str:
    out = [
        "# IEEE 13-bus radial test feeder (best-effort reconstruction).",
        "# Regulator 650-rg60 and switch 671-692 are short series elements;",
        "# transformer 633-634 is its series impedance on the 4.16 kV side;",
        "# the 632-671 distributed load sits at node 670 as a spot load.",
        "feeder ieee13",
        "sbase_kva 5000",
        "vbase_kv 4.16",
        "source 650",
        "vsource 1.1025 1.1025 1.1025",
        "",
    ]
    out += [fmt_bus(*b) for b in IEEE13_BUSES]
    out.append("")
    out += [fmt_line(f, t, m) for f, t, m in IEEE13_LINES]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# IEEE-37
# ---------------------------------------------------------------------------

CFG721 = {
    (A, A): 0.2926 + 0.1973j, (A, B): 0.0673 - 0.0368j, (A, C): 0.0337 - 0.0417j,
    (B, B): 0.2646 + 0.1900j, (B, C): 0.0673 - 0.0368j, (C, C): 0.2926 + 0.1973j,
}
CFG722 = {
    (A, A): 0.4751 + 0.2973j, (A, B): 0.1629 - 0.0326j, (A, C): 0.1234 - 0.0607j,
    (B, B): 0.4488 + 0.2678j, (B, C): 0.1629 - 0.0326j, (C, C): 0.4751 + 0.2973j,
}
CFG723 = {
    (A, A): 1.2936 + 0.6713j, (A, B): 0.4871 + 0.2111j, (A, C): 0.4585 + 0.1521j,
    (B, B): 1.3022 + 0.6326j, (B, C): 0.4871 + 0.2111j, (C, C): 1.2936 + 0.6713j,
}
CFG724 = {
    (A, A): 2.0952 + 0.7758j, (A, B): 0.5204 + 0.2738j, (A, C): 0.4926 + 0.2123j,
    (B, B): 2.1068 + 0.7398j, (B, C): 0.5204 + 0.2738j, (C, C): 2.0952 + 0.7758j,
}
IEEE37_CFG = {721: CFG721, 722: CFG722, 723: CFG723, 724: CFG724}

IEEE37_SEGMENTS = [
    ("799", "701", 1850, 721),
    ("701", "702", 960, 722),
    ("702", "705", 400, 724),
    ("702", "713", 360, 723),
    ("702", "703", 1320, 722),
    ("703", "727", 240, 724),
    ("703", "730", 600, 723),
    ("704", "714", 80, 724),
    ("704", "720", 800, 723),
    ("705", "742", 320, 724),
    ("705", "712", 240, 724),
    ("706", "725", 280, 724),
    ("707", "724", 760, 724),
    ("707", "722", 120, 724),
    ("708", "733", 320, 723),
    ("708", "732", 320, 724),
    ("709", "731", 600, 723),
    ("709", "708", 320, 723),
    ("710", "735", 200, 724),
    ("710", "736", 1280, 724),
    ("711", "741", 400, 723),
    ("711", "740", 200, 724),
    ("713", "704", 520, 723),
    ("714", "718", 520, 724),
    ("720", "707", 920, 724),
    ("720", "706", 600, 723),
    ("727", "744", 280, 723),
    ("730", "709", 200, 723),
    ("733", "734", 560, 723),
    ("734", "737", 640, 723),
    ("734", "710", 520, 724),
    ("737", "738", 400, 723),
    ("738", "711", 400, 723),
    ("744", "728", 200, 724),
    ("744", "729", 280, 724),
]

IEEE37_LOADS = {
    "701": ((140, 140, 350), (70, 70, 175)),
    "712": ((0, 0, 85), (0, 0, 40)),
    "713": ((0, 0, 85), (0, 0, 40)),
    "714": ((17, 21, 0), (8, 10, 0)),
    "718": ((85, 0, 0), (40, 0, 0)),
    "720": ((0, 0, 85), (0, 0, 40)),
    "722": ((0, 140, 21), (0, 70, 10)),
    "724": ((0, 42, 0), (0, 21, 0)),
    "725": ((0, 42, 0), (0, 21, 0)),
    "727": ((0, 0, 42), (0, 0, 21)),
    "728": ((42, 42, 42), (21, 21, 21)),
    "729": ((42, 0, 0), (21, 0, 0)),
    "730": ((0, 0, 85), (0, 0, 40)),
    "731": ((0, 85, 0), (0, 40, 0)),
    "732": ((0, 0, 42), (0, 0, 21)),
    "733": ((85, 0, 0), (40, 0, 0)),
    "734": ((0, 0, 42), (0, 0, 21)),
    "735": ((0, 0, 85), (0, 0, 40)),
    "736": ((0, 42, 0), (0, 21, 0)),
    "737": ((140, 0, 0), (70, 0, 0)),
    "738": ((126, 0, 0), (62, 0, 0)),
    "740": ((0, 0, 85), (0, 0, 40)),
    "741": ((0, 0, 42), (0, 0, 21)),
    "742": ((8, 85, 0), (4, 40, 0)),
    "744": ((42, 0, 0), (21, 0, 0)),
}


def build_ieee37() -> str:
    buses = ["799"] + sorted({to for _, to, _, _ in IEEE37_SEGMENTS})
    out = [
        "# IEEE 37-bus radial test feeder (best-effort reconstruction).",
        "# All buses are three-phase; delta spot loads are carried as",
        "# per-phase demands.  The 799-701 regulator is folded into the",
        "# first underground segment.",
        "feeder ieee37",
        "sbase_kva 2500",
        "vbase_kv 4.8",
        "source 799",
        "vsource 1.1025 1.1025 1.1025",
        "",
    ]
    for bus in buses:
        out.append(fmt_bus(bus, "abc", IEEE37_LOADS.get(bus)))
    out.append("")
    for frm, to, length, cfg in IEEE37_SEGMENTS:
        out.append(fmt_line(frm, to, scale(z3("abc", IEEE37_CFG[cfg]), length)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# IEEE-123
# ---------------------------------------------------------------------------

K1 = {
    (A, A): 0.4576 + 1.0780j, (A, B): 0.1560 + 0.5017j, (A, C): 0.1535 + 0.3849j,
    (B, B): 0.4666 + 1.0482j, (B, C): 0.1580 + 0.4236j, (C, C): 0.4615 + 1.0651j,
}
K2 = {
    (A, A): 0.4666 + 1.0482j, (A, B): 0.1580 + 0.4236j, (A, C): 0.1560 + 0.5017j,
    (B, B): 0.4615 + 1.0651j, (B, C): 0.1535 + 0.3849j, (C, C): 0.4576 + 1.0780j,
}
K3 = {
    (A, A): 0.4615 + 1.0651j, (A, B): 0.1535 + 0.3849j, (A, C): 0.1580 + 0.4236j,
    (B, B): 0.4576 + 1.0780j, (B, C): 0.1560 + 0.5017j, (C, C): 0.4666 + 1.0482j,
}
K4 = {
    (A, A): 0.4615 + 1.0651j, (A, B): 0.1580 + 0.4236j, (A, C): 0.1535 + 0.3849j,
    (B, B): 0.4666 + 1.0482j, (B, C): 0.1560 + 0.5017j, (C, C): 0.4576 + 1.0780j,
}
K5 = {
    (A, A): 0.4666 + 1.0482j, (A, B): 0.1560 + 0.5017j, (A, C): 0.1580 + 0.4236j,
    (B, B): 0.4576 + 1.0780j, (B, C): 0.1535 + 0.3849j, (C, C): 0.4615 + 1.0651j,
}
K6 = {
    (A, A): 0.4576 + 1.0780j, (A, B): 0.1535 + 0.3849j, (A, C): 0.1560 + 0.5017j,
    (B, B): 0.4615 + 1.0651j, (B, C): 0.1580 + 0.4236j, (C, C): 0.4666 + 1.0482j,
}
K7 = {(A, A): 0.4576 + 1.0780j, (A, C): 0.1535 + 0.3849j, (C, C): 0.4615 + 1.0651j}
K8 = {(A, A): 0.4576 + 1.0780j, (A, B): 0.1560 + 0.5017j, (B, B): 0.4666 + 1.0482j}
K9 = {(A, A): 1.3292 + 1.3475j}
K10 = {(B, B): 1.3292 + 1.3475j}
K11 = {(C, C): 1.3292 + 1.3475j}
K12 = {
    (A, A): 1.5209 + 0.7521j, (A, B): 0.5198 + 0.2775j, (A, C): 0.4924 + 0.2157j,
    (B, B): 1.5329 + 0.7162j, (B, C): 0.5198 + 0.2775j, (C, C): 1.5209 + 0.7521j,
}

IEEE123_CFG = {
    1: ("abc", K1), 2: ("abc", K2), 3: ("abc", K3), 4: ("abc", K4),
    5: ("abc", K5), 6: ("abc", K6), 7: ("ac", K7), 8: ("ab", K8),
    9: ("a", K9), 10: ("b", K10), 11: ("c", K11), 12: ("abc", K12),
}

# (from, to, length_ft, config); config 0 marks a closed switch or regulator
IEEE123_SEGMENTS = [
    ("150", "149", 0, 0),
    ("149", "1", 400, 1),
    ("1", "2", 175, 10),
    ("1", "3", 250, 11),
    ("1", "7", 300, 1),
    ("3", "4", 200, 11),
    ("3", "5", 325, 11),
    ("5", "6", 250, 11),
    ("7", "8", 200, 1),
    ("8", "12", 225, 10),
    ("8", "9", 225, 9),
    ("8", "13", 300, 1),
    ("9", "14", 425, 9),
    ("14", "10", 250, 9),
    ("14", "11", 250, 9),
    ("13", "34", 150, 11),
    ("13", "18", 825, 2),
    ("34", "15", 100, 11),
    ("15", "16", 375, 11),
    ("15", "17", 350, 11),
    ("18", "19", 250, 9),
    ("18", "21", 300, 2),
    ("19", "20", 325, 9),
    ("21", "22", 525, 10),
    ("21", "23", 250, 2),
    ("23", "24", 550, 11),
    ("23", "25", 275, 2),
    ("25", "26", 350, 7),
    ("25", "28", 200, 2),
    ("26", "27", 275, 7),
    ("26", "31", 225, 11),
    ("27", "33", 500, 9),
    ("28", "29", 300, 2),
    ("29", "30", 350, 2),
    ("30", "250", 200, 2),
    ("31", "32", 300, 11),
    ("18", "135", 0, 0),
    ("135", "35", 375, 4),
    ("35", "36", 650, 8),
    ("35", "40", 250, 1),
    ("36", "37", 300, 9),
    ("36", "38", 250, 10),
    ("38", "39", 325, 10),
    ("40", "41", 325, 11),
    ("40", "42", 250, 1),
    ("42", "43", 500, 10),
    ("42", "44", 200, 1),
    ("44", "45", 200, 9),
    ("44", "47", 250, 1),
    ("45", "46", 300, 9),
    ("47", "48", 150, 4),
    ("47", "49", 250, 4),
    ("49", "50", 250, 4),
    ("50", "51", 250, 4),
    ("51", "151", 500, 4),
    ("13", "152", 0, 0),
    ("152", "52", 400, 1),
    ("52", "53", 200, 1),
    ("53", "54", 125, 1),
    ("54", "55", 275, 1),
    ("54", "57", 350, 3),
    ("55", "56", 275, 1),
    ("57", "58", 250, 10),
    ("57", "60", 750, 3),
    ("58", "59", 250, 10),
    ("60", "61", 550, 5),
    ("60", "62", 250, 12),
    ("62", "63", 175, 12),
    ("63", "64", 350, 12),
    ("64", "65", 425, 12),
    ("65", "66", 325, 12),
    ("60", "160", 0, 0),
    ("160", "67", 350, 6),
    ("67", "68", 200, 9),
    ("67", "72", 275, 3),
    ("67", "97", 250, 3),
    ("68", "69", 275, 9),
    ("69", "70", 325, 9),
    ("70", "71", 275, 9),
    ("72", "73", 275, 11),
    ("72", "76", 200, 3),
    ("73", "74", 350, 11),
    ("74", "75", 400, 11),
    ("76", "77", 400, 6),
    ("76", "86", 700, 3),
    ("77", "78", 100, 6),
    ("78", "79", 225, 6),
    ("78", "80", 475, 6),
    ("80", "81", 475, 6),
    ("81", "82", 250, 6),
    ("81", "84", 675, 11),
    ("82", "83", 250, 6),
    ("84", "85", 475, 11),
    ("86", "87", 450, 6),
    ("87", "88", 175, 9),
    ("87", "89", 275, 6),
    ("89", "90", 225, 10),
    ("89", "91", 225, 6),
    ("91", "92", 300, 11),
    ("91", "93", 225, 6),
    ("93", "94", 275, 9),
    ("93", "95", 300, 10),
    ("95", "96", 200, 10),
    ("97", "197", 0, 0),
    ("197", "101", 250, 3),
    ("97", "98", 275, 3),
    ("98", "99", 550, 3),
    ("99", "100", 300, 3),
    ("100", "450", 800, 3),
    ("101", "102", 225, 11),
    ("101", "105", 275, 3),
    ("102", "103", 325, 11),
    ("103", "104", 700, 11),
    ("105", "106", 225, 10),
    ("105", "108", 325, 3),
    ("106", "107", 575, 10),
    ("108", "109", 450, 9),
    ("108", "300", 1000, 3),
    ("109", "110", 300, 9),
    ("110", "111", 575, 9),
    ("110", "112", 125, 9),
    ("112", "113", 525, 9),
    ("113", "114", 325, 9),
]

IEEE123_LOADS = {
    "1": ("a", 40, 20), "2": ("b", 20, 10), "4": ("c", 40, 20), "5": ("c", 20, 10),
    "6": ("c", 40, 20), "7": ("a", 20, 10), "9": ("a", 40, 20), "10": ("a", 20, 10),
    "11": ("a", 40, 20), "12": ("b", 20, 10), "16": ("c", 40, 20), "17": ("c", 20, 10),
    "19": ("a", 40, 20), "20": ("a", 40, 20), "22": ("b", 40, 20), "24": ("c", 40, 20),
    "28": ("a", 40, 20), "29": ("a", 40, 20), "30": ("c", 40, 20), "31": ("c", 20, 10),
    "32": ("c", 20, 10), "33": ("a", 40, 20), "34": ("c", 40, 20), "35": ("a", 40, 20),
    "37": ("a", 40, 20), "38": ("b", 20, 10), "39": ("b", 20, 10), "41": ("c", 20, 10),
    "42": ("a", 20, 10), "43": ("b", 40, 20), "45": ("a", 20, 10), "46": ("a", 20, 10),
    "50": ("c", 40, 20), "51": ("a", 20, 10), "52": ("a", 40, 20), "53": ("a", 40, 20),
    "55": ("a", 20, 10), "56": ("b", 20, 10), "58": ("b", 20, 10), "59": ("b", 20, 10),
    "60": ("a", 20, 10), "62": ("c", 40, 20), "63": ("a", 40, 20), "64": ("b", 75, 35),
    "66": ("c", 75, 35), "68": ("a", 20, 10), "69": ("a", 40, 20), "70": ("a", 20, 10),
    "71": ("a", 40, 20), "73": ("c", 40, 20), "74": ("c", 40, 20), "75": ("c", 40, 20),
    "77": ("b", 40, 20), "79": ("a", 40, 20), "80": ("b", 40, 20), "82": ("a", 40, 20),
    "83": ("c", 20, 10), "84": ("c", 20, 10), "85": ("c", 40, 20), "86": ("b", 20, 10),
    "87": ("b", 40, 20), "88": ("a", 40, 20), "90": ("b", 40, 20), "92": ("c", 40, 20),
    "94": ("a", 40, 20), "95": ("b", 20, 10), "96": ("b", 20, 10), "98": ("a", 40, 20),
    "99": ("b", 40, 20), "100": ("c", 40, 20), "102": ("c", 20, 10), "103": ("c", 40, 20),
    "104": ("c", 40, 20), "106": ("b", 40, 20), "107": ("b", 40, 20), "109": ("a", 40, 20),
    "111": ("a", 20, 10), "112": ("a", 20, 10), "113": ("a", 40, 20), "114": ("a", 20, 10),
}
IEEE123_LOADS_3PH = {
    "47": ((35, 35, 35), (25, 25, 25)),
    "48": ((70, 70, 70), (50, 50, 50)),
    "49": ((35, 70, 35), (25, 50, 20)),
    "65": ((35, 35, 70), (25, 25, 50)),
    "76": ((105, 70, 70), (80, 50, 50)),
}


def build_ieee123() -> str:
    phases: dict[str, str] = {"150": "abc"}
    parent_of: dict[str, str] = {}
    for frm, to, _, cfg in IEEE123_SEGMENTS:
        parent_of[to] = frm
        phases[to] = phases[frm] if cfg == 0 else IEEE123_CFG[cfg][0]

    loads: dict[str, tuple] = {}
    for bus, (ph, p, q) in IEEE123_LOADS.items():
        vp = [0.0, 0.0, 0.0]
        vq = [0.0, 0.0, 0.0]
        vp[PH[ph]] = p
        vq[PH[ph]] = q
        loads[bus] = (tuple(vp), tuple(vq))
    loads.update(IEEE123_LOADS_3PH)

    for bus, (vp, vq) in loads.items():
        for k in range(3):
            if vp[k] and "abc"[k] not in phases[bus]:
                raise AssertionError(f"load on absent phase at {bus}")

    def sort_key(b: str):
        return (len(b), b)

    out = [
        "# IEEE 123-bus radial test feeder (best-effort reconstruction).",
        "# Closed switches and regulators appear as short series elements;",
        "# normally-open ties and the 61-610 transformer are omitted.",
        "feeder ieee123",
        "sbase_kva 5000",
        "vbase_kv 4.16",
        "source 150",
        "vsource 1.1025 1.1025 1.1025",
        "",
    ]
    for bus in sorted(phases, key=sort_key):
        out.append(fmt_bus(bus, phases[bus], loads.get(bus)))
    out.append("")
    for frm, to, length, cfg in IEEE123_SEGMENTS:
        if cfg == 0:
            mats = diag_tiny(phases[to])
        else:
            mats = scale(z3(*IEEE123_CFG[cfg]), length)
        out.append(fmt_line(frm, to, mats))
    return "\n".join(out) + "\n"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, builder in [
        ("ieee13", build_ieee13),
        ("ieee37", build_ieee37),
        ("ieee123", build_ieee123),
    ]:
        path = OUT_DIR / f"{name}.feeder"
        path.write_text(builder())
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
