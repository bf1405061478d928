"""Embedded reference tables, stored as decimal text and hashed to a pinned digest.

Table labels:

* ``table1`` -- headline conditional constants ``(k, z_k, log T_k)``
* ``table2`` -- unconditional thresholds ``(k, x_A, c_A, x_B, c_B)``; ``None`` marks a dash
* ``table3`` -- short-interval pairs ``(log x0, Delta)``
* ``table4`` -- conditional thresholds ``(k, Z, x_Z, c_Z, xhat c_Z / k)``
* ``table5`` -- piecewise zero-density rows ``(log T0, log T1, alpha0, C, B)``
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Optional

from .constants import BELLOTTI_ROWS


@dataclass(frozen=True)
class Table1Row:
    k: int
    z: str
    log_t: str


@dataclass(frozen=True)
class Table2Row:
    k: int
    x_a: int
    c_a: str
    x_b: Optional[int]
    c_b: Optional[str]


@dataclass(frozen=True)
class Table3Row:
    log_x0: str
    delta: str

    @property
    def log_x0_value(self) -> float:
        text = self.log_x0
        if text.startswith("log(") and text.endswith(")"):
            return math.log(float(text[4:-1]))
        return float(text)


@dataclass(frozen=True)
class Table4Row:
    k: int
    z: str
    x_z: int
    c_z: str
    required_log_t: Optional[str]


@dataclass(frozen=True)
class Table5Row:
    log_t0: str
    log_t1: str
    alpha0: str
    c: str
    b: str


TABLE1 = tuple(Table1Row(*r) for r in (
    (85, "17.270", "75.853"),
    (80, "16.168", "80.643"),
    (75, "15.122", "90.945"),
    (70, "14.055", "264.334"),
))

TABLE2 = tuple(Table2Row(*r) for r in (
    (90, 1997, "1.29478", None, None),
    (89, 1999, "1.27912", None, None),
    (88, 2001, "1.26348", None, None),
    (87, 2005, "1.24663", None, None),
    (86, 2010, "1.22924", None, None),
    (85, 6162, "1.08141", 5587, "1.21712"),
    (84, 6828, "1.07501", 5587, "1.20280"),
    (83, 7546, "1.07001", 5587, "1.18848"),
    (82, 8450, "1.06231", 5587, "1.17416"),
    (81, 9685, "1.06001", 5588, "1.15963"),
    (80, 10986, "1.05001", 5588, "1.14532"),
    (79, 12799, "1.04401", 5588, "1.13100"),
    (78, 15286, "1.04001", 5589, "1.11648"),
    (77, 18427, "1.03221", 5592, "1.10158"),
    (76, 23736, "1.03001", 5601, "1.08553"),
    (75, 29735, "1.02151", 5880, "1.07041"),
    (74, 43186, "1.02001", 6561, "1.06001"),
    (73, 58051, "1.01212", 7554, "1.05201"),
    (72, 96051, "1.01001", 9036, "1.04341"),
    (71, 212515, "1.01001", 11620, "1.03505"),
    (70, 580009, "1.01001", 15951, "1.03001"),
    (69, 2133517, "1.01001", 23148, "1.02001"),
    (68, 12318302, "1.01001", 43001, "1.01051"),
    (67, 37420887, "1.01001", 238050, "1.00301"),
    (66, 39361821, "1.01001", None, None),
    (65, 41432145, "1.01001", None, None),
))

TABLE3 = tuple(Table3Row(*r) for r in (
    ("log(4e18)", "3.90970e7"),
    ("43", "4.18168e7"),
    ("46", "1.63940e8"),
    ("50", "1.06120e9"),
    ("55", "1.02884e10"),
    ("60", "7.69184e10"),
    ("75", "1.74043e11"),
    ("90", "1.84304e11"),
    ("105", "1.91886e11"),
    ("120", "1.97917e11"),
    ("135", "2.02553e11"),
    ("150", "2.07053e11"),
    ("300", "2.30126e11"),
    ("600", "2.51949e11"),
))

TABLE4 = tuple(Table4Row(*r) for r in (
    (90, "20.525", 2767, "1.02401", None),
    (89, "20.281", 2734, "1.02411", None),
    (88, "20.039", 2704, "1.02442", None),
    (87, "19.795", 2672, "1.02352", None),
    (86, "19.460", 2640, "1.01176", None),
    (85, "17.270", 2609, "1.15401", "75.85240"),
    (84, "17.055", 2577, "1.15402", "76.75607"),
    (83, "16.841", 2545, "1.15413", "77.68824"),
    (82, "16.627", 2514, "1.15423", "78.64248"),
    (81, "16.413", 2482, "1.15434", "79.63521"),
    (80, "16.198", 2450, "1.15451", "80.64252"),
    (79, "15.985", 2419, "1.15501", "81.69868"),
    (78, "15.770", 2387, "1.15501", "82.76091"),
    (77, "15.549", 2355, "1.16001", "84.24384"),
    (76, "15.336", 2324, "1.16001", "85.48968"),
    (75, "15.122", 2292, "1.16001", "90.94478"),
    (74, "14.909", 2261, "1.16001", "102.84899"),
    (73, "14.695", 2229, "1.16001", "120.0372"),
    (72, "14.482", 2198, "1.16001", "145.58125"),
    (71, "14.268", 2166, "1.16001", "189.84952"),
    (70, "14.055", 2135, "1.16001", "264.33314"),
    (69, "13.841", 2103, "1.16001", "389.15814"),
    (68, "13.628", 2072, "1.16001", "733.55279"),
    (67, "13.414", 2040, "1.16001", "4121.49822"),
    (66, "13.201", 2009, "1.16001", "691819.78755"),
    (65, "12.987", 1977, "1.16001", "739410.80802"),
))

TABLE5 = tuple(Table5Row(*r) for r in BELLOTTI_ROWS)

TABLES = {"table1": TABLE1, "table2": TABLE2, "table3": TABLE3, "table4": TABLE4,
          "table5": TABLE5}

PINNED_DIGEST = "b270a32e51c4a4d15bc5bcf3c31d5995094e4a2bbc1571aebb38395b5a83932e"


def canonical_bytes() -> bytes:
    payload = {label: [list(vars(row).values()) for row in rows]
               for label, rows in TABLES.items()}
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def digest() -> str:
    return hashlib.sha256(canonical_bytes()).hexdigest()


def verify_integrity() -> bool:
    return digest() == PINNED_DIGEST


def table2_row(k: int) -> Table2Row:
    for row in TABLE2:
        if row.k == k:
            return row
    raise KeyError(k)


def table4_row(k: int) -> Table4Row:
    for row in TABLE4:
        if row.k == k:
            return row
    raise KeyError(k)


def table1_row(k: int) -> Optional[Table1Row]:
    for row in TABLE1:
        if row.k == k:
            return row
    return None
