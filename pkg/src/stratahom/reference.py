"""Reference tables of independently computed homology groups.

The tables ship as CSV files and record, per ambient degree, the published
nonzero groups: the triple-root family (reduced), the codimension-2
skeleton family (unreduced, degrees 1 and up), and the single-pattern
closures whose compactified strata are homology spheres.
"""

from __future__ import annotations

import csv
import io
from functools import lru_cache
from importlib.resources import files
from typing import Dict, List, Tuple

from .intlinalg import AbelianGroup, parse_group
from .patterns import Pattern, parse_pattern


def _rows(name: str) -> List[Dict[str, str]]:
    text = (files("stratahom") / "fixtures" / name).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def _group_table(name: str) -> Dict[int, Dict[int, AbelianGroup]]:
    table: Dict[int, Dict[int, AbelianGroup]] = {}
    for row in _rows(name):
        d = int(row["d"])
        degree = int(row["degree"])
        g = parse_group(row["group"])
        if not 1 <= degree <= d:
            raise ValueError(f"{name}: degree {degree} outside 1..{d}")
        if not g:
            raise ValueError(f"{name}: zero group listed at d={d}, degree={degree}")
        if degree in table.setdefault(d, {}):
            raise ValueError(f"{name}: duplicate entry at d={d}, degree={degree}")
        table[d][degree] = g
    return table


@lru_cache(maxsize=None)
def triple_root_reference() -> Dict[int, Dict[int, AbelianGroup]]:
    """Nonzero reduced groups of the triple-root family, keyed d -> degree.

    >>> str(triple_root_reference()[8][4])
    'Z/4'
    """
    return _group_table("triple_root.csv")


@lru_cache(maxsize=None)
def skeleton_reference() -> Dict[int, Dict[int, AbelianGroup]]:
    """Nonzero unreduced groups of the codimension-2 skeleton, degrees >= 1.

    >>> str(skeleton_reference()[6][4])
    'Z^8'
    """
    return _group_table("skeleton.csv")


@lru_cache(maxsize=None)
def single_pattern_reference() -> Dict[int, List[Tuple[Pattern, int]]]:
    """Single-pattern closures that are homology spheres, keyed by degree d.

    Each entry pairs the generating pattern with the one degree where the
    reduced homology of the compactified stratum is Z.

    >>> [(str(w), i) for w, i in single_pattern_reference()[5]]
    [('1,1,1', 4), ('5', 1)]
    """
    table: Dict[int, List[Tuple[Pattern, int]]] = {}
    for row in _rows("single_omega.csv"):
        d = int(row["d"])
        w = parse_pattern(row["pattern"])
        degree = int(row["degree"])
        if w.marked or not w.parts:
            raise ValueError(f"single_omega.csv: need a nonempty plain pattern, got {w}")
        if w.reduced_norm != int(row["codim"]):
            raise ValueError(f"single_omega.csv: codim mismatch for {w} at d={d}")
        if w.norm > d or (d - w.norm) % 2:
            raise ValueError(f"single_omega.csv: {w} is not a cell in degree {d}")
        if not 1 <= degree <= d:
            raise ValueError(f"single_omega.csv: degree {degree} outside 1..{d}")
        table.setdefault(d, []).append((w, degree))
    return table
