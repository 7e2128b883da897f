"""Truncation chain maps and verification of degree d to d+2 stabilization.

Raising the ambient degree by two keeps every cell of norm at most d and
adds the norm-(d+2) cells.  Truncation is the chain map that forgets the
new cells; its kernel is the norm-(d+2) slice, whose top dimension equals
the stable-range descriptor psi of the family.  Comparing homology on both
sides of the truncation verifies the d => d+2 stabilization theorems.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .complexes import VARIANTS, ChainComplex, build, homology_all
from .errors import InvariantViolation
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    express_in_rows,
    group,
    kernel_basis,
    smith_invariants,
)
from .patterns import Pattern, format_pattern
from .posets import Family, parse_family, psi, realize_family

FamilyLike = Union[Family, str]


def _as_family(family: FamilyLike) -> Family:
    return parse_family(family) if isinstance(family, str) else family


def _kind_for(variant: str) -> str:
    return "plain" if variant == "poly" else "marked"


class TruncMap:
    """The grade-lowering chain map from degree d+2 cells to degree d cells.

    ``source`` is the complex at degree d+2 and ``target`` the complex at
    degree d; ``matrix(g)`` sends source grade g to target grade g-2
    (identity on cells of norm <= d, zero on cells of norm d+2).  The
    homological shift is therefore 2.
    """

    __slots__ = ("family", "variant", "source", "target", "psi", "_mats", "_kernel")

    shift = 2

    def __init__(
        self,
        family: Family,
        variant: str,
        source: ChainComplex,
        target: ChainComplex,
        psi_value: int,
        mats: Dict[int, IntMatrix],
        kernel: Dict[int, Tuple[Pattern, ...]],
    ):
        self.family = family
        self.variant = variant
        self.source = source
        self.target = target
        self.psi = psi_value
        self._mats = mats
        self._kernel = kernel

    @property
    def degree(self) -> int:
        """The lower ambient degree d."""
        return self.target.degree

    def matrix(self, g: int) -> Optional[IntMatrix]:
        """The block sending source grade g to target grade g-2, or None."""
        return self._mats.get(g)

    def image(self, p: Pattern) -> Optional[Pattern]:
        """Where a source cell goes: itself if its norm is <= d, else None."""
        return p if p.norm <= self.degree else None

    def kernel_bases(self) -> Dict[int, Tuple[Pattern, ...]]:
        """The norm-(d+2) cells spanning the kernel, keyed by source grade."""
        return dict(self._kernel)

    def kernel_dimension(self) -> int:
        """Top grade of the kernel slice; equals psi of the d+2 realization."""
        return max(self._kernel) if self._kernel else -1

    def __repr__(self) -> str:
        n = sum(len(c) for c in self._kernel.values())
        return (
            f"TruncMap({self.family}, {self.variant}, "
            f"{self.source.degree} -> {self.target.degree}, kernel {n} cells)"
        )


def _trunc_matrices(
    C_high: ChainComplex, C_low: ChainComplex, d: int
) -> Tuple[Dict[int, IntMatrix], Dict[int, Tuple[Pattern, ...]]]:
    """Per-grade truncation blocks plus the kernel cells, with exactness checks."""
    mats: Dict[int, IntMatrix] = {}
    kernel: Dict[int, Tuple[Pattern, ...]] = {}
    grades = set(C_high.grades) | {g + 2 for g in C_low.grades}
    for g in sorted(grades):
        src = C_high.basis(g)
        low = C_low.basis(g - 2)
        low_index = {p: i for i, p in enumerate(low)}
        kept = []
        triplets = []
        for col, p in enumerate(src):
            if p.norm > d:
                kernel.setdefault(g, ())
                kernel[g] = kernel[g] + (p,)
                continue
            row = low_index.get(p)
            if row is None:
                raise InvariantViolation(
                    f"cell {format_pattern(p)} of norm <= {d} exists at degree "
                    f"{d + 2} but not at degree {d}"
                )
            kept.append(p)
            triplets.append((row, col, 1))
        if len(kept) != len(low):
            missing = [format_pattern(p) for p in low if p not in set(kept)]
            raise InvariantViolation(
                f"degree-{d} cells absent from the degree-{d + 2} realization "
                f"in grade {g - 2}: {missing}"
            )
        # rank exactness of 0 -> kernel -> C(d+2) -> C(d) -> 0 in this grade
        if len(src) != len(low) + len(kernel.get(g, ())):
            raise InvariantViolation(f"cell count mismatch in grade {g}")
        if src or low:
            mats[g] = IntMatrix.from_triplets(len(low), len(src), triplets)
    return mats, kernel


def _check_chain_map(t: TruncMap) -> None:
    """Verify trunc composed with the source differential equals the target's."""
    C_high, C_low = t.source, t.target
    for g in sorted(set(C_high.grades) | {h + 2 for h in C_low.grades}):
        rows = len(C_low.basis(g - 3))
        cols = len(C_high.basis(g))
        A_high = C_high.outgoing(g)
        T_prev = t.matrix(g - 1)
        lhs = IntMatrix.zero(rows, cols)
        if A_high is not None and T_prev is not None:
            lhs = T_prev.matmul(A_high)
        A_low = C_low.outgoing(g - 2)
        T_here = t.matrix(g)
        rhs = IntMatrix.zero(rows, cols)
        if A_low is not None and T_here is not None:
            rhs = A_low.matmul(T_here)
        if lhs != rhs:
            raise InvariantViolation(
                f"truncation is not a chain map in grade {g} "
                f"({t.variant}, {t.target.degree} -> {t.source.degree})"
            )


def _check_kernel_is_merge_only(t: TruncMap) -> None:
    """Boundaries of kernel cells stay in the kernel: merges only, no inserts."""
    C_high = t.source
    d = t.degree
    for g, cells in t.kernel_bases().items():
        A = C_high.outgoing(g)
        if A is None:
            continue
        targets = C_high.basis(g - 1)
        positions = {p: c for c, p in enumerate(C_high.basis(g))}
        for p in cells:
            for row, coeff in enumerate(A.column(positions[p])):
                if coeff and targets[row].norm <= d:
                    raise InvariantViolation(
                        f"kernel cell {format_pattern(p)} has a boundary term "
                        f"of norm <= {d}: {format_pattern(targets[row])}"
                    )


@lru_cache(maxsize=None)
def _build_trunc(family: Family, d: int, variant: str) -> TruncMap:
    kind = _kind_for(variant)
    P_low = realize_family(family, d, kind)
    P_high = realize_family(family, d + 2, kind)
    C_low = build(P_low, variant)
    C_high = build(P_high, variant)
    psi_value = 0 if P_high.is_empty else psi(P_high)
    mats, kernel = _trunc_matrices(C_high, C_low, d)
    t = TruncMap(family, variant, C_high, C_low, psi_value, mats, kernel)
    _check_chain_map(t)
    _check_kernel_is_merge_only(t)
    return t


def build_trunc(family: FamilyLike, d: int, variant: str = "proj") -> TruncMap:
    """The verified truncation chain map of a family from degree d+2 to d.

    Verifies the chain-map identity grade by grade, the rank exactness of
    the kernel sequence, and that the kernel carries the merge-only
    differential; any failure raises :class:`InvariantViolation`.

    >>> t = build_trunc("full", 3)
    >>> t.shift, t.degree, t.source.degree
    (2, 3, 5)
    >>> sorted(t.kernel_bases())[-1] == t.psi
    True
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    return _build_trunc(_as_family(family), d, variant)


# ---------------------------------------------------------------------------
# stabilization reports


@dataclass(frozen=True)
class StabRow:
    """One compared degree: H_{j+2} at d+2 against H_j at d."""

    j: int
    upper: AbelianGroup
    lower: AbelianGroup
    isomorphic: bool
    guaranteed: bool
    induced_ok: Optional[bool] = None


class StabilizationReport:
    """Per-degree comparison of homology across the truncation.

    ``rows`` covers every j in 0..d.  ``guaranteed`` marks the zone where
    the stabilization theorems promise an isomorphism; a guaranteed row
    that fails to match is a violation.
    """

    __slots__ = ("family", "d", "variant", "psi", "rows", "induced_checked")

    def __init__(
        self,
        family: Family,
        d: int,
        variant: str,
        psi_value: int,
        rows: Tuple[StabRow, ...],
        induced_checked: bool,
    ):
        if [r.j for r in rows] != list(range(d + 1)):
            raise InvariantViolation("report must cover all degrees 0..d")
        self.family = family
        self.d = d
        self.variant = variant
        self.psi = psi_value
        self.rows = rows
        self.induced_checked = induced_checked

    def row(self, j: int) -> StabRow:
        return self.rows[j]

    @property
    def violations(self) -> Tuple[int, ...]:
        """Degrees inside the guaranteed zone where the comparison fails."""
        return tuple(
            r.j
            for r in self.rows
            if r.guaranteed and (not r.isomorphic or r.induced_ok is False)
        )

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        state = "ok" if self.ok else f"VIOLATED at {list(self.violations)}"
        return (
            f"<StabilizationReport {self.family} {self.variant} "
            f"d={self.d} psi={self.psi}: {state}>"
        )


def _guaranteed(variant: str, j: int, psi_value: int) -> bool:
    if variant in ("proj", "poly"):
        return j >= psi_value - 1
    if variant == "proj-twisted":
        # basis-level argument only; the extra lowest degree is not claimed
        return j >= psi_value
    # quotient variants: the relative statement needs positive degrees
    return j >= max(psi_value, 1)


def _class_coordinates(
    K: List[List[int]], vectors: List[List[int]]
) -> List[List[int]]:
    return [express_in_rows(K, v) for v in vectors]


def _apply(T: Optional[IntMatrix], v: List[int], rows: int) -> List[int]:
    if T is None:
        return [0] * rows
    out = [0] * rows
    for (i, j), a in T.entries.items():
        out[i] += a * v[j]
    return out


def _induced_surjective(t: TruncMap, j: int) -> bool:
    """Whether trunc maps the degree-(j+2) homology onto the degree-j one.

    Between abstractly isomorphic finitely generated groups a surjection
    is an isomorphism, so this upgrades canonical-form equality to an
    induced-map certificate.
    """
    C_low, C_high = t.target, t.source
    dim_low = len(C_low.basis(j))
    if dim_low == 0:
        return True
    A_out_low = C_low.outgoing(j)
    K_low = (
        kernel_basis(A_out_low)
        if A_out_low is not None
        else [[1 if a == b else 0 for b in range(dim_low)] for a in range(dim_low)]
    )
    n = len(K_low)
    if n == 0:
        return True
    g = j + 2
    dim_high = len(C_high.basis(g))
    A_out_high = C_high.outgoing(g)
    K_high = (
        kernel_basis(A_out_high)
        if A_out_high is not None
        else [[1 if a == b else 0 for b in range(dim_high)] for a in range(dim_high)]
    )
    T = t.matrix(g)
    vectors = [_apply(T, k, dim_low) for k in K_high]
    A_in_low = C_low.incoming(j)
    if A_in_low is not None:
        vectors.extend(A_in_low.column(c) for c in range(A_in_low.shape[1]))
    coords = _class_coordinates(K_low, vectors)
    M = IntMatrix.from_rows(coords, ncols=n)
    inv = smith_invariants(M)
    return len(inv) == n and all(x == 1 for x in inv)


def stability_report(
    family: FamilyLike, d: int, variant: str = "proj", induced: bool = False
) -> StabilizationReport:
    """Compare H_{j+2} at degree d+2 with H_j at degree d for all j in 0..d.

    Isomorphism is certified by canonical-form equality of the groups.
    With ``induced`` set, guaranteed rows additionally verify that the
    truncation itself induces the isomorphism (slow).

    >>> stability_report("disc", 5).ok
    True
    >>> stability_report("skeleton:2", 6).row(4).isomorphic
    False
    >>> stability_report("skeleton:2", 6).row(4).guaranteed
    False
    """
    fam = _as_family(family)
    t = build_trunc(fam, d, variant)
    H_high = homology_all(t.source)
    H_low = homology_all(t.target)
    rows = []
    for j in range(d + 1):
        upper = H_high.get(j + 2, group())
        lower = H_low.get(j, group())
        iso = upper == lower
        guaranteed = _guaranteed(variant, j, t.psi)
        induced_ok = None
        if induced and guaranteed:
            induced_ok = iso and _induced_surjective(t, j)
        rows.append(StabRow(j, upper, lower, iso, guaranteed, induced_ok))
    return StabilizationReport(fam, d, variant, t.psi, tuple(rows), induced)


# ---------------------------------------------------------------------------
# kernel dimension


def dim_K(family: FamilyLike, d: int, kind: Optional[str] = None) -> int:
    """Top dimension of the norm-d kernel slice; equals psi of the family.

    Cross-checks the maximal-element formula psi against direct
    maximization of (d + |x| - 2|x|')/2 over all members x.

    >>> from .patterns import Pattern
    >>> from .posets import MAX_GE, SINGLE
    >>> dim_K(MAX_GE(3), 8)
    6
    >>> dim_K(SINGLE(Pattern.plain(3, 3)), 8)
    3
    """
    fam = _as_family(family)
    P = realize_family(fam, d, kind)
    if P.is_empty:
        raise ValueError(f"family {fam} has no cells at degree {d}")
    direct = max((d + p.norm - 2 * p.reduced_norm) // 2 for p in P)
    value = psi(P)
    if value != direct:
        raise InvariantViolation(
            f"psi formula {value} disagrees with direct maximization {direct} "
            f"for {fam} at degree {d}"
        )
    return value
