"""End-to-end homology pipelines for the stratified spaces.

Spaces and conventions:

* ``B``   projectivized binary forms with pattern in the family; unreduced
  homology unless the profile says otherwise.
* ``P``   one-point compactified polynomial strata; the complex has no
  basepoint cell, so profiles are reduced.
* ``B-rel``  pair (ambient projective space, family subspace); computed from
  the quotient complex.
* ``cP``  complement of the compactified stratum inside the polynomial
  space; cohomology via the dimension shift j -> d - j - 1, plus the
  basepoint contribution Z in degree 0 when the complement is nonempty.
* ``cB``  complement of the family subspace inside the projective space;
  H^j is the degree d - j homology of the quotient complex taken with
  orientation-sheaf coefficients (the twisted variant in even ambient
  degree, plain in odd).
* ``cB^t``  the same complement with coefficients in the orientation local
  system; H_j is the degree d - j cohomology of the plain quotient complex.
* ``D``   closed-form reduced homology of the discriminant hypersurface.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, NamedTuple, Tuple, Union

from .complexes import build, dualize, homology_all
from .errors import InvariantViolation
from .intlinalg import AbelianGroup, group
from .patterns import Pattern
from .posets import DISC, FULL, Family, Realization, complement, parse_family, realize_family

FamilyLike = Union[Family, str]


def _as_family(family: FamilyLike) -> Family:
    if isinstance(family, Family):
        return family
    if isinstance(family, str):
        return parse_family(family)
    raise TypeError(f"expected a family or family string, got {family!r}")


@lru_cache(maxsize=None)
def _homology(P: Realization, variant: str, dual: bool = False) -> Dict[int, AbelianGroup]:
    C = build(P, variant)
    if dual:
        C = dualize(C)
    return homology_all(C)


class HomologyProfile:
    """Groups of one space in every degree 0..d, plus identifying metadata."""

    __slots__ = ("space", "degree", "family", "variant", "reduced", "groups")

    def __init__(
        self,
        space: str,
        degree: int,
        family: Family,
        variant: str,
        reduced: bool,
        groups: Dict[int, AbelianGroup],
    ):
        for j in groups:
            if not 0 <= j <= degree:
                raise ValueError(f"degree {j} outside 0..{degree}")
        self.space = space
        self.degree = degree
        self.family = family
        self.variant = variant
        self.reduced = reduced
        self.groups = {j: groups.get(j, AbelianGroup()) for j in range(degree + 1)}

    def group(self, j: int) -> AbelianGroup:
        return self.groups.get(j, AbelianGroup())

    def nonzero(self) -> Dict[int, AbelianGroup]:
        return {j: g for j, g in sorted(self.groups.items()) if g}

    def total_rank(self) -> int:
        return sum(g.rank for g in self.groups.values())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, HomologyProfile)
            and self.space == other.space
            and self.degree == other.degree
            and self.family == other.family
            and self.variant == other.variant
            and self.reduced == other.reduced
            and self.groups == other.groups
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{j}: {g}" for j, g in self.nonzero().items()) or "0"
        red = "reduced " if self.reduced else ""
        return f"<{red}{self.space} d={self.degree} family={self.family}: {body}>"


# ---------------------------------------------------------------------------
# family subspaces


def homology_B(d: int, family: FamilyLike, reduced: bool = False) -> HomologyProfile:
    """Integer homology of the projectivized stratum of a family.

    >>> [(j, str(g)) for j, g in homology_B(2, "full").nonzero().items()]
    [(0, 'Z'), (1, 'Z/2')]
    >>> homology_B(3, "disc").nonzero()[2]
    AbelianGroup(rank=1, torsion=())
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "marked")
    groups = dict(_homology(P, "proj"))
    if reduced and not P.is_empty:
        g0 = groups[0]
        if g0.rank < 1:
            raise InvariantViolation("nonempty space with rank-0 degree-0 homology")
        groups[0] = group(g0.rank - 1, *g0.torsion)
    return HomologyProfile("B", d, fam, "proj", reduced, groups)


def reduced_homology_P(d: int, family: FamilyLike) -> HomologyProfile:
    """Reduced homology of the one-point compactified polynomial stratum.

    >>> [(j, str(g)) for j, g in reduced_homology_P(4, "single:2").nonzero().items()]
    [(3, 'Z')]
    >>> [(j, str(g)) for j, g in reduced_homology_P(5, "single:5").nonzero().items()]
    [(1, 'Z')]
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "plain")
    return HomologyProfile("P", d, fam, "poly", True, dict(_homology(P, "poly")))


def relative_homology_B(d: int, family: FamilyLike) -> HomologyProfile:
    """Homology of the pair (projective space, family subspace).

    >>> [(j, str(g)) for j, g in relative_homology_B(4, "disc").nonzero().items()]
    [(3, 'Z/2 ⊕ Z/2'), (4, 'Z')]
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "marked")
    return HomologyProfile("B-rel", d, fam, "quotient", False, dict(_homology(P, "quotient")))


# ---------------------------------------------------------------------------
# complements


def cohomology_P_complement(d: int, family: FamilyLike) -> HomologyProfile:
    """Integer cohomology of the polynomial-side complement of a stratum.

    Degree j of the complement reads off degree d - j - 1 of the stratum
    complex; the basepoint adds Z in degree 0 while the complement is
    nonempty.

    >>> [(j, str(g)) for j, g in cohomology_P_complement(3, "empty").nonzero().items()]
    [(0, 'Z')]
    >>> [(j, str(g)) for j, g in cohomology_P_complement(7, "max-ge:3").nonzero().items()]
    [(0, 'Z'), (1, 'Z'), (2, 'Z')]
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "plain")
    H = _homology(P, "poly")
    groups = {}
    for j in range(d + 1):
        m = d - j - 1
        groups[j] = H.get(m, AbelianGroup()) if m >= 0 else AbelianGroup()
    if not complement(P).is_empty:
        groups[0] = group(groups[0].rank + 1, *groups[0].torsion)
    return HomologyProfile("cP", d, fam, "poly", False, groups)


def cohomology_B_complement(d: int, family: FamilyLike) -> HomologyProfile:
    """Integer cohomology of the projective-side complement of a subspace.

    Dual to the quotient complex taken with orientation-sheaf coefficients:
    the twisted variant in even ambient degree, the plain one in odd.

    >>> [(j, str(g)) for j, g in cohomology_B_complement(5, "disc").nonzero().items()]
    [(0, 'Z^3'), (1, 'Z^3')]
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "marked")
    variant = "quotient-twisted" if d % 2 == 0 else "quotient"
    H = _homology(P, variant)
    groups = {j: H.get(d - j, AbelianGroup()) for j in range(d + 1)}
    return HomologyProfile("cB", d, fam, variant, False, groups)


def twisted_homology_B_complement(d: int, family: FamilyLike) -> HomologyProfile:
    """Homology of the projective-side complement with orientation coefficients.

    Reads off the cohomology of the plain quotient complex at degree d - j.

    >>> [(j, str(g)) for j, g in twisted_homology_B_complement(4, "disc").nonzero().items()]
    [(0, 'Z ⊕ Z/2 ⊕ Z/2')]
    """
    fam = _as_family(family)
    P = realize_family(fam, d, "marked")
    H = _homology(P, "quotient", dual=True)
    groups = {j: H.get(d - j, AbelianGroup()) for j in range(d + 1)}
    return HomologyProfile("cB^t", d, fam, "quotient-dual", False, groups)


# ---------------------------------------------------------------------------
# closed forms


def discriminant_oracle(d: int) -> HomologyProfile:
    """Closed-form reduced homology of the projectivized discriminant.

    >>> [(j, str(g)) for j, g in discriminant_oracle(3).nonzero().items()]
    [(1, 'Z^2'), (2, 'Z')]
    >>> [(j, str(g)) for j, g in discriminant_oracle(4).nonzero().items()]
    [(1, 'Z/2'), (2, 'Z/2'), (3, 'Z')]
    """
    if d < 1:
        raise ValueError("the discriminant needs degree at least 1")
    groups: Dict[int, AbelianGroup] = {}
    if d >= 2:
        if d % 2:
            groups[d - 1] = group((d - 1) // 2)
            groups[d - 2] = group((d + 1) // 2)
            for j in range(d - 4, 0, -2):
                groups[j] = group(0, 2)
        else:
            groups[d - 1] = group(1)
            if d // 2 - 1 > 0:
                groups[d - 2] = group(0, *([2] * (d // 2 - 1)))
            for j in range(d - 3, 0, -2):
                groups[j] = group(0, 2)
    return HomologyProfile("D", d, DISC, "closed-form", True, groups)


# ---------------------------------------------------------------------------
# cell counting


@dataclass(frozen=True)
class CountPolynomial:
    """Generating polynomial of cell counts by dimension.

    >>> str(CountPolynomial((1, 2, 2)))
    '1 + 2t + 2t^2'
    >>> CountPolynomial((1, 2, 2)).evaluate(-1)
    1
    """

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("need at least the constant coefficient")
        for c in self.coeffs:
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"coefficients must be non-negative integers, got {c!r}")

    @property
    def degree(self) -> int:
        j = len(self.coeffs) - 1
        while j > 0 and self.coeffs[j] == 0:
            j -= 1
        return j

    def coefficient(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def evaluate(self, t: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def __add__(self, other: "CountPolynomial") -> "CountPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return CountPolynomial(
            tuple(self.coefficient(j) + other.coefficient(j) for j in range(n))
        )

    def shift(self, k: int = 1) -> "CountPolynomial":
        """Multiply by t^k."""
        return CountPolynomial((0,) * k + self.coeffs)

    def __str__(self) -> str:
        bits = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = "" if (c == 1 and j > 0) else str(c)
            if j == 0:
                bits.append(str(c))
            elif j == 1:
                bits.append(f"{mag}t")
            else:
                bits.append(f"{mag}t^{j}")
        return " + ".join(bits) if bits else "0"


class CellCounts(NamedTuple):
    P: CountPolynomial
    B: CountPolynomial


@lru_cache(maxsize=None)
def cell_counts(d: int) -> CellCounts:
    """Cell counts of the compactified polynomial space and the projective space.

    The polynomial side counts the basepoint as one extra 0-cell.

    >>> str(cell_counts(5).B)
    '1 + 5t + 11t^2 + 13t^3 + 9t^4 + 3t^5'
    >>> str(cell_counts(4).P)
    '1 + t + 3t^2 + 4t^3 + 3t^4'
    >>> cell_counts(6).P.evaluate(-1)
    2
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    full_marked = realize_family(FULL, d, "marked")
    full_plain = realize_family(FULL, d, "plain")
    b = [0] * (d + 1)
    for p in full_marked:
        b[d - p.reduced_norm] += 1
    pp = [0] * (d + 1)
    pp[0] += 1
    for p in full_plain:
        pp[d - p.reduced_norm] += 1
    return CellCounts(CountPolynomial(tuple(pp)), CountPolynomial(tuple(b)))
