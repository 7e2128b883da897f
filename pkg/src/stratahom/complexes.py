"""Graded integer differential complexes built from closed pattern posets.

Cells are patterns; the grade of a cell is its dimension (ambient degree
minus reduced norm).  The differential sends a cell to a signed sum of its
one-step merge/insert images, with insert terms dropped when their norm
exceeds the ambient degree:

* polynomial (plain patterns):
  d(w) = -sum_{k=1}^{s-1} (-1)^k M_k(w) + sum_{k=0}^{s} (-1)^k I_k(w)
* projective (marked patterns):
  d(w) = -sum_{k=0}^{s} (-1)^k M_k(w) + sum_{k=0}^{s} (-1)^k I_k(w)
  with s the number of parts; no merge terms when s = 0.
* twisted projective: as projective, except the k = s merge term (the last
  part escaping to infinity) is additionally scaled by (-1)^(last part).
  This computes homology with coefficients in the local system whose
  monodromy is -1 on loops through infinity; in even ambient degree that
  system is the orientation sheaf of the ambient projective space.

Quotient variants keep only the cells *outside* a closed poset and zero
every boundary term landing inside it; they compute the relative homology
of the ambient space modulo the subcomplex.

Coefficients of coincident targets are collected, and d o d = 0 is
asserted whenever a complex is built.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import InvariantViolation
from .intlinalg import AbelianGroup, IntMatrix, homology_from_boundaries
from .patterns import (
    Pattern,
    format_pattern,
    insert,
    insert_inf,
    merge,
    merge_inf,
    sort_key,
)
from .posets import Realization, complement, is_closed

VARIANTS = ("poly", "proj", "proj-twisted", "quotient", "quotient-twisted")


class FormalSum:
    """An integer linear combination of patterns; zero coefficients dropped."""

    __slots__ = ("terms",)

    def __init__(self, pairs: Iterable[Tuple[Pattern, int]] = ()):
        acc: Dict[Pattern, int] = {}
        for p, c in pairs:
            s = acc.get(p, 0) + c
            if s:
                acc[p] = s
            else:
                acc.pop(p, None)
        self.terms = acc

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: sort_key(kv[0])))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for p, c in self:
            sign = "-" if c < 0 else ("+" if bits else "")
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            bits.append(f"{sign}{mag}({format_pattern(p)})")
        return " ".join(bits)


def _merge_terms(p: Pattern, twisted: bool) -> List[Tuple[Pattern, int]]:
    """Signed merge terms -(-1)^k M_k, with the twist factor when asked."""
    out: List[Tuple[Pattern, int]] = []
    s = p.length
    if p.marked:
        if s >= 1:
            for k in range(s + 1):
                coeff = -((-1) ** k)
                if twisted and k == s:
                    coeff *= (-1) ** p.parts[-1]
                out.append((merge_inf(p, k), coeff))
    else:
        for k in range(1, s):
            out.append((merge(p, k), -((-1) ** k)))
    return out


def _insert_terms(p: Pattern, d: int) -> List[Tuple[Pattern, int]]:
    """Signed insert terms +(-1)^k I_k, dropped when the target norm exceeds d."""
    if p.norm + 2 > d:
        return []
    op = insert_inf if p.marked else insert
    return [(op(p, k), (-1) ** k) for k in range(p.length + 1)]


def boundary_polynomial(w: Pattern, d: int) -> FormalSum:
    """Differential of a plain pattern in ambient degree ``d``.

    >>> boundary_polynomial(Pattern.plain(2), 4)
    0
    >>> boundary_polynomial(Pattern.plain(2, 2), 4)
    (4)
    >>> boundary_polynomial(Pattern.plain(4), 4)
    0
    """
    if w.marked:
        raise ValueError("boundary_polynomial applies to plain patterns")
    if w.norm > d or (w.norm - d) % 2:
        raise ValueError(f"{format_pattern(w)} is not a cell in degree {d}")
    return FormalSum(_merge_terms(w, False) + _insert_terms(w, d))


def boundary_projective(mc: Pattern, d: int, twisted: bool = False) -> FormalSum:
    """Differential of a marked pattern in ambient degree ``d``.

    >>> boundary_projective(Pattern.of((1, 1), 0), 2)
    -2*(1|1) +(2|0)
    >>> boundary_projective(Pattern.of((), 2), 2)
    0
    >>> boundary_projective(Pattern.of((2,), 1), 3)
    0
    """
    if not mc.marked:
        raise ValueError("boundary_projective applies to marked patterns")
    if mc.norm > d or (mc.norm - d) % 2:
        raise ValueError(f"{format_pattern(mc)} is not a cell in degree {d}")
    return FormalSum(_merge_terms(mc, twisted) + _insert_terms(mc, d))


def boundary(p: Pattern, d: int, variant: str) -> FormalSum:
    """Dispatch on variant: poly, proj, or proj-twisted."""
    if variant == "poly":
        return boundary_polynomial(p, d)
    if variant in ("proj", "quotient"):
        return boundary_projective(p, d)
    if variant in ("proj-twisted", "quotient-twisted"):
        return boundary_projective(p, d, twisted=True)
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# complexes


class ChainComplex:
    """An immutable graded integer complex with cells indexed by patterns.

    ``bases[j]`` is the ordered tuple of dimension-j cells; ``mats[j]`` is
    the differential leaving grade j (absent means the zero map).  Chain
    complexes lower the grade by 1; dual (cochain) complexes raise it.
    """

    __slots__ = ("degree", "variant", "kind", "quotient", "dual", "bases", "mats")

    def __init__(
        self,
        degree: int,
        variant: str,
        kind: str,
        quotient: bool,
        dual: bool,
        bases: Dict[int, Tuple[Pattern, ...]],
        mats: Dict[int, IntMatrix],
    ):
        self.degree = degree
        self.variant = variant
        self.kind = kind
        self.quotient = quotient
        self.dual = dual
        self.bases = bases
        self.mats = mats

    @property
    def direction(self) -> int:
        """Grade step of the differential: -1 for chain, +1 for dual."""
        return 1 if self.dual else -1

    def basis(self, j: int) -> Tuple[Pattern, ...]:
        return self.bases.get(j, ())

    @property
    def grades(self) -> List[int]:
        return sorted(self.bases)

    def outgoing(self, j: int) -> Optional[IntMatrix]:
        """The differential leaving grade j, or None for the zero map."""
        return self.mats.get(j)

    def incoming(self, j: int) -> Optional[IntMatrix]:
        """The differential arriving at grade j, or None for the zero map."""
        return self.mats.get(j - self.direction)

    def total_cells(self) -> int:
        return sum(len(b) for b in self.bases.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * len(b) for j, b in self.bases.items())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ChainComplex)
            and self.degree == other.degree
            and self.variant == other.variant
            and self.kind == other.kind
            and self.quotient == other.quotient
            and self.dual == other.dual
            and self.bases == other.bases
            and self.mats == other.mats
        )

    def __repr__(self) -> str:
        arrow = "dual " if self.dual else ""
        quot = "quotient " if self.quotient else ""
        dims = {j: len(b) for j, b in sorted(self.bases.items())}
        return f"ChainComplex({arrow}{quot}{self.variant}, d={self.degree}, dims={dims})"


@lru_cache(maxsize=None)
def build(P: Realization, variant: str) -> ChainComplex:
    """Assemble and verify the complex of the closed realization ``P``.

    For quotient variants ``P`` is the closed subposet; the basis is its
    complement in the ambient cell set and boundary terms landing inside
    ``P`` are zeroed.  d o d = 0 is asserted; failure raises
    :class:`InvariantViolation`.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    quotient = variant.startswith("quotient")
    needed_kind = "plain" if variant == "poly" else "marked"
    if P.kind != needed_kind:
        raise ValueError(f"variant {variant!r} needs a {needed_kind} realization")
    if not is_closed(P, P.degree, P.kind):
        raise InvariantViolation(f"realization is not closed: {P!r}")
    cells = complement(P) if quotient else P
    d = P.degree

    bases: Dict[int, Tuple[Pattern, ...]] = {}
    for m in sorted(cells.grades):
        bases[d - m] = cells.grades[m]

    index: Dict[int, Dict[Pattern, int]] = {
        j: {p: i for i, p in enumerate(b)} for j, b in bases.items()
    }
    mats: Dict[int, IntMatrix] = {}
    for j, src in bases.items():
        tgt_index = index.get(j - 1)
        if not tgt_index:
            continue
        triplets = []
        for col, p in enumerate(src):
            for q, coeff in boundary(p, d, variant):
                row = tgt_index.get(q)
                if row is None:
                    if quotient and q in P:
                        continue
                    raise InvariantViolation(
                        f"boundary target {format_pattern(q)} missing from basis"
                    )
                triplets.append((row, col, coeff))
        mat = IntMatrix.from_triplets(len(bases[j - 1]), len(src), triplets)
        if not mat.is_zero():
            mats[j] = mat

    for j, mat in mats.items():
        nxt = mats.get(j - 1)
        if nxt is not None and not nxt.matmul(mat).is_zero():
            raise InvariantViolation(
                f"differential does not square to zero at grade {j} ({variant}, d={d})"
            )

    return ChainComplex(d, variant, cells.kind, quotient, False, bases, mats)


def dualize(C: ChainComplex) -> ChainComplex:
    """Transpose all differentials and reverse the arrows.

    >>> from .posets import close
    >>> P = close([Pattern.plain(2)], 4, "plain")
    >>> dualize(dualize(build(P, "poly"))) == build(P, "poly")
    True
    """
    mats: Dict[int, IntMatrix] = {}
    for j, mat in C.mats.items():
        # the map out of grade j lands in grade j + direction; its dual
        # leaves that grade in the opposite direction
        mats[j + C.direction] = mat.transpose()
    return ChainComplex(
        C.degree, C.variant, C.kind, C.quotient, not C.dual, dict(C.bases), mats
    )


# ---------------------------------------------------------------------------
# homology


def homology_at(C: ChainComplex, j: int) -> AbelianGroup:
    """H_j of a chain complex (or H^j of a dual one) in canonical form.

    >>> from .posets import close
    >>> P = close([Pattern.plain(2)], 4, "plain")
    >>> str(homology_at(build(P, "poly"), 3))
    'Z'
    """
    if not 0 <= j <= C.degree:
        raise ValueError(f"grade {j} out of range 0..{C.degree}")
    dim = len(C.basis(j))
    if dim == 0:
        return AbelianGroup()
    return homology_from_boundaries(C.outgoing(j), C.incoming(j), dim)


def homology_all(C: ChainComplex) -> Dict[int, AbelianGroup]:
    """All homology groups of ``C``, keyed by grade 0..degree."""
    from .intlinalg import smith_invariants

    inv: Dict[int, List[int]] = {}
    for j, mat in C.mats.items():
        inv[j] = smith_invariants(mat)
    out: Dict[int, AbelianGroup] = {}
    for j in range(C.degree + 1):
        dim = len(C.basis(j))
        if dim == 0:
            out[j] = AbelianGroup()
            continue
        rank_out = len(inv.get(j, []))
        inv_in = inv.get(j - C.direction, [])
        free = dim - rank_out - len(inv_in)
        if free < 0:
            raise InvariantViolation(f"negative homology rank at grade {j}")
        out[j] = AbelianGroup(free, tuple(t for t in inv_in if t > 1))
    return out


# ---------------------------------------------------------------------------
# diagnostics


def dump_lines(C: ChainComplex) -> List[str]:
    """One deterministic line per nonzero entry: 'j: target <- source : coeff'.

    ``j`` is the grade of the source cell.
    """
    lines: List[str] = []
    for j in sorted(C.mats):
        mat = C.mats[j]
        src = C.basis(j)
        tgt = C.basis(j + C.direction)
        for (r, c), v in sorted(mat.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(
                f"{j}: {format_pattern(tgt[r])} <- {format_pattern(src[c])} : {v}"
            )
    return lines


def verify_anticommute(P: Realization, d: Optional[int] = None, twisted: bool = False) -> bool:
    """Check the merge and insert parts square to zero and anticommute on P.

    Both parts are taken with the signs they carry inside the differential,
    insert terms truncated at the ambient norm exactly as in ``build``.
    """
    if d is not None and d != P.degree:
        raise ValueError(f"degree {d} does not match realization degree {P.degree}")
    d = P.degree
    bases: Dict[int, Tuple[Pattern, ...]] = {}
    for m in sorted(P.grades):
        bases[d - m] = P.grades[m]
    index = {j: {p: i for i, p in enumerate(b)} for j, b in bases.items()}

    def assemble(term_fn) -> Dict[int, IntMatrix]:
        mats = {}
        for j, src in bases.items():
            tgt_index = index.get(j - 1)
            if not tgt_index:
                continue
            triplets = []
            for col, p in enumerate(src):
                for q, coeff in term_fn(p):
                    row = tgt_index.get(q)
                    if row is None:
                        continue
                    triplets.append((row, col, coeff))
            mats[j] = IntMatrix.from_triplets(len(bases[j - 1]), len(src), triplets)
        return mats

    marked = P.kind == "marked"
    mm = assemble(lambda p: _merge_terms(p, twisted and marked))
    ii = assemble(lambda p: _insert_terms(p, d))
    for j in bases:
        if j - 2 not in bases or j - 1 not in bases:
            continue
        if not mm[j - 1].matmul(mm[j]).is_zero():
            return False
        if not ii[j - 1].matmul(ii[j]).is_zero():
            return False
        anti = mm[j - 1].matmul(ii[j]) + ii[j - 1].matmul(mm[j])
        if not anti.is_zero():
            return False
    return True
