"""Closed pattern posets: families, finite realizations, and the eta/psi descriptors.

A set of patterns is *closed* (at ambient degree d) when it contains every
merge/insert image of norm <= d of each member.  Closed sets of a fixed
parity are exactly the subcomplexes of the ambient cell structure, so all
homology pipelines start here.

Infinite posets are described intensionally by a :class:`Family` (a tag
plus parameters) and realized degree by degree; :func:`realize_family`
returns the finite graded set of cells present at a given degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .patterns import (
    Pattern,
    enumerate_cells,
    format_pattern,
    one_step_images,
    parse_pattern,
    sort_key,
)

_PREDICATE_TAGS = frozenset({"full", "all-real", "disc", "max-ge", "skeleton"})
_GENERATOR_TAGS = frozenset({"single", "gen", "empty"})


@dataclass(frozen=True)
class Family:
    """A degree-uniform description of a closed pattern poset.

    Predicate families keep every cell satisfying a membership test:

    * ``full``: all cells;
    * ``all-real``: cells of norm exactly d (no complex root pairs);
    * ``disc``: at least one multiple root (a part >= 2, or kappa >= 2);
    * ``max-ge:k``: at least one root of multiplicity >= k;
    * ``skeleton:q``: reduced norm >= q (codimension-q skeleton).

    Generator families take the downward closure of explicit patterns:
    ``single:<pattern>``, ``gen:(p1);(p2);...``, and the ``empty`` poset.

    >>> str(MAX_GE(3))
    'max-ge:3'
    >>> parse_family("single:1,2,1").generators
    (Pattern(parts=(1, 2, 1), kappa=None),)
    """

    tag: str
    param: Optional[int] = None
    generators: Tuple[Pattern, ...] = ()

    def __post_init__(self):
        if self.tag not in _PREDICATE_TAGS and self.tag not in _GENERATOR_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}")
        if self.tag == "max-ge":
            if self.param is None or self.param < 1:
                raise ValueError("max-ge requires a threshold k >= 1")
        elif self.tag == "skeleton":
            if self.param is None or self.param < 0:
                raise ValueError("skeleton requires a codimension q >= 0")
        elif self.param is not None:
            raise ValueError(f"family {self.tag!r} takes no numeric parameter")
        if self.tag == "single" and len(self.generators) != 1:
            raise ValueError("single requires exactly one generator")
        if self.tag in ("empty", *_PREDICATE_TAGS) and self.generators:
            raise ValueError(f"family {self.tag!r} takes no generators")
        kinds = {g.marked for g in self.generators}
        if len(kinds) > 1:
            raise ValueError("generators must be all plain or all marked")
        parities = {g.norm % 2 for g in self.generators}
        if len(parities) > 1:
            raise ValueError("generators of mixed parity have no geometric meaning")

    @property
    def kind(self) -> Optional[str]:
        """'plain' or 'marked' when the generators fix it, else None."""
        if self.generators:
            return "marked" if self.generators[0].marked else "plain"
        return None

    @property
    def parity(self) -> Optional[int]:
        """The residue d mod 2 the family requires, or None if any d works."""
        if self.generators:
            return self.generators[0].norm % 2
        return None

    def __str__(self) -> str:
        if self.tag in ("max-ge", "skeleton"):
            return f"{self.tag}:{self.param}"
        if self.tag == "single":
            return f"single:{format_pattern(self.generators[0])}"
        if self.tag == "gen":
            return "gen:" + ";".join(f"({format_pattern(g)})" for g in self.generators)
        return self.tag


FULL = Family("full")
ALL_REAL = Family("all-real")
DISC = Family("disc")
EMPTY = Family("empty")


def MAX_GE(k: int) -> Family:
    """Patterns with at least one root of multiplicity >= k."""
    return Family("max-ge", param=k)


def SKELETON(q: int) -> Family:
    """Patterns of reduced norm >= q: the closed codimension-q skeleton."""
    return Family("skeleton", param=q)


def SINGLE(p: Pattern) -> Family:
    """The smallest closed poset containing the one pattern ``p``."""
    return Family("single", generators=(p,))


def GENERATED(patterns: Iterable[Pattern]) -> Family:
    """The smallest closed poset containing all the given patterns."""
    return Family("gen", generators=tuple(patterns))


def parse_family(text: str) -> Family:
    """Parse the CLI family syntax.

    >>> parse_family("max-ge:3") == MAX_GE(3)
    True
    >>> parse_family("gen:(2,2);(4)").generators
    (Pattern(parts=(2, 2), kappa=None), Pattern(parts=(4,), kappa=None))
    """
    s = text.strip()
    tag, sep, payload = s.partition(":")
    tag = tag.strip()
    payload = payload.strip()
    if tag in ("full", "all-real", "disc", "empty"):
        if sep:
            raise ValueError(f"family {tag!r} takes no parameter: {text!r}")
        return Family(tag)
    if tag in ("max-ge", "skeleton"):
        try:
            return Family(tag, param=int(payload))
        except ValueError:
            raise ValueError(f"bad numeric parameter in family {text!r}") from None
    if tag == "single":
        return SINGLE(parse_pattern(payload))
    if tag == "gen":
        items = [tok.strip() for tok in payload.split(";")] if payload else []
        gens = []
        for tok in items:
            if tok.startswith("(") and tok.endswith(")") and len(tok) > 2:
                tok = tok[1:-1]
            gens.append(parse_pattern(tok))
        return GENERATED(gens)
    raise ValueError(f"unknown family {text!r}")


# ---------------------------------------------------------------------------
# realizations


class Realization:
    """An immutable set of cells at a fixed degree, graded by reduced norm.

    All members must share the degree's parity and have norm <= degree;
    closedness is a property of the *set* and is checked by
    :func:`is_closed` (construction does not require it, so complements
    of closed sets are representable too).
    """

    __slots__ = ("kind", "degree", "grades", "_members")

    def __init__(self, kind: str, degree: int, cells: Iterable[Pattern]):
        if kind not in ("plain", "marked"):
            raise ValueError(f"kind must be 'plain' or 'marked': {kind!r}")
        if degree < 0:
            raise ValueError("degree must be non-negative")
        members = frozenset(cells)
        marked = kind == "marked"
        for p in members:
            if p.marked != marked:
                raise ValueError(f"{format_pattern(p)} does not have kind {kind!r}")
            if p.norm > degree:
                raise ValueError(f"{format_pattern(p)} has norm > degree {degree}")
            if (p.norm - degree) % 2:
                raise ValueError(f"{format_pattern(p)} has parity != degree {degree}")
        by_grade: Dict[int, List[Pattern]] = {}
        for p in members:
            by_grade.setdefault(p.reduced_norm, []).append(p)
        self.kind = kind
        self.degree = degree
        self.grades: Dict[int, Tuple[Pattern, ...]] = {
            m: tuple(sorted(ps, key=sort_key)) for m, ps in sorted(by_grade.items())
        }
        self._members = members

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def is_empty(self) -> bool:
        return not self._members

    @property
    def total_cells(self) -> int:
        return len(self._members)

    def grade(self, m: int) -> Tuple[Pattern, ...]:
        """The canonically ordered cells of reduced norm ``m``."""
        return self.grades.get(m, ())

    def norm_slice(self, n: int) -> Tuple[Pattern, ...]:
        """The canonically ordered cells of norm exactly ``n``."""
        return tuple(sorted((p for p in self._members if p.norm == n), key=sort_key))

    def __contains__(self, p: Pattern) -> bool:
        return p in self._members

    def __iter__(self) -> Iterator[Pattern]:
        for m in sorted(self.grades):
            yield from self.grades[m]

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Realization)
            and self.kind == other.kind
            and self.degree == other.degree
            and self._members == other._members
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.degree, self._members))

    def __repr__(self) -> str:
        return f"Realization({self.kind}, d={self.degree}, cells={self.total_cells})"


def close(generators: Iterable[Pattern], d: int, kind: str) -> Realization:
    """Downward closure of ``generators`` under merge/insert, cut at norm d.

    >>> [str(p) for p in close([Pattern.plain(2)], 4, "plain")]
    ['2', '2,2', '4']
    """
    if kind not in ("plain", "marked"):
        raise ValueError(f"kind must be 'plain' or 'marked': {kind!r}")
    marked = kind == "marked"
    gens = list(generators)
    for g in gens:
        if g.marked != marked:
            raise ValueError(f"generator {format_pattern(g)} is not {kind}")
        if g.norm > d:
            raise ValueError(f"generator {format_pattern(g)} has norm > {d}")
        if (g.norm - d) % 2:
            raise ValueError(f"generator {format_pattern(g)} has parity != degree {d}")
    seen = set()
    frontier = list(gens)
    while frontier:
        p = frontier.pop()
        if p in seen:
            continue
        seen.add(p)
        for q in one_step_images(p):
            if q.norm <= d and q not in seen:
                frontier.append(q)
    return Realization(kind, d, seen)


def realize_family(family: Family, d: int, kind: Optional[str] = None) -> Realization:
    """The family's cells at degree ``d``; marked unless the family says plain.

    >>> [str(p) for p in realize_family(DISC, 3)]
    ['1,2|0', '2,1|0', '1|2', '2|1', '3|0', '()|3']
    >>> realize_family(FULL, 5).total_cells
    42
    """
    if kind is None:
        kind = family.kind or "marked"
    if family.kind is not None and kind != family.kind:
        raise ValueError(
            f"family {family} is {family.kind}; cannot realize as {kind}"
        )
    if family.parity is not None and (d - family.parity) % 2:
        raise ValueError(f"family {family} requires degree of parity {family.parity}")
    return _realize_cached(family, d, kind)


@lru_cache(maxsize=None)
def _realize_cached(family: Family, d: int, kind: str) -> Realization:
    if family.tag in _PREDICATE_TAGS:
        cells = enumerate_cells(d, kind == "marked")
        if family.tag == "full":
            keep = cells
        elif family.tag == "all-real":
            keep = [p for p in cells if p.norm == d]
        elif family.tag == "disc":
            keep = [p for p in cells if _has_multiplicity(p, 2)]
        elif family.tag == "max-ge":
            keep = [p for p in cells if _has_multiplicity(p, family.param)]
        else:
            keep = [p for p in cells if p.reduced_norm >= family.param]
        return Realization(kind, d, keep)
    return close(family.generators, d, kind)


def _has_multiplicity(p: Pattern, k: int) -> bool:
    return any(a >= k for a in p.parts) or (p.kappa is not None and p.kappa >= k)


def complement(P: Realization) -> Realization:
    """All ambient cells of P's degree and kind that are not in P."""
    cells = [
        p for p in enumerate_cells(P.degree, P.kind == "marked") if p not in P
    ]
    return Realization(P.kind, P.degree, cells)


# ---------------------------------------------------------------------------
# structure tests and descriptors


def is_closed(cells: Iterable[Pattern], d: int, kind: str) -> bool:
    """True iff every one-step image of norm <= d of a member is a member.

    >>> is_closed({Pattern.plain(2)}, 4, "plain")
    False
    >>> is_closed(set(), 4, "plain")
    True
    """
    members = set(cells)
    marked = kind == "marked"
    for p in members:
        if p.marked != marked:
            raise ValueError(f"{format_pattern(p)} does not have kind {kind!r}")
        for q in one_step_images(p):
            if q.norm <= d and q not in members:
                return False
    return True


def maximal_elements(P: Realization) -> List[Pattern]:
    """Members of ``P`` not strictly preceded by another member.

    One merge/insert step spans the whole degeneration order, so a member
    is non-maximal exactly when it is a one-step image of some member.

    >>> [str(p) for p in maximal_elements(close([Pattern.plain(2)], 4, "plain"))]
    ['2']
    """
    images = set()
    for p in P:
        for q in one_step_images(p):
            if q.norm <= P.degree:
                images.add(q)
    return sorted((p for p in P if p not in images), key=sort_key)


def eta(P: Realization) -> int:
    """max(norm - 2 * reduced norm) over maximal elements of ``P``.

    >>> eta(close([Pattern.plain(2)], 6, "plain"))
    0
    """
    if P.is_empty:
        raise ValueError("eta of an empty realization is undefined")
    return max(p.norm - 2 * p.reduced_norm for p in maximal_elements(P))


def psi(P: Realization) -> int:
    """The stable range descriptor (degree + eta) / 2, an integer by parity.

    >>> psi(close([Pattern.plain(2)], 6, "plain"))
    3
    """
    return (P.degree + eta(P)) // 2
