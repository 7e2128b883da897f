"""Root multiplicity patterns and the merge/insert operations.

A *pattern* records the multiplicities of the real roots of a polynomial
(or binary form) read left to right along the real axis.  Plain patterns
are compositions: finite sequences of positive integers, possibly empty.
Marked patterns additionally carry ``kappa``, the multiplicity of the root
at infinity of a projectivized binary form.

Two families of operations generate the degeneration (partial) order:

* merge: two adjacent root clusters collide, ``(..., a, b, ...) -> (..., a+b, ...)``;
  on marked patterns the first or last cluster may instead escape to
  infinity, absorbing its multiplicity into ``kappa``.
* insert: a complex-conjugate pair lands on the real axis, inserting a
  new part 2 at any of the ``len+1`` gaps.

Merges preserve the norm (total multiplicity); inserts raise it by 2.
Both raise the reduced norm (norm minus number of parts) by exactly 1,
which makes the order graded and all searches finite.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Optional, Sequence


class Pattern(NamedTuple):
    """A root multiplicity pattern.

    ``kappa is None`` marks a plain pattern (polynomial setting);
    ``kappa >= 0`` marks a marked pattern (projective setting).

    >>> p = Pattern((1, 2, 1), None)
    >>> p.norm, p.reduced_norm, p.length
    (4, 1, 3)
    >>> m = Pattern((1, 2), 3)
    >>> m.norm, m.reduced_norm
    (6, 4)
    """

    parts: "tuple[int, ...]"
    kappa: Optional[int] = None

    @property
    def marked(self) -> bool:
        return self.kappa is not None

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def norm(self) -> int:
        return sum(self.parts) + (self.kappa or 0)

    @property
    def reduced_norm(self) -> int:
        return self.norm - len(self.parts)

    def __str__(self) -> str:
        return format_pattern(self)

    @staticmethod
    def plain(*parts: int) -> "Pattern":
        return _validated(Pattern(tuple(parts), None))

    @staticmethod
    def of(parts: Sequence[int], kappa: Optional[int] = None) -> "Pattern":
        return _validated(Pattern(tuple(parts), kappa))


def _validated(p: Pattern) -> Pattern:
    if any(not isinstance(a, int) or a < 1 for a in p.parts):
        raise ValueError(f"pattern parts must be positive integers: {p.parts!r}")
    if p.kappa is not None and (not isinstance(p.kappa, int) or p.kappa < 0):
        raise ValueError(f"kappa must be a non-negative integer: {p.kappa!r}")
    return p


def sort_key(p: Pattern):
    """Canonical ordering key: by norm, then parts lexicographically, then kappa."""
    return (p.norm, p.parts, p.kappa or 0)


# ---------------------------------------------------------------------------
# operations


def merge(p: Pattern, j: int) -> Pattern:
    """Merge the adjacent parts ``j`` and ``j+1`` (1-based interior index).

    >>> str(merge(Pattern.plain(1, 2, 2, 4, 3), 3))
    '1,2,6,3'
    >>> str(merge(Pattern.plain(2, 2), 1))
    '4'
    """
    if p.marked:
        raise ValueError("merge applies to plain patterns; use merge_inf")
    ell = p.length
    if not 1 <= j <= ell - 1:
        raise ValueError(f"merge index {j} out of range 1..{ell - 1}")
    w = p.parts
    return Pattern(w[: j - 1] + (w[j - 1] + w[j],) + w[j + 1 :], None)


def insert(p: Pattern, j: int) -> Pattern:
    """Insert a new part 2 after position ``j`` (0 prepends, length appends).

    >>> str(insert(Pattern.plain(1, 2, 2, 4, 3), 0))
    '2,1,2,2,4,3'
    >>> str(insert(Pattern.plain(), 0))
    '2'
    """
    if p.marked:
        raise ValueError("insert applies to plain patterns; use insert_inf")
    if not 0 <= j <= p.length:
        raise ValueError(f"insert position {j} out of range 0..{p.length}")
    w = p.parts
    return Pattern(w[:j] + (2,) + w[j:], None)


def merge_inf(p: Pattern, j: int) -> Pattern:
    """Marked merge: interior for 0 < j < length, else absorb an end part into kappa.

    >>> str(merge_inf(Pattern.of((1, 2, 2, 4, 3), 2), 0))
    '2,2,4,3|3'
    >>> str(merge_inf(Pattern.of((1, 2, 2, 4, 3), 2), 5))
    '1,2,2,4|5'
    >>> str(merge_inf(Pattern.of((7,), 0), 0))
    '()|7'
    """
    if not p.marked:
        raise ValueError("merge_inf applies to marked patterns; use merge")
    ell = p.length
    if ell == 0 or not 0 <= j <= ell:
        raise ValueError(f"merge index {j} out of range 0..{ell} (length {ell})")
    w, k = p.parts, p.kappa
    if j == 0:
        return Pattern(w[1:], k + w[0])
    if j == ell:
        return Pattern(w[:-1], k + w[-1])
    return Pattern(w[: j - 1] + (w[j - 1] + w[j],) + w[j + 1 :], k)


def insert_inf(p: Pattern, j: int) -> Pattern:
    """Marked insert: a part 2 appears after position ``j``; kappa is unchanged.

    >>> str(insert_inf(Pattern.of((1, 2, 2, 4, 3), 2), 5))
    '1,2,2,4,3,2|2'
    """
    if not p.marked:
        raise ValueError("insert_inf applies to marked patterns; use insert")
    if not 0 <= j <= p.length:
        raise ValueError(f"insert position {j} out of range 0..{p.length}")
    w = p.parts
    return Pattern(w[:j] + (2,) + w[j:], p.kappa)


def one_step_images(p: Pattern) -> list:
    """All single merge/insert images of ``p`` (no norm cutoff), with repeats."""
    out = []
    ell = p.length
    if p.marked:
        if ell >= 1:
            out.extend(merge_inf(p, j) for j in range(ell + 1))
        out.extend(insert_inf(p, j) for j in range(ell + 1))
    else:
        out.extend(merge(p, j) for j in range(1, ell))
        out.extend(insert(p, j) for j in range(ell + 1))
    return out


def precedes(a: Pattern, b: Pattern) -> bool:
    """True iff ``a`` is reachable from ``b`` by merge/insert steps (or a == b).

    Each step raises the reduced norm by 1, so breadth-first search from
    ``b`` terminates after ``a.reduced_norm - b.reduced_norm`` layers.

    >>> precedes(Pattern.plain(4), Pattern.plain(2, 2))
    True
    >>> precedes(Pattern.plain(2, 2), Pattern.plain(4))
    False
    """
    if a.marked != b.marked:
        raise ValueError("precedes requires two plain or two marked patterns")
    if a == b:
        return True

    def feasible(q: Pattern) -> bool:
        # inserts still needed is fixed by the norm gap and bounded by the
        # remaining steps; merges never raise the part count
        steps = a.reduced_norm - q.reduced_norm
        inserts = a.norm - q.norm
        return (
            steps > 0
            and inserts >= 0
            and inserts % 2 == 0
            and inserts // 2 <= steps
            and a.length <= q.length + inserts // 2
        )

    if not feasible(b):
        return False
    frontier = {b}
    for _ in range(a.reduced_norm - b.reduced_norm):
        frontier = {
            q for x in frontier for q in one_step_images(x) if q == a or feasible(q)
        }
        if a in frontier:
            return True
        if not frontier:
            return False
    return False


# ---------------------------------------------------------------------------
# enumeration


def compositions_of(n: int) -> Iterator[tuple]:
    """All compositions of ``n`` in lexicographic order (2^(n-1) of them; () for n=0).

    >>> list(compositions_of(3))
    [(1, 1, 1), (1, 2), (2, 1), (3,)]
    """
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions_of(n - first):
            yield (first,) + rest


def enumerate_cells(d: int, marked: bool) -> list:
    """All patterns with norm <= d and norm == d (mod 2), in canonical order.

    These index the cells of the compactified polynomial space (plain) or
    of the projectivized binary-form space (marked) in ambient degree d.

    >>> [str(p) for p in enumerate_cells(2, True)]
    ['()|0', '()|2', '1|1', '1,1|0', '2|0']
    >>> len(enumerate_cells(5, True))
    42
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    cells = []
    for n in range(d % 2, d + 1, 2):
        if marked:
            group = [
                Pattern(w, n - sum(w))
                for m in range(n + 1)
                for w in compositions_of(m)
            ]
        else:
            group = [Pattern(w, None) for w in compositions_of(n)]
        group.sort(key=sort_key)
        cells.extend(group)
    return cells


def is_cell(p: Pattern, d: int) -> bool:
    """True iff ``p`` indexes a nonempty cell in ambient degree ``d``."""
    return p.norm <= d and (p.norm - d) % 2 == 0


def cell_dimension(p: Pattern, d: int) -> int:
    """Dimension of the cell of ``p`` in ambient degree ``d``: d - reduced norm.

    >>> cell_dimension(Pattern.of((1, 1, 1), 0), 3)
    3
    >>> cell_dimension(Pattern.of((2, 2), 0), 4)
    2
    """
    if not is_cell(p, d):
        raise ValueError(f"{format_pattern(p)} is not a cell in degree {d}")
    return d - p.reduced_norm


# ---------------------------------------------------------------------------
# text syntax


def format_pattern(p: Pattern) -> str:
    """Render a pattern: parts comma-separated, '()' if empty, '|kappa' if marked.

    >>> format_pattern(Pattern((1, 2, 2, 4, 3), 2))
    '1,2,2,4,3|2'
    >>> format_pattern(Pattern((), None))
    '()'
    """
    body = ",".join(str(a) for a in p.parts) if p.parts else "()"
    if p.marked:
        return f"{body}|{p.kappa}"
    return body


def parse_pattern(text: str) -> Pattern:
    """Parse the pattern syntax; presence of '|kappa' decides plain vs marked.

    >>> parse_pattern("1,2,2,4,3|2")
    Pattern(parts=(1, 2, 2, 4, 3), kappa=2)
    >>> parse_pattern("()")
    Pattern(parts=(), kappa=None)
    """
    s = text.strip()
    if s.startswith("(") and s.endswith(")") and "|" not in s:
        inner = s[1:-1].strip()
        if inner:
            s = inner
    kappa: Optional[int] = None
    if "|" in s:
        body, _, tail = s.partition("|")
        s = body.strip()
        try:
            kappa = int(tail.strip())
        except ValueError:
            raise ValueError(f"bad kappa in pattern {text!r}") from None
    if s in ("", "()"):
        parts: tuple = ()
    else:
        try:
            parts = tuple(int(tok.strip()) for tok in s.split(","))
        except ValueError:
            raise ValueError(f"bad pattern syntax {text!r}") from None
    return _validated(Pattern(parts, kappa))
