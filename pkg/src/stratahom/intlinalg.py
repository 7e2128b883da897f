"""Exact integer linear algebra: Smith/Hermite normal forms and homology groups.

Everything runs over Python's arbitrary-precision integers; intermediate
entries of integer eliminations routinely overflow fixed-width words even
for modest inputs, so no float or fixed-width path exists.

Two Smith normal form engines are provided:

* :func:`smith_invariants`: sparse, no transform matrices, with a
  structural prepass that eliminates ``+-1`` pivots first (the dominant
  case for boundary matrices, whose entries are almost all ``+-1, +-2``).
  This is the homology workhorse.
* :func:`smith_normal_form`: dense, carries unimodular ``U, V`` with
  ``U*A*V = D``.  Serves as the reference implementation and powers the
  independent kernel/cokernel homology oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InvariantViolation


class IntMatrix:
    """A sparse integer matrix with explicit shape; zero entries not stored."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: Optional[Dict[Tuple[int, int], int]] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix shape must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        self.entries: Dict[Tuple[int, int], int] = {}
        if entries:
            for (i, j), v in entries.items():
                self._put(i, j, v)

    def _put(self, i: int, j: int, v: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise ValueError(f"index ({i},{j}) outside {self.nrows}x{self.ncols}")
        if v:
            self.entries[(i, j)] = v

    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[Tuple[int, int, int]]) -> "IntMatrix":
        m = cls(nrows, ncols)
        acc: Dict[Tuple[int, int], int] = {}
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ValueError(f"index ({i},{j}) outside {nrows}x{ncols}")
            acc[(i, j)] = acc.get((i, j), 0) + v
        m.entries = {k: v for k, v in acc.items() if v}
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    m.entries[(i, j)] = v
        return m

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not self.entries

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def transpose(self) -> "IntMatrix":
        t = IntMatrix(self.ncols, self.nrows)
        t.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return t

    def to_rows(self) -> List[List[int]]:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def column(self, j: int) -> List[int]:
        col = [0] * self.nrows
        for (i, jj), v in self.entries.items():
            if jj == j:
                col[i] = v
        return col

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        by_row: Dict[int, Dict[int, int]] = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, {})[j] = v
        acc: Dict[Tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            row = by_row.get(k)
            if not row:
                continue
            for j, w in row.items():
                key = (i, j)
                acc[key] = acc.get(key, 0) + v * w
        out = IntMatrix(self.nrows, other.ncols)
        out.entries = {k: v for k, v in acc.items() if v}
        return out

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        out = IntMatrix(self.nrows, self.ncols)
        out.entries = acc
        return out

    def __neg__(self) -> "IntMatrix":
        out = IntMatrix(self.nrows, self.ncols)
        out.entries = {k: -v for k, v in self.entries.items()}
        return out

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):  # pragma: no cover - identity-keyed caches only
        return id(self)

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# sparse Smith invariants (no transforms)


def smith_invariants(A: IntMatrix) -> List[int]:
    """Nonzero diagonal of the Smith normal form: positive, d1 | d2 | ...

    Structural prepass knocks out ``+-1`` pivots (choosing pivots with small
    Markowitz fill score); whatever remains is reduced by the classical
    dense algorithm.  The list's length is the rank of ``A``.
    """
    rows: Dict[int, Dict[int, int]] = {}
    colrows: Dict[int, set] = {}
    for (i, j), v in sorted(A.entries.items()):
        rows.setdefault(i, {})[j] = v
        colrows.setdefault(j, set()).add(i)
    units: Dict[Tuple[int, int], None] = {
        (i, j): None for (i, j), v in sorted(A.entries.items()) if v in (1, -1)
    }

    ones = 0
    SAMPLE = 48
    while units:
        best = None
        best_score = None
        stale = []
        for (i, j) in islice(units, SAMPLE):
            if rows.get(i, {}).get(j, 0) not in (1, -1):
                stale.append((i, j))
                continue
            score = (len(rows[i]) - 1) * (len(colrows[j]) - 1)
            if best_score is None or score < best_score:
                best, best_score = (i, j), score
                if score == 0:
                    break
        for key in stale:
            units.pop(key, None)
        if best is None:
            if units:
                continue
            break
        r0, c0 = best
        piv = rows[r0][c0]
        pivot_row = rows[r0]
        # clear the pivot column with row operations
        for r in list(colrows[c0]):
            if r == r0:
                continue
            mult = rows[r][c0] * piv  # rows[r][c0] / piv since piv is +-1
            row = rows[r]
            for c, v in pivot_row.items():
                nv = row.get(c, 0) - mult * v
                if nv:
                    if c not in row:
                        colrows[c].add(r)
                    row[c] = nv
                    if nv in (1, -1):
                        units[(r, c)] = None
                    else:
                        units.pop((r, c), None)
                else:
                    if c in row:
                        del row[c]
                        colrows[c].discard(r)
                    units.pop((r, c), None)
            if not row:
                del rows[r]
        # the pivot column now holds only the pivot row; with column
        # operations the rest of the pivot row dies touching nothing else
        for c in pivot_row:
            colrows[c].discard(r0)
            if not colrows[c]:
                del colrows[c]
            units.pop((r0, c), None)
        del rows[r0]
        ones += 1

    invariants = [1] * ones
    if rows:
        # residual without unit entries: classical dense reduction
        live_rows = sorted(rows)
        live_cols = sorted({c for row in rows.values() for c in row})
        ri = {r: i for i, r in enumerate(live_rows)}
        ci = {c: j for j, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for r, row in rows.items():
            for c, v in row.items():
                dense[ri[r]][ci[c]] = v
        invariants.extend(_dense_invariants(dense))
    return invariants


def _smith_reduce(
    a: List[List[int]],
    n: int,
    m: int,
    u: Optional[List[List[int]]] = None,
    v: Optional[List[List[int]]] = None,
) -> int:
    """Diagonalize ``a`` in place to Smith form; returns the rank.

    ``u`` and ``v``, when given, accumulate the row and column operations.
    The pivot is re-selected as the globally smallest nonzero entry after
    every sweep; swapping remainders into the pivot seat instead (the
    textbook loop) squares entry sizes per sweep and stalls already on
    random 8x8 blocks with single-digit entries.
    """

    def row_op(i: int, k: int, q: int) -> None:  # row i -= q * row k
        ai, ak = a[i], a[k]
        for j in range(m):
            ai[j] -= q * ak[j]
        if u is not None:
            ui, uk = u[i], u[k]
            for j in range(n):
                ui[j] -= q * uk[j]

    def col_op(j: int, k: int, q: int) -> None:  # col j -= q * col k
        for row in a:
            row[j] -= q * row[k]
        if v is not None:
            for row in v:
                row[j] -= q * row[k]

    k = 0
    while k < n and k < m:
        # globally smallest nonzero entry of the trailing block
        piv = None
        best = None
        for i in range(k, n):
            ai = a[i]
            for j in range(k, m):
                w = ai[j]
                if w:
                    aw = -w if w < 0 else w
                    if best is None or aw < best:
                        piv, best = (i, j), aw
                        if aw == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        if piv[0] != k:
            a[piv[0]], a[k] = a[k], a[piv[0]]
            if u is not None:
                u[piv[0]], u[k] = u[k], u[piv[0]]
        if piv[1] != k:
            for row in a:
                row[piv[1]], row[k] = row[k], row[piv[1]]
            if v is not None:
                for row in v:
                    row[piv[1]], row[k] = row[k], row[piv[1]]
        p = a[k][k]
        dirty = False
        for i in range(k + 1, n):
            w = a[i][k]
            if w:
                q = w // p
                if q:
                    row_op(i, k, q)
                if a[i][k]:
                    dirty = True
        for j in range(k + 1, m):
            w = a[k][j]
            if w:
                q = w // p
                if q:
                    col_op(j, k, q)
                if a[k][j]:
                    dirty = True
        if dirty:
            # leftover remainders are smaller than the pivot; re-select
            continue
        offender = None
        for i in range(k + 1, n):
            ai = a[i]
            for j in range(k + 1, m):
                if ai[j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            # fold the offending row in; the next sweep drops the pivot
            # to a proper divisor, so this terminates
            ak, ao = a[k], a[offender]
            for j in range(m):
                ak[j] += ao[j]
            if u is not None:
                uk, uo = u[k], u[offender]
                for j in range(n):
                    uk[j] += uo[j]
            continue
        if p < 0:
            ak = a[k]
            for j in range(m):
                ak[j] = -ak[j]
            if u is not None:
                uk = u[k]
                for j in range(n):
                    uk[j] = -uk[j]
        k += 1
    return k


def _dense_invariants(a: List[List[int]]) -> List[int]:
    """Smith reduction of a dense block, invariants only."""
    n = len(a)
    m = len(a[0]) if a else 0
    rk = _smith_reduce(a, n, m)
    return [a[i][i] for i in range(rk)]


def rank(A: IntMatrix) -> int:
    return len(smith_invariants(A))


# ---------------------------------------------------------------------------
# dense Smith normal form with transforms


@dataclass
class SNFResult:
    diag: List[int]
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix


def smith_normal_form(A: IntMatrix) -> SNFResult:
    """Dense Smith normal form with unimodular transforms: U*A*V = D."""
    n, m = A.nrows, A.ncols
    a = A.to_rows()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    rk = _smith_reduce(a, n, m, u, v)
    return SNFResult(
        diag=[a[i][i] for i in range(rk)],
        D=IntMatrix.from_rows(a, m),
        U=IntMatrix.from_rows(u, n),
        V=IntMatrix.from_rows(v, m),
    )


# ---------------------------------------------------------------------------
# Hermite normal form, kernels, exact solving


def hermite_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns (H, U) with U*A = H, U unimodular.

    H is in row-echelon form with positive pivots and entries above each
    pivot reduced to [0, pivot).
    """
    n, m = A.nrows, A.ncols
    a = A.to_rows()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(m):
        # gcd-reduce the column below row r
        while True:
            live = [i for i in range(r, n) if a[i][c]]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: (abs(a[i][c]), i))
            i0 = live[0]
            for i in live[1:]:
                q = a[i][c] // a[i0][c]
                ai, a0 = a[i], a[i0]
                ui, u0 = u[i], u[i0]
                for j in range(m):
                    ai[j] -= q * a0[j]
                for j in range(n):
                    ui[j] -= q * u0[j]
        live = [i for i in range(r, n) if a[i][c]]
        if not live:
            continue
        i0 = live[0]
        a[r], a[i0] = a[i0], a[r]
        u[r], u[i0] = u[i0], u[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                ai, ar = a[i], a[r]
                ui, ur = u[i], u[r]
                for j in range(m):
                    ai[j] -= q * ar[j]
                for j in range(n):
                    ui[j] -= q * ur[j]
        r += 1
        if r == n:
            break
    return IntMatrix.from_rows(a, m), IntMatrix.from_rows(u, n)


def kernel_basis(A: IntMatrix) -> List[List[int]]:
    """A basis (as rows) of the saturated lattice ker(A) = {x : A*x = 0}."""
    H, U = hermite_normal_form(A.transpose())
    hr = H.to_rows()
    ur = U.to_rows()
    return [ur[i] for i in range(len(hr)) if not any(hr[i])]


def express_in_rows(K: List[List[int]], v: Sequence[int]) -> List[int]:
    """Integer coefficients a with a*K = v; raises if v is outside the lattice.

    K must consist of linearly independent rows (e.g. a kernel basis).
    """
    if not K:
        if any(v):
            raise InvariantViolation("nonzero vector in empty lattice")
        return []
    KM = IntMatrix.from_rows(K)
    H, U = hermite_normal_form(KM)
    hr = H.to_rows()
    # pivot column of each echelon row
    pivots = []
    for row in hr:
        nz = [j for j, x in enumerate(row) if x]
        pivots.append(nz[0] if nz else None)
    res = list(v)
    b = [0] * len(hr)
    for i, c in enumerate(pivots):
        if c is None:
            continue
        q, rem = divmod(res[c], hr[i][c])
        if rem:
            raise InvariantViolation("vector is not in the row lattice")
        b[i] = q
        if q:
            row = hr[i]
            for j in range(c, len(res)):
                res[j] -= q * row[j]
    if any(res):
        raise InvariantViolation("vector is not in the row lattice")
    ur = U.to_rows()
    k = len(K)
    return [sum(b[i] * ur[i][j] for i in range(k)) for j in range(k)]


# ---------------------------------------------------------------------------
# mod-p rank


def modp_rank(A: IntMatrix, p: int) -> int:
    """Rank of A over the field with p elements (p prime)."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    n, m = A.nrows, A.ncols
    rows = [row for row in ([x % p for x in r] for r in A.to_rows()) if any(row)]
    rk = 0
    for c in range(m):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][c], -1, p)
        rows[rk] = [(x * inv) % p for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class AbelianGroup:
    """Canonical form of a finitely generated abelian group.

    ``torsion`` lists invariant factors d1 | d2 | ..., each >= 2.
    """

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValueError(f"torsion coefficients must be >= 2: {self.torsion}")
            if i and self.torsion[i] % self.torsion[i - 1]:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.torsion}")

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return self.render()

    def render(self, paper_style: bool = False) -> str:
        """"Z^2 ⊕ Z/2" (default) or the table style "Z^2 ⊕ Z/2Z"."""
        if self.is_zero:
            return "0"
        pieces = []
        if self.rank == 1:
            pieces.append("Z")
        elif self.rank:
            pieces.append(f"Z^{self.rank}")
        for t in self.torsion:
            pieces.append(f"Z/{t}Z" if paper_style else f"Z/{t}")
        return " ⊕ ".join(pieces)


def group(rank: int = 0, *torsion: int) -> AbelianGroup:
    return AbelianGroup(rank, tuple(torsion))


def group_from_invariants(rank: int, invariants: Iterable[int]) -> AbelianGroup:
    return AbelianGroup(rank, tuple(t for t in invariants if t > 1))


def parse_group(text: str) -> AbelianGroup:
    """Inverse of ``render`` (both styles); used by fixtures and tests.

    >>> parse_group("Z^2 ⊕ Z/2Z")
    AbelianGroup(rank=2, torsion=(2,))
    """
    s = text.strip()
    if s in ("0", ""):
        return AbelianGroup()
    rank = 0
    torsion: List[int] = []
    for piece in s.replace("(+)", "⊕").split("⊕"):
        piece = piece.strip()
        if not piece:
            raise ValueError(f"bad group syntax {text!r}")
        if piece.startswith("Z/"):
            t = piece[2:]
            if t.endswith("Z"):
                t = t[:-1]
            torsion.append(int(t))
        elif piece.startswith("Z^"):
            rank += int(piece[2:])
        elif piece == "Z":
            rank += 1
        else:
            raise ValueError(f"bad group syntax {text!r}")
    return AbelianGroup(rank, tuple(sorted(torsion)))


# ---------------------------------------------------------------------------
# homology of a pair of consecutive boundary maps


def homology_from_boundaries(
    boundary_out: Optional[IntMatrix],
    boundary_in: Optional[IntMatrix],
    dim: int,
) -> AbelianGroup:
    """H = ker(boundary_out) / im(boundary_in) on a grade of dimension ``dim``.

    rank H = dim - rank(out) - rank(in); torsion = invariant factors > 1 of
    the incoming boundary (torsion of coker(in) restricted to the kernel
    equals torsion of coker(in) itself, since im(in) lies in ker(out)).
    """
    rank_out = len(smith_invariants(boundary_out)) if boundary_out is not None else 0
    inv_in = smith_invariants(boundary_in) if boundary_in is not None else []
    free = dim - rank_out - len(inv_in)
    if free < 0:
        raise InvariantViolation(
            f"negative homology rank: dim={dim} rank_out={rank_out} rank_in={len(inv_in)}"
        )
    return group_from_invariants(free, inv_in)


def homology_oracle(
    boundary_out: Optional[IntMatrix],
    boundary_in: Optional[IntMatrix],
    dim: int,
) -> AbelianGroup:
    """Independent ker/im computation via Hermite-normal-form kernel bases.

    Computes an explicit kernel lattice basis, expresses the incoming
    boundary's columns in those coordinates, and reads the quotient off the
    dense Smith form of the coordinate matrix.
    """
    if boundary_out is None:
        K = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    else:
        K = kernel_basis(boundary_out)
    k = len(K)
    cols = []
    if boundary_in is not None and not boundary_in.is_zero():
        for j in range(boundary_in.ncols):
            v = boundary_in.column(j)
            cols.append(express_in_rows(K, v))
    if not cols:
        return AbelianGroup(k)
    M = IntMatrix.from_rows([[c[i] for c in cols] for i in range(k)], len(cols))
    res = smith_normal_form(M)
    return group_from_invariants(k - len(res.diag), res.diag)
