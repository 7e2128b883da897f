"""Deterministic rendering of profiles, reports, and tables.

Every renderer maps a value and a format name from :data:`FORMATS` to a
string ending in exactly one newline.  Orderings are fixed by the inputs,
never by hash order, so equal inputs give byte-identical output.

Formats:

* ``text``: aligned columns, groups in table syntax (``Z^2``, ``Z/2Z``,
  ``Z ⊕ Z/4Z``);
* ``json``: one object per payload, two-space indent, keys in a fixed
  documented order, groups as ``{"degree", "rank", "torsion"}`` records;
* ``csv``: a header row plus one row per entry, groups split into rank
  and semicolon-joined torsion columns;
* ``markdown``: a pipe table with the same cells as ``text``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .intlinalg import AbelianGroup
from .spaces import HomologyProfile
from .stabilization import StabilizationReport

FORMATS = ("text", "json", "csv", "markdown")

Cell = Union[str, int]


def format_group(g: AbelianGroup) -> str:
    """Table syntax for a group.

    >>> from stratahom.intlinalg import group
    >>> [format_group(g) for g in (group(0), group(2), group(1, 4))]
    ['0', 'Z^2', 'Z ⊕ Z/4Z']
    """
    return g.render(paper_style=True)


def _group_fields(g: AbelianGroup) -> Tuple[int, str]:
    return g.rank, ";".join(str(t) for t in g.torsion)


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


@dataclass(frozen=True)
class Table:
    """A rendered-format-agnostic table: a title, headers, and rows.

    Rows hold strings and integers only; group columns are formatted by
    the caller so that csv and json see the same cells as text.
    """

    title: str
    headers: Tuple[str, ...]
    rows: Tuple[Tuple[Cell, ...], ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.headers):
                raise ValueError(
                    f"row width {len(row)} != header width {len(self.headers)}"
                )


def _text_table(headers: Sequence[str], rows: Sequence[Sequence[Cell]]) -> List[str]:
    cells = [[str(c) for c in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return lines


def _markdown_table(headers: Sequence[str], rows: Sequence[Sequence[Cell]]) -> List[str]:
    lines = [
        "| " + " | ".join(headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return lines


def _csv_lines(headers: Sequence[str], rows: Sequence[Sequence[Cell]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def render_table(table: Table, fmt: str = "text") -> str:
    """Render a :class:`Table` in any supported format.

    >>> t = Table("demo", ("d", "group"), ((4, "Z/2Z"),))
    >>> print(render_table(t, "markdown"), end="")
    | d | group |
    | --- | --- |
    | 4 | Z/2Z |
    """
    _check_format(fmt)
    if fmt == "json":
        payload = {
            "title": table.title,
            "headers": list(table.headers),
            "rows": [list(row) for row in table.rows],
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return _csv_lines(table.headers, table.rows)
    lines = (
        _text_table(table.headers, table.rows)
        if fmt == "text"
        else _markdown_table(table.headers, table.rows)
    )
    if fmt == "text" and table.title:
        lines.insert(0, table.title)
    return "\n".join(lines) + "\n"


def profile_payload(profile: HomologyProfile) -> dict:
    """JSON payload of a profile: exactly space, d, family, reduced, groups.

    >>> from stratahom.spaces import reduced_homology_P
    >>> profile_payload(reduced_homology_P(2, "disc"))["groups"]
    [{'degree': 1, 'rank': 1, 'torsion': []}]
    """
    return {
        "space": profile.space,
        "d": profile.degree,
        "family": str(profile.family),
        "reduced": profile.reduced,
        "groups": [
            {"degree": j, "rank": g.rank, "torsion": list(g.torsion)}
            for j, g in sorted(profile.nonzero().items())
        ],
    }


def render_profile(profile: HomologyProfile, fmt: str = "text") -> str:
    """Render one homology/cohomology profile.

    >>> from stratahom.spaces import homology_B
    >>> print(render_profile(homology_B(2, "disc")), end="")
    B d=2 family=disc
    j  group
    -  -----
    0  Z
    1  Z
    2  0
    """
    _check_format(fmt)
    if fmt == "json":
        return json.dumps(profile_payload(profile), indent=2, ensure_ascii=False) + "\n"
    rows: List[Tuple[Cell, ...]] = []
    if fmt == "csv":
        for j in range(profile.degree + 1):
            rank, torsion = _group_fields(profile.group(j))
            rows.append((j, rank, torsion))
        return _csv_lines(("degree", "rank", "torsion"), rows)
    for j in range(profile.degree + 1):
        rows.append((j, format_group(profile.group(j))))
    title = f"{profile.space} d={profile.degree} family={profile.family}"
    if profile.reduced:
        title += " (reduced)"
    table = Table(title, ("j", "group"), tuple(rows))
    return render_table(table, fmt)


def comparison_table(
    title: str,
    headers: Tuple[str, ...],
    rows: Sequence[Tuple[Cell, ...]],
) -> Table:
    """A table whose last column is a MATCH/MISMATCH verdict."""
    if headers[-1] != "verdict":
        raise ValueError("comparison tables end with a verdict column")
    return Table(title, headers, tuple(rows))


def verdict(computed: AbelianGroup, expected: Optional[AbelianGroup]) -> str:
    """MATCH/MISMATCH against a closed form, or a dash when none exists.

    >>> from stratahom.intlinalg import group
    >>> verdict(group(1), group(1)), verdict(group(1), group(2)), verdict(group(1), None)
    ('MATCH', 'MISMATCH', '-')
    """
    if expected is None:
        return "-"
    return "MATCH" if computed == expected else "MISMATCH"


def stabilization_table(report: StabilizationReport) -> Table:
    """The five-column stabilization table of a report.

    >>> from stratahom.stabilization import stability_report
    >>> t = stabilization_table(stability_report("empty", 4, "quotient"))
    >>> t.headers
    ('j', 'H_{j+2}(d+2)', 'H_j(d)', 'iso?', 'guaranteed?')
    >>> t.rows[1]
    (1, 'Z/2Z', 'Z/2Z', 'yes', 'yes')
    """
    rows = []
    for r in report.rows:
        iso = "yes" if r.isomorphic else "no"
        if r.induced_ok is not None:
            iso += " (induced ok)" if r.induced_ok else " (induced FAILED)"
        rows.append(
            (
                r.j,
                format_group(r.upper),
                format_group(r.lower),
                iso,
                "yes" if r.guaranteed else "no",
            )
        )
    title = (
        f"stabilization {report.family} variant={report.variant} "
        f"d={report.d}=>d+2={report.d + 2} psi={report.psi}"
    )
    return Table(title, ("j", "H_{j+2}(d+2)", "H_j(d)", "iso?", "guaranteed?"), tuple(rows))
