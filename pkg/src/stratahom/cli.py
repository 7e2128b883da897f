"""Command-line interface.

Every verb maps to one library operation and renders its result in one of
four formats (text, json, csv, markdown).  Output is deterministic: the
same argv always produces the same bytes.

Usage:
    stratahom cells --d 4 --space B          # cell inventory of B_4
    stratahom counts --d 5                   # generating polynomials
    stratahom poset --family disc --d 5      # realized family poset
    stratahom homology --space B --d 8 --family max-ge:3
    stratahom complement --space cB --d 6 --family disc
    stratahom discriminant --d 7             # computed vs closed form
    stratahom stabilize --family disc --d 6  # d => d+2 comparison
    stratahom table triple-root --dmax 13    # fixture reproduction
    stratahom --selftest                     # internal property suites

Exit codes: 0 on success, 2 on an argument error (unknown family,
parity mismatch, malformed pattern), 3 on an invariant violation or a
MISMATCH against a closed form.
"""

from __future__ import annotations

import functools
import json
import math
import os
import random
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import click

from .complexes import build, verify_anticommute
from .errors import InvariantViolation
from .intlinalg import AbelianGroup, group
from .patterns import Pattern, enumerate_cells
from .posets import (
    DISC,
    FULL,
    GENERATED,
    MAX_GE,
    SINGLE,
    SKELETON,
    eta,
    maximal_elements,
    parse_family,
    psi,
    realize_family,
)
from .reference import (
    single_pattern_reference,
    skeleton_reference,
    triple_root_reference,
)
from .render import (
    FORMATS,
    Table,
    format_group,
    profile_payload,
    render_profile,
    render_table,
    stabilization_table,
    verdict,
)
from .spaces import (
    HomologyProfile,
    cell_counts,
    cohomology_B_complement,
    cohomology_P_complement,
    discriminant_oracle,
    homology_B,
    reduced_homology_P,
    relative_homology_B,
    twisted_homology_B_complement,
)
from .stabilization import build_trunc, stability_report

__all__ = ["main"]


# ---------------------------------------------------------------------------
# shared plumbing


def _format_option(fn):
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(FORMATS),
        default="text",
        help="Output format.",
    )(fn)


def _threads_option(fn):
    return click.option(
        "--threads",
        type=int,
        default=None,
        help="Worker threads for independent rows (default: available cores).",
    )(fn)


def _guarded(fn):
    """Map domain errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InvariantViolation as exc:
            click.echo(f"invariant violation: {exc}", err=True)
            sys.exit(3)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _pmap(fn: Callable, items: Sequence, threads: Optional[int]) -> List:
    """Apply ``fn`` to ``items``, preserving input order regardless of scheduling."""
    items = list(items)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def _cache_dir() -> Optional[Path]:
    root = os.environ.get("STRATAHOM_CACHE")
    return Path(root) if root else None


def _profile_from_payload(data: dict) -> HomologyProfile:
    groups = {
        row["degree"]: AbelianGroup(row["rank"], tuple(row["torsion"]))
        for row in data["groups"]
    }
    return HomologyProfile(
        data["space"],
        data["d"],
        parse_family(data["family"]),
        data["variant"],
        data["reduced"],
        groups,
    )


def _cached_profile(key: str, compute: Callable[[], HomologyProfile]) -> HomologyProfile:
    """Memoize a profile under STRATAHOM_CACHE; recompute when unset."""
    root = _cache_dir()
    if root is None:
        return compute()
    root.mkdir(parents=True, exist_ok=True)
    path = root / (re.sub(r"[^A-Za-z0-9._=-]+", "_", key) + ".json")
    if path.exists():
        return _profile_from_payload(json.loads(path.read_text()))
    profile = compute()
    payload = dict(profile_payload(profile))
    payload["variant"] = profile.variant
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return profile


def _emit(text: str) -> None:
    click.echo(text, nl=False)


def _cell_sort_key(p: Pattern) -> Tuple:
    return (p.reduced_norm, p.parts, -1 if p.kappa is None else p.kappa)


# ---------------------------------------------------------------------------
# the command group


@click.group(invoke_without_command=True)
@click.option(
    "--selftest",
    is_flag=True,
    help="Run the internal property suites (boundary, anticommutation, Euler, truncation) and exit.",
)
@click.pass_context
def cli(ctx: click.Context, selftest: bool):
    """Integer homology of root-multiplicity strata, from the terminal.

    Spaces: B (projectivized binary forms), P (compactified monic
    polynomials), cB/cP (complements of a closed family), D (the
    discriminant hypersurface).  Families: full, empty, disc, all-real,
    max-ge:K, skeleton:Q, single:PARTS, gen:... (see `poset --help`).
    """
    if selftest:
        sys.exit(_selftest())
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())
        ctx.exit(0)


def main() -> None:
    cli(prog_name="stratahom")


# ---------------------------------------------------------------------------
# enumeration verbs


@cli.command()
@click.option("--d", type=int, required=True, help="Ambient degree.")
@click.option(
    "--space",
    type=click.Choice(["B", "P"]),
    default="B",
    help="B lists marked cells; P lists plain cells (basepoint omitted).",
)
@_format_option
@_guarded
def cells(d: int, space: str, fmt: str):
    """List every cell with its dimension, norm, and codimension."""
    patterns = sorted(enumerate_cells(d, space == "B"), key=_cell_sort_key)
    rows = tuple(
        (str(p) or "()", d - p.reduced_norm, p.norm, p.reduced_norm) for p in patterns
    )
    table = Table(
        f"cells of {space} d={d} ({len(rows)} cells)",
        ("pattern", "dim", "norm", "codim"),
        rows,
    )
    _emit(render_table(table, fmt))


@cli.command()
@click.option("--d", type=int, required=True, help="Ambient degree.")
@_format_option
@_guarded
def counts(d: int, fmt: str):
    """Cell-count generating polynomials of both spaces at degree d."""
    cc = cell_counts(d)
    rows = tuple(
        (
            name,
            ",".join(str(c) for c in poly.coeffs),
            str(poly),
            poly.evaluate(-1),
        )
        for name, poly in (("P", cc.P), ("B", cc.B))
    )
    table = Table(
        f"cell counts d={d}",
        ("space", "coefficients", "polynomial", "G(-1)"),
        rows,
    )
    _emit(render_table(table, fmt))


@cli.command()
@click.option("--family", required=True, help="Family spec, e.g. disc or max-ge:3.")
@click.option("--d", type=int, required=True, help="Realization degree.")
@click.option(
    "--space",
    type=click.Choice(["B", "P"]),
    default=None,
    help="Realize marked (B) or plain (P) cells; default follows the family.",
)
@_format_option
@_guarded
def poset(family: str, d: int, space: Optional[str], fmt: str):
    """Realize a closed family at one degree and list its members."""
    fam = parse_family(family)
    kind = {"B": "marked", "P": "plain", None: None}[space]
    P = realize_family(fam, d, kind)
    maximal = set(maximal_elements(P))
    rows = tuple(
        (
            str(p) or "()",
            d - p.reduced_norm,
            p.norm,
            p.reduced_norm,
            "yes" if p in maximal else "no",
        )
        for p in sorted(P, key=_cell_sort_key)
    )
    table = Table(
        f"poset {fam} d={d} kind={P.kind} size={len(rows)} eta={eta(P)} psi={psi(P)}",
        ("pattern", "dim", "norm", "codim", "maximal"),
        rows,
    )
    _emit(render_table(table, fmt))


# ---------------------------------------------------------------------------
# homology verbs


@cli.command()
@click.option(
    "--space",
    type=click.Choice(["B", "P", "D"]),
    default="B",
    help="B or P for a family stratum; D for the discriminant hypersurface. "
    "For complements use the complement verb.",
)
@click.option("--d", type=int, required=True, help="Ambient degree.")
@click.option("--family", default=None, help="Family spec; implied (disc) for D.")
@click.option("--reduced", is_flag=True, help="Reduced groups (P is always reduced).")
@_format_option
@_guarded
def homology(space: str, d: int, family: Optional[str], reduced: bool, fmt: str):
    """Integer homology of a closed family's union of strata.

    Examples:

        stratahom homology --space B --d 8 --family max-ge:3 --format json

        stratahom homology --space P --d 5 --family single:1,1,1
    """
    if space == "D":
        if family not in (None, "disc"):
            raise ValueError("--space D fixes the family to disc")
        family = "disc"
    elif family is None:
        raise ValueError("--family is required for spaces B and P")
    fam = parse_family(family)
    key = f"homology_{space}_d{d}_{fam}_red{int(reduced)}"
    if space == "P":
        profile = _cached_profile(key, lambda: reduced_homology_P(d, fam))
    else:
        profile = _cached_profile(key, lambda: homology_B(d, fam, reduced=reduced))
    _emit(render_profile(profile, fmt))


@cli.command()
@click.option(
    "--space",
    type=click.Choice(["cB", "cP"]),
    default="cB",
    help="Complement inside B (cohomology) or inside P (cohomology).",
)
@click.option("--d", type=int, required=True, help="Ambient degree.")
@click.option("--family", required=True, help="Closed family being removed.")
@click.option(
    "--variant",
    type=click.Choice(["standard", "twisted"]),
    default="standard",
    help="twisted: homology with orientation-sheaf coefficients (cB only).",
)
@_format_option
@_guarded
def complement(space: str, d: int, family: str, variant: str, fmt: str):
    """Cohomology of the complement of a closed family."""
    fam = parse_family(family)
    key = f"complement_{space}_d{d}_{fam}_{variant}"
    if space == "cP":
        if variant == "twisted":
            raise ValueError("twisted coefficients apply to cB only")
        profile = _cached_profile(key, lambda: cohomology_P_complement(d, fam))
    elif variant == "twisted":
        profile = _cached_profile(key, lambda: twisted_homology_B_complement(d, fam))
    else:
        profile = _cached_profile(key, lambda: cohomology_B_complement(d, fam))
    _emit(render_profile(profile, fmt))


@cli.command()
@click.option("--d", type=int, required=True, help="Ambient degree, at least 2.")
@_format_option
@_guarded
def discriminant(d: int, fmt: str):
    """Discriminant homology, absolute and relative, against closed forms."""
    computed = homology_B(d, DISC, reduced=True)
    oracle = discriminant_oracle(d)
    rows: List[Tuple] = []
    for j in range(d + 1):
        got, want = computed.group(j), oracle.group(j)
        if got or want:
            rows.append(
                ("H~_j(D)", j, format_group(got), format_group(want), verdict(got, want))
            )
    relative = relative_homology_B(d, DISC)
    expect = _relative_disc_closed_form(d)
    for j in range(d + 1):
        got, want = relative.group(j), expect.get(j, group(0))
        if got or want:
            rows.append(
                ("H_j(B,D)", j, format_group(got), format_group(want), verdict(got, want))
            )
    table = Table(
        f"discriminant d={d}",
        ("groups", "j", "computed", "expected", "verdict"),
        tuple(rows),
    )
    _emit(render_table(table, fmt))
    if any(row[-1] == "MISMATCH" for row in rows):
        click.echo("MISMATCH against the closed form", err=True)
        sys.exit(3)


def _relative_disc_closed_form(d: int) -> dict:
    if d % 2:
        return {d: group((d + 1) // 2), d - 1: group((d + 1) // 2)}
    return {d: group(1), d - 1: group(0, *([2] * (d // 2)))}


# ---------------------------------------------------------------------------
# stabilization


@cli.command()
@click.option("--family", required=True, help="Closed family spec.")
@click.option("--d", type=int, required=True, help="Lower degree of the d => d+2 pair.")
@click.option(
    "--variant",
    type=click.Choice(["proj", "poly", "proj-twisted", "quotient", "quotient-twisted"]),
    default="proj",
    help="Complex variant on both sides.",
)
@click.option(
    "--slow-induced-map",
    is_flag=True,
    help="Also certify surjectivity of the induced map on every guaranteed row.",
)
@_format_option
@_guarded
def stabilize(family: str, d: int, variant: str, slow_induced_map: bool, fmt: str):
    """Compare homology across the degree d => d+2 truncation."""
    report = stability_report(parse_family(family), d, variant, induced=slow_induced_map)
    _emit(render_table(stabilization_table(report), fmt))
    if not report.ok:
        bad = ",".join(str(j) for j in report.violations)
        click.echo(f"violation inside the guaranteed zone at j={bad}", err=True)
        sys.exit(3)


# ---------------------------------------------------------------------------
# fixture tables


@cli.command()
@click.argument(
    "name",
    type=click.Choice(["triple-root", "skeleton", "discriminant", "single-omega"]),
)
@click.option("--dmax", type=int, default=None, help="Largest degree (table default).")
@click.option("--q", type=int, default=2, help="Skeleton codimension (skeleton only).")
@_format_option
@_threads_option
@_guarded
def table(name: str, dmax: Optional[int], q: int, fmt: str, threads: Optional[int]):
    """Reproduce a reference table and report MATCH/MISMATCH per row.

    Examples:

        stratahom table triple-root --dmax 13

        stratahom table skeleton --q 2 --dmax 9

        stratahom table single-omega --dmax 13
    """
    builders = {
        "triple-root": (_triple_root_table, 13),
        "skeleton": (_skeleton_table, 11),
        "discriminant": (_discriminant_table, 10),
        "single-omega": (_single_omega_table, 13),
    }
    builder, default_dmax = builders[name]
    dmax = default_dmax if dmax is None else dmax
    if name == "skeleton":
        result = builder(dmax, threads, q)
    else:
        result = builder(dmax, threads)
    _emit(render_table(result, fmt))
    if any(row[-1] == "MISMATCH" for row in result.rows):
        click.echo("MISMATCH against the reference table", err=True)
        sys.exit(3)


def _profile_rows(
    label_of: Callable[[int], Tuple],
    computed: HomologyProfile,
    expected: Optional[dict],
) -> List[Tuple]:
    """Rows (label..., computed, expected, verdict) over nonzero degrees >= 1."""
    rows = []
    for j in range(1, computed.degree + 1):
        got = computed.group(j)
        want = None if expected is None else expected.get(j, group(0))
        if got or want:
            want_text = "-" if want is None else format_group(want)
            rows.append(label_of(j) + (format_group(got), want_text, verdict(got, want)))
    return rows


def _triple_root_table(dmax: int, threads: Optional[int]) -> Table:
    reference = triple_root_reference()
    degrees = list(range(3, dmax + 1))
    profiles = _pmap(lambda d: homology_B(d, MAX_GE(3)), degrees, threads)
    rows: List[Tuple] = []
    for d, profile in zip(degrees, profiles):
        expected = reference.get(d)
        rows.extend(_profile_rows(lambda j, d=d: (d, j), profile, expected))
    return Table(
        f"triple-root locus in B, d=3..{dmax}",
        ("d", "i", "computed", "expected", "verdict"),
        tuple(rows),
    )


def _skeleton_table(dmax: int, threads: Optional[int], q: int) -> Table:
    reference = skeleton_reference() if q == 2 else {}
    degrees = list(range(q + 2, dmax + 1))
    profiles = _pmap(lambda d: homology_B(d, SKELETON(q)), degrees, threads)
    rows: List[Tuple] = []
    for d, profile in zip(degrees, profiles):
        expected = reference.get(d)
        rows.extend(_profile_rows(lambda j, d=d: (d, j), profile, expected))
    return Table(
        f"codimension-{q} skeleton of B, d={q + 2}..{dmax}",
        ("d", "i", "computed", "expected", "verdict"),
        tuple(rows),
    )


def _discriminant_table(dmax: int, threads: Optional[int]) -> Table:
    degrees = list(range(3, dmax + 1))
    profiles = _pmap(lambda d: homology_B(d, DISC, reduced=True), degrees, threads)
    rows: List[Tuple] = []
    for d, profile in zip(degrees, profiles):
        expected = {j: g for j, g in discriminant_oracle(d).nonzero().items()}
        rows.extend(_profile_rows(lambda j, d=d: (d, j), profile, expected))
    return Table(
        f"discriminant in B, reduced, d=3..{dmax}",
        ("d", "i", "computed", "expected", "verdict"),
        tuple(rows),
    )


def _single_omega_table(dmax: int, threads: Optional[int]) -> Table:
    reference = single_pattern_reference()
    jobs = []
    for d in sorted(reference):
        if d > dmax:
            continue
        for pattern, degree in sorted(
            reference[d], key=lambda item: (item[0].reduced_norm, item[0].parts)
        ):
            jobs.append((d, pattern, degree))

    def run(job):
        d, pattern, degree = job
        profile = reduced_homology_P(d, SINGLE(pattern))
        nonzero = profile.nonzero()
        computed = (
            "; ".join(f"{j}: {format_group(g)}" for j, g in nonzero.items()) or "0"
        )
        ok = nonzero == {degree: group(1)}
        return (
            d,
            str(pattern),
            pattern.reduced_norm,
            degree,
            computed,
            "MATCH" if ok else "MISMATCH",
        )

    rows = tuple(_pmap(run, jobs, threads))
    return Table(
        f"single-composition closures in P, one sphere each, d<={dmax}",
        ("d", "omega", "codim", "degree", "computed", "verdict"),
        rows,
    )


# ---------------------------------------------------------------------------
# selftest


def _selftest() -> int:
    """Run the deterministic internal property suites.  Returns an exit code."""
    suites = (
        ("boundary squares to zero", _selftest_boundary),
        ("merge/insert anticommutation", _selftest_anticommute),
        ("Euler characteristics", _selftest_euler),
        ("truncation chain maps", _selftest_trunc),
    )
    failed = False
    for label, suite in suites:
        try:
            suite()
        except Exception as exc:
            click.echo(f"selftest {label}: FAIL ({exc})")
            failed = True
        else:
            click.echo(f"selftest {label}: PASS")
    click.echo("selftest: FAIL" if failed else "selftest: OK")
    return 3 if failed else 0


def _sample_realizations():
    rng = random.Random(2026)
    out = []
    for marked in (True, False):
        for _ in range(8):
            d = rng.choice([4, 5, 6, 7])
            cells_at_d = enumerate_cells(d, marked)
            gens = rng.sample(cells_at_d, rng.randint(1, 3))
            out.append(realize_family(GENERATED(gens), d, "marked" if marked else "plain"))
    return out


def _selftest_boundary() -> None:
    for P in _sample_realizations():
        variants = ("proj", "proj-twisted") if P.kind == "marked" else ("poly",)
        for variant in variants:
            build(P, variant)


def _selftest_anticommute() -> None:
    for P in _sample_realizations():
        if not verify_anticommute(P):
            raise InvariantViolation(f"anticommutation fails on {P}")


def _selftest_euler() -> None:
    for d in range(0, 11):
        cc = cell_counts(d)
        if cc.P.evaluate(-1) != 1 + (-1) ** d:
            raise InvariantViolation(f"P Euler value wrong at d={d}")
        if cc.B.evaluate(-1) != (1 + (-1) ** d) // 2:
            raise InvariantViolation(f"B Euler value wrong at d={d}")
        if d >= 1:
            lhs = cell_counts(d).B
            rhs = cell_counts(d - 1).B + cc.P
            want = tuple(rhs.coefficient(j) for j in range(d + 1))
            have = tuple(lhs.coefficient(j) for j in range(d + 1))
            # G(B_d) = G(B_{d-1}) + (G(P_d) - 1)
            if have != tuple(c - (1 if j == 0 else 0) for j, c in enumerate(want)):
                raise InvariantViolation(f"count recurrence fails at d={d}")


def _selftest_trunc() -> None:
    grid = (
        (FULL, "proj"),
        (FULL, "poly"),
        (DISC, "proj"),
        (DISC, "quotient"),
        (MAX_GE(3), "poly"),
        (SKELETON(2), "proj-twisted"),
    )
    for family, variant in grid:
        for d in (4, 5):
            build_trunc(family, d, variant)


if __name__ == "__main__":
    main()
