"""Tests for the graded differential complexes and their homology."""

import pytest
from hypothesis import given, settings, strategies as st

from stratahom.complexes import (
    FormalSum,
    boundary,
    boundary_polynomial,
    boundary_projective,
    build,
    dualize,
    dump_lines,
    homology_all,
    homology_at,
    verify_anticommute,
)
from stratahom.errors import InvariantViolation
from stratahom.intlinalg import AbelianGroup, group
from stratahom.patterns import Pattern, enumerate_cells, parse_pattern
from stratahom.posets import DISC, EMPTY, FULL, Realization, close, realize_family


def pat(text):
    return parse_pattern(text)


# ---------------------------------------------------------------------------
# formal sums


def test_formal_sum_collects_and_drops_zeros():
    a = Pattern.plain(2)
    b = Pattern.plain(1, 1)
    s = FormalSum([(a, 1), (a, 2), (b, 1), (b, -1)])
    assert s.terms == {a: 3}
    assert bool(s)
    assert not FormalSum()
    assert FormalSum([(a, 1), (a, -1)]) == FormalSum()


def test_formal_sum_repr_is_sorted_and_signed():
    s = FormalSum([(Pattern.plain(2, 1), 1), (Pattern.plain(1, 2), -1)])
    assert repr(s) == "-(1,2) +(2,1)"
    assert repr(FormalSum()) == "0"


# ---------------------------------------------------------------------------
# boundary values


def test_polynomial_boundary_of_triple_point():
    # merges only: inserting would overshoot the ambient degree
    w = Pattern.plain(1, 1, 1)
    assert repr(boundary_polynomial(w, 3)) == "-(1,2) +(2,1)"


def test_polynomial_boundary_merge_and_insert_mix():
    w = Pattern.plain(1, 1, 1)
    assert repr(boundary_polynomial(w, 5)) == (
        "-(1,2) +(2,1) -(1,1,1,2) +(1,1,2,1) -(1,2,1,1) +(2,1,1,1)"
    )


def test_polynomial_boundary_cancels_on_single_part():
    # the two insertions around a lone part coincide and cancel
    assert not boundary_polynomial(Pattern.plain(2), 4)
    assert not boundary_polynomial(Pattern.plain(4), 4)


def test_projective_boundary_literals():
    assert repr(boundary_projective(pat("1,1|0"), 2)) == "-2*(1|1) +(2|0)"
    assert not boundary_projective(pat("()|2"), 2)
    assert not boundary_projective(pat("2|1"), 3)


def test_projective_twisted_boundary_flips_last_escape():
    # odd last part: the two coincident escape terms cancel instead of adding
    assert repr(boundary_projective(pat("1,1|0"), 2, twisted=True)) == "(2|0)"
    w = pat("2,1|1")
    assert repr(boundary_projective(w, 4)) == "-(1|3) -(2|2) +(3|1)"
    assert repr(boundary_projective(w, 4, twisted=True)) == "-(1|3) +(2|2) +(3|1)"


def test_boundary_dispatch():
    w = pat("1,1|1")
    assert boundary(w, 3, "proj") == boundary_projective(w, 3)
    assert boundary(w, 3, "quotient") == boundary_projective(w, 3)
    assert boundary(w, 3, "proj-twisted") == boundary_projective(w, 3, twisted=True)
    assert boundary(w, 3, "quotient-twisted") == boundary_projective(w, 3, twisted=True)
    assert boundary(Pattern.plain(1), 3, "poly") == boundary_polynomial(Pattern.plain(1), 3)
    with pytest.raises(ValueError):
        boundary(Pattern.plain(1), 3, "nope")


def test_boundary_rejects_wrong_kind_and_non_cells():
    with pytest.raises(ValueError):
        boundary_polynomial(pat("1,1|0"), 2)
    with pytest.raises(ValueError):
        boundary_projective(Pattern.plain(2), 2)
    with pytest.raises(ValueError):
        boundary_polynomial(Pattern.plain(3), 2)
    with pytest.raises(ValueError):
        boundary_projective(pat("3|0"), 1)


# ---------------------------------------------------------------------------
# building complexes


def test_build_single_generator_complex_and_dump():
    P = close([Pattern.plain(2)], 4, "plain")
    C = build(P, "poly")
    assert C.grades == [1, 2, 3]
    assert [len(C.basis(j)) for j in (1, 2, 3)] == [1, 1, 1]
    assert dump_lines(C) == ["2: 4 <- 2,2 : 1"]
    assert str(homology_at(C, 3)) == "Z"
    assert homology_at(C, 2).is_zero and homology_at(C, 1).is_zero


def test_dualize_round_trip_and_dump():
    P = close([Pattern.plain(2)], 4, "plain")
    C = build(P, "poly")
    D = dualize(C)
    assert D.dual and D.direction == 1
    assert dump_lines(D) == ["1: 2,2 <- 4 : 1"]
    assert dualize(D) == C
    assert str(homology_at(D, 3)) == "Z"
    assert homology_at(D, 1).is_zero and homology_at(D, 2).is_zero


def test_build_rejects_bad_inputs():
    P = close([Pattern.plain(2)], 4, "plain")
    with pytest.raises(ValueError):
        build(P, "proj")
    with pytest.raises(ValueError):
        build(P, "nope")
    broken = Realization("plain", 4, [Pattern.plain(2, 2)])
    with pytest.raises(InvariantViolation):
        build(broken, "poly")


def test_build_is_cached():
    P = realize_family(DISC, 5)
    assert build(P, "proj") is build(P, "proj")


def test_empty_family_gives_zero_complex():
    C = build(realize_family(EMPTY, 3), "proj")
    assert C.total_cells() == 0
    assert C.euler_characteristic() == 0
    assert homology_all(C) == {j: AbelianGroup() for j in range(4)}


def test_differential_entries_respect_grading():
    C = build(realize_family(FULL, 6), "proj")
    assert C.mats
    for j, mat in C.mats.items():
        src, tgt = C.basis(j), C.basis(j - 1)
        for (r, c), v in mat.entries.items():
            assert v != 0
            assert tgt[r].reduced_norm == src[c].reduced_norm + 1
            assert tgt[r].norm - src[c].norm in (0, 2)


# ---------------------------------------------------------------------------
# homology of the ambient spaces


def rp_expect(d):
    out = {}
    for p in range(d + 1):
        if p == 0 or (p == d and d % 2):
            out[p] = group(1)
        elif p % 2 and p < d:
            out[p] = group(0, 2)
        else:
            out[p] = group(0)
    return out


def rp_twisted_expect(d):
    out = {}
    for p in range(d + 1):
        if p == d and d % 2 == 0:
            out[p] = group(1)
        elif p % 2 == 0 and p < d:
            out[p] = group(0, 2)
        else:
            out[p] = group(0)
    return out


@pytest.mark.parametrize("d", range(0, 7))
def test_projective_space_homology(d):
    C = build(realize_family(FULL, d), "proj")
    assert homology_all(C) == rp_expect(d)


@pytest.mark.parametrize("d", range(0, 7))
def test_projective_space_twisted_homology(d):
    C = build(realize_family(FULL, d), "proj-twisted")
    assert homology_all(C) == rp_twisted_expect(d)


@pytest.mark.parametrize("d", range(0, 7))
def test_sphere_reduced_homology(d):
    C = build(realize_family(FULL, d, "plain"), "poly")
    H = homology_all(C)
    assert H[d] == group(1)
    assert all(H[j].is_zero for j in range(d))


@pytest.mark.parametrize("d", range(0, 9))
def test_euler_characteristics(d):
    proj = build(realize_family(FULL, d), "proj")
    assert proj.euler_characteristic() == (1 + (-1) ** d) // 2
    poly = build(realize_family(FULL, d, "plain"), "poly")
    assert poly.euler_characteristic() == (-1) ** d


def test_homology_at_range_checked():
    C = build(realize_family(FULL, 3), "proj")
    with pytest.raises(ValueError):
        homology_at(C, -1)
    with pytest.raises(ValueError):
        homology_at(C, 4)


@pytest.mark.parametrize("variant", ("proj", "proj-twisted", "quotient"))
def test_homology_all_agrees_with_homology_at(variant):
    C = build(realize_family(DISC, 5), variant)
    H = homology_all(C)
    assert H == {j: homology_at(C, j) for j in range(6)}


# ---------------------------------------------------------------------------
# quotient complexes: relative homology and the complement recipes


def rel_disc_expect(d):
    out = {j: group(0) for j in range(d + 1)}
    if d % 2:
        out[d] = group((d + 1) // 2)
        out[d - 1] = group((d + 1) // 2)
    else:
        out[d] = group(1)
        out[d - 1] = group(0, *([2] * (d // 2)))
    return out


@pytest.mark.parametrize("d", range(3, 9))
def test_relative_homology_mod_discriminant(d):
    C = build(realize_family(DISC, d), "quotient")
    assert C.quotient
    assert homology_all(C) == rel_disc_expect(d)


@pytest.mark.parametrize("d", range(2, 11))
def test_complement_cohomology_of_discriminant(d):
    # orientation-aware duality: twist the quotient in even ambient degree
    variant = "quotient-twisted" if d % 2 == 0 else "quotient"
    C = build(realize_family(DISC, d), variant)
    coh = {d - j: g for j, g in homology_all(C).items()}
    assert coh[0] == group(d // 2 + 1)
    assert coh[1] == group((d + 1) // 2 if d % 2 else d // 2)
    assert all(coh[j].is_zero for j in range(2, d + 1))


def test_complement_twisted_homology_small_even_case():
    C = dualize(build(realize_family(DISC, 4), "quotient"))
    tw = {4 - j: g for j, g in homology_all(C).items()}
    assert tw[0] == group(1, 2, 2)
    assert all(tw[j].is_zero for j in range(1, 5))


# ---------------------------------------------------------------------------
# structural checks


@pytest.mark.parametrize("d", (2, 3, 4, 5))
def test_merge_and_insert_parts_anticommute(d):
    assert verify_anticommute(realize_family(FULL, d))
    assert verify_anticommute(realize_family(FULL, d), twisted=True)
    assert verify_anticommute(realize_family(FULL, d, "plain"))
    assert verify_anticommute(realize_family(DISC, d))


def test_verify_anticommute_checks_degree():
    P = realize_family(FULL, 3)
    assert verify_anticommute(P, 3)
    with pytest.raises(ValueError):
        verify_anticommute(P, 5)


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_random_closed_poset_euler_matches_homology(data):
    d = data.draw(st.integers(min_value=2, max_value=6))
    marked = data.draw(st.booleans())
    cells = list(enumerate_cells(d, marked))
    gens = data.draw(st.lists(st.sampled_from(cells), min_size=1, max_size=3))
    P = close(gens, d, "marked" if marked else "plain")
    C = build(P, "proj" if marked else "poly")
    H = homology_all(C)
    assert C.euler_characteristic() == sum((-1) ** j * g.rank for j, g in H.items())


@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_random_quotient_euler_matches_homology(data):
    d = data.draw(st.integers(min_value=2, max_value=5))
    cells = list(enumerate_cells(d, True))
    gens = data.draw(st.lists(st.sampled_from(cells), min_size=1, max_size=2))
    P = close(gens, d, "marked")
    C = build(P, "quotient")
    H = homology_all(C)
    assert C.euler_characteristic() == sum((-1) ** j * g.rank for j, g in H.items())
