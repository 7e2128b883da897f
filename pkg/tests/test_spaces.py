"""Tests for the space-level homology operations and cell counting."""

import math

import pytest

from stratahom.intlinalg import group, parse_group
from stratahom.patterns import Pattern
from stratahom.posets import (
    ALL_REAL,
    DISC,
    EMPTY,
    FULL,
    MAX_GE,
    SINGLE,
    SKELETON,
    complement,
    realize_family,
)
from stratahom.reference import (
    single_pattern_reference,
    skeleton_reference,
    triple_root_reference,
)
from stratahom.spaces import (
    CellCounts,
    CountPolynomial,
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


# ---------------------------------------------------------------------------
# closed-form oracles, frozen before comparing against the complexes


def rp_homology(d):
    """Unreduced integer homology of d-dimensional real projective space."""
    out = {0: group(1)}
    for p in range(1, d, 2):
        out[p] = group(0, 2)
    if d % 2 == 1:
        out[d] = group(1)
    return out


def rp_cohomology(d):
    """Integer cohomology of d-dimensional real projective space."""
    out = {0: group(1)}
    for j in range(2, d + 1, 2):
        out[j] = group(0, 2)
    if d % 2 == 1:
        out[d] = group(1)
    return out


def relative_disc_expect(d):
    """Homology of the pair (ambient space, degenerate locus)."""
    if d % 2 == 1:
        return {d: group((d + 1) // 2), d - 1: group((d + 1) // 2)}
    return {d: group(1), d - 1: group(0, *([2] * (d // 2)))}


def compositions_with_parts(n, m):
    """Number of compositions of n into exactly m parts, all at least 1."""
    if n == 0 and m == 0:
        return 1
    if n < 1 or m < 1 or m > n:
        return 0
    return math.comb(n - 1, m - 1)


def count_by_dimension(d, j):
    """Dimension-j cell count of the compactified polynomial space, j >= 1.

    A dimension-j cell is a composition of some d' <= d with d - d' even
    and j - (d - d') parts.
    """
    total = 0
    for dp in range(d, max(d - j, 0) - 1, -2):
        total += compositions_with_parts(dp, j - (d - dp))
    return total


# ---------------------------------------------------------------------------
# profile container


class TestHomologyProfile:
    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            HomologyProfile("B", 2, FULL, "proj", False, {3: group(1)})

    def test_fills_all_degrees(self):
        prof = HomologyProfile("B", 3, FULL, "proj", False, {1: group(1)})
        assert sorted(prof.groups) == [0, 1, 2, 3]
        assert prof.group(0) == group()
        assert prof.group(1) == group(1)
        assert prof.group(-1) == group()
        assert prof.group(99) == group()

    def test_nonzero_sorted(self):
        prof = HomologyProfile(
            "B", 4, FULL, "proj", False, {3: group(1), 1: group(0, 2)}
        )
        assert list(prof.nonzero()) == [1, 3]
        assert prof.total_rank() == 1

    def test_equality_includes_metadata(self):
        a = homology_B(3, FULL)
        b = homology_B(3, FULL)
        assert a == b
        assert a != reduced_homology_P(3, FULL)
        assert a != "not a profile"

    def test_repr_mentions_family_and_groups(self):
        text = repr(homology_B(2, DISC))
        assert "d=2" in text and "disc" in text


# ---------------------------------------------------------------------------
# homology of the projectivized family spaces


class TestHomologyB:
    @pytest.mark.parametrize("d", range(0, 10))
    def test_full_family_is_projective_space(self, d):
        assert homology_B(d, FULL).nonzero() == rp_homology(d)

    def test_metadata(self):
        prof = homology_B(4, DISC)
        assert prof.space == "B"
        assert prof.variant == "proj"
        assert not prof.reduced
        assert homology_B(4, DISC, reduced=True).reduced

    def test_family_accepts_strings(self):
        assert homology_B(4, "disc") == homology_B(4, DISC)
        assert homology_B(6, "skeleton:2") == homology_B(6, SKELETON(2))

    def test_reduced_strips_one_z_in_degree_zero(self):
        plain = homology_B(5, DISC)
        red = homology_B(5, DISC, reduced=True)
        assert plain.group(0).rank == red.group(0).rank + 1
        assert all(plain.group(j) == red.group(j) for j in range(1, 6))

    def test_reduced_of_empty_family_is_zero(self):
        assert homology_B(4, EMPTY, reduced=True).nonzero() == {}

    def test_codim_two_skeleton_example(self):
        expect = {0: group(1), 1: group(0, 2), 3: group(0, 2), 4: group(8)}
        assert homology_B(6, SKELETON(2)).nonzero() == expect

    @pytest.mark.parametrize("d", sorted(triple_root_reference()))
    def test_triple_root_family_matches_reference(self, d):
        if d > 9:
            pytest.skip("large degrees exercised by the acceptance suite")
        prof = homology_B(d, MAX_GE(3), reduced=True)
        assert prof.nonzero() == triple_root_reference()[d]

    def test_triple_root_reference_has_order_four_torsion(self):
        assert triple_root_reference()[8][4] == group(0, 4)

    @pytest.mark.parametrize("d", range(4, 8))
    def test_skeleton_family_matches_reference(self, d):
        expect = dict(skeleton_reference()[d])
        expect[0] = group(1)
        assert homology_B(d, SKELETON(2)).nonzero() == expect


class TestReducedHomologyP:
    @pytest.mark.parametrize("d", range(0, 8))
    def test_full_family_is_a_sphere(self, d):
        assert reduced_homology_P(d, FULL).nonzero() == {d: group(1)}

    def test_metadata(self):
        prof = reduced_homology_P(3, DISC)
        assert prof.space == "P"
        assert prof.variant == "poly"
        assert prof.reduced

    @pytest.mark.parametrize("d", range(2, 7))
    def test_all_simple_roots_closure_is_contractible(self, d):
        # needs d >= 2: the root-ordering chamber is then a half-space,
        # whose one-point compactification is a disc
        prof = reduced_homology_P(d, SINGLE(Pattern.plain(*(1,) * d)))
        assert prof.nonzero() == {}

    def test_single_simple_root_in_degree_one_is_a_circle(self):
        prof = reduced_homology_P(1, SINGLE(Pattern.plain(1)))
        assert prof.nonzero() == {1: group(1)}

    def test_single_pattern_reference_rows(self):
        table = single_pattern_reference()
        for d in range(4, 8):
            for w, i in table[d]:
                prof = reduced_homology_P(d, SINGLE(w))
                assert prof.nonzero() == {i: group(1)}, (d, w)


# ---------------------------------------------------------------------------
# discriminant


class TestDiscriminant:
    def test_oracle_small_degrees(self):
        assert discriminant_oracle(3).nonzero() == {1: group(2), 2: group(1)}
        assert discriminant_oracle(4).nonzero() == {
            1: group(0, 2),
            2: group(0, 2),
            3: group(1),
        }

    def test_oracle_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            discriminant_oracle(0)

    @pytest.mark.parametrize("d", range(3, 9))
    def test_computed_discriminant_matches_oracle(self, d):
        prof = homology_B(d, DISC, reduced=True)
        assert prof.nonzero() == discriminant_oracle(d).nonzero()

    @pytest.mark.parametrize("d", range(3, 9))
    def test_relative_pair_closed_form(self, d):
        assert relative_homology_B(d, DISC).nonzero() == relative_disc_expect(d)

    def test_relative_metadata(self):
        prof = relative_homology_B(4, DISC)
        assert prof.space == "B-rel"
        assert prof.variant == "quotient"
        assert not prof.reduced


# ---------------------------------------------------------------------------
# complements


class TestComplementCohomology:
    @pytest.mark.parametrize("d", range(0, 10))
    def test_empty_family_gives_projective_space(self, d):
        assert cohomology_B_complement(d, EMPTY).nonzero() == rp_cohomology(d)

    @pytest.mark.parametrize("d", range(0, 10))
    def test_empty_family_twisted_profile(self, d):
        expect = {d - j: g for j, g in rp_cohomology(d).items()}
        assert twisted_homology_B_complement(d, EMPTY).nonzero() == expect

    @pytest.mark.parametrize("d", range(2, 9))
    def test_discriminant_complement_ranks(self, d):
        prof = cohomology_B_complement(d, DISC)
        expect = {0: group(d // 2 + 1)}
        h1 = (d + 1) // 2 if d % 2 else d // 2
        if h1:
            expect[1] = group(h1)
        assert prof.nonzero() == expect

    def test_twisted_discriminant_complement_pin(self):
        prof = twisted_homology_B_complement(4, DISC)
        assert prof.nonzero() == {0: group(1, 2, 2)}

    def test_variant_tracks_parity(self):
        assert cohomology_B_complement(4, DISC).variant == "quotient-twisted"
        assert cohomology_B_complement(5, DISC).variant == "quotient"
        assert twisted_homology_B_complement(4, DISC).variant == "quotient-dual"
        assert twisted_homology_B_complement(5, DISC).variant == "quotient-dual"

    def test_polynomial_complement_of_empty_family(self):
        assert cohomology_P_complement(3, EMPTY).nonzero() == {0: group(1)}

    def test_polynomial_complement_of_full_family_is_empty(self):
        assert cohomology_P_complement(4, FULL).nonzero() == {}

    @pytest.mark.parametrize(
        "d, k, degrees",
        [(6, 3, {0, 1, 2}), (7, 3, {0, 1, 2}), (8, 4, {0, 2, 4}), (5, 5, {0, 3})],
    )
    def test_high_multiplicity_complements_are_free(self, d, k, degrees):
        prof = cohomology_P_complement(d, MAX_GE(k))
        assert prof.nonzero() == {j: group(1) for j in sorted(degrees)}


def _families_at(d):
    fams = [FULL, EMPTY, DISC, ALL_REAL, MAX_GE(3), SKELETON(2)]
    if d % 2 == 0:
        fams.append(SINGLE(Pattern.plain(2)))
        if d >= 4:
            fams.append(SINGLE(Pattern.plain(1, 2, 1)))
    else:
        if d >= 3:
            fams.extend([SINGLE(Pattern.plain(3)), SINGLE(Pattern.plain(1, 1, 1))])
    return fams


def _reduced_complement_groups(d, family):
    prof = cohomology_P_complement(d, family)
    out = dict(prof.groups)
    if not complement(realize_family(family, d, "plain")).is_empty:
        out[0] = group(out[0].rank - 1, *out[0].torsion)
    return out


class TestDualityProperties:
    @pytest.mark.parametrize("d", range(2, 9))
    def test_complement_mirrors_compactified_stratum(self, d):
        for family in _families_at(d):
            reduced = _reduced_complement_groups(d, family)
            stratum = reduced_homology_P(d, family)
            for j in range(d + 1):
                assert reduced[j] == stratum.group(d - j - 1), (family, j)

    @pytest.mark.parametrize("q", [2, 3])
    def test_skeleton_complement_is_a_bouquet(self, q):
        for d in range(q + 1, 9):
            reduced = _reduced_complement_groups(d, SKELETON(q))
            stratum = reduced_homology_P(d, SKELETON(q))
            rank = abs(
                sum((-1) ** j * g.rank for j, g in stratum.groups.items())
            )
            expect = {q - 1: group(rank)} if rank else {}
            assert {j: g for j, g in reduced.items() if g} == expect, d


# ---------------------------------------------------------------------------
# cell counting


class TestCountPolynomial:
    def test_validation(self):
        with pytest.raises(ValueError):
            CountPolynomial(())
        with pytest.raises(ValueError):
            CountPolynomial((1, -1))
        with pytest.raises(ValueError):
            CountPolynomial((1, 2.5))

    def test_degree_ignores_trailing_zeros(self):
        assert CountPolynomial((1, 0, 0)).degree == 0
        assert CountPolynomial((0, 0, 3)).degree == 2

    def test_coefficient_out_of_range_is_zero(self):
        p = CountPolynomial((1, 2))
        assert p.coefficient(5) == 0
        assert p.coefficient(-1) == 0

    def test_add_and_shift(self):
        p = CountPolynomial((1, 2)) + CountPolynomial((0, 1, 4))
        assert p.coeffs == (1, 3, 4)
        assert CountPolynomial((1, 2)).shift(2).coeffs == (0, 0, 1, 2)

    def test_str(self):
        assert str(CountPolynomial((1, 1, 3))) == "1 + t + 3t^2"
        assert str(CountPolynomial((0, 2))) == "2t"

    def test_evaluate(self):
        assert CountPolynomial((1, 2, 2)).evaluate(-1) == 1
        assert CountPolynomial((1, 2, 2)).evaluate(10) == 221


VERBATIM_B = {
    0: (1,),
    1: (1, 1),
    2: (1, 2, 2),
    3: (1, 3, 4, 2),
    4: (1, 4, 7, 6, 3),
    5: (1, 5, 11, 13, 9, 3),
}


class TestCellCounts:
    def test_returns_named_pair(self):
        counts = cell_counts(4)
        assert isinstance(counts, CellCounts)
        assert counts.P.coeffs == (1, 1, 3, 4, 3)

    @pytest.mark.parametrize("d, coeffs", sorted(VERBATIM_B.items()))
    def test_projectivized_counts_verbatim(self, d, coeffs):
        assert cell_counts(d).B.coeffs == coeffs

    def test_degree_zero_sphere_has_two_cells(self):
        assert cell_counts(0).P.coeffs == (2,)

    @pytest.mark.parametrize("d", range(1, 15))
    def test_recurrence(self, d):
        b, prev, p = cell_counts(d).B, cell_counts(d - 1).B, cell_counts(d).P
        for j in range(d + 1):
            drop = 1 if j == 0 else 0
            assert b.coefficient(j) == prev.coefficient(j) + p.coefficient(j) - drop

    @pytest.mark.parametrize("d", range(1, 15))
    def test_odd_even_shift_identity(self, d):
        p, prev = cell_counts(d).P, cell_counts(d - 1).B
        expect = CountPolynomial((1,)) + prev.shift(1)
        if d % 2 == 0:
            expect = expect + CountPolynomial((0,) * d + (1,))
        assert p.coeffs[: d + 1] == expect.coeffs[: d + 1]

    @pytest.mark.parametrize("d", range(0, 15))
    def test_euler_values(self, d):
        assert cell_counts(d).P.evaluate(-1) == 1 + (-1) ** d
        assert cell_counts(d).B.evaluate(-1) == (1 + (-1) ** d) // 2

    @pytest.mark.parametrize("d", range(1, 15))
    def test_composition_counting_formula(self, d):
        p = cell_counts(d).P
        assert p.coefficient(0) == 1
        for j in range(1, d + 1):
            assert p.coefficient(j) == count_by_dimension(d, j), j
        assert p.coefficient(d) == d // 2 + 1

    @pytest.mark.parametrize("d", range(1, 15))
    def test_binomial_form_away_from_top_even_degree(self, d):
        p = cell_counts(d).P
        for j in range(1, d + 1):
            if d % 2 == 0 and j == d:
                continue
            top = min((j - 1) // 2, (d - 1) // 2)
            total = sum(math.comb(d - 1 - 2 * k, j - 1 - 2 * k) for k in range(top + 1))
            assert p.coefficient(j) == total, j


# ---------------------------------------------------------------------------
# reference table loaders


class TestReferenceTables:
    def test_triple_root_round_trip(self):
        table = triple_root_reference()
        assert sorted(table) == list(range(3, 14))
        assert table[3] == {1: group(1)}
        assert table[13][8] == parse_group("Z (+) Z/4")

    def test_skeleton_round_trip(self):
        table = skeleton_reference()
        assert sorted(table) == list(range(4, 12))
        tops = {d: table[d][d - 2].rank for d in table}
        assert tops == {4: 3, 5: 7, 6: 8, 7: 13, 8: 15, 9: 21, 10: 24, 11: 31}

    def test_single_pattern_round_trip(self):
        table = single_pattern_reference()
        assert sorted(table) == list(range(4, 14))
        assert all(1 <= i <= d for d in table for _, i in table[d])
        full_multiplicity = {d: i for d in table for w, i in table[d] if w.parts == (d,)}
        assert full_multiplicity == {d: 1 for d in range(4, 14)}
