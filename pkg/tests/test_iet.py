"""
Permutations, interval exchanges, Rauzy-Veech induction and strata.
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iet.errors import ConnectionDetected, DiscontinuityHit, ReduciblePermutation
from iet.induction import StepType, rauzy_step, zorich_move, zorich_step
from iet.permutation import Permutation
from iet.stratum import genus_and_stratum, stratum_name, twisted_cohomology_dimension
from iet.transformation import IET, apply_iet, make_iet, normalize


class TestPermutation:
    """Test permutation parsing and invariants."""

    def test_from_text_round_trip(self):
        """Text with a slash separator parses to the symmetric permutation."""
        p = Permutation.from_text("A B C D / D C B A")
        assert p == Permutation.symmetric(4)
        assert Permutation.from_text(p.to_text()) == p

    def test_from_text_rejects_mismatched_rows(self):
        """Rows over different letters are rejected."""
        with pytest.raises(ValueError):
            Permutation.from_text("A B / A C")

    def test_irreducibility(self):
        """Symmetric permutations are irreducible, the identity is not."""
        assert Permutation.symmetric(5).is_irreducible()
        assert not Permutation.identity(3).is_irreducible()
        assert not Permutation.from_text("A B C / B A C").is_irreducible()

    def test_intersection_matrix_antisymmetric(self):
        """Omega is an antisymmetric integer matrix."""
        omega = Permutation.symmetric(5).intersection_matrix()
        assert omega.dtype == np.int64
        np.testing.assert_array_equal(omega, -omega.T)

    def test_intersection_rank_is_twice_genus(self):
        """rank Omega = 2g for the H(2) and H(1,1) representatives."""
        for d in (4, 5):
            p = Permutation.symmetric(d)
            genus, _ = genus_and_stratum(p)
            assert np.linalg.matrix_rank(p.intersection_matrix()) == 2 * genus

    def test_canonical_suspension(self):
        """tau_a = bottom position minus top position."""
        np.testing.assert_array_equal(Permutation.symmetric(4).canonical_suspension(), [3.0, 1.0, -1.0, -3.0])


class TestStratum:
    """Test genus and stratum identification."""

    @pytest.mark.parametrize("d, genus, kappa", [
        (2, 1, ()),
        (4, 2, (2,)),
        (5, 2, (1, 1)),
    ])
    def test_symmetric_strata(self, d, genus, kappa):
        """Symmetric permutations land in the torus, H(2) and H(1,1)."""
        assert genus_and_stratum(Permutation.symmetric(d)) == (genus, kappa)

    def test_stratum_name(self):
        """Names list the zero orders."""
        assert stratum_name((2,)) == "H(2)"
        assert stratum_name((1, 1)) == "H(1,1)"
        assert stratum_name(()) == "H(0)"

    def test_twisted_cohomology_dimension(self):
        """2g at integral classes, 2g - 2 otherwise."""
        assert twisted_cohomology_dimension(2, True) == 4
        assert twisted_cohomology_dimension(2, False) == 2


class TestApplyIET:
    """Test the exchange map itself."""

    def test_rotation(self):
        """The 2-letter symmetric exchange is a rotation."""
        iet = make_iet(Permutation.symmetric(2), (0.3, 0.7))
        assert apply_iet(iet, 0.1) == pytest.approx(0.8)
        assert apply_iet(iet, 0.5) == pytest.approx(0.2)

    def test_discontinuity_hit(self):
        """Points on an interior breakpoint are rejected."""
        iet = make_iet(Permutation.symmetric(2), (0.3, 0.7))
        with pytest.raises(DiscontinuityHit):
            apply_iet(iet, 0.3)

    def test_outside_interval(self):
        """Points outside [0, total) are rejected."""
        iet = make_iet(Permutation.symmetric(2), (0.3, 0.7))
        with pytest.raises(ValueError):
            apply_iet(iet, 1.0)

    def test_invalid_lengths(self):
        """Non-positive lengths are rejected."""
        with pytest.raises(ValueError):
            make_iet(Permutation.symmetric(2), (0.0, 1.0))

    @given(x=st.floats(min_value=0.0, max_value=0.999))
    @settings(max_examples=100, deadline=None)
    def test_image_stays_in_interval(self, x):
        """Images of points stay inside the interval."""
        iet = make_iet(Permutation.symmetric(4), (0.11, 0.29, 0.37, 0.23))
        try:
            y = apply_iet(iet, x)
        except DiscontinuityHit:
            return
        assert 0.0 <= y < iet.total_length + 1e-12

    def test_images_tile_interval(self, h2_permutation):
        """Top intervals land on bottom intervals, which tile [0, total) without overlap."""
        rng = np.random.default_rng(13)
        iet = make_iet(h2_permutation, rng.dirichlet(np.ones(4)))
        tops, bottoms = iet.top_starts(), iet.bottom_starts()
        eps = 1e-9
        pieces = []
        for a, length in enumerate(iet.lengths):
            left = apply_iet(iet, tops[a] + eps) - eps
            right = apply_iet(iet, tops[a] + length - eps) + eps
            assert left == pytest.approx(bottoms[a], abs=1e-12)
            assert right == pytest.approx(bottoms[a] + length, abs=1e-12)
            pieces.append((left, right))
        pieces.sort()
        assert pieces[0][0] == pytest.approx(0.0, abs=1e-12)
        assert pieces[-1][1] == pytest.approx(iet.total_length, abs=1e-12)
        for (_, end), (start, _) in zip(pieces[:-1], pieces[1:]):
            assert start == pytest.approx(end, abs=1e-12)

    def test_bijection(self, h11_permutation):
        """Exchanging bottom back to top undoes the map."""
        rng = np.random.default_rng(14)
        p = h11_permutation
        iet = make_iet(p, rng.dirichlet(np.ones(5)))
        inverse = make_iet(Permutation(top=p.bottom, bottom=p.top), iet.lengths)
        for x in rng.uniform(0.0, iet.total_length, 2000):
            assert apply_iet(inverse, apply_iet(iet, x)) == pytest.approx(x, abs=1e-12)

    def test_normalize_records_log_scale(self):
        """normalize rescales to length 1 and records -log of the factor."""
        iet = normalize(make_iet(Permutation.symmetric(2), (1.0, 3.0)))
        assert iet.total_length == pytest.approx(1.0)
        assert iet.log_scale == pytest.approx(-math.log(4.0))

    def test_json_round_trip(self):
        """IETs survive JSON serialization."""
        iet = IET(Permutation.symmetric(3), (0.1, 0.2, 0.7), log_scale=1.5)
        assert IET.from_json(iet.to_json()) == iet


class TestRauzyStep:
    """Test single Rauzy-Veech steps."""

    def test_top_step(self):
        """Longer top-last letter wins and absorbs the loser."""
        iet = make_iet(Permutation.symmetric(2), (0.3, 0.7))
        induced, step = rauzy_step(iet)
        assert step.step_type is StepType.TOP
        assert (step.winner, step.loser) == (1, 0)
        assert induced.lengths == pytest.approx((0.3, 0.4))
        np.testing.assert_allclose(step.elementary_matrix @ induced.array, iet.array)

    def test_bottom_step(self):
        """Longer bottom-last letter wins: (0.7, 0.3) becomes (0.4, 0.3)."""
        iet = make_iet(Permutation.symmetric(2), (0.7, 0.3))
        induced, step = rauzy_step(iet)
        assert step.step_type is StepType.BOTTOM
        assert (step.winner, step.loser) == (0, 1)
        assert induced.lengths == pytest.approx((0.4, 0.3))

    def test_induced_map_is_first_return(self, h2_permutation):
        """The induced exchange is the first return map to the shorter interval."""
        rng = np.random.default_rng(42)
        iet = make_iet(h2_permutation, rng.dirichlet(np.ones(4)))
        induced, _ = rauzy_step(iet)
        for x in rng.uniform(0.0, induced.total_length, 1000):
            y = apply_iet(iet, x)
            while y >= induced.total_length:
                y = apply_iet(iet, y)
            assert y == pytest.approx(apply_iet(induced, x), abs=1e-12)

    def test_tie_is_connection(self):
        """Equal last lengths signal a saddle connection."""
        with pytest.raises(ConnectionDetected):
            rauzy_step(make_iet(Permutation.symmetric(2), (0.5, 0.5)))


class TestZorichMove:
    """Test the accelerated induction."""

    def test_bulk_turns(self):
        """(0.93, 0.1) runs nine bottom steps in one move."""
        iet = make_iet(Permutation.symmetric(2), (0.93, 0.1))
        induced, move = zorich_move(iet)
        assert move.step_type is StepType.BOTTOM
        assert move.step_count == 9
        assert induced.lengths == pytest.approx((0.03, 0.1))
        np.testing.assert_array_equal(move.matrix(), [[1, 9], [0, 1]])

    def test_matrix_relates_lengths(self, h2_permutation):
        """old lengths = B @ new lengths for a random H(2) exchange."""
        rng = np.random.default_rng(3)
        iet = make_iet(h2_permutation, rng.dirichlet(np.ones(4)))
        for _ in range(20):
            induced, move = zorich_move(iet)
            np.testing.assert_allclose(move.matrix() @ induced.array, iet.array, rtol=1e-9)
            iet = normalize(induced)

    def test_symplectic_identity(self, h11_permutation):
        """B^T Omega_before B = Omega_after exactly on every move."""
        rng = np.random.default_rng(4)
        iet = make_iet(h11_permutation, rng.dirichlet(np.ones(5)))
        for _ in range(50):
            induced, move = zorich_move(iet)
            b = move.matrix()
            before = move.permutation_before.intersection_matrix()
            after = move.permutation_after.intersection_matrix()
            np.testing.assert_array_equal(b.T @ before @ b, after)
            assert round(np.linalg.det(b)) == 1
            iet = normalize(induced)

    def test_return_words_match_matrix(self, h2_permutation):
        """Column a of B counts the letters of the return word of a."""
        rng = np.random.default_rng(5)
        iet = make_iet(h2_permutation, rng.dirichlet(np.ones(4)))
        for _ in range(10):
            induced, move = zorich_move(iet)
            counts = np.zeros((4, 4), dtype=np.int64)
            for a, runs in move.return_words().items():
                for letter, count in runs:
                    counts[letter, a] += count
            np.testing.assert_array_equal(counts, move.matrix())
            iet = normalize(induced)

    def test_two_letter_counts_are_partial_quotients(self):
        """On two letters the step counts are the continued fraction digits of the length ratio."""
        rng = np.random.default_rng(7)
        for a, b in rng.uniform(0.05, 1.0, size=(100, 2)):
            ratio = Fraction(max(a, b)) / Fraction(min(a, b))
            digits = []
            for _ in range(6):
                digit = math.floor(ratio)
                digits.append(digit)
                ratio = 1 / (ratio - digit)
            iet = make_iet(Permutation.symmetric(2), (a, b))
            counts = []
            for _ in range(6):
                iet, move = zorich_move(iet)
                counts.append(move.step_count)
                iet = normalize(iet)
            assert counts == digits

    def test_zorich_step_renormalizes(self, h2_permutation):
        """zorich_step returns a unit-length exchange and its step count."""
        iet = make_iet(h2_permutation, (0.1, 0.2, 0.3, 0.4))
        induced, b, steps = zorich_step(iet)
        assert induced.total_length == pytest.approx(1.0)
        assert induced.log_scale > 0
        assert steps >= 1
        assert b.shape == (4, 4)

    def test_reducible_permutation(self):
        """Reducible permutations have no stratum."""
        with pytest.raises(ReduciblePermutation):
            genus_and_stratum(Permutation.from_text("A B C / A C B"))
