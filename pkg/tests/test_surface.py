"""
Zippered rectangles, the vertical flow and seeded sampling.
"""
import hashlib

import numpy as np
import pytest

from iet.errors import ReduciblePermutation
from iet.permutation import Permutation
from surface.errors import InvalidSuspension, SingularityHit
from surface.flow import first_return, flow, flow_batch, record_orbit, record_orbits
from surface.library import GOLDEN, random_surface, resolve_stratum, stratum_surface
from surface.sampling import rng_stream, split_counts
from surface.zippered import SurfacePoint, ZipperedRectangles, build_surface, heights_from_suspension


def _random_points(s, n, seed):
    rng = np.random.default_rng(seed)
    xg = rng.uniform(0.0, s.total_length, n)
    cells = s.locate(xg)
    xs = xg - s.top_starts[cells]
    ys = rng.uniform(0.0, 1.0, n) * s.heights_array[cells]
    return cells, xs, ys


class TestZipperedRectangles:
    """Test construction of surfaces."""

    def test_golden_torus(self, golden):
        """The golden torus has unit heights and unit area."""
        assert golden.heights == pytest.approx((1.0, 1.0))
        assert golden.area == pytest.approx(1.0)
        assert golden.lengths_array == pytest.approx([1.0 - GOLDEN, GOLDEN])

    def test_random_surface_unit_area(self, h2_surface):
        """Random surfaces are normalized to area 1 with positive heights."""
        assert h2_surface.area == pytest.approx(1.0)
        assert np.sum(h2_surface.rectangle_areas()) == pytest.approx(1.0)
        assert np.all(h2_surface.heights_array > 0)

    def test_random_surface_is_deterministic(self, h2_permutation):
        """Same seed, same surface."""
        a = random_surface(h2_permutation, 7)
        b = random_surface(h2_permutation, 7)
        c = random_surface(h2_permutation, 8)
        assert a.to_json() == b.to_json()
        assert a.to_json() != c.to_json()

    def test_heights_are_omega_tau(self, h11_surface):
        """h = Omega tau."""
        omega = h11_surface.permutation.intersection_matrix()
        np.testing.assert_allclose(omega @ np.array(h11_surface.tau), h11_surface.heights_array, rtol=1e-12)

    def test_suspension_outside_cone(self):
        """A datum outside the cone is rejected."""
        with pytest.raises(InvalidSuspension):
            heights_from_suspension(Permutation.symmetric(2), (-1.0, 1.0))

    def test_reducible_permutation_has_no_surface(self):
        """Random sampling refuses reducible permutations."""
        with pytest.raises(ReduciblePermutation):
            random_surface(Permutation.identity(3), 1)

    def test_json_round_trip(self, h2_surface):
        """Surfaces survive JSON serialization."""
        restored = ZipperedRectangles.from_json(h2_surface.to_json())
        assert restored.to_json() == h2_surface.to_json()

    def test_digest(self, h2_surface, h11_surface):
        """The digest is the SHA-256 of the JSON form and tells surfaces apart."""
        assert h2_surface.digest() == hashlib.sha256(h2_surface.to_json().encode("utf-8")).hexdigest()
        assert ZipperedRectangles.from_json(h2_surface.to_json()).digest() == h2_surface.digest()
        assert h2_surface.digest() != h11_surface.digest()

    def test_base_point(self, golden):
        """Global abscissas map to the rectangle whose top interval contains them."""
        pt = golden.base_point(0.5)
        assert pt.cell == 1
        assert pt.x == pytest.approx(0.5 - (1.0 - GOLDEN))
        assert golden.global_x(pt) == pytest.approx(0.5)

    def test_canonical_build_without_unit_area(self, symmetric4):
        """The canonical datum of the symmetric permutation is admissible."""
        s = build_surface(symmetric4, [0.25] * 4, unit_area=False)
        assert s.area == pytest.approx(float(np.sum(s.rectangle_areas())))


class TestFlow:
    """Test the vertical flow."""

    def test_flow_inside_rectangle(self, golden):
        """Short flows only change the height."""
        pt = flow(golden, SurfacePoint(0, 0.1, 0.2), 0.5)
        assert pt.cell == 0
        assert pt.x == pytest.approx(0.1)
        assert pt.y == pytest.approx(0.7)

    def test_flow_through_roof(self, golden):
        """Crossing the roof applies the rotation by the golden mean."""
        pt = flow(golden, SurfacePoint(0, 0.1, 0.0), 1.0)
        assert pt.cell == 1
        assert golden.global_x(pt) == pytest.approx(0.1 + GOLDEN)
        assert pt.y == pytest.approx(0.0)

    def test_first_return(self, golden):
        """First return time is the rectangle height."""
        pt, h = first_return(golden, SurfacePoint(0, 0.1, 0.0))
        assert h == pytest.approx(1.0)
        assert golden.global_x(pt) == pytest.approx(0.1 + GOLDEN)

    def test_first_return_needs_base_point(self, golden):
        """Points above the base are rejected."""
        with pytest.raises(ValueError):
            first_return(golden, SurfacePoint(0, 0.1, 0.5))

    def test_flow_is_additive(self, h2_surface):
        """phi_b(phi_a(p)) = phi_{a+b}(p)."""
        start = h2_surface.base_point(0.3141592)
        mid = flow(h2_surface, start, 3.7)
        end = flow(h2_surface, mid, 5.2)
        direct = flow(h2_surface, start, 8.9)
        assert end.cell == direct.cell
        assert end.x == pytest.approx(direct.x, abs=1e-9)
        assert end.y == pytest.approx(direct.y, abs=1e-9)

    def test_negative_time(self, golden):
        """Backward flow is not supported."""
        with pytest.raises(ValueError):
            flow(golden, SurfacePoint(0, 0.1, 0.0), -1.0)

    def test_singularity_hit(self, h2_surface):
        """An orbit landing on a breakpoint meets a cone point."""
        bp = float(h2_surface.top_breakpoints[0])
        # the point of the base that the exchange sends onto the breakpoint
        cell = None
        for letter in range(h2_surface.d):
            x = bp - float(h2_surface.bottom_starts[letter])
            if 0.0 < x < h2_surface.iet.lengths[letter]:
                cell = letter
                break
        assert cell is not None
        with pytest.raises(SingularityHit):
            flow(h2_surface, SurfacePoint(cell, x, 0.0), 2.0 * h2_surface.heights[cell])

    def test_record_orbit_durations(self, h2_surface):
        """Segments tile the orbit time."""
        record = record_orbit(h2_surface, h2_surface.base_point(0.271828), 12.5)
        assert record.durations.sum() == pytest.approx(12.5)
        np.testing.assert_allclose(record.t0[1:], record.t0[:-1] + record.durations[:-1])

    def test_record_orbits_matches_scalar(self, h2_surface):
        """Batched records equal scalar records."""
        cells, xs, ys = _random_points(h2_surface, 16, 0)
        records, singular = record_orbits(h2_surface, cells, xs, ys, 7.0)
        assert not singular.any()
        for i in range(16):
            scalar = record_orbit(h2_surface, SurfacePoint(int(cells[i]), float(xs[i]), float(ys[i])), 7.0)
            np.testing.assert_array_equal(records[i].cells, scalar.cells)
            np.testing.assert_allclose(records[i].t0, scalar.t0, atol=1e-12)

    def test_flow_batch_matches_flow(self, h11_surface):
        """Batched flow equals scalar flow."""
        cells, xs, ys = _random_points(h11_surface, 20, 1)
        times = np.linspace(0.5, 9.5, 20)
        out_cells, out_x, out_y = flow_batch(h11_surface, cells, xs, ys, times)
        for i in range(20):
            pt = flow(h11_surface, SurfacePoint(int(cells[i]), float(xs[i]), float(ys[i])), float(times[i]))
            assert out_cells[i] == pt.cell
            assert out_x[i] == pytest.approx(pt.x, abs=1e-9)
            assert out_y[i] == pytest.approx(pt.y, abs=1e-9)


class TestSampling:
    """Test seeded streams."""

    def test_streams_are_reproducible(self):
        """Same (seed, task id), same numbers."""
        assert rng_stream(1, 0).random() == rng_stream(1, 0).random()

    def test_streams_are_distinct(self):
        """Different task ids give different streams."""
        assert rng_stream(1, 0).random() != rng_stream(1, 1).random()
        assert rng_stream(1, 0).random() != rng_stream(2, 0).random()

    def test_negative_seed(self):
        """Negative seeds are rejected."""
        with pytest.raises(ValueError):
            rng_stream(-1)

    def test_split_counts(self):
        """Allocation is proportional and sums to the total."""
        counts = split_counts(10, [0.5, 0.25, 0.25])
        assert counts.sum() == 10
        assert counts[0] == 5


class TestStrataResolution:
    """Test stratum specs."""

    def test_named(self):
        """Named strata map to symmetric permutations."""
        assert resolve_stratum("H(2)") == Permutation.symmetric(4)
        assert resolve_stratum("H(1, 1)") == Permutation.symmetric(5)

    def test_golden_torus_name(self, golden):
        """golden-torus resolves to the fixed torus."""
        assert resolve_stratum("golden-torus") == Permutation.symmetric(2)
        assert stratum_surface("golden-torus", 0).to_json() == golden.to_json()

    def test_permutation_text(self):
        """Explicit rows are parsed."""
        assert resolve_stratum("A B C / C B A").d == 3

    def test_unknown(self):
        """Unknown names are rejected."""
        with pytest.raises(ValueError):
            resolve_stratum("H(7)")

    def test_reducible_text(self):
        """Reducible rows are rejected."""
        with pytest.raises(ReduciblePermutation):
            resolve_stratum("A B C / B A C")
