import numpy as np
import pytest

from poincare_lab.grid import (
    GridDomain,
    GridSpec,
    boundary_cells,
    complement,
    connected_components,
    dilate,
    erode,
    exact_distance_transform,
    load_domain,
    measure,
    save_domain,
)

from oracles import brute_force_opposite_distance, union_find_component_count


def disk_domain(radius=1.0, h=1 / 64, pad=3):
    spec = GridSpec.symmetric((radius, radius), h, pad=pad)
    x, y = spec.center_mesh()
    return GridDomain(spec, x * x + y * y < radius * radius)


def square_domain(side=1.0, h=1 / 64, pad=2):
    spec = GridSpec.cover((0.0, 0.0), (side, side), h, pad=pad)
    x, y = spec.center_mesh()
    return GridDomain(spec, (x > 0) & (x < side) & (y > 0) & (y < side))


def random_domain(rng, shape=(32, 32), density=0.5, h=1 / 32):
    spec = GridSpec(len(shape), (0.0,) * len(shape), h, shape)
    inside = rng.random(shape) < density
    if not inside.any():
        inside.ravel()[0] = True
    if inside.all():
        inside.ravel()[0] = False
    return GridDomain(spec, inside)


class TestGridSpec:
    def test_cell_centers(self):
        spec = GridSpec(2, (-0.5, 0.25), 0.25, (4, 8))
        assert np.allclose(spec.axis_centers(0), [-0.375, -0.125, 0.125, 0.375])
        assert spec.axis_centers(1)[0] == pytest.approx(0.375)

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(4, (0, 0, 0, 0), 0.1, (4, 4, 4, 4))
        with pytest.raises(ValueError):
            GridSpec(2, (0, 0), -1.0, (4, 4))
        with pytest.raises(ValueError):
            GridSpec(2, (0, 0), 0.1, (1, 4))

    def test_symmetric_centers_pair_up(self):
        spec = GridSpec.symmetric((1.0, 0.7), 1 / 32)
        for ax in range(2):
            c = spec.axis_centers(ax)
            assert np.allclose(c, -c[::-1])


class TestMeasure:
    def test_unit_square_exact(self):
        for h in (1 / 16, 1 / 64, 1 / 128):
            assert measure(square_domain(h=h)) == pytest.approx(1.0, abs=1e-12)

    def test_disk_area(self):
        d = disk_domain(h=1 / 256)
        assert measure(d) == pytest.approx(np.pi, rel=0.01)

    def test_empty(self):
        spec = GridSpec(2, (0, 0), 0.1, (4, 4))
        assert measure(GridDomain(spec, np.zeros((4, 4), bool))) == 0.0


class TestDistanceTransform:
    def test_square_center_cell(self):
        h = 1 / 64
        d = square_domain(h=h)
        field = exact_distance_transform(d)
        idx = d.spec.point_to_index([(0.5, 0.5)])[0]
        assert field.value[tuple(idx)] == pytest.approx(0.5, abs=h)

    def test_halfspace(self):
        h = 1 / 64
        spec = GridSpec.cover((-0.5, -0.5), (0.5, 0.5), h)
        x, y = spec.center_mesh()
        d = GridDomain(spec, np.broadcast_to(y > 0, spec.extents).copy())
        field = exact_distance_transform(d)
        idx = spec.point_to_index([(0.0, 0.3)])[0]
        assert field.value[tuple(idx)] == pytest.approx(0.3, abs=h)

    @pytest.mark.parametrize("shape", [(64, 64), (16, 16, 16), (17, 9), (5, 31, 12)])
    def test_matches_brute_force_exactly(self, shape):
        rng = np.random.default_rng(hash(shape) % 2**32)
        for density in (0.1, 0.5, 0.9):
            d = random_domain(rng, shape=shape, density=density, h=1 / 64)
            field = exact_distance_transform(d)
            oracle = brute_force_opposite_distance(d.inside, d.spec.h)
            assert np.array_equal(field.value, oracle)

    def test_structured_patterns_match_brute_force(self):
        spec = GridSpec(2, (0, 0), 1 / 32, (32, 32))
        stripes = np.zeros((32, 32), bool)
        stripes[::4] = True
        checker = np.indices((32, 32)).sum(axis=0) % 2 == 0
        lone = np.zeros((32, 32), bool)
        lone[5, 7] = True
        for mask in (stripes, checker, lone, ~lone):
            d = GridDomain(spec, mask)
            field = exact_distance_transform(d)
            oracle = brute_force_opposite_distance(mask, spec.h)
            assert np.array_equal(field.value, oracle)

    def test_lipschitz_on_lattice(self):
        d = disk_domain(h=1 / 64)
        v = exact_distance_transform(d).value
        h = d.spec.h
        for ax in range(2):
            diff = np.abs(np.diff(v, axis=ax))
            assert diff.max() <= h + h * 1e-9

    def test_signed_field_signs(self):
        d = disk_domain(h=1 / 64)
        g = exact_distance_transform(d, signed=True)
        u = exact_distance_transform(d, signed=False)
        assert (g.value[d.inside] > 0).all()
        assert (g.value[~d.inside] < 0).all()
        assert np.array_equal(np.abs(g.value), u.value)

    def test_degenerate_indicator(self):
        spec = GridSpec(2, (0, 0), 0.1, (4, 4))
        with pytest.raises(ValueError, match="degenerate indicator"):
            exact_distance_transform(GridDomain(spec, np.ones((4, 4), bool)))
        with pytest.raises(ValueError, match="degenerate indicator"):
            exact_distance_transform(GridDomain(spec, np.zeros((4, 4), bool)))


class TestErode:
    def test_identity_at_zero(self):
        d = disk_domain(h=1 / 64)
        assert np.array_equal(erode(d, 0.0).inside, d.inside)

    def test_ball_erosion_area(self):
        d = disk_domain(h=1 / 128)
        assert measure(erode(d, 0.3)) == pytest.approx(np.pi * 0.49, rel=0.03)

    def test_square_frame_area(self):
        # analytic frame area oracle: 4*delta - 4*delta^2
        from oracles import square_frame_area

        d = square_domain(h=1 / 256)
        delta = 0.1
        lost = measure(d) - measure(erode(d, delta))
        assert lost == pytest.approx(square_frame_area(delta), rel=0.03)

    def test_monotone_in_delta(self):
        rng = np.random.default_rng(7)
        d = random_domain(rng, shape=(48, 48), density=0.7)
        prev = erode(d, 0.0).inside
        for delta in np.linspace(0.01, 0.4, 9):
            cur = erode(d, delta).inside
            assert not (cur & ~prev).any()
            prev = cur

    def test_boundary_layer_monotone_to_full(self):
        d = disk_domain(h=1 / 64)
        total = measure(d)
        layers = [total - measure(erode(d, t)) for t in np.linspace(0.0, 2.2, 12)]
        assert all(b >= a - 1e-12 for a, b in zip(layers, layers[1:]))
        assert layers[-1] == pytest.approx(total)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            erode(disk_domain(), -0.1)


class TestDilate:
    def test_point_disk(self):
        h = 1 / 128
        spec = GridSpec.symmetric((0.7, 0.7), h)
        seed = np.zeros(spec.extents, bool)
        seed[tuple(spec.point_to_index([(0.0, 0.0)])[0])] = True
        out = dilate(GridDomain(spec, seed), 0.5)
        assert measure(out) == pytest.approx(np.pi / 4, rel=0.03)

    def test_segment_stadium(self):
        from oracles import stadium_area

        h = 1 / 128
        spec = GridSpec.cover((-0.4, -0.4), (1.4, 0.4), h)
        x, y = spec.center_mesh()
        seed = np.broadcast_to((np.abs(y) < h / 2 + 1e-12) & (x > 0) & (x < 1), spec.extents)
        out = dilate(GridDomain(spec, seed.copy()), 0.25)
        assert measure(out) == pytest.approx(stadium_area(1.0, 0.25), rel=0.03)

    def test_opening_contained(self):
        d = disk_domain(h=1 / 128)
        opened = dilate(erode(d, 0.3), 0.3)
        escaped = opened.inside & ~d.inside
        if escaped.any():
            # any escaped cell must touch the disk within one cell
            dist = exact_distance_transform(d).value
            assert dist[escaped].max() <= d.spec.h * np.sqrt(2) + 1e-12

    def test_grid_too_small(self):
        spec = GridSpec.symmetric((0.3, 0.3), 1 / 32, pad=1)
        seed = np.zeros(spec.extents, bool)
        seed[tuple(spec.point_to_index([(0.0, 0.0)])[0])] = True
        with pytest.raises(ValueError, match="grid too small"):
            dilate(GridDomain(spec, seed), 0.5)

    def test_duality_with_erosion_up_to_ties(self):
        rng = np.random.default_rng(3)
        d = random_domain(rng, shape=(40, 40), density=0.6, h=1 / 32)
        delta = 3 * d.spec.h  # a distance realized exactly on the lattice
        eroded = erode(d, delta).inside
        dual = ~dilate(complement(d), delta, allow_clipping=True).inside
        mismatch = eroded ^ dual
        dist = exact_distance_transform(d).value
        assert np.all(np.abs(dist[mismatch] - delta) < 1e-12)


class TestComponents:
    def test_square_one(self):
        _, n = connected_components(square_domain(h=1 / 32))
        assert n == 1

    def test_two_disks(self):
        spec = GridSpec.symmetric((2.0, 1.0), 1 / 32)
        x, y = spec.center_mesh()
        inside = ((x - 1) ** 2 + y**2 < 0.25) | ((x + 1) ** 2 + y**2 < 0.25)
        _, n = connected_components(GridDomain(spec, inside))
        assert n == 2

    def test_empty(self):
        spec = GridSpec(2, (0, 0), 0.1, (4, 4))
        labels, n = connected_components(GridDomain(spec, np.zeros((4, 4), bool)))
        assert n == 0 and not labels.any()

    def test_against_union_find_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            mask = rng.random((32, 32)) < rng.uniform(0.3, 0.7)
            spec = GridSpec(2, (0, 0), 1 / 32, (32, 32))
            _, n = connected_components(GridDomain(spec, mask))
            assert n == union_find_component_count(mask)

    def test_labels_in_scan_order(self):
        spec = GridSpec(2, (0, 0), 0.5, (4, 4))
        inside = np.zeros((4, 4), bool)
        inside[3, 0] = True  # later in row-major scan
        inside[0, 3] = True
        labels, n = connected_components(GridDomain(spec, inside))
        assert n == 2
        assert labels[0, 3] == 1 and labels[3, 0] == 2

    def test_diagonal_pinch_not_connected(self):
        spec = GridSpec(2, (0, 0), 0.5, (4, 4))
        inside = np.zeros((4, 4), bool)
        inside[0, 0] = inside[1, 1] = True
        _, n = connected_components(GridDomain(spec, inside))
        assert n == 2


class TestBoundaryCells:
    def test_square_ring(self):
        d = square_domain(h=1 / 16)
        b = boundary_cells(d)
        assert b.sum() == 4 * 16 - 4
        inner = erode(d, 1.5 * d.spec.h)
        assert not (b & inner.inside).any()


class TestSerialization:
    def test_round_trip_disk(self, tmp_path):
        d = disk_domain(h=1 / 32)
        path = tmp_path / "disk.dom"
        save_domain(d, path)
        back = load_domain(path)
        assert back.spec == d.spec
        assert np.array_equal(back.inside, d.inside)

    def test_round_trip_random(self, tmp_path):
        rng = np.random.default_rng(20240917)
        for trial in range(30):
            d = random_domain(rng, shape=(9, 13), density=rng.uniform(0.05, 0.95))
            path = tmp_path / f"d{trial}.dom"
            save_domain(d, path)
            back = load_domain(path)
            assert np.array_equal(back.inside, d.inside)

    def test_rejects_mismatched_counts(self, tmp_path):
        d = square_domain(h=1 / 8)
        path = tmp_path / "bad.dom"
        save_domain(d, path)
        text = path.read_text().splitlines()
        text[-1] = text[-1] + " 7"
        path.write_text("\n".join(text) + "\n")
        with pytest.raises(ValueError, match="mismatched cell counts"):
            load_domain(path)
