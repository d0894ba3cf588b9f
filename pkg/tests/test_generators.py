import numpy as np
import pytest

from poincare_lab.generators import (
    ConeSpec,
    DumbbellSpec,
    LipGraphSpec,
    make_dumbbell,
    make_lip_graph_domain,
    make_named,
    make_tube,
    make_u_eps,
    named_families,
    rasterize_polyline,
)
from poincare_lab.grid import (
    GridDomain,
    GridSpec,
    connected_components,
    erode,
    measure,
)

from oracles import (
    dumbbell_u_squared,
    dumbbell_volume,
    stadium_area,
    unit_cone_volume,
)


class TestConeSpec:
    def test_membership(self):
        cone = ConeSpec((0, 0), (0, 1), np.pi / 4, 1.0)
        assert cone.contains([(0.0, 0.5)])[0]
        assert cone.contains([(0.4, 0.5)])[0]
        assert not cone.contains([(0.6, 0.5)])[0]  # outside the 45-degree flank
        assert not cone.contains([(0.0, 1.5)])[0]
        assert not cone.contains([(0.0, 0.0)])[0]  # apex excluded (open set)

    def test_volume_matches_quadrature(self):
        cone = ConeSpec((0, 0, 0), (0, 0, 1), np.pi / 4, 1.0)
        assert cone.volume(3) == pytest.approx(unit_cone_volume(), rel=1e-9)

    def test_validation(self):
        with pytest.raises(ValueError):
            ConeSpec((0, 0), (0, 0), np.pi / 4, 1.0)
        with pytest.raises(ValueError):
            ConeSpec((0, 0), (0, 1), 2.0, 1.0)


class TestDumbbell:
    def test_connected(self):
        d = make_dumbbell(DumbbellSpec(0.1), 1 / 64)
        _, n = connected_components(d)
        assert n == 1

    def test_erosion_splits_at_twice_eps(self):
        d = make_dumbbell(DumbbellSpec(0.1), 1 / 64)
        _, n = connected_components(erode(d, 0.2))
        assert n == 2

    def test_measure_against_slice_quadrature(self):
        for eps in (0.2, 0.1):
            d = make_dumbbell(DumbbellSpec(eps), 1 / 64)
            assert measure(d) == pytest.approx(dumbbell_volume(eps), rel=0.03)

    def test_neck_resolution_guard(self):
        with pytest.raises(ValueError, match="neck under-resolved"):
            make_dumbbell(DumbbellSpec(0.05), 1 / 64)

    def test_dim_restriction(self):
        with pytest.raises(ValueError):
            DumbbellSpec(0.1, dim=2)

    def test_measure_converges_with_h(self):
        eps = 0.2
        hs = [1 / 20, 1 / 40, 1 / 80]
        errs = [abs(measure(make_dumbbell(DumbbellSpec(eps), h)) - dumbbell_volume(eps))
                for h in hs]
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert slope >= 0.9


class TestUEps:
    def test_requires_matching_domain(self):
        d = make_dumbbell(DumbbellSpec(0.1), 1 / 64)
        with pytest.raises(ValueError):
            make_u_eps(d, 0.2)
        sq = make_named("square", 1 / 32)
        with pytest.raises(ValueError):
            make_u_eps(sq, 0.1)

    def test_mean_is_zero_by_odd_symmetry(self):
        d = make_dumbbell(DumbbellSpec(0.1), 1 / 64)
        u = make_u_eps(d, 0.1)
        assert abs(u.integral()) <= 2 * d.spec.h * measure(d)
        assert abs(u.integral()) <= 1e-10  # lattice is exactly odd-symmetric

    def test_odd_symmetry_exact_at_cell_pairs(self):
        d = make_dumbbell(DumbbellSpec(0.2), 1 / 32)
        u = make_u_eps(d, 0.2)
        dense = u.to_dense(fill=np.nan)
        flipped = dense[:, :, ::-1]
        both = ~np.isnan(dense) & ~np.isnan(flipped)
        assert both.any()
        assert np.array_equal(dense[both], -flipped[both])

    def test_u_squared_integral(self):
        d = make_dumbbell(DumbbellSpec(0.1), 1 / 64)
        u = make_u_eps(d, 0.1)
        assert u.lp_integral(2) == pytest.approx(dumbbell_u_squared(0.1), rel=0.03)


class TestLipGraph:
    def test_flat_half_box(self):
        d = make_lip_graph_domain(LipGraphSpec(M=0.0, gamma=1.0, phi=lambda x: 0.0 * x), 1 / 64)
        assert measure(d) == pytest.approx(2.0, rel=0.02)

    def test_wedge_measure(self):
        d = make_lip_graph_domain(LipGraphSpec(M=1.0, gamma=1.0, phi=np.abs), 1 / 64)
        assert measure(d) == pytest.approx(1.0, rel=0.02)
        _, n = connected_components(d)
        assert n == 1

    def test_lipschitz_violation_detected(self):
        saw = lambda x: 2.0 * np.abs(x)  # slope 2, declared M = 1
        with pytest.raises(ValueError, match="not in Lip"):
            make_lip_graph_domain(LipGraphSpec(M=1.0, gamma=1.0, phi=saw), 1 / 64)

    def test_graph_must_fit_box(self):
        tall = lambda x: 0.0 * x + 1.2
        with pytest.raises(ValueError, match="fit the patch box"):
            make_lip_graph_domain(
                LipGraphSpec(M=0.0, gamma=1.0, phi=tall, box_half_height=1.0), 1 / 64
            )

    def test_array_phi(self):
        spec = LipGraphSpec(M=1.0, gamma=1.0, phi=np.abs)
        d1 = make_lip_graph_domain(spec, 1 / 32)
        centers = d1.spec.axis_centers(0)
        d2 = make_lip_graph_domain(LipGraphSpec(M=1.0, gamma=1.0, phi=np.abs(centers)), 1 / 32)
        assert np.array_equal(d1.inside, d2.inside)


class TestTube:
    def test_point_gives_disk(self):
        k = make_named("point", 1 / 128)
        t = make_tube(k, 0.25)
        assert measure(t) == pytest.approx(np.pi * 0.25**2, rel=0.03)

    def test_segment_gives_stadium(self):
        k = make_named("segment", 1 / 128)
        t = make_tube(k, 0.25)
        assert measure(t) == pytest.approx(stadium_area(1.0, 0.25), rel=0.03)

    def test_l_polyline_connected(self):
        k = make_named("l_polyline", 1 / 128)
        _, nk = connected_components(k)
        assert nk == 1
        t = make_tube(k, 0.25)
        _, n = connected_components(t)
        assert n == 1

    def test_disconnected_seed_rejected(self):
        spec = GridSpec.symmetric((0.6, 0.6), 1 / 32)
        inside = np.zeros(spec.extents, bool)
        inside[3, 3] = inside[10, 10] = True
        with pytest.raises(ValueError, match="connected"):
            make_tube(GridDomain(spec, inside), 0.05)


class TestPolyline:
    def test_diagonal_chain_is_face_connected(self):
        spec = GridSpec.symmetric((0.6, 0.6), 1 / 32)
        d = rasterize_polyline(spec, [(-0.4, -0.35), (0.4, 0.45)])
        _, n = connected_components(d)
        assert n == 1


class TestNamed:
    def test_square_measure_exact(self):
        assert measure(make_named("square", 1 / 64)) == pytest.approx(1.0, abs=1e-12)

    def test_ball_measure(self):
        assert measure(make_named("ball", 1 / 256)) == pytest.approx(np.pi, rel=0.01)

    def test_ball_minus_segment_topology(self):
        d = make_named("ball_minus_segment", 1 / 128)
        _, n = connected_components(d)
        assert n == 1
        for delta in (0.02, 0.05, 0.1, 0.2):
            _, n = connected_components(erode(d, delta))
            assert n == 1, f"slit domain split at delta={delta}"

    def test_cusp_structure(self):
        d = make_named("cusp", 1 / 128)
        _, n = connected_components(d)
        assert n == 1

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown domain"):
            make_named("torus", 1 / 32)

    def test_registry_listing(self):
        fams = named_families()
        assert "square" in fams and "ball_minus_segment" in fams
        assert all(isinstance(doc, str) and doc for doc in fams.values())

    def test_ball_measure_converges_with_h(self):
        hs = [1 / 32, 1 / 64, 1 / 128, 1 / 256]
        errs = [abs(measure(make_named("ball", h)) - np.pi) for h in hs]
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert slope >= 0.9
