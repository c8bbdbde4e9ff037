import math

import pytest

from kopt_lab.geometry import PNorm
from kopt_lab.lowerbound import (
    build_lb_tour,
    doubled_spanning_tree_tour,
    estimate_inequality,
    estimate_scan,
    generate_3d_instance,
    generate_lb_instance,
    layer_offset,
    lb_tour_edges,
    lb_tour_length_exact,
    scan_2opt_optimality,
)
from kopt_lab.tour import Tour, find_improving_2move, is_k_optimal, tour_length


@pytest.fixture(scope="module")
def lb3():
    return generate_lb_instance(2, 1, 3)


class TestLayeredGenerator:
    def test_layer_offsets(self):
        assert [layer_offset(i, 3, 1) for i in (0, 1, 2, 3)] == [0, 243, 270, 273]

    def test_group_sizes(self, lb3):
        assert (len(lb3.v1), len(lb3.v2), len(lb3.v3), len(lb3.v4)) == (
            824, 824, 728, 540,
        )
        assert lb3.n == 2916

    def test_points_are_distinct(self, lb3):
        pts = lb3.all_points()
        assert len(set(pts)) == len(pts)

    def test_k_does_not_change_geometry(self):
        a = generate_lb_instance(2, 1, 3)
        b = generate_lb_instance(5, 1, 3)
        assert a.all_points() == b.all_points()

    def test_even_q_rejected(self):
        with pytest.raises(ValueError):
            generate_lb_instance(2, 1, 4)

    def test_p2_instance_also_wellformed(self):
        lb = generate_lb_instance(2, 2, 3)
        assert lb.n == len(set(lb.all_points()))
        assert lb.as_instance().norm == PNorm(2)


class TestHandBuiltTour:
    def test_is_hamiltonian_cycle(self, lb3):
        tour = build_lb_tour(lb3)
        tour.validate(lb3.as_instance())

    def test_exact_length(self, lb3):
        assert lb_tour_length_exact(lb3) == 7836

    def test_length_matches_generic_evaluation(self, lb3):
        inst = lb3.as_instance()
        tour = build_lb_tour(lb3)
        assert tour_length(inst, tour) == 7836

    def test_length_dominates_layer_width_times_q(self, lb3):
        # length >= q * q^((p+1)q) = 3 * 729
        assert lb_tour_length_exact(lb3) >= 2187

    def test_edge_groups_cover_every_vertex_twice(self, lb3):
        degree = {}
        for a, b in lb_tour_edges(lb3):
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        assert len(degree) == lb3.n
        assert set(degree.values()) == {2}


class TestSpanningTreeBound:
    def test_tree_and_doubled_lengths(self, lb3):
        tree, doubled = doubled_spanning_tree_tour(lb3)
        assert tree == 4191
        assert doubled == 8382

    def test_closed_form_caps(self, lb3):
        tree, doubled = doubled_spanning_tree_tour(lb3)
        width = 3 ** 6
        assert tree <= 7 * width == 5103
        assert doubled <= 14 * width == 10206

    def test_gap_certificate(self, lb3):
        # the hand-built tour is longer than the doubled-tree upper bound on
        # the optimum by a factor that grows with q; at q=3 the optimum is
        # provably <= 10206 while the tour has length 7836 >= 2187 = q * width
        length = lb_tour_length_exact(lb3)
        _, doubled = doubled_spanning_tree_tour(lb3)
        assert length / doubled >= 3 / 14


class TestEstimate:
    def test_zero_case(self):
        assert estimate_inequality(0, 0, 2, 1, 3, 0)

    def test_worked_margin(self):
        # at a=b=2, k=2, p=1, q=3, s=0 the two sides differ by exactly 81
        p, q, s = 1, 3, 0
        lhs = (2 * q ** ((p + 1) * (q - s))) ** p + q ** (p * ((p + 1) * (q - s) - 1))
        rhs = (2 * q ** ((p + 1) * (q - s)) + 2 * q ** ((p + 1) * (q - s - 1))) ** p
        assert lhs - rhs == 81
        assert estimate_inequality(2, 2, 2, p, q, s)

    def test_scan_threshold_grows_with_p(self):
        # the inequality only holds for q large enough; the threshold depends
        # on the norm exponent
        def smallest_q(p):
            return next(q for q in range(3, 41, 2) if estimate_scan(2, p, q))

        assert smallest_q(1) == 3
        assert smallest_q(2) == 9
        assert smallest_q(3) == 25


class TestBigScan:
    def test_agrees_with_reference_search(self, lb3):
        inst = lb3.as_instance()
        tour = build_lb_tour(lb3)
        report = scan_2opt_optimality(inst, tour)
        assert report.n == 2916
        move = find_improving_2move(inst, tour)
        assert report.two_optimal == (move is None)

    def test_detects_improvable_tour(self, lb3):
        inst = lb3.as_instance()
        tour = build_lb_tour(lb3)
        # reversing an interior block creates crossings the scan must find
        o = list(tour.order)
        o[100:200] = reversed(o[100:200])
        report = scan_2opt_optimality(inst, Tour(tuple(o)))
        assert not report.two_optimal
        assert report.witness is not None
        assert report.best_gain > 0


class TestThreeDFamily:
    def test_point_count(self):
        assert generate_3d_instance(8).as_instance().n == 32

    def test_all_tour_edges_unit_length(self):
        g = generate_3d_instance(8)
        inst = g.as_instance()
        for tour in (g.tour_t, g.tour_s):
            for a, b in tour.edges():
                assert float(inst.dist(a, b)) == pytest.approx(1.0, abs=1e-12)

    def test_both_tours_2_optimal(self):
        g = generate_3d_instance(4)
        inst = g.as_instance()
        assert is_k_optimal(inst, g.tour_t, 2).optimal
        assert is_k_optimal(inst, g.tour_s, 2).optimal

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            generate_3d_instance(3)
