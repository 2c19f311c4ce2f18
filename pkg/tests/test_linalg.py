"""Factorizations, verified enclosures, and corner sweeps."""

import numpy as np
import pytest

from avlprange import (
    IntervalMatrix,
    IntervalVector,
    LuFactorization,
    SignVector,
    SingularMatrixError,
    UnknownRegularityError,
    enclose_interval_solution,
    hull_vertices_orthant,
    solve_square,
)
from avlprange.errors import DimensionError, OrthantEscapeError


class TestLu:
    def test_solve_matches_reference(self):
        a = np.array([[2.0, 1.0], [1.0, 3.0]])
        fact = LuFactorization.factor(a)
        rhs = np.array([5.0, 10.0])
        assert np.allclose(fact.solve(rhs), np.linalg.solve(a, rhs), atol=1e-12)

    def test_transpose_solve(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(4, 4)) + 3 * np.eye(4)
        fact = LuFactorization.factor(a)
        c = rng.normal(size=4)
        assert np.allclose(fact.solve_transpose(c), np.linalg.solve(a.T, c), atol=1e-10)

    def test_singular_matrix_raises(self):
        with pytest.raises(SingularMatrixError):
            LuFactorization.factor([[1.0, 2.0], [2.0, 4.0]])

    def test_matrix_rhs(self):
        a = np.array([[4.0, 1.0], [0.0, 2.0]])
        eye = LuFactorization.factor(a).solve(np.eye(2))
        assert np.allclose(a @ eye, np.eye(2), atol=1e-12)


class TestSolveSquare:
    def test_known_corner_system(self):
        x = solve_square([[1.05, 1.05], [-2.9, 3.2]], [12.0, 18.0])
        assert np.allclose(x, [3.0444964871194378, 8.38407494145199], atol=1e-12)

    def test_opposite_corner_system(self):
        x = solve_square([[0.95, 0.95], [-3.1, 2.8]], [12.0, 18.0])
        assert np.allclose(x, [2.943800178412132, 9.687778768956289], atol=1e-12)

    def test_random_agreement(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            a = rng.normal(size=(3, 3)) + 4 * np.eye(3)
            b = rng.normal(size=3)
            assert np.allclose(solve_square(a, b), np.linalg.solve(a, b), atol=1e-10)


class TestEnclosure:
    def test_point_system_is_tight(self):
        a = IntervalMatrix.from_point([[2.0, 0.0], [0.0, 4.0]])
        b = IntervalVector.from_point([2.0, 8.0])
        box = enclose_interval_solution(a, b)
        assert np.all(box.width <= 1e-6)
        assert box.contains([1.0, 2.0])

    def test_contains_every_corner_solution(self):
        a = IntervalMatrix.from_midrad(
            [[1.0, 1.0], [-2.0, 4.0]], [[0.05, 0.05], [1.1, 1.2]]
        )
        b = IntervalVector.from_point([12.0, 18.0])
        box = enclose_interval_solution(a, b)
        for r0 in (-1.0, 1.0):
            for r1 in (-1.0, 1.0):
                for s0 in (-1.0, 1.0):
                    for s1 in (-1.0, 1.0):
                        corner = a.mid - np.outer([r0, r1], [1.0, 1.0]) * a.rad * np.array(
                            [s0, s1]
                        )[None, :]
                        x = np.linalg.solve(corner, b.mid)
                        assert box.contains(x, tol=1e-9)

    def test_matches_known_widened_block_box(self):
        a = IntervalMatrix.from_midrad(
            [[1.0, 1.0], [-2.0, 4.0]], [[0.05, 0.05], [1.1, 1.2]]
        )
        b = IntervalVector.from_point([12.0, 18.0])
        box = enclose_interval_solution(a, b)
        assert np.allclose(box.inf, [2.2839, 4.4845], atol=1e-3)
        assert np.allclose(box.sup, [9.7894, 11.4356], atol=1e-3)

    def test_contains_sampled_member_solutions(self):
        rng = np.random.default_rng(9)
        a = IntervalMatrix.from_midrad(
            rng.normal(size=(3, 3)) + 4 * np.eye(3), rng.uniform(0, 0.15, (3, 3))
        )
        b = IntervalVector.from_midrad(rng.normal(size=3), rng.uniform(0, 0.2, 3))
        box = enclose_interval_solution(a, b)
        for _ in range(1000):
            x = np.linalg.solve(a.sample(rng), b.sample(rng))
            assert box.contains(x, tol=1e-9)

    def test_unverifiable_matrix_raises(self):
        a = IntervalMatrix.from_midrad(np.eye(2), 1.5 * np.eye(2))
        b = IntervalVector.from_point([1.0, 1.0])
        with pytest.raises(UnknownRegularityError):
            enclose_interval_solution(a, b)

    def test_shape_mismatch_rejected(self):
        a = IntervalMatrix.from_point([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(DimensionError):
            enclose_interval_solution(a, IntervalVector.from_point([1.0]))


class TestHullVertices:
    def test_scalar_interval_has_two_corners(self):
        a = IntervalMatrix([[1.0]], [[2.0]])
        points = hull_vertices_orthant(a, [2.0], SignVector((1,)))
        got = sorted(float(p[0]) for p in points)
        assert np.allclose(got, [1.0, 2.0], atol=1e-12)

    def test_duplicates_collapse(self):
        a = IntervalMatrix.from_point([[2.0]])
        points = hull_vertices_orthant(a, [4.0], SignVector((1,)))
        assert len(points) == 1
        assert np.allclose(points[0], [2.0])

    def test_known_four_vertex_sweep(self):
        a = IntervalMatrix.from_midrad(
            [[1.0, 1.0], [-3.0, 3.0]], [[0.05, 0.05], [0.1, 0.2]]
        )
        points = hull_vertices_orthant(a, [12.0, 18.0], SignVector((1, 1)))
        want = [
            (3.0444964871194378, 8.38407494145199),
            (2.3728813559322035, 9.055690072639225),
            (3.675582398619499, 8.955996548748921),
            (2.943800178412132, 9.687778768956289),
        ]
        assert len(points) == 4
        for got, expect in zip(points, want):
            assert np.allclose(got, expect, atol=1e-9)

    def test_corner_outside_orthant_raises(self):
        a = IntervalMatrix.from_point([[1.0]])
        with pytest.raises(OrthantEscapeError):
            hull_vertices_orthant(a, [-1.0], SignVector((1,)))

    def test_unverified_regularity_raises(self):
        a = IntervalMatrix.from_midrad(np.eye(2), np.full((2, 2), 2.0))
        with pytest.raises(UnknownRegularityError):
            hull_vertices_orthant(a, [1.0, 1.0], SignVector((1, 1)))

    def test_every_reported_point_solves_a_member_system(self):
        rng = np.random.default_rng(21)
        a = IntervalMatrix.from_midrad(
            [[3.0, 0.5], [-0.4, 2.5]], [[0.1, 0.05], [0.08, 0.1]]
        )
        rhs = np.array([3.0, 2.0])
        points = hull_vertices_orthant(a, rhs, SignVector((1, 1)))
        for p in points:
            residual = np.abs(a.mid @ p - rhs) - a.rad @ np.abs(p)
            assert np.all(residual <= 1e-9)
