from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from expfam import (DimensionMismatch, NonPositiveReference, StateSpace, build_family,
                    convex_support_vertices, density, family_from_normal_space,
                    hierarchical_family, is_partition_family, moment_map)
from helpers import random_family


class TestStateSpace:
    def test_integer_and_labels(self):
        assert StateSpace(3).labels == ("0", "1", "2")
        assert StateSpace(np.int64(2)).size == 2
        assert StateSpace(["a", "b"]).index("b") == 1

    @pytest.mark.parametrize("labels", [[], ["a", "a"]])
    def test_invalid(self, labels):
        with pytest.raises(ValueError):
            StateSpace(labels)


class TestBuildFamily:
    def test_three_state(self, three_state):
        assert three_state.dim == 1
        assert three_state.normal_basis == ((1, -2, 1),)

    def test_full_simplex(self):
        f = build_family(2, [1, 1], [[0, 1]])
        assert f.dim == 1
        assert f.codim == 0

    def test_blocks(self, blocks):
        assert blocks.dim == 1
        assert set(blocks.normal_basis) == {(1, -1, 0, 0), (0, 0, 1, -1)}

    def test_errors(self):
        with pytest.raises(NonPositiveReference):
            build_family(2, [1, 0], [[0, 1]])
        with pytest.raises(DimensionMismatch):
            build_family(3, [1, 1, 1], [[0, 1]])
        with pytest.raises(DimensionMismatch):
            build_family(3, [1, 1], [[0, 1, 2]])

    def test_nu_is_read_only(self, three_state):
        with pytest.raises(ValueError):
            three_state.nu[0] = 2.0

    def test_rational_strings(self):
        f = build_family(3, ["1/3", 1, 2], [["1/2", "-1/3", 0]])
        assert f.stats[0][1] == Fraction(-1, 3)

    def test_from_normal_space(self):
        f = family_from_normal_space([1, 1, 1, 1], [[1, -1, 0, 0], [0, 0, 1, -1]])
        assert f.dim == 1
        assert set(f.normal_basis) == {(1, -1, 0, 0), (0, 0, 1, -1)}
        with pytest.raises(ValueError):
            family_from_normal_space([1, 1], [[1, 1]])

    def test_same_tangent_space_ignores_basis(self, blocks):
        other = build_family(4, [2, 2, 1, 1], [[1, 1, -1, -1]])
        assert blocks.same_tangent_space(other)
        assert not blocks.same_tangent_space(build_family(4, [1] * 4, [[1, 0, 0, 0]]))

    def test_restrict(self, three_state):
        sub = three_state.restrict([0, 2])
        assert sub.n_states == 2
        assert sub.codim == 0
        assert sub.space.labels == ("0", "2")


class TestDensity:
    def test_zero_theta_is_normalized_nu(self, three_state):
        np.testing.assert_allclose(density(three_state, [0.0]), [1 / 6, 2 / 3, 1 / 6], atol=1e-15)

    def test_log2(self, three_state):
        np.testing.assert_allclose(density(three_state, [np.log(2)]),
                                   np.array([1, 8, 4]) / 13, atol=1e-15)

    def test_monomial_form(self, three_state):
        xi = 0.7
        P = density(three_state, [np.log(xi)])
        mono = np.array([1, 4 * xi, xi ** 2])
        np.testing.assert_allclose(P, mono / mono.sum(), atol=1e-15)

    def test_no_overflow(self, three_state):
        P = density(three_state, [1e4])
        np.testing.assert_allclose(P, [0, 0, 1], atol=1e-15)

    def test_wrong_length(self, three_state):
        with pytest.raises(DimensionMismatch):
            density(three_state, [1.0, 2.0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=2, max_size=2), st.floats(0.1, 10))
    def test_invariances(self, theta, scale):
        base = build_family(4, [1, 2, 3, 4], [[0, 1, 2, 0], [1, 0, 0, 1]])
        shifted = build_family(4, [scale * v for v in [1, 2, 3, 4]],
                               [[1, 2, 3, 1], [1, 0, 0, 1]])
        np.testing.assert_allclose(density(base, theta), density(shifted, theta), atol=1e-12)

    def test_moment_monotone_along_rays(self, rng):
        f = random_family(rng, 5, 2)
        for _ in range(10):
            d = rng.standard_normal(2)
            vals = [d @ moment_map(f, density(f, t * d)) for t in np.linspace(-5, 5, 41)]
            assert np.all(np.diff(vals) >= -1e-12)


class TestMomentMap:
    def test_point_mass_gives_column(self, blocks):
        np.testing.assert_allclose(moment_map(blocks, [0, 0, 1, 0]), [0, 1])

    def test_uniform(self, three_state):
        np.testing.assert_allclose(moment_map(three_state, np.full(3, 1 / 3)), [1.0])

    def test_blocks(self, blocks):
        np.testing.assert_allclose(moment_map(blocks, [0.5, 0, 0.5, 0]), [0.5, 0.5])


class TestConvexSupport:
    def test_three_state(self, three_state):
        cs = convex_support_vertices(three_state)
        assert cs.vertices == {0, 2}
        assert cs.method == "exact"

    def test_partition_all_vertices(self, blocks):
        assert convex_support_vertices(blocks).vertices == {0, 1, 2, 3}

    def test_saturated_hierarchical(self):
        f = hierarchical_family((2, 2), [[1, 2]])
        assert len(convex_support_vertices(f)) == 4

    def test_float_path_agrees(self, rng):
        for _ in range(5):
            f = random_family(rng, 6, 2, integer=False)
            assert (convex_support_vertices(f, "exact").vertices
                    == convex_support_vertices(f, "float").vertices)


class TestIsPartitionFamily:
    def test_blocks(self, blocks):
        assert is_partition_family(blocks).blocks == ((0, 1), (2, 3))

    def test_three_state_is_not(self, three_state):
        assert is_partition_family(three_state) is None

    def test_two_states(self):
        f = build_family(2, [1, 1], [[0, 1]])
        assert is_partition_family(f).blocks == ((0,), (1,))

    def test_uniform_but_not_simplex(self):
        assert is_partition_family(build_family(3, [1, 1, 1], [[0, 1, 2]])) is None
