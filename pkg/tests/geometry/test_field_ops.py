"""
Tests for the shared-field kernels and the head cost model
"""
import numpy as np
import pytest

from core.exceptions.handlers import CardinalityError, ConfigurationError, OutOfBoundsError
from geometry.field_ops import (
    apply_offset_fields,
    attribute_bins,
    bilinear_sample,
    group_pool,
    head_cost,
    head_cost_table,
    sample_attribute_map,
)
from models.configs import GroupPoolConfig
from models.enums import HeadMode
from models.fields import AttributeMapStack, FeatureField, OffsetFieldStack
from models.geometry import Box, DensePointSet


def four_term_oracle(values, x, y):
    x0, y0 = int(np.floor(x)), int(np.floor(y))
    fx, fy = x - x0, y - y0
    return (
        values[y0, x0] * (1 - fx) * (1 - fy)
        + values[y0, x0 + 1] * fx * (1 - fy)
        + values[y0 + 1, x0] * (1 - fx) * fy
        + values[y0 + 1, x0 + 1] * fx * fy
    )


class TestBilinearSample:
    """Per-channel interpolation with border clamping"""

    def test_lattice_points(self):
        """Integer coordinates read the stored value"""
        field = FeatureField(np.arange(12.0).reshape(3, 4))
        assert bilinear_sample(field, 2, 1).tolist() == [6.0]
        assert bilinear_sample(field, 3, 2).tolist() == [11.0]

    def test_midpoint(self):
        """The cell center averages its four corners"""
        field = FeatureField(np.array([[0.0, 2.0], [4.0, 6.0]]))
        assert bilinear_sample(field, 0.5, 0.5).tolist() == [3.0]

    def test_matches_four_term_oracle(self, rng):
        """Interpolation matches the four-term formula at random points"""
        values = rng.normal(size=(9, 11))
        field = FeatureField(values)
        x = rng.uniform(0, 9.999, size=200)
        y = rng.uniform(0, 7.999, size=200)
        got = bilinear_sample(field, x, y)[0]
        expected = [four_term_oracle(values, xi, yi) for xi, yi in zip(x, y)]
        assert np.allclose(got, expected, rtol=0.0, atol=1e-12)

    def test_linear_along_axes(self):
        """Linear fields are reproduced exactly"""
        values = np.add.outer(np.arange(5.0) * 3.0, np.arange(6.0) * 2.0)
        field = FeatureField(values)
        xs = np.linspace(0, 5, 11)
        assert np.allclose(bilinear_sample(field, xs, np.full(11, 2.0))[0], 6.0 + 2.0 * xs)

    def test_clamps_to_border(self):
        """Coordinates off the grid clamp to the nearest border value"""
        field = FeatureField(np.arange(12.0).reshape(3, 4))
        assert bilinear_sample(field, -3.0, -1.0).tolist() == [0.0]
        assert bilinear_sample(field, 100.0, 100.0).tolist() == [11.0]

    def test_channel_shapes(self):
        """One value per channel, or per channel and point"""
        field = FeatureField(np.stack([np.zeros((3, 3)), np.ones((3, 3))]))
        assert bilinear_sample(field, 1.2, 0.4).shape == (2,)
        assert bilinear_sample(field, [0.0, 1.0, 2.0], [0.0, 0.0, 0.0]).shape == (2, 3)


class TestGroupPool:
    """Contiguous groups, channelwise max"""

    def test_two_groups(self):
        """Each group keeps its maximum"""
        assert group_pool([1.0, 5.0, 2.0, 3.0], GroupPoolConfig(k=2)).tolist() == [5.0, 3.0]

    def test_singletons(self, rng):
        """One point per group is the identity"""
        features = rng.normal(size=(6, 3))
        assert np.array_equal(group_pool(features, GroupPoolConfig(k=6)), features.reshape(-1))

    def test_short_tail(self):
        """The last group may be shorter"""
        assert group_pool(np.arange(10.0), GroupPoolConfig(k=4)).tolist() == [2.0, 5.0, 8.0, 9.0]

    def test_even_split_when_tail_would_be_empty(self):
        """Counts that would leave a group empty split evenly"""
        # ceil(9 / 6) = 2 would leave the sixth group empty
        assert group_pool(np.arange(9.0), GroupPoolConfig(k=6)).tolist() == [1.0, 3.0, 5.0, 6.0, 7.0, 8.0]

    def test_output_size(self, rng):
        """Output has k entries per channel"""
        assert group_pool(rng.normal(size=(81, 4)), GroupPoolConfig(k=9)).shape == (36,)

    def test_permutation_within_group(self, rng):
        """Reordering inside a group does not change the result"""
        features = rng.normal(size=(8, 2))
        swapped = features[[1, 0, 2, 3, 5, 4, 7, 6]]
        within = group_pool(swapped, GroupPoolConfig(k=4))
        assert np.array_equal(within, group_pool(features, GroupPoolConfig(k=4)))

    def test_more_groups_than_points(self):
        """k above the point count is rejected"""
        with pytest.raises(ConfigurationError):
            group_pool([1.0, 2.0], GroupPoolConfig(k=3))

    def test_invalid_k(self):
        """k must be positive"""
        with pytest.raises(ConfigurationError):
            GroupPoolConfig(k=0)


class TestApplyOffsetFields:
    """Per-point displacement read from its own field"""

    @staticmethod
    def points():
        return DensePointSet.from_xy([[1.0, 1.0], [2.5, 3.0], [4.0, 0.5]], [0.1, 0.5, 0.9])

    def test_constant_fields(self):
        """Constant fields translate every point and keep scores"""
        fields = np.zeros((3, 2, 6, 6))
        fields[:, 0] = 1.5
        fields[:, 1] = -2.0
        moved = apply_offset_fields(OffsetFieldStack(fields), self.points())
        assert np.allclose(moved.xy, self.points().xy + [1.5, -2.0])
        assert moved.scores.tolist() == [0.1, 0.5, 0.9]

    def test_zero_fields(self):
        """Zero fields leave points in place"""
        moved = apply_offset_fields(OffsetFieldStack(np.zeros((3, 2, 6, 6))), self.points())
        assert np.array_equal(moved.points, self.points().points)

    def test_fields_are_per_index(self, rng):
        """Point i reads only field i"""
        fields = rng.normal(size=(3, 2, 6, 6))
        fields[1, 0] = 1.0
        fields[1, 1] = 0.0
        moved = apply_offset_fields(OffsetFieldStack(fields), self.points())
        assert moved.xy[1].tolist() == [3.5, 3.0]

    def test_value_shift_translates_output(self, rng):
        """Adding to a field shifts the output by the same amount"""
        fields = rng.normal(size=(3, 2, 6, 6))
        base = apply_offset_fields(OffsetFieldStack(fields), self.points())
        fields[:, 0] += 2.0
        shifted = apply_offset_fields(OffsetFieldStack(fields), self.points())
        assert np.allclose(shifted.xy - base.xy, [[2.0, 0.0]] * 3)

    def test_stride(self):
        """Field coordinates are image coordinates divided by the stride"""
        fields = np.zeros((1, 2, 4, 4))
        fields[0, 0] = np.arange(4.0)[None, :]
        pts = DensePointSet.from_xy([[8.0, 4.0]])
        moved = apply_offset_fields(OffsetFieldStack(fields, stride=4.0), pts)
        assert moved.xy.tolist() == [[10.0, 4.0]]

    def test_count_mismatch(self):
        """One field per point is required"""
        with pytest.raises(CardinalityError):
            apply_offset_fields(OffsetFieldStack(np.zeros((2, 2, 4, 4))), self.points())


class TestAttributeMaps:
    """Position-sensitive score maps"""

    BOX = Box(0.0, 0.0, 8.0, 8.0)

    def test_single_bin(self, rng):
        """One bin is plain bilinear sampling over the box"""
        grid = rng.uniform(size=(9, 9))
        pts = DensePointSet.from_xy([[1.25, 2.5], [7.0, 7.75]])
        scores = sample_attribute_map(AttributeMapStack(grid[None], bins=1), pts, self.BOX)
        assert np.allclose(scores, bilinear_sample(FeatureField(grid), pts.xy[:, 0], pts.xy[:, 1])[0])

    def test_constant_maps(self, rng):
        """Constant maps give constant scores"""
        pts = DensePointSet.from_xy(rng.uniform(0, 8, size=(20, 2)))
        stack = AttributeMapStack(np.full((9, 9, 9), 0.7), bins=3)
        assert np.allclose(sample_attribute_map(stack, pts, self.BOX), 0.7)

    def test_bin_selection(self):
        """Each point reads the map of its bin, the far edge included"""
        maps = np.stack([np.full((9, 9), float(i)) for i in range(4)])
        pts = DensePointSet.from_xy([[1, 1], [7, 1], [1, 7], [7, 7], [8, 8]])
        scores = sample_attribute_map(AttributeMapStack(maps, bins=2), pts, self.BOX)
        assert scores.tolist() == [0.0, 1.0, 2.0, 3.0, 3.0]
        assert attribute_bins(pts, self.BOX, 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1], [1, 1]]

    def test_bin_isolation(self, rng):
        """Changing other bins does not affect a point"""
        maps = rng.uniform(size=(4, 9, 9))
        pts = DensePointSet.from_xy([[1.5, 2.25]])
        before = sample_attribute_map(AttributeMapStack(maps, bins=2), pts, self.BOX)
        maps[1:] = rng.uniform(size=(3, 9, 9))
        after = sample_attribute_map(AttributeMapStack(maps, bins=2), pts, self.BOX)
        assert before.tolist() == after.tolist()

    def test_outside_box(self):
        """Points outside the box are rejected by index"""
        pts = DensePointSet.from_xy([[1, 1], [9, 1]])
        with pytest.raises(OutOfBoundsError) as exc_info:
            sample_attribute_map(AttributeMapStack(np.zeros((4, 9, 9)), bins=2), pts, self.BOX)
        assert exc_info.value.details["index"] == 1


class TestHeadCost:
    """Analytic multiply-accumulate model"""

    def test_shared_offset_regression_is_linear(self):
        """Shared-offset regression grows linearly in n"""
        small = head_cost(9, 9, 256, HeadMode.SHARED_OFFSET)
        large = head_cost(81, 9, 256, HeadMode.SHARED_OFFSET)
        assert large.regression / small.regression == 9

    def test_concat_regression_is_quadratic(self):
        """Concat regression grows quadratically in n"""
        small = head_cost(9, 9, 256, HeadMode.CONCAT)
        large = head_cost(81, 9, 256, HeadMode.CONCAT)
        assert large.regression / small.regression == 81
        assert large.classification / small.classification == 9

    def test_group_pool_classification_is_constant(self):
        """Group-pool classification does not depend on n"""
        small = head_cost(9, 9, 256, HeadMode.GROUP_POOL)
        large = head_cost(81, 9, 256, HeadMode.GROUP_POOL)
        assert small.classification == large.classification == 9 * 256 * 256

    def test_shared_offset_total_is_flat(self):
        """Shared-offset totals stay within ten percent across n"""
        totals = [head_cost(n, 9, 256, HeadMode.SHARED_OFFSET).total for n in (9, 25, 49, 81)]
        assert (max(totals) - min(totals)) / min(totals) < 0.10

    def test_concat_total_grows_superlinearly(self):
        """Concat totals grow faster at each step"""
        ns = (9, 25, 49, 81)
        totals = [head_cost(n, 9, 256, HeadMode.CONCAT).total for n in ns]
        slopes = [(totals[i + 1] - totals[i]) / (ns[i + 1] - ns[i]) for i in range(3)]
        assert slopes[0] < slopes[1] < slopes[2]

    def test_table_rows(self):
        """The table lists every mode for every n"""
        rows = head_cost_table([9, 25])
        assert [(row.n, row.mode) for row in rows] == [
            (9, HeadMode.CONCAT), (9, HeadMode.GROUP_POOL), (9, HeadMode.SHARED_OFFSET),
            (25, HeadMode.CONCAT), (25, HeadMode.GROUP_POOL), (25, HeadMode.SHARED_OFFSET),
        ]
        assert rows[0].to_dict()["macs"] == rows[0].total
