"""
Tests for point-to-point, Chamfer and classification losses
"""
import math

import numpy as np
import pytest

from core.exceptions.handlers import CardinalityError
from geometry.set_losses import chamfer_loss, chamfer_loss_generalized, point_cls_loss, point_to_point_loss
from models.geometry import DensePointSet


def brute_force_chamfer(a, b):
    def dist(p, q):
        dx, dy = p[0] - q[0], p[1] - q[1]
        return math.sqrt(dx * dx + dy * dy)

    forward = [min(dist(p, q) for q in b) for p in a]
    backward = [min(dist(p, q) for p in a) for q in b]
    return math.fsum(forward + backward) / (2 * len(a))


def random_set(rng, n):
    return DensePointSet.from_xy(rng.uniform(0, 50, size=(n, 2)), rng.uniform(0, 1, size=n))


class TestPointToPoint:
    """Index-matched mean L2"""

    def test_identical(self, rng):
        """A set has zero loss against itself"""
        a = random_set(rng, 10)
        assert point_to_point_loss(a, a) == 0.0

    def test_translation(self, rng):
        """A uniform 3-4 shift costs 5"""
        a = random_set(rng, 10)
        b = a.with_xy(a.xy + [3.0, 4.0])
        assert point_to_point_loss(b, a) == pytest.approx(5.0)

    def test_size_mismatch(self, rng):
        """Sets of different sizes cannot be matched by index"""
        with pytest.raises(CardinalityError):
            point_to_point_loss(random_set(rng, 2), random_set(rng, 3))

    def test_permutation_sensitive(self, rng):
        """Reordering costs point loss but not set loss"""
        a = random_set(rng, 16)
        shuffled = DensePointSet(a.points[np.roll(np.arange(16), 1)])
        assert point_to_point_loss(shuffled, a) > 0.0
        assert chamfer_loss(shuffled, a) == 0.0


class TestChamfer:
    """Symmetric Chamfer distance over 2n"""

    def test_two_point_example(self):
        """Each point is one unit from its nearest neighbour"""
        r = DensePointSet.from_xy([[0, 0], [2, 0]])
        r_gt = DensePointSet.from_xy([[1, 0], [3, 0]])
        assert chamfer_loss(r, r_gt) == 1.0

    def test_matches_brute_force(self, rng):
        """Chamfer matches nearest-neighbour brute force for n up to 32"""
        for n in range(1, 33):
            a, b = random_set(rng, n), random_set(rng, n)
            assert chamfer_loss(a, b) == brute_force_chamfer(a.xy.tolist(), b.xy.tolist())

    def test_symmetric(self, rng):
        """Chamfer does not depend on argument order"""
        a, b = random_set(rng, 20), random_set(rng, 20)
        assert chamfer_loss(a, b) == chamfer_loss(b, a)

    def test_bounded_by_point_loss(self, rng):
        """Chamfer never exceeds the index-matched loss"""
        for _ in range(50):
            a, b = random_set(rng, 25), random_set(rng, 25)
            assert chamfer_loss(a, b) <= point_to_point_loss(a, b)

    def test_translation_invariant(self, rng):
        """Moving both sets together leaves Chamfer unchanged"""
        a, b = random_set(rng, 12), random_set(rng, 12)
        shift = [7.0, -2.0]
        moved = chamfer_loss(a.with_xy(a.xy + shift), b.with_xy(b.xy + shift))
        assert moved == pytest.approx(chamfer_loss(a, b), abs=1e-12)

    def test_unequal_sizes(self, rng):
        """The symmetric form needs equal sizes"""
        with pytest.raises(CardinalityError):
            chamfer_loss(random_set(rng, 3), random_set(rng, 4))

    def test_generalized_variant(self, rng):
        """The generalized form averages each direction over its own size"""
        a, b = random_set(rng, 9), random_set(rng, 9)
        assert chamfer_loss_generalized(a, b) == pytest.approx(chamfer_loss(a, b))
        small = DensePointSet.from_xy([[0, 0]])
        large = DensePointSet.from_xy([[0, 0], [2, 0]])
        # forward 0 / 1, backward (0 + 2) / 2
        assert chamfer_loss_generalized(small, large) == 0.5


class TestPointClassification:
    """Binary cross entropy over per-point foreground probabilities"""

    def test_perfect(self):
        """Confident correct predictions cost almost nothing"""
        eps = 1e-9
        assert point_cls_loss([1 - eps, eps], [1, 0]) <= 1e-6

    def test_half(self):
        """Predicting 0.5 costs log 2 per point"""
        assert point_cls_loss([0.5, 0.5, 0.5], [1, 0, 1]) == pytest.approx(math.log(2.0))

    def test_formula(self):
        """Loss is the mean binary cross entropy"""
        expected = (-math.log(0.9) - math.log(0.8)) / 2
        assert point_cls_loss([0.9, 0.2], [1, 0]) == pytest.approx(expected)

    def test_saturated_is_finite(self):
        """Saturated wrong predictions are clipped to a finite loss"""
        assert np.isfinite(point_cls_loss([0.0, 1.0], [1, 0]))

    def test_length_mismatch(self):
        """Predictions and labels must have the same length"""
        with pytest.raises(CardinalityError):
            point_cls_loss([0.5], [1, 0])
