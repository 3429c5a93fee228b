"""
Point supervision metrics: index-matched L2, Chamfer, point classification
Every reduction goes through math.fsum so results do not depend on summation order.
"""
import math
from typing import Sequence

import numpy as np

from core.exceptions.handlers import CardinalityError
from models.enums import CodecDefaults
from models.geometry import DensePointSet


def _pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dx = a[:, None, 0] - b[None, :, 0]
    dy = a[:, None, 1] - b[None, :, 1]
    return np.sqrt(dx * dx + dy * dy)


def point_to_point_loss(r: DensePointSet, r_gt: DensePointSet) -> float:
    """Mean Euclidean distance between index-matched points"""
    if r.n != r_gt.n:
        raise CardinalityError(f"point sets differ in size: {r.n} vs {r_gt.n}")
    dx = r.xy[:, 0] - r_gt.xy[:, 0]
    dy = r.xy[:, 1] - r_gt.xy[:, 1]
    return math.fsum(np.sqrt(dx * dx + dy * dy).tolist()) / r.n


def chamfer_loss(r: DensePointSet, r_gt: DensePointSet) -> float:
    """Symmetric Chamfer distance of two equal-size sets, both directions over 2n"""
    if r.n != r_gt.n:
        raise CardinalityError(f"chamfer loss needs equal set sizes: {r.n} vs {r_gt.n}")
    distances = _pairwise_distances(r.xy, r_gt.xy)
    nearest = np.concatenate([distances.min(axis=1), distances.min(axis=0)])
    return math.fsum(nearest.tolist()) / (2 * r.n)


def chamfer_loss_generalized(r: DensePointSet, r_gt: DensePointSet) -> float:
    """Chamfer variant for unequal sizes: each directed term averaged over its own set"""
    distances = _pairwise_distances(r.xy, r_gt.xy)
    forward = math.fsum(distances.min(axis=1).tolist()) / r.n
    backward = math.fsum(distances.min(axis=0).tolist()) / r_gt.n
    return 0.5 * (forward + backward)


def point_cls_loss(predicted: Sequence[float], labels: Sequence[float]) -> float:
    """Mean binary cross entropy of foreground probabilities, clamped away from 0 and 1"""
    predicted = np.asarray(predicted, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if predicted.size != labels.size:
        raise CardinalityError(f"{predicted.size} probabilities for {labels.size} labels")
    if predicted.size == 0:
        raise CardinalityError("classification loss needs at least one point")
    eps = CodecDefaults.PROBABILITY_CLAMP
    prob = np.clip(predicted, eps, 1.0 - eps)
    terms = -(labels * np.log(prob) + (1.0 - labels) * np.log1p(-prob))
    return math.fsum(terms.tolist()) / predicted.size
