"""
Shared-field kernels: bilinear sampling, group pooling, offset fields,
position-sensitive attribute maps, and the per-object head cost model
"""
import math
from typing import List, Sequence

import numpy as np

from core.exceptions.handlers import CardinalityError, ConfigurationError, OutOfBoundsError
from models.configs import GroupPoolConfig
from models.enums import CodecDefaults, HeadMode
from models.fields import AttributeMapStack, FeatureField, HeadCost, OffsetFieldStack
from models.geometry import Box, DensePointSet


def _blend(grids: np.ndarray, index: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Bilinear read of grids[index[i]] at (x[i], y[i]); grids is (G, C, H, W), result (N, C)"""
    height, width = grids.shape[-2:]
    x = np.clip(np.asarray(x, dtype=np.float64), 0.0, width - 1)
    y = np.clip(np.asarray(y, dtype=np.float64), 0.0, height - 1)
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    x1 = np.minimum(x0 + 1, width - 1)
    y1 = np.minimum(y0 + 1, height - 1)
    wx = (x - x0)[:, None]
    wy = (y - y0)[:, None]
    top = (1.0 - wx) * grids[index, :, y0, x0] + wx * grids[index, :, y0, x1]
    bottom = (1.0 - wx) * grids[index, :, y1, x0] + wx * grids[index, :, y1, x1]
    return (1.0 - wy) * top + wy * bottom


def bilinear_sample(field: FeatureField, x, y) -> np.ndarray:
    """Per-channel bilinear value at cell coordinates (x, y), clamped to the grid.

    Scalar coordinates give shape (C,); arrays give (C, N).
    """
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    xs, ys = np.broadcast_arrays(np.atleast_1d(x), np.atleast_1d(y))
    xs, ys = xs.reshape(-1), ys.reshape(-1)
    out = _blend(field.values[None], np.zeros(len(xs), dtype=np.int64), xs, ys).T
    return out[:, 0] if scalar else out


def group_pool(features: np.ndarray, cfg: GroupPoolConfig) -> np.ndarray:
    """Channelwise max over k contiguous index groups, concatenated (k * C values).

    Groups hold ceil(n / k) points with a shorter tail; when that would leave
    a group empty the points are split as evenly as possible instead.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features[:, None]
    n = len(features)
    if cfg.k > n:
        raise ConfigurationError(f"group count {cfg.k} exceeds point count {n}", field="k")
    size = math.ceil(n / cfg.k)
    if size * (cfg.k - 1) < n:
        groups = [features[i * size:(i + 1) * size] for i in range(cfg.k)]
    else:
        groups = np.array_split(features, cfg.k)
    return np.concatenate([group.max(axis=0) for group in groups])


def apply_offset_fields(stack: OffsetFieldStack, pts: DensePointSet) -> DensePointSet:
    """Move point i by field i sampled at its own location; scores unchanged"""
    if stack.n != pts.n:
        raise CardinalityError(f"{stack.n} offset fields for {pts.n} points")
    x = pts.xy[:, 0] / stack.stride
    y = pts.xy[:, 1] / stack.stride
    offsets = _blend(stack.fields, np.arange(pts.n), x, y)
    return pts.with_xy(pts.xy + offsets)


def attribute_bins(pts: DensePointSet, box: Box, bins: int) -> np.ndarray:
    """(row, col) bin of each point within the box's bins x bins partition"""
    inside = box.contains(pts.xy[:, 0], pts.xy[:, 1])
    if not inside.all():
        index = int(np.flatnonzero(~inside)[0])
        raise OutOfBoundsError(f"point {index} lies outside box {box.to_list()}", index=index)
    u = (pts.xy[:, 0] - box.x_min) / box.width if box.width > 0 else np.zeros(pts.n)
    v = (pts.xy[:, 1] - box.y_min) / box.height if box.height > 0 else np.zeros(pts.n)
    col = np.minimum(np.floor(u * bins).astype(np.int64), bins - 1)
    row = np.minimum(np.floor(v * bins).astype(np.int64), bins - 1)
    return np.column_stack([row, col])


def sample_attribute_map(stack: AttributeMapStack, pts: DensePointSet, box: Box) -> np.ndarray:
    """Each point reads the map of the bin it falls in, bilinearly at its own location"""
    bins = attribute_bins(pts, box, stack.bins)
    channel = bins[:, 0] * stack.bins + bins[:, 1]
    x = pts.xy[:, 0] / stack.stride
    y = pts.xy[:, 1] / stack.stride
    return _blend(stack.maps[:, None], channel, x, y)[:, 0]


def head_cost(
    n: int,
    k: int,
    channels: int,
    mode: HeadMode,
    bins: int = CodecDefaults.ATTRIBUTE_BINS,
) -> HeadCost:
    """Per-object multiply-accumulates of the point head.

    tower           2 towers x 3 convs x 3x3 kernel: 54 C^2
    concat          classification n C^2, regression 2 n^2 C
    group_pool      classification k C^2, regression 2 n^2 C
    shared_offset   classification k C^2, regression 2 n C, attribute map 9 C s^2
    """
    mode = HeadMode(mode)
    c2 = channels * channels
    tower = 2 * 3 * 9 * c2
    attribute = 0
    if mode is HeadMode.CONCAT:
        classification = n * c2
        regression = 2 * n * n * channels
    elif mode is HeadMode.GROUP_POOL:
        classification = k * c2
        regression = 2 * n * n * channels
    else:
        classification = k * c2
        regression = 2 * n * channels
        attribute = 9 * channels * bins * bins
    return HeadCost(
        n=n,
        k=k,
        channels=channels,
        mode=mode,
        tower=tower,
        classification=classification,
        regression=regression,
        attribute=attribute,
    )


def head_cost_table(
    n_values: Sequence[int],
    k: int = CodecDefaults.GROUPS,
    channels: int = CodecDefaults.CHANNELS,
    bins: int = CodecDefaults.ATTRIBUTE_BINS,
) -> List[HeadCost]:
    """Costs for every mode at every n, grouped by n"""
    return [head_cost(n, k, channels, mode, bins) for n in n_values for mode in HeadMode]
