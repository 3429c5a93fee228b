"""
Loss and cost reports plus the CSV/JSON writers shared by every report
"""
import json
import math
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from core.exceptions.handlers import ConfigurationError, DensePointsException
from core.logging.setup import get_logger
from geometry.field_ops import head_cost_table
from geometry.sampling import MaskEncoder
from geometry.set_losses import chamfer_loss, point_cls_loss, point_to_point_loss
from models.configs import DecodeConfig, SamplingBandConfig
from models.enums import CodecDefaults, Strategy
from models.geometry import BinaryMask, DensePointSet, SamplerSeed
from schemas.reports import CostRow, LossReport, LossRow, ReconstructionReport, ReportMeta

logger = get_logger("harness.reports")


def _read_labels(mask: BinaryMask, xy: np.ndarray) -> np.ndarray:
    cols = np.clip(np.floor(xy[:, 0]).astype(np.int64), 0, mask.width - 1)
    rows = np.clip(np.floor(xy[:, 1]).astype(np.int64), 0, mask.height - 1)
    return mask.cells[rows, cols].astype(np.float64)


def loss_report(
    corpus: Sequence[BinaryMask],
    strategies: Sequence[Strategy],
    n_values: Sequence[int],
    sigma: float = 1.0,
    seed: Optional[SamplerSeed] = None,
    band: Optional[SamplingBandConfig] = None,
    corpus_name: str = "synthetic",
) -> LossReport:
    """L_point and L_set between jittered and reference encodings, averaged over the corpus.

    The shuffled columns compare the reference with an index permutation of
    itself. l_cls scores the reference labels against labels re-read at the
    jittered positions.
    """
    if not corpus:
        raise ConfigurationError("loss report needs a non-empty corpus", field="corpus")
    if sigma < 0 or math.isnan(sigma):
        raise ConfigurationError(f"sigma must be non-negative, got {sigma}", field="sigma")
    seed = seed or SamplerSeed()
    band = band or SamplingBandConfig()
    encoders = [MaskEncoder(mask, band) for mask in corpus]

    rows = []
    for strategy in strategies:
        strategy = Strategy(strategy)
        for n in n_values:
            totals = {"l_point": [], "l_set": [], "l_point_shuffled": [], "l_set_shuffled": [], "l_cls": []}
            for index, encoder in enumerate(encoders):
                try:
                    reference = encoder.encode(strategy, n, seed.derive(index, n))
                except DensePointsException as exc:
                    logger.debug("encode failed", extra={"mask": index, "n": n, "error_code": exc.error_code})
                    continue
                rng = seed.derive(index, n, 1).generator()
                jittered = reference.with_xy(reference.xy + rng.normal(0.0, sigma, size=(reference.n, 2)))
                shuffled = DensePointSet(reference.points[rng.permutation(reference.n)])
                totals["l_point"].append(point_to_point_loss(jittered, reference))
                totals["l_set"].append(chamfer_loss(jittered, reference))
                totals["l_point_shuffled"].append(point_to_point_loss(shuffled, reference))
                totals["l_set_shuffled"].append(chamfer_loss(shuffled, reference))
                totals["l_cls"].append(point_cls_loss(_read_labels(encoder.mask, jittered.xy), reference.scores))
            masks = len(totals["l_point"])
            means = {key: (math.fsum(values) / masks if masks else 0.0) for key, values in totals.items()}
            rows.append(LossRow(strategy=strategy, n=n, sigma=sigma, masks=masks, **means))

    meta = ReportMeta(
        corpus=corpus_name,
        corpus_size=len(corpus),
        clamped_masks=sum(1 for encoder in encoders if encoder.denominator_clamped),
        delta=band.delta,
        tau=DecodeConfig().tau,
        seed=seed.seed,
        hull_k=DecodeConfig().hull_k,
    )
    return LossReport(meta=meta, rows=rows)


def cost_frame(
    n_values: Sequence[int],
    k: int = CodecDefaults.GROUPS,
    channels: int = CodecDefaults.CHANNELS,
    bins: int = CodecDefaults.ATTRIBUTE_BINS,
) -> pd.DataFrame:
    """(n, k, mode, macs, components...) rows of the head cost model"""
    rows = [CostRow(**cost.to_dict()) for cost in head_cost_table(n_values, k, channels, bins)]
    return rows_frame(rows)


def rows_frame(rows: Sequence[BaseModel]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump(mode="json") for row in rows])


def write_csv(frame: pd.DataFrame, path: Union[str, Path], schema: str) -> Path:
    """CSV with a leading '# schema=<name> version=<v>' line"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        handle.write(f"# schema={schema} version={CodecDefaults.REPORT_SCHEMA_VERSION}\n")
        frame.to_csv(handle, index=False, lineterminator="\n")
    logger.info("report written", extra={"path": str(path), "rows": len(frame)})
    return path


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def write_json(report: BaseModel, path: Union[str, Path]) -> Path:
    """Byte-stable JSON: sorted keys, two-space indent"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as handle:
        json.dump(report.model_dump(mode="json"), handle, sort_keys=True, indent=2)
        handle.write("\n")
    logger.info("report written", extra={"path": str(path)})
    return path


def write_reconstruction_report(report: ReconstructionReport, out_dir: Union[str, Path]) -> List[Path]:
    out_dir = Path(out_dir)
    return [
        write_csv(rows_frame(report.rows), out_dir / "reconstruction.csv", "reconstruction"),
        write_json(report, out_dir / "reconstruction.json"),
    ]


def write_loss_report(report: LossReport, out_dir: Union[str, Path]) -> List[Path]:
    out_dir = Path(out_dir)
    return [
        write_csv(rows_frame(report.rows), out_dir / "losses.csv", "losses"),
        write_json(report, out_dir / "losses.json"),
    ]
