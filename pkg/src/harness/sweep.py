"""
Reconstruction sweep: encode, decode and score every mask for every configured cell
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from core.exceptions.handlers import ConfigurationError, DensePointsException
from core.logging.setup import get_logger
from geometry.decode import decode
from geometry.mask_core import mask_iou
from geometry.sampling import MaskEncoder
from models.configs import DecodeConfig, SamplingBandConfig
from models.enums import Decoder, SizeBucket, Strategy
from models.geometry import BinaryMask, SamplerSeed
from schemas.reports import ReconstructionReport, ReconstructionRow, ReportMeta

logger = get_logger("harness.sweep")

Cell = Tuple[Strategy, int, Decoder]


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep result depends on besides the corpus"""
    strategies: Tuple[Strategy, ...] = (Strategy.DTS,)
    n_values: Tuple[int, ...] = (9, 25, 49, 81, 225, 441, 729)
    decoders: Tuple[Decoder, ...] = (Decoder.TRIANGULATION,)
    band: SamplingBandConfig = field(default_factory=SamplingBandConfig)
    decode: DecodeConfig = field(default_factory=DecodeConfig)
    seed: SamplerSeed = field(default_factory=SamplerSeed)
    workers: int = 1
    progress: bool = False
    corpus_name: str = "synthetic"

    def __post_init__(self):
        if not self.n_values:
            raise ConfigurationError("at least one n value is required", field="n_values")
        if list(self.n_values) != sorted(self.n_values):
            raise ConfigurationError(f"n values must be ascending, got {list(self.n_values)}", field="n_values")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}", field="workers")

    def cells(self) -> List[Cell]:
        return list(product(self.strategies, self.n_values, self.decoders))

    def meta(self, corpus_size: int, clamped_masks: int = 0) -> ReportMeta:
        return ReportMeta(
            corpus=self.corpus_name,
            corpus_size=corpus_size,
            clamped_masks=clamped_masks,
            delta=self.band.delta,
            tau=self.decode.tau,
            seed=self.seed.seed,
            hull_k=self.decode.hull_k,
        )


def _mean(values: Sequence[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


class ReconstructionSweep:
    """Runs one sweep; masks are independent work items merged in corpus order"""

    def __init__(self, corpus: Sequence[BinaryMask], config: SweepConfig):
        if not corpus:
            raise ConfigurationError("reconstruction sweep needs a non-empty corpus", field="corpus")
        self.corpus = list(corpus)
        self.config = config

    def _evaluate(self, index: int) -> Tuple[Dict[Cell, Optional[float]], bool]:
        mask = self.corpus[index]
        encoder = MaskEncoder(mask, self.config.band)
        results: Dict[Cell, Optional[float]] = {}
        for strategy, n in product(self.config.strategies, self.config.n_values):
            try:
                points = encoder.encode(strategy, n, self.config.seed.derive(index, n))
            except DensePointsException as exc:
                logger.debug(
                    "encode failed",
                    extra={"mask": index, "strategy": strategy.value, "n": n, "error_code": exc.error_code}
                )
                points = None
            for decoder in self.config.decoders:
                cell = (strategy, n, decoder)
                if points is None:
                    results[cell] = None
                    continue
                try:
                    decoded = decode(points, decoder, mask.height, mask.width, self.config.decode)
                    results[cell] = mask_iou(decoded, mask)
                except DensePointsException as exc:
                    logger.debug(
                        "decode failed",
                        extra={"mask": index, "cell": [strategy.value, n, decoder.value], "error_code": exc.error_code}
                    )
                    results[cell] = None
        return results, encoder.denominator_clamped

    def _collect(self) -> List[Tuple[Dict[Cell, Optional[float]], bool]]:
        indices = range(len(self.corpus))
        bar = tqdm(total=len(self.corpus), desc="sweep", disable=not self.config.progress)
        try:
            if self.config.workers == 1:
                collected = []
                for index in indices:
                    collected.append(self._evaluate(index))
                    bar.update()
                return collected
            with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                collected = []
                for result in executor.map(self._evaluate, indices):
                    collected.append(result)
                    bar.update()
                return collected
        finally:
            bar.close()

    def run(self) -> ReconstructionReport:
        collected = self._collect()
        per_mask = [results for results, _ in collected]
        clamped = sum(1 for _, flag in collected if flag)
        buckets = [SizeBucket.for_area(mask.area) for mask in self.corpus]
        rows = []
        for cell in self.config.cells():
            strategy, n, decoder = cell
            scored = [(result[cell], bucket) for result, bucket in zip(per_mask, buckets)]
            ious = [iou for iou, _ in scored if iou is not None]
            by_size = {
                size: [iou for iou, bucket in scored if iou is not None and bucket is size]
                for size in SizeBucket
            }
            row = ReconstructionRow(
                strategy=strategy,
                n=n,
                decoder=decoder,
                mean_iou=_mean(ious),
                iou_small=_mean(by_size[SizeBucket.SMALL]),
                iou_medium=_mean(by_size[SizeBucket.MEDIUM]),
                iou_large=_mean(by_size[SizeBucket.LARGE]),
                successes=len(ious),
                failures=len(scored) - len(ious),
            )
            if row.failures:
                logger.warning(
                    "sweep cell had failures",
                    extra={"cell": [strategy.value, n, decoder.value], "failures": row.failures}
                )
            rows.append(row)
        logger.info("sweep finished", extra={"masks": len(self.corpus), "cells": len(rows), "clamped_masks": clamped})
        return ReconstructionReport(meta=self.config.meta(len(self.corpus), clamped), rows=rows)


def reconstruction_sweep(
    corpus: Sequence[BinaryMask],
    strategies: Sequence[Strategy],
    n_values: Sequence[int],
    decoders: Sequence[Decoder],
    cfg: Optional[SweepConfig] = None,
) -> ReconstructionReport:
    """Mean reconstruction IoU per (strategy, n, decoder); a pure function of corpus, config and seed"""
    base = cfg or SweepConfig()
    config = SweepConfig(
        strategies=tuple(Strategy(s) for s in strategies),
        n_values=tuple(int(n) for n in n_values),
        decoders=tuple(Decoder(d) for d in decoders),
        band=base.band,
        decode=base.decode,
        seed=base.seed,
        workers=base.workers,
        progress=base.progress,
        corpus_name=base.corpus_name,
    )
    return ReconstructionSweep(corpus, config).run()
