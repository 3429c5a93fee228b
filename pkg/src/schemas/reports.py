"""
Report schemas shared by the sweep, loss and cost commands
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from models.enums import CodecDefaults, Decoder, HeadMode, Strategy


class ReportMeta(BaseModel):
    """Configuration echo and the conventions the numbers depend on"""
    schema_version: int = CodecDefaults.REPORT_SCHEMA_VERSION
    corpus: str
    corpus_size: int = Field(..., ge=0)
    delta: float
    tau: float
    seed: int
    hull_k: int
    fill_rule: str = "even-odd, top-left: centers on top/left edges inside"
    threshold_rule: str = "score >= tau"
    sampling_band: str = "closed, D <= delta, delta doubles on underflow"
    dts_draw: str = "pixel centers without replacement"
    distance_denominator: str = "sqrt(max(w,1) * max(h,1))"
    clamped_masks: int = Field(0, ge=0)
    averaging: str = "macro over masks, failures excluded and counted"


class ReconstructionRow(BaseModel):
    """Mean IoU of one (strategy, n, decoder) cell"""
    strategy: Strategy
    n: int
    decoder: Decoder
    mean_iou: Optional[float] = Field(None, ge=0.0, le=1.0)
    iou_small: Optional[float] = Field(None, ge=0.0, le=1.0)
    iou_medium: Optional[float] = Field(None, ge=0.0, le=1.0)
    iou_large: Optional[float] = Field(None, ge=0.0, le=1.0)
    successes: int = Field(0, ge=0)
    failures: int = Field(0, ge=0)


class ReconstructionReport(BaseModel):
    """Every configured (strategy, n, decoder) cell exactly once"""
    meta: ReportMeta
    rows: List[ReconstructionRow]


class LossRow(BaseModel):
    """Localization and classification losses of perturbed encodings"""
    strategy: Strategy
    n: int
    sigma: float
    masks: int
    l_point: float
    l_set: float
    l_point_shuffled: float
    l_set_shuffled: float
    l_cls: float


class LossReport(BaseModel):
    meta: ReportMeta
    rows: List[LossRow]


class CostRow(BaseModel):
    """Head cost of one (n, mode) pair; macs is the sum of the components"""
    n: int
    k: int
    channels: int
    mode: HeadMode
    macs: int
    tower: int
    classification: int
    regression: int
    attribute: int
