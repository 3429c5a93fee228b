#!/usr/bin/env python3
"""
Command-line interface for densepoints
encode / decode single masks, run the reconstruction sweep, loss and cost reports, write synthetic corpora
"""
import argparse
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from core.config.manager import ConfigManager, RunConfig, get_config_manager
from core.config.settings import settings
from core.exceptions.handlers import ConfigurationError, ExceptionHandler
from core.logging.setup import get_logger, run_filter, setup_logging
from geometry.decode import decode, decode_mesh, delaunay
from geometry.sampling import MaskEncoder
from harness.annotations import load_annotations
from harness.exporters import (
    read_pgm,
    read_point_set,
    read_rle,
    read_triangulation,
    write_corpus,
    write_field,
    write_mask,
    write_point_set,
    write_triangulation,
)
from harness.reports import cost_frame, loss_report, write_csv, write_loss_report, write_reconstruction_report
from harness.sweep import SweepConfig, reconstruction_sweep
from harness.synthetic import synthetic_corpus
from models.enums import Decoder, Strategy
from models.geometry import BinaryMask

logger = get_logger("cli")


class DensePointsCLI:
    """Subcommand implementations; each returns the paths it wrote"""

    def __init__(self, manager: Optional[ConfigManager] = None):
        self._manager = manager

    @property
    def config_manager(self) -> ConfigManager:
        if self._manager is None:
            self._manager = get_config_manager()
        return self._manager

    def run_config(self, args: argparse.Namespace) -> RunConfig:
        """Profile values override the environment, flags override the profile"""
        overrides: Dict[str, Any] = {
            "delta": args.delta,
            "seed": args.seed,
            "tau": args.tau,
            "hull_k": getattr(args, "hull_k", None),
            "workers": getattr(args, "workers", None),
            "corpus_size": getattr(args, "corpus_size", None),
            "image_size": getattr(args, "image_size", None),
            "sigma": getattr(args, "sigma", None),
            "groups": getattr(args, "groups", None),
            "channels": getattr(args, "channels", None),
            "attribute_bins": getattr(args, "bins", None),
            "annotations": getattr(args, "annotations", None),
        }
        strategies = getattr(args, "strategy", None)
        decoders = getattr(args, "decoder", None)
        n_values = getattr(args, "n", None)
        if isinstance(strategies, list):
            overrides["strategies"] = strategies
        if isinstance(decoders, list):
            overrides["decoders"] = decoders
        if isinstance(n_values, list):
            overrides["n_values"] = sorted(set(n_values))
        if getattr(args, "progress", False):
            overrides["progress"] = True
        return self.config_manager.get_merged_config(args.profile, overrides)

    @staticmethod
    def load_corpus(cfg: RunConfig) -> Tuple[List[BinaryMask], str]:
        if cfg.annotations:
            records = load_annotations(cfg.annotations)
            return [record.mask for record in records], Path(cfg.annotations).name
        corpus = synthetic_corpus(cfg.sampler_seed(), cfg.corpus_size, cfg.image_size)
        return corpus, f"synthetic-{cfg.corpus_size}x{cfg.image_size}-seed{cfg.seed}"

    @staticmethod
    def read_mask(args: argparse.Namespace) -> BinaryMask:
        if args.mask:
            path = Path(args.mask)
            if path.suffix == ".json":
                return read_rle(path)
            return read_pgm(path)
        if args.annotations:
            records = load_annotations(args.annotations)
            if not 0 <= args.index < len(records):
                raise ConfigurationError(
                    f"annotation index {args.index} out of range for {len(records)} records",
                    field="index"
                )
            return records[args.index].mask
        raise ConfigurationError("encode needs --mask or --annotations", field="mask")

    def encode(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        mask = self.read_mask(args)
        encoder = MaskEncoder(mask, cfg.band())
        strategy = Strategy(args.strategy or cfg.strategies[0])
        n = args.n or cfg.n_values[0]
        points = encoder.encode(strategy, n, cfg.sampler_seed())
        out = Path(args.out)
        written = [write_point_set(points, out, height=mask.height, width=mask.width)]
        if args.fields:
            stem = out.parent / out.name.replace(".json", "")
            written += write_field(encoder.distance, stem.parent / f"{stem.name}.distance")
            written += write_field(encoder.probability, stem.parent / f"{stem.name}.probability")
        logger.info("encoded", extra={"strategy": strategy.value, "n": n, "area": mask.area})
        return written

    def decode(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        if args.mesh:
            return self.decode_stored_mesh(args, cfg)
        points, document = read_point_set(args.points)
        height = args.height or document.height
        width = args.width or document.width
        if not height or not width:
            raise ConfigurationError("image size unknown; pass --height and --width", field="height/width")
        decoder = Decoder(args.decoder or cfg.decoders[0])
        mask = decode(points, decoder, height, width, cfg.decode_config())
        out = Path(args.out)
        written = write_mask(mask, out)
        if args.triangulation and decoder is Decoder.TRIANGULATION:
            written.append(write_triangulation(delaunay(points), out.parent / f"{out.name}.triangulation.json"))
        logger.info("decoded", extra={"decoder": decoder.value, "n": points.n, "area": mask.area})
        return written

    @staticmethod
    def decode_stored_mesh(args: argparse.Namespace, cfg: RunConfig) -> List[Path]:
        """Threshold a saved triangulation without re-triangulating its vertices"""
        if args.decoder and Decoder(args.decoder) is not Decoder.TRIANGULATION:
            raise ConfigurationError("--mesh decodes with the triangulation decoder only", field="decoder")
        if not args.height or not args.width:
            raise ConfigurationError("image size unknown; pass --height and --width", field="height/width")
        tri = read_triangulation(args.mesh)
        mask = decode_mesh(tri, args.height, args.width, cfg.decode_config())
        written = write_mask(mask, Path(args.out))
        logger.info("decoded", extra={"decoder": "mesh", "triangles": len(tri), "area": mask.area})
        return written

    def sweep(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        corpus, corpus_name = self.load_corpus(cfg)
        sweep_cfg = SweepConfig(
            band=cfg.band(),
            decode=cfg.decode_config(),
            seed=cfg.sampler_seed(),
            workers=cfg.workers,
            progress=cfg.progress,
            corpus_name=corpus_name,
        )
        report = reconstruction_sweep(corpus, cfg.strategies, cfg.n_values, cfg.decoders, sweep_cfg)
        for row in report.rows:
            iou = "n/a" if row.mean_iou is None else f"{row.mean_iou:.4f}"
            print(f"  {row.strategy.value:>8} n={row.n:<4} {row.decoder.value:<13} IoU {iou}  failures {row.failures}")
        return write_reconstruction_report(report, args.out or cfg.reports_dir)

    def losses(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        corpus, corpus_name = self.load_corpus(cfg)
        report = loss_report(
            corpus, cfg.strategies, cfg.n_values, cfg.sigma, cfg.sampler_seed(), cfg.band(), corpus_name
        )
        return write_loss_report(report, args.out or cfg.reports_dir)

    def cost(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        frame = cost_frame(cfg.n_values, cfg.groups, cfg.channels, cfg.attribute_bins)
        print(frame.to_string(index=False))
        return [write_csv(frame, Path(args.out or cfg.reports_dir) / "cost.csv", "cost")]

    def synth(self, args: argparse.Namespace) -> List[Path]:
        cfg = self.run_config(args)
        corpus = synthetic_corpus(cfg.sampler_seed(), cfg.corpus_size, cfg.image_size)
        return [write_corpus(corpus, args.out)]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", help="Run profile from config/profiles.json")
    common.add_argument("--seed", type=int, help="Sampler seed")
    common.add_argument("--delta", type=float, help="DTS band width (default 0.04)")
    common.add_argument("--tau", type=float, help="Score threshold (default 0.5)")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Console log level")
    return common


def _corpus_options() -> argparse.ArgumentParser:
    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument("--annotations", type=Path, help="COCO-style annotation file (synthetic corpus if omitted)")
    corpus.add_argument("--corpus-size", type=int, help="Synthetic corpus size")
    corpus.add_argument("--image-size", type=int, help="Synthetic mask side in pixels")
    corpus.add_argument("--strategy", nargs="+", choices=[s.value for s in Strategy], help="Encoders")
    corpus.add_argument("--n", nargs="+", type=int, help="Point counts")
    corpus.add_argument("--workers", type=int, help="Worker threads")
    corpus.add_argument("--progress", action="store_true", help="Show a progress bar")
    corpus.add_argument("--out", type=Path, help="Report directory")
    return corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densepoints",
        description="Mask to dense point-set codec",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  densepoints encode --mask ring.pgm --strategy dts --n 81 --out ring.points.json
  densepoints decode --points ring.points.json --decoder triangulation --out ring.decoded
  densepoints decode --mesh ring.decoded.triangulation.json --height 64 --width 64 --out ring.mesh
  densepoints sweep --profile table8 --annotations instances_val2017.json --out reports/
  densepoints cost --n 9 25 81 729
        """
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    common = _common_options()
    corpus = _corpus_options()

    encode_parser = subparsers.add_parser("encode", parents=[common], help="Mask to point-set JSON")
    source = encode_parser.add_mutually_exclusive_group()
    source.add_argument("--mask", type=Path, help="Mask as binary PGM or RLE JSON")
    source.add_argument("--annotations", type=Path, help="COCO-style annotation file")
    encode_parser.add_argument("--index", type=int, default=0, help="Annotation index when reading --annotations")
    encode_parser.add_argument("--strategy", choices=[s.value for s in Strategy], help="Encoder")
    encode_parser.add_argument("--n", type=int, help="Point count")
    encode_parser.add_argument("--fields", action="store_true", help="Also export distance and probability fields")
    encode_parser.add_argument("--out", type=Path, required=True, help="Point-set JSON path")

    decode_parser = subparsers.add_parser("decode", parents=[common], help="Point-set JSON to PGM + RLE JSON")
    decode_source = decode_parser.add_mutually_exclusive_group(required=True)
    decode_source.add_argument("--points", type=Path, help="Point-set JSON")
    decode_source.add_argument("--mesh", type=Path, help="Triangulation JSON written by --triangulation")
    decode_parser.add_argument("--decoder", choices=[d.value for d in Decoder], help="Decoder")
    decode_parser.add_argument("--hull-k", type=int, help="Concave hull neighbour count")
    decode_parser.add_argument("--height", type=int, help="Image height if the point set has none")
    decode_parser.add_argument("--width", type=int, help="Image width if the point set has none")
    decode_parser.add_argument("--triangulation", action="store_true", help="Also export the triangulation")
    decode_parser.add_argument("--out", type=Path, required=True, help="Output stem (<out>.pgm, <out>.rle.json)")

    sweep_parser = subparsers.add_parser("sweep", parents=[common, corpus], help="Reconstruction IoU sweep")
    sweep_parser.add_argument("--decoder", nargs="+", choices=[d.value for d in Decoder], help="Decoders")
    sweep_parser.add_argument("--hull-k", type=int, help="Concave hull neighbour count")

    losses_parser = subparsers.add_parser("losses", parents=[common, corpus], help="Point vs set loss report")
    losses_parser.add_argument("--sigma", type=float, help="Jitter standard deviation in pixels")

    cost_parser = subparsers.add_parser("cost", parents=[common], help="Head cost table")
    cost_parser.add_argument("--n", nargs="+", type=int, help="Point counts")
    cost_parser.add_argument("--groups", type=int, help="Group pooling groups")
    cost_parser.add_argument("--channels", type=int, help="Feature channels")
    cost_parser.add_argument("--bins", type=int, help="Attribute map bins per side")
    cost_parser.add_argument("--out", type=Path, help="Report directory")

    synth_parser = subparsers.add_parser("synth", parents=[common], help="Write a synthetic corpus as COCO RLE")
    synth_parser.add_argument("--corpus-size", type=int, help="Number of masks")
    synth_parser.add_argument("--image-size", type=int, help="Mask side in pixels")
    synth_parser.add_argument("--out", type=Path, required=True, help="Annotation file path")

    return parser


def main(argv: Optional[List[str]] = None, manager: Optional[ConfigManager] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 0

    config = settings
    if args.log_level:
        config = settings.model_copy(update={"log": settings.log.model_copy(update={"level": args.log_level})})
    setup_logging(config)
    run_filter.set_run_id(uuid.uuid4().hex[:12])

    cli = DensePointsCLI(manager)
    try:
        written = getattr(cli, args.command)(args)
    except Exception as e:
        return ExceptionHandler(debug=config.debug).handle(e)

    for path in written:
        print(f"✅ wrote {path}")
    return 0
