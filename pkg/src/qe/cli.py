"""Command-line front end: enhance, select, apply, eval, bdrate.

Flags mirror the job configuration; a key=value config file can supply
any scalar flag, with explicit command-line flags taking precedence.
Reports are line-oriented key=value text plus CSV blocks and always
include a hash of the resolved configuration. Output frames are written
in display order regardless of the worker thread count (QE_THREADS).

Exit codes: 0 success, 2 configuration, 3 I/O, 4 malformed data,
5 internal consistency.
"""
from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from . import metrics, yuv
from .errors import (
    ConfigError,
    ConsistencyError,
    FormatError,
    ParseError,
    TruncationError,
)
from .frame import CodingMode, FrameBundle, Plane
from .layout import DEFAULT_CTB_SIZE, CtbGrid, load_cu_layout
from .metrics import RdPoint, bd_rate
from .models import (
    MODEL_ORDER,
    ModelId,
    default_model,
    enhance_frame,
    load_weights,
    registry_paths,
)
from .qp_map import build_constant_qp_map, build_qp_map
from .selection import (
    RdInput,
    apply_selection,
    compute_lambda,
    enhance_all,
    select_frame,
)
from .signaling import read_signal_file, signal_bits, write_signal_file

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_CONSISTENCY = 5

THREADS_ENV = "QE_THREADS"


# ---------------------------------------------------------------- config

_JOB_KEYS: dict[str, Callable[[str], object]] = {
    "input": str,
    "width": int,
    "height": int,
    "frames": int,
    "layout": str,
    "qp": int,
    "coding_type": str,
    "prediction": str,
    "original": str,
    "models": str,
    "weights_intra_cq": str,
    "weights_intra_cqp": str,
    "weights_inter_cq": str,
    "weights_inter_cqp": str,
    "model": str,
    "ctb_size": int,
    "lambda_override": float,
    "output": str,
    "signal": str,
    "report": str,
}


@dataclass
class JobConfig:
    """Resolved settings for the enhance/select/apply commands."""

    command: str
    input: str
    width: int
    height: int
    frames: int | None
    layout: str | None
    qp: int | None
    coding_type: CodingMode | None
    prediction: str | None
    original: str | None
    weights: dict[ModelId, str | None]
    model: ModelId | None
    ctb_size: int
    lambda_override: float | None
    output: str | None
    signal: str | None
    report: str | None
    threads: int

    def hash(self) -> str:
        lines = [f"command={self.command}"]
        for key in sorted(_JOB_KEYS):
            if key.startswith("weights_") or key == "models":
                continue
            value = getattr(self, key)
            if isinstance(value, (CodingMode, ModelId)):
                value = value.value
            if value is not None:
                lines.append(f"{key}={value}")
        for mid in MODEL_ORDER:
            if self.weights.get(mid):
                lines.append(f"weights_{mid.value}={self.weights[mid]}")
        return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()[:16]


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ParseError(f"{path}:{lineno}: expected key=value, got {line!r}")
            if key not in _JOB_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value.strip()
    return values


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


def _resolve_job(args: argparse.Namespace) -> JobConfig:
    """Merge config file and flags (flags win), then validate."""
    file_values = _load_config_file(args.config) if args.config else {}
    merged: dict[str, object] = {}
    for key, convert in _JOB_KEYS.items():
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
        elif key in file_values:
            try:
                merged[key] = convert(file_values[key])
            except ValueError:
                raise ConfigError(
                    f"config key {key}={file_values[key]!r} is not a valid {convert.__name__}"
                ) from None
        else:
            merged[key] = None

    for key in ("input", "width", "height"):
        if merged[key] is None:
            raise ConfigError(f"--{key.replace('_', '-')} is required")
    if int(merged["width"]) <= 0 or int(merged["height"]) <= 0:
        raise ConfigError(f"bad frame size {merged['width']}x{merged['height']}")

    if (merged["layout"] is None) == (merged["qp"] is None):
        raise ConfigError("exactly one of --layout and --qp must be given")
    coding_type = None
    if merged["coding_type"] is not None:
        try:
            coding_type = CodingMode(str(merged["coding_type"]))
        except ValueError:
            raise ConfigError(
                f"--coding-type must be intra or inter, got {merged['coding_type']!r}"
            ) from None
    if merged["qp"] is not None and coding_type is None:
        raise ConfigError("constant-QP mode needs --coding-type")

    model = None
    if merged["model"] is not None:
        try:
            model = ModelId(str(merged["model"]))
        except ValueError:
            names = ", ".join(m.value for m in MODEL_ORDER)
            raise ConfigError(f"--model must be one of {names}") from None

    weights: dict[ModelId, str | None] = {}
    from_dir = registry_paths(str(merged["models"])) if merged["models"] else {}
    for mid in MODEL_ORDER:
        explicit = merged[f"weights_{mid.value}"]
        weights[mid] = str(explicit) if explicit else from_dir.get(mid)

    ctb_size = int(merged["ctb_size"]) if merged["ctb_size"] is not None else DEFAULT_CTB_SIZE
    if ctb_size <= 0:
        raise ConfigError(f"--ctb-size must be positive, got {ctb_size}")
    lam = merged["lambda_override"]
    if lam is not None and float(lam) < 0:
        raise ConfigError(f"--lambda-override must be >= 0, got {lam}")

    return JobConfig(
        command=args.command,
        input=str(merged["input"]),
        width=int(merged["width"]),
        height=int(merged["height"]),
        frames=int(merged["frames"]) if merged["frames"] is not None else None,
        layout=str(merged["layout"]) if merged["layout"] is not None else None,
        qp=int(merged["qp"]) if merged["qp"] is not None else None,
        coding_type=coding_type,
        prediction=str(merged["prediction"]) if merged["prediction"] else None,
        original=str(merged["original"]) if merged["original"] else None,
        weights=weights,
        model=model,
        ctb_size=ctb_size,
        lambda_override=float(lam) if lam is not None else None,
        output=str(merged["output"]) if merged["output"] else None,
        signal=str(merged["signal"]) if merged["signal"] else None,
        report=str(merged["report"]) if merged["report"] else None,
        threads=_threads(),
    )


# ---------------------------------------------------------------- helpers

class _PathRegistry:
    """Registry that loads weight files on first use, thread-safely."""

    def __init__(self, paths: dict[ModelId, str | None]):
        self._paths = paths
        self._cache: dict[ModelId, object] = {}
        self._lock = threading.Lock()

    def get(self, model_id: ModelId):
        with self._lock:
            net = self._cache.get(model_id)
            if net is None:
                path = self._paths.get(model_id)
                if not path:
                    raise ConfigError(
                        f"no weights configured for model {model_id.value} "
                        f"(--weights-{model_id.value.replace('_', '-')} or --models)"
                    )
                net = load_weights(path)
                want = model_id.input_set.channels
                if net.input_channels != want:
                    raise ConfigError(
                        f"model {model_id.value} expects {want} input channels, "
                        f"{path} has {net.input_channels}"
                    )
                self._cache[model_id] = net
            return net


def _frame_range(cfg: JobConfig) -> range:
    available = yuv.count_frames(cfg.input, cfg.width, cfg.height)
    if available == 0:
        raise ConfigError(f"{cfg.input} holds no complete {cfg.width}x{cfg.height} frames")
    n = cfg.frames if cfg.frames is not None else available
    if n <= 0:
        raise ConfigError(f"--frames must be positive, got {n}")
    if n > available:
        raise ConfigError(f"requested {n} frames, {cfg.input} holds {available}")
    return range(n)


def _build_bundle(cfg: JobConfig, poc: int, with_original: bool) -> tuple[FrameBundle, int]:
    recon = yuv.load_yuv_luma(cfg.input, cfg.width, cfg.height, poc)
    if cfg.layout is not None:
        path = cfg.layout.replace("{poc}", str(poc))
        lay = load_cu_layout(path)
        qmap = build_qp_map(lay, cfg.width, cfg.height)
        coding = lay.coding_type
        frame_qp = lay.area_weighted_qp()
    else:
        qmap = build_constant_qp_map(cfg.qp, cfg.width, cfg.height)
        coding = cfg.coding_type
        frame_qp = cfg.qp
    pred = (
        yuv.load_yuv_luma(cfg.prediction, cfg.width, cfg.height, poc)
        if cfg.prediction
        else None
    )
    orig = (
        yuv.load_yuv_luma(cfg.original, cfg.width, cfg.height, poc)
        if (with_original and cfg.original)
        else None
    )
    return FrameBundle(recon, qmap, coding, pred, orig, poc), frame_qp


def _pmap(threads: int, fn: Callable, items: Sequence) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _write_enhanced_yuv(cfg: JobConfig, path: str, planes: Sequence[Plane]) -> None:
    with open(path, "wb") as out:
        for poc, plane in enumerate(planes):
            raw = yuv.load_frame_raw(cfg.input, cfg.width, cfg.height, poc)
            out.write(yuv.replace_luma(raw, plane))


def _emit_report(lines: Sequence[str], report_path: str | None) -> None:
    text = "\n".join(lines)
    print(text)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _job_header(cfg: JobConfig) -> list[str]:
    lines = [f"command={cfg.command}", f"config_hash={cfg.hash()}"]
    lines.append(f"input={cfg.input}")
    lines.append(f"width={cfg.width}")
    lines.append(f"height={cfg.height}")
    if cfg.layout is not None:
        lines.append(f"layout={cfg.layout}")
    if cfg.qp is not None:
        lines.append(f"qp={cfg.qp}")
    if cfg.coding_type is not None:
        lines.append(f"coding_type={cfg.coding_type.value}")
    if cfg.ctb_size != DEFAULT_CTB_SIZE or cfg.command in ("select", "apply"):
        lines.append(f"ctb_size={cfg.ctb_size}")
    if cfg.lambda_override is not None:
        lines.append(f"lambda_override={cfg.lambda_override!r}")
    return lines


def _fmt_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


# ---------------------------------------------------------------- commands

def cmd_enhance(args: argparse.Namespace) -> int:
    cfg = _resolve_job(args)
    if cfg.output is None:
        raise ConfigError("enhance needs --output")
    pocs = _frame_range(cfg)
    registry = _PathRegistry(cfg.weights)

    def work(poc: int):
        bundle, _ = _build_bundle(cfg, poc, with_original=True)
        mid = cfg.model or default_model(bundle.coding_type)
        plane = enhance_frame(bundle, mid, registry)
        return bundle, mid, plane

    results = _pmap(cfg.threads, work, pocs)
    _write_enhanced_yuv(cfg, cfg.output, [plane for _, _, plane in results])

    lines = _job_header(cfg)
    lines.append(f"output={cfg.output}")
    lines.append("[frames]")
    with_psnr = all(bundle.original is not None for bundle, _, _ in results)
    lines.append("poc,model" + (",psnr_in,psnr_out" if with_psnr else ""))
    for bundle, mid, plane in results:
        row = f"{bundle.poc},{mid.value}"
        if with_psnr:
            ref = bundle.original.samples
            row += f",{_fmt_psnr(metrics.psnr(bundle.reconstruction.samples, ref))}"
            row += f",{_fmt_psnr(metrics.psnr(plane.samples, ref))}"
        lines.append(row)
    lines.append("[summary]")
    lines.append(f"frames={len(results)}")
    if with_psnr:
        pairs_in = [(b.reconstruction.samples, b.original.samples) for b, _, _ in results]
        pairs_out = [(p.samples, b.original.samples) for b, _, p in results]
        lines.append(f"psnr_in={_fmt_psnr(metrics.sequence_psnr(pairs_in))}")
        lines.append(f"psnr_out={_fmt_psnr(metrics.sequence_psnr(pairs_out))}")
    _emit_report(lines, cfg.report)
    return EXIT_OK


def cmd_select(args: argparse.Namespace) -> int:
    cfg = _resolve_job(args)
    if cfg.original is None:
        raise ConfigError("select needs --original (encoder side)")
    if cfg.signal is None:
        raise ConfigError("select needs --signal")
    for mid in MODEL_ORDER:
        if not cfg.weights.get(mid):
            raise ConfigError(f"select needs weights for all four models, {mid.value} missing")
    pocs = _frame_range(cfg)
    registry = _PathRegistry(cfg.weights)
    grid = CtbGrid(cfg.width, cfg.height, cfg.ctb_size)

    def work(poc: int):
        bundle, frame_qp = _build_bundle(cfg, poc, with_original=True)
        lam = cfg.lambda_override
        if lam is None:
            lam = compute_lambda(frame_qp)
        enhanced = enhance_all(bundle, registry)
        result = select_frame(bundle, registry, grid, RdInput(lam=lam), enhanced)
        plane = apply_selection(bundle, result, registry, grid, enhanced)
        return frame_qp, result, plane

    rows = _pmap(cfg.threads, work, pocs)
    selections = [result for _, result, _ in rows]
    write_signal_file(cfg.signal, selections, grid.count)
    if cfg.output:
        _write_enhanced_yuv(cfg, cfg.output, [plane for _, _, plane in rows])

    lines = _job_header(cfg)
    lines.append(f"signal={cfg.signal}")
    if cfg.output:
        lines.append(f"output={cfg.output}")
    lines.append(f"ctb_count={grid.count}")
    lines.append("[frames]")
    hist_cols = ",".join(f"n_{mid.value}" for mid in MODEL_ORDER)
    lines.append(
        "poc,f1,frame_qp,lambda,d_f1_0,d_f1_1,r_f1_0,r_f1_1,j_f1_0,j_f1_1," + hist_cols
    )
    for poc, (frame_qp, result, _) in zip(pocs, rows):
        hist = {mid: 0 for mid in MODEL_ORDER}
        for decision in result.decisions:
            hist[decision.model] += 1
        lines.append(
            f"{poc},{result.f1},{frame_qp},{result.lam:.6g}"
            f",{result.d_f1_0:.0f},{result.d_f1_1:.0f}"
            f",{result.r_f1_0},{result.r_f1_1}"
            f",{result.j_f1_0:.4f},{result.j_f1_1:.4f},"
            + ",".join(str(hist[mid]) for mid in MODEL_ORDER)
        )
    lines.append("[summary]")
    lines.append(f"frames={len(rows)}")
    lines.append(f"f1_frames={sum(result.f1 for result in selections)}")
    lines.append(f"signal_bits={signal_bits(selections, grid.count)}")
    lines.append(f"signal_bytes={os.path.getsize(cfg.signal)}")
    _emit_report(lines, cfg.report)
    return EXIT_OK


def cmd_apply(args: argparse.Namespace) -> int:
    cfg = _resolve_job(args)
    if cfg.original is not None:
        raise ConfigError("apply never reads the original plane; drop --original")
    if cfg.signal is None:
        raise ConfigError("apply needs --signal")
    if cfg.output is None:
        raise ConfigError("apply needs --output")
    pocs = _frame_range(cfg)
    registry = _PathRegistry(cfg.weights)
    grid = CtbGrid(cfg.width, cfg.height, cfg.ctb_size)
    decoded = read_signal_file(cfg.signal, grid.count, num_frames=len(pocs))

    def work(poc: int):
        bundle, _ = _build_bundle(cfg, poc, with_original=False)
        return apply_selection(bundle, decoded[poc], registry, grid)

    planes = _pmap(cfg.threads, work, pocs)
    _write_enhanced_yuv(cfg, cfg.output, planes)

    lines = _job_header(cfg)
    lines.append(f"signal={cfg.signal}")
    lines.append(f"output={cfg.output}")
    lines.append(f"ctb_count={grid.count}")
    lines.append("[frames]")
    lines.append("poc,f1")
    for poc in pocs:
        lines.append(f"{poc},{decoded[poc].f1}")
    lines.append("[summary]")
    lines.append(f"frames={len(pocs)}")
    _emit_report(lines, cfg.report)
    return EXIT_OK


def _parse_rd_arg(arg: str) -> tuple[float, str]:
    rate_text, sep, path = arg.partition(":")
    if not sep or not path:
        raise ParseError(f"expected RATE:PATH, got {arg!r}")
    try:
        rate = float(rate_text)
    except ValueError:
        raise ParseError(f"rate {rate_text!r} in {arg!r} is not a number") from None
    return rate, path


def _curve_from_files(
    args: Sequence[str], original: str, width: int, height: int, frames: int | None
) -> list[tuple[float, float]]:
    points = []
    for arg in args:
        rate, path = _parse_rd_arg(arg)
        available = min(
            yuv.count_frames(path, width, height),
            yuv.count_frames(original, width, height),
        )
        n = frames if frames is not None else available
        if n <= 0 or n > available:
            raise ConfigError(f"{path}: cannot evaluate {n} frames, {available} available")
        pairs = [
            (
                yuv.load_yuv_luma(path, width, height, poc).samples,
                yuv.load_yuv_luma(original, width, height, poc).samples,
            )
            for poc in range(n)
        ]
        points.append((rate, metrics.sequence_psnr(pairs)))
    return points


def cmd_eval(args: argparse.Namespace) -> int:
    if args.width is None or args.height is None:
        raise ConfigError("eval needs --width and --height")
    points = {
        "anchor": _curve_from_files(args.anchor, args.original, args.width, args.height, args.frames),
        "test": _curve_from_files(args.test, args.original, args.width, args.height, args.frames),
    }
    lines = [
        "command=eval",
        f"original={args.original}",
        f"width={args.width}",
        f"height={args.height}",
    ]
    curves: dict[str, list[RdPoint]] = {}
    for name in ("anchor", "test"):
        lines.append(f"[curve {name}]")
        lines.append("rate,psnr")
        finite = []
        for rate, quality in points[name]:
            lines.append(f"{rate:g},{_fmt_psnr(quality)}")
            if math.isfinite(quality):
                finite.append(RdPoint(rate, quality))
        curves[name] = finite
    value = bd_rate(curves["anchor"], curves["test"])
    lines.append("[summary]")
    lines.append(f"bd_rate_percent={value:.2f}")
    _emit_report(lines, args.report)
    return EXIT_OK


def _load_curve_csv(path: str) -> list[RdPoint]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'rate,psnr', got {line!r}")
            try:
                rate, quality = float(parts[0]), float(parts[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ParseError(f"{path}:{lineno}: non-numeric point {line!r}") from None
            points.append(RdPoint(rate, quality))
    return points


def cmd_bdrate(args: argparse.Namespace) -> int:
    value = bd_rate(_load_curve_csv(args.anchor), _load_curve_csv(args.test))
    print(f"{value:.2f}%")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_job_flags(sp: argparse.ArgumentParser, original_help: str | None) -> None:
    sp.add_argument("--config", help="key=value config file; flags override it")
    sp.add_argument("--input", help="reconstructed 4:2:0 10-bit YUV")
    sp.add_argument("--width", type=int, help="luma width in pixels")
    sp.add_argument("--height", type=int, help="luma height in pixels")
    sp.add_argument("--frames", type=int, help="frame count (default: whole file)")
    sp.add_argument(
        "--layout",
        help="CU layout sidecar; a {poc} placeholder selects per-frame files",
    )
    sp.add_argument("--qp", type=int, help="constant frame QP (alternative to --layout)")
    sp.add_argument(
        "--coding-type",
        dest="coding_type",
        choices=[m.value for m in CodingMode],
        help="frame coding type for constant-QP mode",
    )
    sp.add_argument("--prediction", help="prediction-signal YUV (same geometry)")
    if original_help:
        sp.add_argument("--original", help=original_help)
    sp.add_argument("--models", help="directory holding <model>.qew weight files")
    for mid in MODEL_ORDER:
        sp.add_argument(
            f"--weights-{mid.value.replace('_', '-')}",
            dest=f"weights_{mid.value}",
            help=f"weight file for the {mid.value} model",
        )
    sp.add_argument("--ctb-size", dest="ctb_size", type=int, help="CTB size (default 128)")
    sp.add_argument(
        "--lambda-override",
        dest="lambda_override",
        type=float,
        help="fixed Lagrange multiplier instead of the QP-derived value",
    )
    sp.add_argument("--output", help="enhanced YUV output path")
    sp.add_argument("--signal", help="selection signal file")
    sp.add_argument("--report", help="also write the report to this file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qe",
        description="CNN post-filter for block-coded video: enhancement, "
        "RD model selection, signaling, and BD-rate evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("enhance", help="enhance frames with one model (no signaling)")
    _add_job_flags(sp, original_help="original YUV, only for PSNR lines in the report")
    sp.add_argument(
        "--model",
        choices=[m.value for m in MODEL_ORDER],
        help="force one model (default: cqp model of each frame's coding type)",
    )
    sp.set_defaults(func=cmd_enhance)

    sp = sub.add_parser("select", help="encoder-side model selection + signal file")
    _add_job_flags(sp, original_help="original YUV (required)")
    sp.set_defaults(func=cmd_select, model=None)

    sp = sub.add_parser("apply", help="decoder-side enhancement from a signal file")
    _add_job_flags(sp, original_help=None)
    sp.set_defaults(func=cmd_apply, model=None, original=None)

    sp = sub.add_parser("eval", help="RD curves from YUV files + BD-rate")
    sp.add_argument("--original", required=True, help="original YUV (reference)")
    sp.add_argument("--width", type=int)
    sp.add_argument("--height", type=int)
    sp.add_argument("--frames", type=int)
    sp.add_argument(
        "--anchor",
        action="append",
        required=True,
        metavar="RATE:PATH",
        help="anchor point (repeat >= 4 times)",
    )
    sp.add_argument(
        "--test",
        action="append",
        required=True,
        metavar="RATE:PATH",
        help="test point (repeat >= 4 times)",
    )
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("bdrate", help="BD-rate between two rate,psnr CSV files")
    sp.add_argument("--anchor", required=True, help="anchor curve CSV")
    sp.add_argument("--test", required=True, help="test curve CSV")
    sp.set_defaults(func=cmd_bdrate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"qe: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as exc:
        print(f"qe: consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (FormatError, TruncationError) as exc:
        print(f"qe: bad input data: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"qe: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
