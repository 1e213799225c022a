"""CSV persistence of BER curves and horizontal SNR-gain extraction.

A curve file is plot-ready CSV: '#'-prefixed comment lines carrying the
full run configuration (seed included), one header row, then one row per
SNR point sorted ascending.  Floats are serialised with full round-trip
precision, so write -> read -> write is byte-stable.
"""

from __future__ import annotations

import math
from pathlib import Path

from .channel import PhaseStrategy
from .engine import BerCurve, BerPoint, SchemeId, SimConfig

__all__ = [
    "CurveFormatError",
    "GainRangeError",
    "HEADER",
    "extract_gain",
    "format_gains_table",
    "gains_report",
    "read_curve",
    "write_curve",
]

HEADER = "scheme,snr_db,total_bits,bit_errors,ber,ci_low,ci_high"
_COLUMNS = HEADER.split(",")


class CurveFormatError(ValueError):
    """Malformed or inconsistent curve file."""


class GainRangeError(Exception):
    """A curve never crosses the requested BER target."""


def _fmt(x: float) -> str:
    return repr(float(x))


def _config_comments(scheme: SchemeId, cfg: SimConfig) -> list[str]:
    return [
        f"# scheme={scheme.value}",
        f"# snr_grid_db={','.join(_fmt(s) for s in cfg.snr_grid_db)}",
        f"# frames={cfg.frames_per_packet}",
        f"# packets={cfg.packets}",
        f"# seed={cfg.seed}",
        f"# nt={cfg.nt}",
        f"# nr={cfg.nr}",
        f"# na={cfg.na}",
        f"# lt={cfg.lt}",
        f"# nref={cfg.nref}",
        f"# alpha={_fmt(cfg.alpha)}",
        f"# phase={cfg.phase_strategy.value}",
        f"# lambda_m={_fmt(cfg.lambda_m)}",
        f"# d_m={_fmt(cfg.d_m)}",
    ]


def write_curve(curve: BerCurve, path) -> None:
    """Write one curve in the documented CSV format."""
    if not curve.points:
        raise ValueError("refusing to write an empty curve")
    lines = _config_comments(curve.scheme, curve.config)
    lines.append(HEADER)
    for p in curve.points:
        lines.append(
            f"{curve.scheme.value},{_fmt(p.snr_db)},{p.total_bits},{p.bit_errors},"
            f"{_fmt(p.ber)},{_fmt(p.ci_low)},{_fmt(p.ci_high)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_comment_config(meta: dict, path) -> tuple[SchemeId, SimConfig]:
    required = ["scheme", "snr_grid_db", "frames", "packets", "seed", "nt", "nr",
                "na", "lt", "nref", "alpha", "phase", "lambda_m", "d_m"]
    missing = [k for k in required if k not in meta]
    if missing:
        raise CurveFormatError(f"{path}: missing config comment(s): {', '.join(missing)}")
    try:
        scheme = SchemeId(meta["scheme"])
        cfg = SimConfig(
            snr_grid_db=tuple(float(s) for s in meta["snr_grid_db"].split(",")),
            frames_per_packet=int(meta["frames"]),
            packets=int(meta["packets"]),
            seed=int(meta["seed"]),
            nt=int(meta["nt"]),
            nr=int(meta["nr"]),
            na=int(meta["na"]),
            lt=int(meta["lt"]),
            nref=int(meta["nref"]),
            alpha=float(meta["alpha"]),
            phase_strategy=PhaseStrategy(meta["phase"]),
            lambda_m=float(meta["lambda_m"]),
            d_m=float(meta["d_m"]),
        )
    except ValueError as exc:
        raise CurveFormatError(f"{path}: bad config comment: {exc}") from exc
    return scheme, cfg


def read_curve(path) -> BerCurve:
    """Parse a curve file and re-validate its invariants."""
    path = Path(path)
    meta = {}
    points = []
    header_seen = False
    scheme = None
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            got = line.split(",")
            if got != _COLUMNS:
                missing = [c for c in _COLUMNS if c not in got]
                if missing:
                    raise CurveFormatError(f"{path}: line {lineno}: missing column '{missing[0]}'")
                raise CurveFormatError(f"{path}: line {lineno}: bad header {line!r}")
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != len(_COLUMNS):
            raise CurveFormatError(
                f"{path}: line {lineno}: expected {len(_COLUMNS)} columns, got {len(fields)}"
            )
        try:
            row_scheme = SchemeId(fields[0])
            snr_db = float(fields[1])
            total_bits = int(fields[2])
            bit_errors = int(fields[3])
            ber, ci_low, ci_high = (float(x) for x in fields[4:7])
        except ValueError as exc:
            raise CurveFormatError(f"{path}: line {lineno}: {exc}") from exc
        if scheme is None:
            scheme = row_scheme
        elif row_scheme is not scheme:
            raise CurveFormatError(f"{path}: line {lineno}: mixed schemes in one curve")
        if not 0 <= bit_errors <= total_bits or total_bits < 1:
            raise CurveFormatError(f"{path}: line {lineno}: bad error/bit counts")
        if not math.isclose(ber, bit_errors / total_bits, rel_tol=1e-12, abs_tol=1e-300):
            raise CurveFormatError(f"{path}: line {lineno}: ber inconsistent with counts")
        if not ci_low <= ber <= ci_high:
            raise CurveFormatError(f"{path}: line {lineno}: confidence interval excludes ber")
        if points and snr_db <= points[-1].snr_db:
            raise CurveFormatError(f"{path}: line {lineno}: snr_db rows out of order")
        points.append(BerPoint(snr_db, total_bits, bit_errors, ber, ci_low, ci_high))
    if not header_seen:
        raise CurveFormatError(f"{path}: missing header row")
    if not points:
        raise CurveFormatError(f"{path}: no data rows")
    meta_scheme, cfg = _parse_comment_config(meta, path)
    if scheme is not meta_scheme:
        raise CurveFormatError(f"{path}: data scheme {scheme.value} != config scheme {meta_scheme.value}")
    return BerCurve(scheme=scheme, config=cfg, points=tuple(points))


def _snr_at_target(curve: BerCurve, target: float, label: str) -> float:
    """SNR where the curve crosses the target, interpolating log10(BER) linearly in dB."""
    pts = curve.points
    bers = [p.ber for p in pts]
    if not (any(b > target for b in bers) and any(b < target for b in bers)):
        raise GainRangeError(f"{label} curve never crosses BER {target:g}")
    for a, b in zip(pts, pts[1:]):
        if a.ber > target >= b.ber and b.ber > 0.0:
            la, lb, lt = math.log10(a.ber), math.log10(b.ber), math.log10(target)
            return a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb)
    raise GainRangeError(f"{label} curve has no usable crossing of BER {target:g} "
                         "(the bracketing point estimates zero errors)")


def extract_gain(base: BerCurve, improved: BerCurve, target_ber: float) -> float:
    """Horizontal shift (dB) between two curves at a target BER; positive = improvement."""
    if not 0.0 < target_ber < 0.5:
        raise ValueError(f"target_ber must be in (0, 0.5), got {target_ber}")
    return _snr_at_target(base, target_ber, "base") - _snr_at_target(improved, target_ber, "improved")


def gains_report(curve_paths, base_path, target_ber: float, csv_path=None) -> list[tuple[str, float]]:
    """Gain of each curve over the base at the target BER, labelled by file stem."""
    base = read_curve(base_path)
    rows = []
    for p in curve_paths:
        gain = extract_gain(base, read_curve(p), target_ber)
        rows.append((Path(p).stem, gain))
    if csv_path is not None:
        lines = ["label,gain_db"] + [f"{label},{_fmt(gain)}" for label, gain in rows]
        Path(csv_path).write_text("\n".join(lines) + "\n")
    return rows


def format_gains_table(rows) -> str:
    """Aligned text table of (label, gain dB) rows."""
    if not rows:
        return "(no curves)"
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {gain:+8.3f} dB" for label, gain in rows)
