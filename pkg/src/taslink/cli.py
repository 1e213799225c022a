"""Command-line front end: run BER sweeps to CSV and report dB gains.

Two subcommands:

    taslink simulate --scheme tas-ostbc --snr 0:2:20 --out tas.csv
    taslink gains --base tas.csv --curves zf.csv hbf.csv --ber 1e-3

``simulate`` also accepts ``--config FILE`` holding the same keys as
``key=value`` lines; explicit flags override the file.  Exit codes:
0 success, 1 validation error, 2 I/O error, 3 range error (a curve never
crosses the target BER).
"""

from __future__ import annotations

import argparse
import sys

from .channel import PhaseStrategy
from .curves import CurveFormatError, GainRangeError, format_gains_table, gains_report, write_curve
from .engine import BerCurve, SchemeId, SimConfig, run_point

__all__ = ["RunSpecError", "main", "parse_runspec"]

_DEFAULTS = {
    "snr": "0:2:30",
    "frames": "100000",
    "packets": "10",
    "seed": "1",
    "nt": "4",
    "nr": "1",
    "lt": "1",
    "nref": "16",
    "alpha": "1.0",
    "phase": "uniform",
}
_KEYS = ("scheme", "snr", "frames", "packets", "seed", "nt", "nr", "lt", "nref", "alpha", "phase", "out")


class RunSpecError(ValueError):
    """Invalid run specification (unknown key, bad value, broken invariant)."""


def _positive_int(key: str, value: str) -> int:
    try:
        n = int(value)
    except ValueError as exc:
        raise RunSpecError(f"invalid value for '{key}': {value!r} is not an integer") from exc
    if n < 1:
        raise RunSpecError(f"invalid value for '{key}': must be >= 1, got {n}")
    return n


def _seed_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError as exc:
        raise RunSpecError(f"invalid value for 'seed': {value!r} is not an integer") from exc
    if not 0 <= n < 2**64:
        raise RunSpecError("invalid value for 'seed': must fit in an unsigned 64-bit integer")
    return n


def _alpha_float(value: str) -> float:
    try:
        a = float(value)
    except ValueError as exc:
        raise RunSpecError(f"invalid value for 'alpha': {value!r} is not a number") from exc
    if not 0.0 < a <= 1.0:
        raise RunSpecError(f"invalid value for 'alpha': must be in (0, 1], got {a}")
    return a


def _expand_snr(value: str) -> tuple:
    parts = value.split(":")
    if len(parts) != 3:
        raise RunSpecError(f"invalid value for 'snr': expected start:step:stop, got {value!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError as exc:
        raise RunSpecError(f"invalid value for 'snr': {value!r}") from exc
    if step <= 0 or stop < start:
        raise RunSpecError("invalid value for 'snr': need step > 0 and stop >= start")
    count = int((stop - start) / step + 1e-9) + 1
    return tuple(start + k * step for k in range(count))


def _runspec_from_mapping(mapping: dict) -> tuple[SchemeId, SimConfig, str | None]:
    unknown = sorted(set(mapping) - set(_KEYS))
    if unknown:
        raise RunSpecError(f"unknown key: {unknown[0]}")
    merged = dict(_DEFAULTS)
    merged.update({k: v for k, v in mapping.items() if v is not None})
    if "scheme" not in merged:
        raise RunSpecError("missing required key 'scheme'")
    try:
        scheme = SchemeId(merged["scheme"])
    except ValueError as exc:
        valid = ", ".join(s.value for s in SchemeId)
        raise RunSpecError(f"invalid value for 'scheme': {merged['scheme']!r} (one of: {valid})") from exc
    try:
        phase = PhaseStrategy(merged["phase"])
    except ValueError as exc:
        valid = ", ".join(s.value for s in PhaseStrategy)
        raise RunSpecError(f"invalid value for 'phase': {merged['phase']!r} (one of: {valid})") from exc
    try:
        cfg = SimConfig(
            snr_grid_db=_expand_snr(merged["snr"]),
            frames_per_packet=_positive_int("frames", merged["frames"]),
            packets=_positive_int("packets", merged["packets"]),
            seed=_seed_int(merged["seed"]),
            nt=_positive_int("nt", merged["nt"]),
            nr=_positive_int("nr", merged["nr"]),
            lt=_positive_int("lt", merged["lt"]),
            nref=_positive_int("nref", merged["nref"]),
            alpha=_alpha_float(merged["alpha"]),
            phase_strategy=phase,
        )
    except RunSpecError:
        raise
    except ValueError as exc:
        raise RunSpecError(str(exc)) from exc
    return scheme, cfg, merged.get("out")


def parse_runspec(text: str) -> tuple[SchemeId, SimConfig, str | None]:
    """Parse ``key=value`` lines ('#' comments allowed) into a validated run spec."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise RunSpecError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return _runspec_from_mapping(mapping)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with code 2 by default; keep 2 for I/O only
        raise RunSpecError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="taslink", description="Link-level BER simulator and gain reporter")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a seeded BER sweep and write a curve CSV")
    sim.add_argument("--scheme", choices=[s.value for s in SchemeId])
    sim.add_argument("--snr", help="start:step:stop in dB")
    sim.add_argument("--frames", help="frames per packet")
    sim.add_argument("--packets")
    sim.add_argument("--seed")
    sim.add_argument("--nt")
    sim.add_argument("--nr")
    sim.add_argument("--lt")
    sim.add_argument("--nref")
    sim.add_argument("--alpha")
    sim.add_argument("--phase", choices=[s.value for s in PhaseStrategy])
    sim.add_argument("--out", help="curve CSV output path")
    sim.add_argument("--config", help="file with the same keys as key=value lines")
    sim.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    gains = sub.add_parser("gains", help="dB gain of curves over a base at a target BER")
    gains.add_argument("--base", required=True)
    gains.add_argument("--curves", nargs="+", required=True)
    gains.add_argument("--ber", type=float, default=1e-3)
    gains.add_argument("--csv", help="also write the table as CSV")
    return parser


def _cmd_simulate(args) -> int:
    mapping = {}
    if args.config is not None:
        text = open(args.config).read()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise RunSpecError(f"{args.config}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            mapping[key.strip()] = value.strip()
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            mapping[key] = value
    scheme, cfg, out = _runspec_from_mapping(mapping)
    if out is None:
        raise RunSpecError("missing required key 'out'")
    if args.workers < 1:
        raise RunSpecError(f"invalid value for 'workers': must be >= 1, got {args.workers}")
    points = []
    for i, snr_db in enumerate(cfg.snr_grid_db):
        point = run_point(scheme, cfg, snr_db, point_index=i, workers=args.workers)
        points.append(point)
        print(f"{scheme.value}  snr {snr_db:7.2f} dB  ber {point.ber:.4e}  "
              f"({point.bit_errors}/{point.total_bits})")
    curve = BerCurve(scheme=scheme, config=cfg, points=tuple(points))
    write_curve(curve, out)
    print(f"wrote {out} ({len(points)} points)")
    return 0


def _cmd_gains(args) -> int:
    rows = gains_report(args.curves, args.base, args.ber, csv_path=args.csv)
    print(f"gain over {args.base} at BER {args.ber:g}:")
    print(format_gains_table(rows))
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_gains(args)
    except GainRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RunSpecError, CurveFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
