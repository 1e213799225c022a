#!/usr/bin/env python3
"""Beamforming experiment: sweep the coded selection schemes and report the
SNR gains of ZF precoding and of 2/4/8-element transmit subarrays over the
plain selection baseline, read off at BER 1e-3.

Desk-scale defaults finish in a couple of minutes; pass --frames to trade
accuracy for time.
"""

import argparse
from pathlib import Path

from taslink.curves import extract_gain, format_gains_table, write_curve
from taslink.engine import SchemeId, SimConfig, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=20_000, help="frames per packet (x10 packets)")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    def cfg(grid, **kw):
        return SimConfig(snr_grid_db=grid, frames_per_packet=args.frames, packets=10,
                         seed=args.seed, **kw)

    mid_grid = tuple(float(s) for s in range(0, 22, 2))
    low_grid = tuple(float(s) for s in range(-4, 18, 2))

    curves = {}
    curves["tas"] = run_sweep(SchemeId.TAS_OSTBC, cfg(mid_grid), workers=args.workers)
    curves["tas-zf"] = run_sweep(SchemeId.TAS_OSTBC_ZF, cfg(mid_grid), workers=args.workers)
    for lt in (1, 2, 4, 8):
        curves[f"abf-lt{lt}"] = run_sweep(SchemeId.TAS_OSTBC_ABF, cfg(low_grid, lt=lt), workers=args.workers)
        curves[f"hbf-lt{lt}"] = run_sweep(SchemeId.TAS_OSTBC_HBF, cfg(low_grid, lt=lt), workers=args.workers)

    for name, curve in curves.items():
        write_curve(curve, outdir / f"{name}.csv")
        print(f"wrote {outdir / f'{name}.csv'}")

    target = 1e-3
    rows = [("tas-zf", extract_gain(curves["tas"], curves["tas-zf"], target))]
    for lt in (2, 4, 8):
        rows.append((f"abf-lt{lt} vs abf-lt1", extract_gain(curves["abf-lt1"], curves[f"abf-lt{lt}"], target)))
        rows.append((f"hbf-lt{lt} vs hbf-lt1", extract_gain(curves["hbf-lt1"], curves[f"hbf-lt{lt}"], target)))
    print(f"\ngains at BER {target:g} (baseline: plain two-of-four selection):")
    print(format_gains_table(rows))


if __name__ == "__main__":
    main()
