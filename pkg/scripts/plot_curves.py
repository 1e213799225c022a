#!/usr/bin/env python3
"""Render BER waterfall plots from curve CSVs written by `taslink simulate`.

    python scripts/plot_curves.py results/*.csv -o ber.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from taslink.curves import read_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("curves", nargs="+", help="curve CSV paths")
    ap.add_argument("-o", "--out", default="ber.png")
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(7, 5))
    for path in args.curves:
        curve = read_curve(path)
        snr = [p.snr_db for p in curve.points]
        ber = [p.ber for p in curve.points]
        yerr_lo = [max(p.ber - p.ci_low, 0.0) for p in curve.points]
        yerr_hi = [max(p.ci_high - p.ber, 0.0) for p in curve.points]
        label = f"{curve.scheme.value} (lt={curve.config.lt}, nref={curve.config.nref})"
        ax.errorbar(snr, ber, yerr=[yerr_lo, yerr_hi], marker="o", markersize=3,
                    capsize=2, linewidth=1.2, label=label)

    ax.set_yscale("log")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
