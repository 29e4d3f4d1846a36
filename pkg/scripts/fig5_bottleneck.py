#!/usr/bin/env python3
"""Classical-bottleneck grid: width x clock frequency x delta_time -> log2(qubits)."""

import argparse
import os

from qcorenet.bottleneck import DELTA_SAMPLES, FREQ_SAMPLES, sweep_bottleneck, write_bottleneck_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/fig5.csv")
    ap.add_argument("--deltas", default=",".join(f"{d:g}" for d in DELTA_SAMPLES))
    a = ap.parse_args()
    deltas = [float(x) for x in a.deltas.split(",")]
    rows = sweep_bottleneck(range(1, 16), FREQ_SAMPLES, deltas)
    os.makedirs(os.path.dirname(a.out) or ".", exist_ok=True)
    with open(a.out, "w", newline="") as fh:
        write_bottleneck_csv(fh, rows)

    # compact view for delta_time = 1: rows are widths, columns frequencies
    print("width " + " ".join(f"{f / 1e6:>6g}M" for f in FREQ_SAMPLES))
    for w in range(1, 16):
        cells = [r["qubits_log2"] for r in rows if r["width"] == w and r["delta_time"] == deltas[0]]
        print(f"{w:>5} " + " ".join(f"{'-' if c is None else c:>7}" for c in cells))
    print(f"wrote {a.out}")


if __name__ == "__main__":
    main()
