#!/usr/bin/env python3
"""Render a gallery of hulls and traces for a few representative drivers.

For every driver the script writes the driver spec, a hull raster
(CSV + SVG), and a two-sided trace (CSV + SVG) into the output directory
by invoking the command-line front end, so the artifacts carry the same
metadata blocks a shell user would get.  Bytes are independent of the
thread count.

    python3 scripts/hull_gallery.py --outdir gallery --resolution 128
"""

import argparse
import json
import os
import sys

import numpy as np

from cloewner.cli import run_cli
from cloewner.drivers import (
    ConstantDriver,
    SqrtDriver,
    WeierstrassDriver,
    holder_norm_estimate,
    transform_driver,
)


def budget_weierstrass(seed, sigma):
    """Random oscillating driver rescaled so its norm estimate equals sigma."""
    rng = np.random.default_rng(seed)
    u1, _, u3 = rng.uniform(size=3)
    a = 0.45 + 0.25 * u1
    k = int(rng.integers(6, 9))
    d = WeierstrassDriver(a, 2.0, k, complex(np.exp(2j * np.pi * u3)))
    est = holder_norm_estimate(d, 256).norm_lower_bound
    return transform_driver(d, "multiply", alpha=sigma / est)


def gallery_drivers():
    return [
        ("segment", ConstantDriver(0.0)),
        ("tilted", ConstantDriver(0.2 + 0.1j)),
        ("slit", SqrtDriver(0.3 * (1.0 + 1.0j) / np.sqrt(2.0))),
        ("real-sqrt", SqrtDriver(0.3)),
        ("rough", budget_weierstrass(1000, 1.0 / 3.0)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="gallery")
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--resolution", type=int, default=128)
    ap.add_argument("--n", type=int, default=96, help="trace samples per side")
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args(argv)

    os.makedirs(args.outdir, exist_ok=True)
    grid = f"-3,3,-3,3,{args.resolution},{args.resolution}"
    worst = 0
    for name, driver in gallery_drivers():
        spec_path = os.path.join(args.outdir, f"{name}.json")
        with open(spec_path, "w", encoding="ascii") as fh:
            json.dump(driver.to_spec(), fh, indent=2, sort_keys=True)
            fh.write("\n")

        base = os.path.join(args.outdir, name)
        print(f"-- {name}")
        worst = max(worst, run_cli([
            "hull", "--driver", spec_path, "--t", str(args.t),
            f"--grid={grid}", "--threads", str(args.threads),
            "--out", f"{base}_hull.csv", "--svg", f"{base}_hull.svg",
        ]))
        worst = max(worst, run_cli([
            "trace", "--driver", spec_path, "--n", str(args.n),
            "--out", f"{base}_trace.csv", "--svg", f"{base}_trace.svg",
        ]))
    print(f"gallery written to {args.outdir}/")
    return worst


if __name__ == "__main__":
    sys.exit(main())
