#!/usr/bin/env python3
"""Grid-refinement study: leapfrog scheme against the convolution solver.

Halving dx at fixed Courant number should shrink the relative L2 error by
about 4x (second-order scheme).  Prints one row per resolution.
"""

import argparse

import numpy as np

import telegraph as tg


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--t", type=float, default=1.0)
    parser.add_argument("--courant", type=float, default=0.9)
    parser.add_argument("--resolutions", type=int, nargs="+",
                        default=[128, 256, 512], metavar="INV_DX")
    args = parser.parse_args()

    medium = tg.MediumParams(k=args.k, c=args.c)
    print(f"k={args.k} c={args.c} t={args.t} courant={args.courant}")
    print(f"{'1/dx':>6} {'steps':>6} {'rel_L2':>12} {'ratio':>7}")
    previous = None
    for inv_dx in args.resolutions:
        grid = tg.SpaceGrid(-8.0, 1.0 / inv_dx, 16 * inv_dx + 1)
        f = tg.from_function(grid, lambda x: np.exp(-x * x))
        g = tg.zeros(grid)
        cfg = tg.fd_config_for(args.t, grid, medium, args.courant)
        err = tg.rel_l2_error(tg.fd_solve(f, g, args.t, medium, cfg),
                              tg.solve(f, g, args.t, medium))
        ratio = "" if previous is None else f"{previous / err:7.2f}"
        print(f"{inv_dx:>6} {cfg.steps:>6} {err:12.3e} {ratio:>7}")
        previous = err


if __name__ == "__main__":
    main()
