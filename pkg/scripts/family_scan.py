"""Scan the qutrit superchannel family over the parameter disk.

For a grid of (alpha, beta) magnitudes the script reports the smallest
partial-transpose eigenvalue against its closed form, whether the matrix is
passive compatible, and the round-trip residual of the explicit
controlled-unitary realization. Entanglement (negative eigenvalue) appears
only for |alpha|^2 + |beta|^2 > 1, while any |beta| > 0 already rules out a
passive realization: activity, not entanglement, is the broader obstruction.
"""

import argparse

import numpy as np

from dephkit import (
    family_gram,
    family_ppt_closed_form,
    family_realization,
    gram_from_controlled_unitaries,
    is_passive_compatible,
    ppt_min_eig,
)
from dephkit.linalg import max_abs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=6, help="grid points per axis")
    parser.add_argument("--realize", action="store_true", help="also check the realization round trip")
    args = parser.parse_args()

    grid = np.linspace(0.0, 1.0, args.steps)
    header = f"{'|alpha|':>8} {'|beta|':>8} {'pt min eig':>12} {'closed form':>12} {'entangled':>10} {'passive':>8}"
    if args.realize:
        header += f" {'roundtrip':>10}"
    print(header)
    for a in grid:
        for b in grid:
            sg = family_gram(a, b)
            measured = ppt_min_eig(sg)
            closed = family_ppt_closed_form(a, b)
            row = (
                f"{a:8.3f} {b:8.3f} {measured:12.6f} {closed:12.6f} "
                f"{str(measured < -1e-9):>10} {str(is_passive_compatible(sg, 1e-9)):>8}"
            )
            if args.realize:
                pre, post = family_realization(a, b)
                residual = max_abs(gram_from_controlled_unitaries(pre, post).mat - sg.mat)
                row += f" {residual:10.2e}"
            print(row)


if __name__ == "__main__":
    main()
