"""Error of the nonclassical volume against its closed form.

Compares the fixed-frame product grid with the Bloch-aligned grid that
splits the polar panel at the kink of |W|. The fixed grid converges only
algebraically because |W| is not smooth along the zero contour.
"""

import argparse

import numpy as np

from oqs_interplay.quantifiers import QuadratureSpec, closed_form_delta, nonclassical_volume
from oqs_interplay.states import BlochVector, from_bloch


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--norms", default="0.3,0.5773502691896258,0.7,0.9996,1.0")
    args = p.parse_args()
    norms = [float(x) for x in args.norms.split(",")]
    direction = np.array([0.5, 0.56, -0.66])
    direction /= np.linalg.norm(direction)

    print(f"{'grid':>9} {'|r|':>8} {'fixed err':>11} {'aligned err':>12}")
    for nt, nphi in [(8, 16), (16, 32), (32, 64), (64, 128), (128, 256)]:
        q = QuadratureSpec(nt, nphi)
        for r in norms:
            rho = from_bloch(BlochVector(*(r * direction)))
            exact = closed_form_delta(r)
            fixed = abs(nonclassical_volume(rho, q, aligned=False) - exact)
            aligned = abs(nonclassical_volume(rho, q) - exact)
            print(f"{nt:>4}x{nphi:<4} {r:8.4f} {fixed:11.2e} {aligned:12.2e}")


if __name__ == "__main__":
    main()
