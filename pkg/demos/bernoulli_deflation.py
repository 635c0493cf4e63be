"""Pole-by-pole extraction with the generalized Bernoulli iteration.

Each stage reads the ratio of TM coefficients along a ladder, inverts the
limit to a pole and appends that pole to the generating sequence, which
removes it from every later ladder.

Run: python demos/bernoulli_deflation.py
"""

import numpy as np

from ratprony.bernoulli import gb_recover_iterative
from ratprony.hardy import GeneratingSequence, RationalAtomSet


def show(poles, coefficients):
    H = RationalAtomSet(poles, coefficients).sampling(4096)
    res = gb_recover_iterative(H, GeneratingSequence([0]), len(poles))
    print("true:", ", ".join(f"{z:.4f}" for z in poles))
    for stage in res.diagnostics["stages"]:
        if "error" in stage:
            print(f"  stage {stage['stage']}: stopped ({stage['error']})")
            continue
        pole = complex(*stage["pole"]) if isinstance(stage["pole"], list) else stage["pole"]
        print(f"  stage {stage['stage']}: {pole:.8f}  steps {stage['steps']:>3}  "
              f"rate {stage['estimated_rate']:.3f}  {stage['stop_reason']}")


def main():
    show(np.array([0.8, 0.5j, -0.2]), [1.0, 1.0, 1.0])
    # the second stage ranks poles by |z B(z)|, not |z|
    show(np.array([-0.6773 - 0.2521j, -0.537 - 0.0632j, 0.0296 + 0.4374j]), [1.0, 1.0, 1.0])


if __name__ == "__main__":
    main()
