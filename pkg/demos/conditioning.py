"""Vandermonde versus TM triangular conditioning on near-boundary pole sets.

Run: python demos/conditioning.py
"""

import numpy as np

from ratprony.experiments import allpass_style_poles, clustered_boundary_poles, condnum_demo


def main():
    print(f"{'poles':<28}{'M':>5}{'cond(V)':>12}{'cond(T)':>12}")
    for M in (20, 50, 100, 200):
        r = condnum_demo(generator="allpass", M=M, seed=0)
        print(f"{'all-pass style':<28}{M:>5}{r['vandermonde_condition']:>12.2e}{r['tm_condition']:>12.2e}")
    for M in (5, 10, 20):
        r = condnum_demo(poles=clustered_boundary_poles(M, seed=0))
        print(f"{'clustered on a short arc':<28}{M:>5}{r['vandermonde_condition']:>12.2e}{r['tm_condition']:>12.2e}")

    # both routes on the same signal; radius 0.999 needs a fine grid,
    # since the quadrature aliasing error is about 0.999**n_grid
    poles = allpass_style_poles(40, seed=1)
    c = np.random.default_rng(1).normal(size=40) + 0j
    r = condnum_demo(poles=poles, coefficients=c, n_grid=65536)
    print(f"\nM=40 coefficient errors: TM {r['tm_coefficient_error']:.1e}, "
          f"Vandermonde {r['vandermonde_coefficient_error']:.1e}")


if __name__ == "__main__":
    main()
