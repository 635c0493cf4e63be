"""Identify a delayed continuous-time system from equispaced impulse-response samples.

The samples ``F(j m0)`` form an exponential sum in ``exp(m0 lam)``; lifting
turns them into a rational function on the disk whose poles give back
``lam`` through a logarithm.

Run: python demos/delay_identification.py
"""

from ratprony.experiments import REFERENCE_DELAY_SYSTEM, choose_m0, delay_demo


def main():
    spec = REFERENCE_DELAY_SYSTEM
    print("true poles:", ", ".join(f"{z:.4f}" for z in spec.poles), f"  delay {spec.tau}")
    print("sampling step m0 =", choose_m0(spec))
    for method in ("grop", "gb", "classical"):
        res = delay_demo(spec, method)
        report = res.diagnostics["poles"]
        print(f"\n{method}: max pole error {report['max_error']:.2e}")
        for (re, im) in report["matched"]:
            print(f"   {complex(re, im):.6f}")
        if res.coefficients is not None:
            print("   coefficients:", ", ".join(f"{c:.4f}" for c in res.coefficients))


if __name__ == "__main__":
    main()
