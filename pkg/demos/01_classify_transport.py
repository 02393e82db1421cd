"""Classify the scalar transport equation for a sweep of boundary weights.

The model is  d/dt x = d/dz (H x)  on [0,1] with the single boundary
condition  w1 (Hx)(1) + w0 (Hx)(0) = 0.  Characteristics travel from
z = 1 toward z = 0, so the problem is well posed exactly when the weight
on the inflow trace does not vanish (w1 != 0).  Energy dissipates when
|w1| >= |w0| and is conserved when |w1| = |w0|.

The sweep below reproduces all three regimes from matrix data alone.
"""

import phs

CASES = [(1, 0), (2, 1), (1, 1), (1, -1), (1, 2), (0, 1)]


def main():
    print(f"{'w1':>4} {'w0':>4} | {'contraction':^11} {'unitary':^8} {'C0':^6} | "
          f"{'sigma-form min eig':>18} {'sigma_min(K)':>12}")
    print("-" * 75)
    for w1, w0 in CASES:
        system = phs.make_system([[1.0]], [[0.0]], [[1.0]], [[w1, w0]])
        v = phs.classify(system)
        smin = "n/a" if v.direct_sum_min_singular_value is None \
            else f"{v.direct_sum_min_singular_value:12.4f}"
        print(f"{w1:>4} {w0:>4} | {str(v.contraction):^11} {str(v.unitary_group):^8} "
              f"{str(v.c0_semigroup):^6} | {v.sigma_form_min_eigenvalue:>18.4f} {smin:>12}")
    print()
    print("expected: C0 iff w1 != 0, contraction iff w1^2 >= w0^2, "
          "unitary iff w1^2 = w0^2")
    print("the sigma-form witness equals (w1^2 - w0^2)/2 for this model")

    # the contraction verdict does not depend on the density H
    for h in (1.0, 2.5):
        v = phs.classify(phs.make_system([[1.0]], [[0.0]], [[h]], [[2.0, 1.0]]))
        print(f"H = {h}: contraction stays {v.contraction}")


if __name__ == "__main__":
    main()
