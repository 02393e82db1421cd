"""A well-posed network whose L2 energy grows transiently.

Three transport lines are coupled through their endpoints:

    x1(1) = 0,    x2(1) = x1(0) + x3(0),    x3(1) = x2(0).

The boundary form on the kernel equals 2 Re x1(0) conj(x3(0)), which is
sign-indefinite, so the network is not an L2 contraction.  The generation
test still passes (the closure matrix is the identity), and the L1-type
norm behaves monotonically for channels of opposite sign.

The simulation below corroborates both faces: aligned channels pump
energy through the junction (growth), opposed channels never do.
"""

import numpy as np

import phs


def network():
    w0 = np.array([[0, 0, 0], [-1, 0, -1], [0, -1, 0]], dtype=float)
    return phs.make_system(np.eye(3), np.zeros((3, 3)), np.eye(3),
                           np.hstack([np.eye(3), w0]))


def main():
    system = network()
    v = phs.classify(system)
    print(f"verdict: contraction={v.contraction} unitary={v.unitary_group} "
          f"C0={v.c0_semigroup}")
    mx, mn = phs.boundary_form_on_kernel(system)
    print(f"boundary form on the kernel: eigenvalues in [{mn:.4f}, {mx:.4f}]  "
          "(indefinite -> energy can grow)\n")

    bump = lambda z: np.exp(-0.5 * ((z - 0.3) / 0.08) ** 2)
    cfg = phs.SimConfig(nx=256, t_final=1.0, p_norms=(1.0, 2.0), record_every=8)

    print("run 1: aligned channels x1 = x3 = bump (trace product positive)")
    state = phs.run(system, cfg, lambda z: np.array([bump(z), 0.0, bump(z)]))
    e = np.array(state.history["energy"])
    t = np.array(state.history["t"])
    for k in range(0, len(t), len(t) // 8):
        print(f"  t={t[k]:.3f}  energy={e[k]:.4f}  L1={state.history['l1'][k]:.4f}")
    print(f"  energy growth: {(e.max() - e[0]) / e[0]:+.1%}\n")

    print("run 2: opposed channels x1 = -x3 (trace product negative)")
    state = phs.run(system, cfg,
                    lambda z: np.array([bump(z), 0.5 * np.exp(-0.5 * ((z - 0.5) / 0.1) ** 2),
                                        -bump(z)]))
    l1 = np.array(state.history["l1"])
    e = np.array(state.history["energy"])
    print(f"  energy change: {(e.max() - e[0]) / e[0]:+.2%} "
          f"(never above start: {bool(np.all(e <= e[0] * (1 + 1e-12)))})")
    print(f"  L1 monotone non-increasing: {bool(np.all(np.diff(l1) <= 1e-12 * l1[0]))}")


if __name__ == "__main__":
    main()
