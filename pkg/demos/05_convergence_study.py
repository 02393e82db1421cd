"""Grid-refinement study for the upwind characteristics scheme.

Two measurements against exact behaviour of the scalar transport model:

  * accuracy: with zero inflow (w1 = 1, w0 = 0) the solution is the
    initial profile shifted left; the L2 error should shrink at first
    order as the grid doubles;
  * conservation: with periodic coupling (w1 = 1, w0 = -1) the energy is
    exactly conserved; the measured drift is pure scheme dissipation and
    should halve under refinement.
"""

import numpy as np

import phs


def main():
    system = phs.make_system([[1.0]], [[0.0]], [[1.0]], [[1.0, 0.0]])
    profile = lambda z: np.sin(np.pi * np.asarray(z)) ** 2

    print("transport vs analytic shift at t = 0.5")
    print(f"{'nx':>6} {'L2 error':>12} {'ratio':>8}")
    prev = None
    errors = []
    for nx in (64, 128, 256, 512):
        cfg = phs.SimConfig(nx=nx, t_final=0.5, record_every=10 ** 9)
        state = phs.run(system, cfg, profile)
        z = state.zetas
        exact = np.where(z + 0.5 <= 1.0, profile(z + 0.5), 0.0)
        err = np.sqrt(np.sum(state._disc.weights * np.abs(state.x()[:, 0] - exact) ** 2))
        errors.append(err)
        print(f"{nx:>6} {err:>12.3e} {'' if prev is None else f'{prev / err:>8.2f}'}")
        prev = err
    order = -np.polyfit(np.log([64, 128, 256, 512]), np.log(errors), 1)[0]
    print(f"observed order: {order:.3f}\n")

    unitary = phs.make_system([[1.0]], [[0.0]], [[1.0]], [[1.0, -1.0]])
    wave = lambda z: 1.0 + 0.3 * np.sin(2.0 * np.pi * z)
    print("energy drift of the conserved fixture (pure scheme dissipation)")
    prev = None
    for nx in (128, 256, 512):
        cfg = phs.SimConfig(nx=nx, t_final=1.0, record_every=10 ** 9)
        state = phs.run(unitary, cfg, wave)
        e = state.history["energy"]
        drift = abs(e[-1] - e[0]) / e[0]
        print(f"{nx:>6} drift {drift:>10.3e}"
              + ("" if prev is None else f"   ratio {prev / drift:.2f}"))
        prev = drift


if __name__ == "__main__":
    main()
