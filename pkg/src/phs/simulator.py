"""Upwind characteristics simulator with energy and L^p norm monitoring.

The PDE d/dt x = (P1 d/dz + P0)(H x) is evolved in Riemann-invariant
variables g = S x, where P1 H = S^-1 diag(lam, theta) S is the pointwise
eigen-splitting.  Writing Delta = diag(lam, theta), the transformed system
is in flux form

    d/dt g = d/dz (Delta g) + B(z) g,
    B = S (dS^-1/dz) Delta + S P0 H S^-1,

so each component is a scalar transport equation with speed -Delta_j plus
bounded coupling.  Components with positive speeds lam travel toward z = 0
and take their inflow at z = 1; components with negative speeds theta
travel toward z = 1 with inflow at z = 0.

Discretization, chosen for transparency rather than accuracy:

  * nx + 1 nodes on [0,1], first-order one-sided (upwind) differences of
    the flux Delta g: forward for the lam block, backward for the theta
    block;
  * explicit two-stage strong-stability time stepping (Heun), dt set by
    the CFL condition dt * max|speed| / dz <= cfl;
  * dS^-1/dz by centered differences on the grid (one-sided at the ends),
    which is exactly zero for constant coefficients;
  * boundary closure after every stage: the incoming traces g+(1), g-(0)
    are solved from   [V1 U2] [g+(1); g-(0)] = -[U1 V2] [g+(0); g-(1)]
    with W1 H(1) S^-1(1) = [V1 V2] and W0 H(0) S^-1(0) = [U1 U2] split at
    column n1.  [V1 U2] is assembled and factored once; it is invertible
    exactly when the system generates a C0-semigroup, so simulating a
    non-generator requires the explicit ``allow_illposed`` opt-in (the
    closure then falls back to a least-squares solve).

Energy <x, Hx> and norms (sum_i w_i |x(z_i)|^p)^(1/p) with trapezoid
weights w and the Euclidean norm per node are recorded every
``record_every`` steps.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .classifier import TOL_RANK, boundary_closure_matrix, classify, diagonalize_field
from .errors import (
    ContinuityError,
    DomainError,
    IllPosedError,
    PreconditionError,
    StabilityError,
    ValidationError,
)
from .model import PHSystem

# Maximum admissible relative increase per step for monotone-norm checks.
TOL_MONO = 1e-3
# Relative boundary residual bound after the exact closure solve.
TOL_BC = 1e-10
# Blow-up guard: abort when the field exceeds this multiple of its start.
BLOWUP_FACTOR = 1e6


@dataclass(frozen=True)
class SimConfig:
    """Grid, horizon and monitoring parameters."""

    nx: int = 256
    t_final: float = 1.0
    cfl: float = 0.9
    p_norms: tuple = (1.0, 2.0)
    track_energy: bool = True
    record_every: int = 1

    def __post_init__(self):
        if self.nx < 16:
            raise ValidationError(f"nx must be >= 16, got {self.nx}")
        if not self.t_final > 0.0:
            raise ValidationError(f"t_final must be positive, got {self.t_final}")
        if not 0.0 < self.cfl <= 1.0:
            raise ValidationError(f"cfl must lie in (0, 1], got {self.cfl}")
        if any(p < 1.0 for p in self.p_norms):
            raise ValidationError(f"p_norms must all be >= 1, got {self.p_norms}")
        if self.record_every < 1:
            raise ValidationError(f"record_every must be >= 1, got {self.record_every}")


class _Discretization:
    """Everything about the grid that is constant in time."""

    def __init__(self, system: PHSystem, config: SimConfig, allow_illposed: bool):
        nx = config.nx
        self.zetas = np.linspace(0.0, 1.0, nx + 1)
        self.dz = 1.0 / nx

        dfield = diagonalize_field(system, self.zetas)
        if dfield.crossings:
            raise ContinuityError(
                f"eigenvalue crossing on the simulation grid at indices "
                f"{list(dfield.crossings)}: the characteristics transform is not smooth"
            )
        self.n1 = dfield[0].n1
        self.n2 = dfield[0].n2
        self.s_inv = np.stack([sp.s_inv for sp in dfield])          # (nx+1, n, n)
        self.speeds = np.stack([sp.speeds for sp in dfield]).real   # (nx+1, n)
        self.s = np.linalg.inv(self.s_inv)
        self.h = system.h.eval_many(self.zetas)

        ds_inv = np.empty_like(self.s_inv)
        ds_inv[1:-1] = (self.s_inv[2:] - self.s_inv[:-2]) / (2.0 * self.dz)
        ds_inv[0] = (self.s_inv[1] - self.s_inv[0]) / self.dz
        ds_inv[-1] = (self.s_inv[-1] - self.s_inv[-2]) / self.dz
        lower = self.s @ (system.p0[None] @ self.h) @ self.s_inv
        self.bmat = (self.s @ ds_inv) * self.speeds[:, None, :] + lower

        closure = boundary_closure_matrix(system, dfield[-1], dfield[0])
        self.k_bc = closure.k
        self.q_bc = closure.q
        svals = np.linalg.svd(self.k_bc, compute_uv=False)
        self.closure_singular = bool(svals[0] == 0.0 or svals[-1] < TOL_RANK * svals[0])
        if self.closure_singular:
            if not allow_illposed:
                raise IllPosedError(
                    "boundary closure matrix [V1 U2] is singular; "
                    "pass allow_illposed=True for a demonstration run"
                )
            pinv = np.linalg.pinv(self.k_bc)
            self._solve_k = lambda rhs: pinv @ rhs
        else:
            lu = scipy.linalg.lu_factor(self.k_bc)
            self._solve_k = lambda rhs: scipy.linalg.lu_solve(lu, rhs)

        max_speed = float(np.abs(self.speeds).max())
        self.dt = config.cfl * self.dz / max_speed
        assert self.dt * max_speed / self.dz <= config.cfl + 1e-12

        weights = np.full(nx + 1, self.dz)
        weights[0] = weights[-1] = self.dz / 2.0
        self.weights = weights

    def close(self, g: np.ndarray) -> None:
        """Solve for the incoming traces in place; g is (nx+1, n)."""
        outgoing = np.concatenate([g[0, : self.n1], g[-1, self.n1 :]])
        incoming = self._solve_k(-(self.q_bc @ outgoing))
        g[-1, : self.n1] = incoming[: self.n1]
        g[0, self.n1 :] = incoming[self.n1 :]

    def rhs(self, g: np.ndarray) -> np.ndarray:
        flux = self.speeds * g
        out = np.einsum("nij,nj->ni", self.bmat, g)
        n1 = self.n1
        out[:-1, :n1] += (flux[1:, :n1] - flux[:-1, :n1]) / self.dz
        out[1:, n1:] += (flux[1:, n1:] - flux[:-1, n1:]) / self.dz
        return out


@dataclass(eq=False)
class SimState:
    """Mutable simulation state: time, Riemann-invariant field, history.

    Single-writer: step() mutates in place and returns the same object.
    ``history`` maps column names (t, energy, l1, ...) to growing lists.
    """

    system: PHSystem
    config: SimConfig
    t: float
    g: np.ndarray
    history: dict
    verdict: object = None
    step_count: int = 0
    max_bc_residual: float = 0.0
    _disc: _Discretization = field(default=None, repr=False)
    _g0_max: float = 0.0
    _last_recorded_step: int = -1

    @property
    def zetas(self) -> np.ndarray:
        return self._disc.zetas

    def x(self) -> np.ndarray:
        """Reconstructed physical field, shape (nx+1, n)."""
        return np.einsum("nij,nj->ni", self._disc.s_inv, self.g)


def _norm_label(p: float) -> str:
    return f"l{p:g}"


def energy(state: SimState) -> float:
    """Trapezoid-rule discrete <x, H x>."""
    x = state.x()
    hx = np.einsum("nij,nj->ni", state._disc.h, x)
    return float(np.real(np.einsum("n,nj,nj->", state._disc.weights, x.conj(), hx)))


def lp_norm(state: SimState, p: float) -> float:
    """Trapezoid-rule (sum_i w_i |x(z_i)|^p)^(1/p), Euclidean norm per node."""
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    node = np.linalg.norm(state.x(), axis=1)
    return float(np.einsum("n,n->", state._disc.weights, node**p) ** (1.0 / p))


def _boundary_residual(state: SimState) -> float:
    x = state.x()
    traces = np.concatenate([state._disc.h[-1] @ x[-1], state._disc.h[0] @ x[0]])
    num = np.linalg.norm(state.system.wb_tilde @ traces)
    scale = np.linalg.norm(state.system.wb_tilde) * np.linalg.norm(traces)
    return float(num / max(scale, 1.0))


def _record(state: SimState) -> None:
    if state.step_count == state._last_recorded_step:
        return
    state._last_recorded_step = state.step_count
    state.history["t"].append(state.t)
    if state.config.track_energy:
        state.history["energy"].append(energy(state))
    for p in state.config.p_norms:
        state.history[_norm_label(p)].append(lp_norm(state, p))
    state.max_bc_residual = max(state.max_bc_residual, _boundary_residual(state))


def setup(
    system: PHSystem, config: SimConfig, x0, allow_illposed: bool = False
) -> SimState:
    """Build the grid machinery and the initial state.

    ``x0`` is a callable z -> state vector (length n; scalars accepted for
    n = 1).  Raises IllPosedError when the system is not classified as a
    C0-semigroup generator, unless ``allow_illposed`` is set, and
    ContinuityError when eigenvalues cross on the grid.  The incoming
    traces of the initial field are projected onto the boundary condition,
    so the discrete boundary residual is zero from the start.
    """
    verdict = classify(system)
    if verdict.c0_semigroup is not True and not allow_illposed:
        raise IllPosedError(
            "system is not classified as a C0-semigroup generator "
            f"(c0_semigroup={verdict.c0_semigroup}); "
            "pass allow_illposed=True for a demonstration run"
        )
    disc = _Discretization(system, config, allow_illposed)

    x_init = np.empty((config.nx + 1, system.n), dtype=complex)
    for i, z in enumerate(disc.zetas):
        x_init[i] = np.broadcast_to(np.asarray(x0(z), dtype=complex), (system.n,))
    g = np.einsum("nij,nj->ni", disc.s, x_init)
    disc.close(g)

    history: dict = {"t": []}
    if config.track_energy:
        history["energy"] = []
    for p in config.p_norms:
        history[_norm_label(p)] = []

    state = SimState(
        system=system,
        config=config,
        t=0.0,
        g=g,
        history=history,
        verdict=verdict,
        _disc=disc,
        _g0_max=float(np.abs(g).max()),
    )
    _record(state)
    return state


def step(state: SimState) -> SimState:
    """Advance one time step (two Heun stages, closure after each)."""
    cfg = state.config
    if state.t >= cfg.t_final - 1e-12 * max(1.0, cfg.t_final):
        raise PreconditionError(f"t = {state.t} has already reached t_final")
    disc = state._disc
    dt = min(disc.dt, cfg.t_final - state.t)

    g = state.g
    g1 = g + dt * disc.rhs(g)
    disc.close(g1)
    g2 = g1 + dt * disc.rhs(g1)
    disc.close(g2)
    gnew = 0.5 * (g + g2)
    disc.close(gnew)

    peak = float(np.abs(gnew).max())
    if peak > BLOWUP_FACTOR * max(state._g0_max, 1e-300):
        raise StabilityError(
            f"field amplitude {peak:.3e} exceeds {BLOWUP_FACTOR:.0e} x initial maximum"
        )

    state.g = gnew
    state.t += dt
    state.step_count += 1
    at_end = state.t >= cfg.t_final - 1e-12 * max(1.0, cfg.t_final)
    if state.step_count % cfg.record_every == 0 or at_end:
        _record(state)
    return state


def run(system: PHSystem, config: SimConfig, x0, allow_illposed: bool = False) -> SimState:
    """Simulate from t = 0 to t_final; returns the final state with the
    complete norm/energy history."""
    state = setup(system, config, x0, allow_illposed)
    horizon = config.t_final - 1e-12 * max(1.0, config.t_final)
    while state.t < horizon:
        step(state)
    return state


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def write_history_csv(state: SimState, fileobj) -> None:
    """Norm history as CSV with columns t, energy, l1, l2, ..."""
    columns = ["t"]
    if state.config.track_energy:
        columns.append("energy")
    columns.extend(_norm_label(p) for p in state.config.p_norms)
    writer = csv.writer(fileobj)
    writer.writerow(columns)
    for row in zip(*(state.history[c] for c in columns)):
        writer.writerow([f"{v:.16g}" for v in row])


def write_field_csv(state: SimState, fileobj) -> None:
    """Final field as CSV with columns zeta, re(x_1), im(x_1), ..."""
    header = ["zeta"]
    for j in range(state.system.n):
        header.extend([f"re(x_{j + 1})", f"im(x_{j + 1})"])
    writer = csv.writer(fileobj)
    writer.writerow(header)
    x = state.x()
    for i, z in enumerate(state.zetas):
        row = [f"{z:.16g}"]
        for j in range(state.system.n):
            row.extend([f"{x[i, j].real:.16g}", f"{x[i, j].imag:.16g}"])
        writer.writerow(row)
