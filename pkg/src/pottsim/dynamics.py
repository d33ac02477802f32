"""Phase dynamics: Kuramoto-style coupling forces plus an N-SHIL locking term.

Each vertex of the problem graph is one oscillator.  The phase vector evolves
by gradient descent of the Lyapunov function in `potts.lyapunov`:

    dtheta_i/dt = K_c * sum_j J_ij sin(theta_i - theta_j)
                  - K_s(t) * sin(N * theta_i - delta * t)

The SHIL gain K_s(t) follows a schedule (off until t_on, linear ramp, then a
constant or square-wave envelope), so the graph couplings act first and the
N-phase discretization engages afterwards.  A nonzero detuning rate `delta`
rotates the SHIL lattice, modelling a stimulus frequency slightly off the
exact N-th harmonic.  Time is measured in natural oscillator cycles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph_io import Graph
from .potts import Coloring, PhaseState, TWO_PI, accuracy, lyapunov, quantize


class IntegrationDivergedError(RuntimeError):
    """Phases became non-finite mid-run (step size too large for the gains)."""


@dataclass(frozen=True)
class DynamicsParams:
    """Gains, noise, detuning and integration grid for one machine run.

    Defaults are the documented operating point: coupling and SHIL strengths
    balanced so the SHIL neither dominates the couplings nor fails to
    discretize, dt well inside the RK4 stability region for those gains.
    """

    coupling_gain: float = 1.0
    shil_gain_max: float = 2.0
    n_phases: int = 3
    noise_amplitude: float = 0.0
    detuning: float = 0.0
    dt: float = 0.02
    t_max: float = 50.0

    def __post_init__(self):
        if self.n_phases < 2:
            raise ValueError("n_phases must be >= 2")
        for name in ("coupling_gain", "shil_gain_max", "noise_amplitude"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"{name} must be finite and >= 0")
        if not np.isfinite(self.detuning):
            raise ValueError("detuning must be finite")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not np.isfinite(self.t_max) or self.t_max < 0:
            raise ValueError("t_max must be finite and >= 0")


@dataclass(frozen=True)
class ShilSchedule:
    """Envelope of the SHIL stimulus: 0 until t_on, linear ramp, then `mode`.

    mode "constant" holds the envelope at 1 after the ramp, "square" gates it
    with a square wave of the given period and duty cycle (an annealing
    schedule), "off" disables the stimulus entirely.
    """

    t_on: float = 5.0
    ramp: float = 5.0
    mode: str = "constant"
    period: float = 0.0
    duty: float = 0.5

    def __post_init__(self):
        if self.t_on < 0 or self.ramp < 0:
            raise ValueError("t_on and ramp must be >= 0")
        if self.mode not in ("off", "constant", "square"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.mode == "square":
            if not self.period > 0:
                raise ValueError("square mode needs period > 0")
            if not 0.0 <= self.duty <= 1.0:
                raise ValueError("duty must lie in [0, 1]")

    def envelope(self, t: float) -> float:
        if self.mode == "off" or t < self.t_on:
            return 0.0
        if self.ramp > 0 and t < self.t_on + self.ramp:
            return (t - self.t_on) / self.ramp
        if self.mode == "square":
            return 1.0 if (t - self.t_on - self.ramp) % self.period < self.duty * self.period else 0.0
        return 1.0


@dataclass(frozen=True)
class Checkpoint:
    time: float
    state: PhaseState
    lyapunov: float
    coloring: Coloring
    max_rate: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled run history: one checkpoint per stride plus the final time."""

    checkpoints: tuple[Checkpoint, ...]
    stride: float

    def __post_init__(self):
        times = [c.time for c in self.checkpoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("checkpoint times must be strictly increasing")

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]


def _rhs_core(
    theta: np.ndarray,
    t: float,
    u: np.ndarray,
    v: np.ndarray,
    w: np.ndarray,
    n: int,
    coupling_gain: float,
    shil_gain_now: float,
    n_phases: int,
    detuning: float,
) -> np.ndarray:
    s = np.sin(theta)
    c = np.cos(theta)
    # sum_j J_ij sin(theta_i - theta_j) expanded so each edge costs two
    # weighted bincounts instead of a scatter-add
    ac = np.bincount(u, w * c[v], minlength=n) + np.bincount(v, w * c[u], minlength=n)
    as_ = np.bincount(u, w * s[v], minlength=n) + np.bincount(v, w * s[u], minlength=n)
    out = coupling_gain * (s * ac - c * as_)
    if shil_gain_now != 0.0:
        out -= shil_gain_now * np.sin(n_phases * theta - detuning * t)
    return out


def rhs(
    graph: Graph,
    state: PhaseState,
    coupling_gain: float,
    shil_gain_now: float,
    n_phases: int,
    detuning: float = 0.0,
    t: float = 0.0,
) -> np.ndarray:
    """Instantaneous phase velocities for the given gains.

    With detuning = 0 this is exactly minus the gradient of
    ``lyapunov(graph, state, coupling_gain, shil_gain_now, n_phases)``.
    """
    if shil_gain_now < 0:
        raise ValueError("shil_gain_now must be >= 0")
    u, v, w = graph.edge_arrays()
    return _rhs_core(
        state.phases, t, u, v, w, graph.num_vertices,
        coupling_gain, shil_gain_now, n_phases, detuning,
    )


def random_init(n: int, seed: int) -> PhaseState:
    """Uniform random phases on [0, 2*pi), deterministic per seed."""
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = np.random.default_rng([seed, 0])
    return PhaseState(rng.random(n) * TWO_PI, timestamp=0.0)


def integrate(
    graph: Graph,
    init: PhaseState,
    params: DynamicsParams,
    schedule: ShilSchedule,
    seed: int = 0,
    stride: float = 0.5,
    method: str = "rk4",
) -> Trajectory:
    """Fixed-step integration of the phase dynamics.

    RK4 by default (explicit Euler available for speed studies); additive
    noise of std ``noise_amplitude * sqrt(dt)`` per step when enabled, drawn
    from a stream derived from ``seed`` so runs are reproducible.  Phases are
    canonicalized to [0, 2*pi) after every step.  Checkpoints are recorded at
    ``stride`` intervals and at t_max; each carries the instantaneous
    Lyapunov value, the rounded coloring and the max |dtheta/dt|.

    Raises IntegrationDivergedError if any phase becomes non-finite, which
    signals a step size too large for the configured gains.
    """
    if method not in ("rk4", "euler"):
        raise ValueError(f"unknown method {method!r}")
    if len(init) != graph.num_vertices:
        raise ValueError("initial state length does not match graph")
    u, v, w = graph.edge_arrays()
    n = graph.num_vertices
    kc = params.coupling_gain
    ks_max = params.shil_gain_max
    nph = params.n_phases
    delta = params.detuning
    dt = params.dt

    def f(theta: np.ndarray, t: float) -> np.ndarray:
        ks_now = ks_max * schedule.envelope(t)
        return _rhs_core(theta, t, u, v, w, n, kc, ks_now, nph, delta)

    steps = int(round(params.t_max / dt))
    ckpt_every = max(1, int(round(stride / dt)))
    noise = params.noise_amplitude
    rng = np.random.default_rng([seed, 1]) if noise > 0 else None
    noise_std = noise * np.sqrt(dt)

    def checkpoint(theta: np.ndarray, t: float) -> Checkpoint:
        state = PhaseState(theta, timestamp=t)
        ks_now = ks_max * schedule.envelope(t)
        return Checkpoint(
            time=t,
            state=state,
            lyapunov=lyapunov(graph, state, kc, ks_now, nph),
            coloring=quantize(state, nph),
            max_rate=float(np.max(np.abs(f(state.phases, t)))),
        )

    theta = init.phases.copy()
    # overflow to inf is caught by the isfinite check below, so silence the
    # intermediate numpy warnings it would spray first
    with np.errstate(over="ignore", invalid="ignore"):
        checkpoints = [checkpoint(theta, 0.0)]
        for i in range(steps):
            t = i * dt
            if method == "rk4":
                k1 = f(theta, t)
                k2 = f(theta + 0.5 * dt * k1, t + 0.5 * dt)
                k3 = f(theta + 0.5 * dt * k2, t + 0.5 * dt)
                k4 = f(theta + dt * k3, t + dt)
                theta = theta + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            else:
                theta = theta + dt * f(theta, t)
            if rng is not None:
                theta = theta + rng.normal(0.0, noise_std, n)
            theta %= TWO_PI
            t_next = (i + 1) * dt
            if not np.all(np.isfinite(theta)):
                raise IntegrationDivergedError(
                    f"non-finite phase at t={t_next:g} cycles (reduce dt or the gains)"
                )
            if (i + 1) % ckpt_every == 0 or i + 1 == steps:
                checkpoints.append(checkpoint(theta, t_next))
    return Trajectory(tuple(checkpoints), stride)


def detect_convergence(
    trajectory: Trajectory, window: int = 5, eps: float = 1e-3
) -> Optional[float]:
    """Earliest checkpoint time at which the machine has settled.

    Settled means the rounded coloring is identical over the `window` most
    recent checkpoints and max |dtheta/dt| is below `eps` at the last of
    them.  Returns None if that never happens within the trajectory.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    cps = trajectory.checkpoints
    for i in range(window - 1, len(cps)):
        if cps[i].max_rate >= eps:
            continue
        ref = cps[i].coloring.spins
        if all(np.array_equal(cps[j].coloring.spins, ref) for j in range(i - window + 1, i)):
            return cps[i].time
    return None


def trajectory_csv(trajectory: Trajectory, graph: Graph, include_phases: bool = False) -> str:
    """CSV dump of a trajectory: time, [phases...], lyapunov, rounded accuracy."""
    n = graph.num_vertices
    header = ["time"]
    if include_phases:
        header += [f"phase_{i}" for i in range(n)]
    header += ["lyapunov", "accuracy"]
    rows = [",".join(header)]
    for cp in trajectory.checkpoints:
        cells = [repr(float(cp.time))]
        if include_phases:
            cells += [repr(float(x)) for x in cp.state.phases]
        cells += [repr(float(cp.lyapunov)), repr(accuracy(graph, cp.coloring))]
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
