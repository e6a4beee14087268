"""Control-pulse schedules for Kerr-cat gates.

Builders for every scheme studied in this package: the native X rotation,
the Y rotation with cat-size ramp and DRAG correction, the two adiabatic
Z schemes (robust-line tracing and straight-line crossing), the unprotected
Kerr-gate baseline, and the two-qubit beamsplitter envelope.

All envelopes are built from the truncated Gaussian

    f(t) = [(exp(-(t/T - 1/2)^2 / 2) - exp(-1/8)) / (1 - exp(-1/8))]^2,

which vanishes with zero slope at both endpoints and peaks at f(T/2) = 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .cats import cat_vectors, matrix_elements
from .fock import CHANNELS, FockSpace, HamiltonianAssembly, KerrCatParams, number_operator
from .spectral import RobustLineCache, diagonalize_labeled, spectrum_at

DEFAULT_SAMPLES = 2001


class SchemeInfeasibleError(RuntimeError):
    """The requested pulse parameters cannot produce a valid schedule."""


class InvalidRampError(ValueError):
    """Ramp drives the instantaneous cat size negative."""


class AdiabaticityLossError(RuntimeError):
    """Instantaneous-eigenstate tracking lost its target state."""


# --- envelopes -------------------------------------------------------------

_EDGE = np.exp(-1.0 / 8.0)


def truncated_gaussian(t, T: float):
    """Truncated Gaussian envelope with sigma = T and exponent 2 on [0, T]."""
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-12) or np.any(t > T + 1e-12):
        raise ValueError("t outside [0, T]")
    u = t / T - 0.5
    g = (np.exp(-0.5 * u**2) - _EDGE) / (1.0 - _EDGE)
    out = g**2
    return float(out) if out.ndim == 0 else out


def truncated_gaussian_deriv(t, T: float):
    """Analytic time derivative of :func:`truncated_gaussian`."""
    t = np.asarray(t, dtype=float)
    u = t / T - 0.5
    g = (np.exp(-0.5 * u**2) - _EDGE) / (1.0 - _EDGE)
    gdot = -u / T * np.exp(-0.5 * u**2) / (1.0 - _EDGE)
    out = 2.0 * g * gdot
    return float(out) if out.ndim == 0 else out


def envelope_integral(T: float) -> float:
    """Integral of the truncated Gaussian over its full duration."""
    # closed-form in terms of erf; cheap and exact enough to seed amplitudes
    from scipy.integrate import quad

    val, _ = quad(lambda t: truncated_gaussian(t, T), 0.0, T, limit=200)
    return val


def ramp_up(t, tau: float):
    """Rising half of a truncated Gaussian: 0 -> 1 over [0, tau]."""
    return truncated_gaussian(np.asarray(t, dtype=float), 2.0 * tau)


def ramp_down(t, tau: float):
    """Falling half of a truncated Gaussian: 1 -> 0 over [0, tau]."""
    return truncated_gaussian(np.asarray(t, dtype=float) + tau, 2.0 * tau)


# --- target gates ----------------------------------------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def rot_x(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_X


def rot_y(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_Y


def rot_z(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_Z


# --- schedule container ----------------------------------------------------

@dataclass(frozen=True)
class PulseSchedule:
    """Time-sampled control channels plus target-gate metadata.

    ``channels`` maps channel names (delta, eps2_mod, eps_x, eps_y, g) to
    arrays on the uniform ``times`` grid. ``frame_rotation`` (optional) is a
    Fock-space unitary applied as R^dag U before projecting the gate; the
    Kerr gate uses it for the pi/2 phase-space rotation it induces.
    """

    times: np.ndarray
    channels: dict[str, np.ndarray]
    target: np.ndarray
    scheme: str
    base: KerrCatParams
    params: dict[str, float] = field(default_factory=dict)
    frame_rotation: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.times)
        for name, values in self.channels.items():
            if len(values) != n:
                raise ValueError(f"channel {name!r} length {len(values)} != grid {n}")

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def channel(self, name: str) -> np.ndarray:
        if name in self.channels:
            return self.channels[name]
        return np.zeros_like(self.times)

    def channel_at(self, name: str, t) -> np.ndarray:
        return np.interp(t, self.times, self.channel(name))

    def delta_of_t(self) -> np.ndarray:
        """Total detuning trajectory delta_base + delta(t)."""
        return self.base.delta + self.channel("delta")

    def alpha2_of_t(self) -> np.ndarray:
        """Instantaneous cat size (eps2_0 + eps2_mod(t)) / K."""
        return (self.base.eps2_0 + self.channel("eps2_mod")) / self.base.kerr

    def is_z_type(self) -> bool:
        return self.scheme in ("Z_ROBUSTLINE", "Z_STRAIGHT", "KERR_GATE", "IDLE")

    def to_csv(self, path) -> None:
        names = [c for c in (*CHANNELS, "g") if c in self.channels]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", *names])
            for k, t in enumerate(self.times):
                writer.writerow([f"{t:.12g}", *(f"{self.channels[n][k]:.12g}" for n in names)])


def idle_schedule(T: float, params: KerrCatParams, n_samples: int = DEFAULT_SAMPLES) -> PulseSchedule:
    """All channels zero; evolution under the bare drift."""
    times = np.linspace(0.0, T, n_samples)
    return PulseSchedule(times=times, channels={}, target=np.eye(2, dtype=complex),
                         scheme="IDLE", base=params)


# --- X scheme ---------------------------------------------------------------

def seed_eps_x0(T: float, params: KerrCatParams, theta: float = np.pi / 2) -> float:
    """Analytic amplitude seed: theta = h_x * eps_x0 * integral(f)."""
    hx, _ = matrix_elements(params.alpha)
    return theta / (hx * envelope_integral(T))


def scheme_x(
    T: float,
    eps_x0: float,
    params: KerrCatParams,
    theta: float = np.pi / 2,
    n_samples: int = DEFAULT_SAMPLES,
) -> PulseSchedule:
    """Native X(theta) pulse: a single truncated-Gaussian eps_x drive."""
    if T <= 0:
        raise ValueError("T must be positive")
    times = np.linspace(0.0, T, n_samples)
    return PulseSchedule(
        times=times,
        channels={"eps_x": eps_x0 * truncated_gaussian(times, T)},
        target=rot_x(theta),
        scheme="X",
        base=params,
        params={"eps_x0": eps_x0, "theta": theta},
    )


# --- Y scheme with DRAG -----------------------------------------------------

def _instantaneous_cat_tables(alpha2_values: np.ndarray, params: KerrCatParams, space: FockSpace):
    """h_y couplings to the leakage states and their energies vs cat size.

    Returns interpolating arrays (alpha2_grid, h12, h03, e2, e3) where
    e2 = E(|2>) - E(|0>) and e3 = E(|3>) - E(|1>) (negative: the cat
    manifold sits at the top of the spectrum).
    """
    a2_lo, a2_hi = float(np.min(alpha2_values)), float(np.max(alpha2_values))
    grid = np.linspace(a2_lo, max(a2_hi, a2_lo + 1e-9), 80)
    assembly = HamiltonianAssembly.build(KerrCatParams(kerr=params.kerr), space)
    hy_op = 2.0 * assembly.channels["eps_y"]  # -i (a - a^dag)
    h12 = np.empty_like(grid)
    h03 = np.empty_like(grid)
    e2 = np.empty_like(grid)
    e3 = np.empty_like(grid)
    for k, a2 in enumerate(grid):
        spec = spectrum_at(KerrCatParams.from_alpha2(a2, kerr=params.kerr), 0.0, space)
        even = spec.even_indices()
        odd = spec.odd_indices()
        i0, i1 = spec.comp_indices
        # next state down in each parity sector
        i2 = int(even[np.argsort(spec.energies[even])[-2]])
        i3 = int(odd[np.argsort(spec.energies[odd])[-2]])
        h12[k] = abs(np.vdot(spec.states[:, i2], hy_op @ spec.psi1))
        h03[k] = abs(np.vdot(spec.states[:, i3], hy_op @ spec.psi0))
        e2[k] = spec.energies[i2] - spec.energies[i0]
        e3[k] = spec.energies[i3] - spec.energies[i1]
    return grid, h12, h03, e2, e3


def _drag_approx(times, eps_y_dot, alpha2_t, params, space):
    """First-order DRAG quadrature: proportional to the drive derivative."""
    grid, h12, h03, e2, e3 = _instantaneous_cat_tables(alpha2_t, params, space)
    h12_t = np.interp(alpha2_t, grid, h12)
    h03_t = np.interp(alpha2_t, grid, h03)
    e2_t = np.interp(alpha2_t, grid, e2)
    e3_t = np.interp(alpha2_t, grid, e3)
    alphas = np.sqrt(np.maximum(alpha2_t, 0.0))
    hx_t = np.array([matrix_elements(a)[0] for a in alphas])
    hy_t = np.array([matrix_elements(a)[1] for a in alphas])
    return (h12_t**2 / e2_t - h03_t**2 / e3_t) / (4.0 * hy_t * hx_t) * eps_y_dot


def _drag_exact(times, eps2_mod, eps2_dot, eps_y, eps_y_dot, params, space,
                overlap_min=0.9, split_floor=1e-9):
    """Exact transition-cancelling quadrature from tracked eigenstates.

    Tracks the two computational eigenstates of H_0 + eps2_mod/2 H_2 +
    eps_y/2 H_y by overlap continuity from |+-i> at t = 0 and solves for
    the eps_x(t) that cancels the 0 <-> 1 transition amplitude.
    """
    assembly = HamiltonianAssembly.build(params, space)
    cats = cat_vectors(params.alpha, space)
    psi0 = (cats.plus_cat + 1j * cats.minus_cat) / np.sqrt(2.0)
    psi1 = (cats.plus_cat - 1j * cats.minus_cat) / np.sqrt(2.0)
    h2 = assembly.channels["eps2_mod"]
    hy = assembly.channels["eps_y"]
    hx = assembly.channels["eps_x"]

    eps_x = np.zeros_like(times)
    tracked = []
    for k in range(len(times)):
        H = assembly.drift + eps2_mod[k] * h2 + eps_y[k] * hy
        energies, states = np.linalg.eigh(H)
        new = []
        for ref in (psi0, psi1):
            # project onto the (near-degenerate) eigenspace the reference
            # lives in; at t=0 the computational pair is exactly degenerate
            # and no single eigenvector overlaps the tracked state
            amps = states.conj().T @ ref
            j = int(np.argmax(np.abs(amps)))
            group = np.abs(energies - energies[j]) < 1e-6
            weight = float(np.sum(np.abs(amps[group]) ** 2))
            if weight < overlap_min**2:
                raise AdiabaticityLossError(
                    f"eigenstate tracking weight {weight:.3f} < {overlap_min**2} "
                    f"at t={times[k]:.3f}"
                )
            vec = states[:, group] @ amps[group]
            vec = vec / np.linalg.norm(vec)
            e_val = float(np.sum(np.abs(amps[group]) ** 2 * energies[group]) / weight)
            new.append((vec, e_val))
        (psi0, e0), (psi1, e1) = new
        tracked.append((psi0, psi1, e0, e1))

        split = e0 - e1
        mx = np.vdot(psi1, hx @ psi0)
        if abs(split) > split_floor and abs(mx) > 1e-12:
            num = eps2_dot[k] * np.vdot(psi1, h2 @ psi0) + eps_y_dot[k] * np.vdot(psi1, hy @ psi0)
            val = 1j * num / (split * mx)
            eps_x[k] = val.real
    eps_x[0] = eps_x[-1] = 0.0
    return eps_x, tracked


def scheme_y_drag(
    T: float,
    eps_y0: float,
    eps2_ramp0: float,
    params: KerrCatParams,
    space: FockSpace,
    drag_mode: str = "approx",
    theta: float = np.pi / 2,
    n_samples: int = DEFAULT_SAMPLES,
) -> PulseSchedule:
    """Y(theta) pulse: eps_y drive plus cat-size ramp plus DRAG eps_x term.

    ``drag_mode`` selects the exact transition-cancelling correction
    ("exact"), its derivative-proportional first-order form ("approx"),
    or disables the correction ("off").
    """
    if eps2_ramp0 > 0:
        raise InvalidRampError("eps2_ramp0 must be <= 0 (ramp lowers the cat size)")
    times = np.linspace(0.0, T, n_samples)
    f = truncated_gaussian(times, T)
    fdot = truncated_gaussian_deriv(times, T)
    eps_y = eps_y0 * f
    eps2_mod = eps2_ramp0 * f
    alpha2_t = (params.eps2_0 + eps2_mod) / params.kerr
    if np.any(alpha2_t < -1e-12):
        raise InvalidRampError("ramp drives the instantaneous cat size negative")

    if drag_mode == "off":
        eps_x = np.zeros_like(times)
    elif drag_mode == "approx":
        eps_x = _drag_approx(times, eps_y0 * fdot, alpha2_t, params, space)
    elif drag_mode == "exact":
        eps_x, _ = _drag_exact(times, eps2_mod, eps2_ramp0 * fdot, eps_y, eps_y0 * fdot,
                               params, space)
    else:
        raise ValueError(f"unknown drag_mode {drag_mode!r}")

    return PulseSchedule(
        times=times,
        channels={"eps_y": eps_y, "eps2_mod": eps2_mod, "eps_x": eps_x},
        target=rot_y(theta),
        scheme="Y_DRAG",
        base=params,
        params={"eps_y0": eps_y0, "eps2_ramp0": eps2_ramp0, "theta": theta,
                "drag_mode": drag_mode},
    )


# --- Z schemes ---------------------------------------------------------------

def scheme_z_robustline(
    T: float,
    tau: float,
    eps2_ramp0: float,
    params: KerrCatParams,
    robust_line_fn: Callable[[np.ndarray], np.ndarray],
    theta: float = -np.pi / 2,
    n_samples: int = DEFAULT_SAMPLES,
) -> PulseSchedule:
    """Adiabatic Z gate tracing the first-order-insensitive detuning line.

    Segment 1 (length tau): detuning ramps 0 -> delta_rob(alpha_1^2).
    Middle (length T - 2 tau): the pump dips by a truncated Gaussian to
    ``eps2_ramp0`` while the detuning follows the robust line pointwise.
    Segment 3 mirrors segment 1. ``robust_line_fn`` maps instantaneous cat
    size to robust detuning (typically a :class:`RobustLineCache`).
    """
    if not 0 < tau < T / 2:
        raise SchemeInfeasibleError(f"need 0 < tau < T/2, got tau={tau}, T={T}")
    if eps2_ramp0 > 0:
        raise InvalidRampError("eps2_ramp0 must be <= 0")
    times = np.linspace(0.0, T, n_samples)
    mid_T = T - 2.0 * tau

    eps2_mod = np.zeros_like(times)
    mid = (times >= tau) & (times <= T - tau)
    eps2_mod[mid] = eps2_ramp0 * truncated_gaussian(times[mid] - tau, mid_T)
    alpha2_t = (params.eps2_0 + eps2_mod) / params.kerr

    from .spectral import NoRobustPointError

    try:
        delta_rob_start = float(np.asarray(robust_line_fn(params.alpha2)))
        delta = np.empty_like(times)
        head = times < tau
        tail = times > T - tau
        delta[head] = delta_rob_start * ramp_up(times[head], tau)
        delta[tail] = delta_rob_start * ramp_down(times[tail] - (T - tau), tau)
        delta[mid] = np.asarray(robust_line_fn(alpha2_t[mid]))
    except NoRobustPointError as exc:
        raise SchemeInfeasibleError(str(exc)) from exc

    return PulseSchedule(
        times=times,
        channels={"delta": delta, "eps2_mod": eps2_mod},
        target=rot_z(theta),
        scheme="Z_ROBUSTLINE",
        base=params,
        params={"tau": tau, "eps2_ramp0": eps2_ramp0, "theta": theta},
    )


def scheme_z_straight(
    T: float,
    delta_max: float,
    eps2_ramp0: float,
    params: KerrCatParams,
    theta: float = -np.pi / 2,
    n_samples: int = DEFAULT_SAMPLES,
) -> PulseSchedule:
    """Adiabatic Z gate on a straight (delta, alpha^2) trajectory.

    Both controls follow the same truncated Gaussian, so the trajectory
    moves on a straight line from (0, alpha^2) to (delta_max, alpha'^2)
    and back. First-order robustness to static shifts requires the
    time-averaged gap derivative to vanish, which the optimizer arranges
    by pushing the midpoint beyond the robust line.
    """
    if eps2_ramp0 > 0:
        raise InvalidRampError("eps2_ramp0 must be <= 0")
    if params.eps2_0 + eps2_ramp0 < -1e-12:
        raise InvalidRampError("ramp drives the cat size negative")
    times = np.linspace(0.0, T, n_samples)
    f = truncated_gaussian(times, T)
    return PulseSchedule(
        times=times,
        channels={"delta": delta_max * f, "eps2_mod": eps2_ramp0 * f},
        target=rot_z(theta),
        scheme="Z_STRAIGHT",
        base=params,
        params={"delta_max": delta_max, "eps2_ramp0": eps2_ramp0, "theta": theta},
    )


def scheme_kerr_gate(params: KerrCatParams, n_samples: int = DEFAULT_SAMPLES,
                     space: FockSpace | None = None) -> PulseSchedule:
    """Unprotected Kerr-gate baseline: pump quenched off for T = pi/K.

    Free Kerr evolution rotates the cat axis by pi/2 in phase space, so the
    gate is accompanied by the frame rotation R = diag(i^n) and implements
    a discrete Z rotation in the rotated cat basis.
    """
    T = np.pi / params.kerr
    times = np.linspace(0.0, T, n_samples)
    frame = None
    if space is not None:
        frame = np.diag((-1j) ** np.arange(space.dim))
    return PulseSchedule(
        times=times,
        channels={"eps2_mod": np.full_like(times, -params.eps2_0)},
        target=rot_z(np.pi / 2),
        scheme="KERR_GATE",
        base=params,
        params={},
        frame_rotation=frame,
    )


def kerr_gate_infidelity_estimate(params: KerrCatParams, delta_shift: float) -> float:
    """Reference error model of the Kerr gate, alpha^2 Delta^2 T^2."""
    T = np.pi / params.kerr
    return params.alpha2 * delta_shift**2 * T**2


# --- two-qubit envelope ------------------------------------------------------

def scheme_xx_envelope(T: float, g0: float, n_samples: int = DEFAULT_SAMPLES,
                       constant: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Beamsplitter coupling envelope g(t): truncated Gaussian or constant."""
    times = np.linspace(0.0, T, n_samples)
    values = np.full_like(times, g0) if constant else g0 * truncated_gaussian(times, T)
    return times, values


# --- adiabatic trajectory analysis -------------------------------------------

def gap_traces(
    schedule: PulseSchedule,
    space: FockSpace,
    n_samples: int = 401,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(t, E_01(t), dE_01/ddelta(t)) along a Z-type schedule trajectory."""
    if not schedule.is_z_type():
        raise ValueError("gap traces are defined for Z-type (adiabatic) schedules only")
    params = schedule.base
    assembly = HamiltonianAssembly.build(params, space)
    n_op = number_operator(space)
    from .fock import parity_operator

    pi_op = parity_operator(space)
    t = np.linspace(0.0, schedule.duration, n_samples)
    delta_t = schedule.channel_at("delta", t)
    eps2_t = schedule.channel_at("eps2_mod", t)
    gap = np.empty_like(t)
    deriv = np.empty_like(t)
    for k in range(len(t)):
        H = assembly.drift + delta_t[k] * assembly.channels["delta"] \
            + eps2_t[k] * assembly.channels["eps2_mod"]
        spec = diagonalize_labeled(H, pi_op)
        gap[k] = spec.gap
        n0 = np.vdot(spec.psi0, n_op @ spec.psi0).real
        n1 = np.vdot(spec.psi1, n_op @ spec.psi1).real
        deriv[k] = n1 - n0
    return t, gap, deriv


def predicted_angle(
    schedule: PulseSchedule,
    delta_shift: float,
    space: FockSpace,
    n_samples: int = 401,
) -> float:
    """First-order adiabatic gate angle -int E_01 dt - Delta int dE_01 dt."""
    t, gap, deriv = gap_traces(schedule, space, n_samples=n_samples)
    return float(-np.trapezoid(gap, t) - delta_shift * np.trapezoid(deriv, t))
