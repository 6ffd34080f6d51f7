"""Runge-Kutta integration for finite complex ODE systems.

Classic fixed-step RK4 and the embedded Fehlberg 4(5) adaptive pair, both
operating on flat complex state vectors.  Conservation is monitored (via
drift_report), never enforced: runs are short enough that a plain explicit
scheme with explicit drift accounting beats a symplectic one in simplicity.
Requested sample times are hit exactly by step subdivision; no interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

# Largest phase advance per step allowed for the oscillatory factors: a
# fixed step h is capped so that h * omega_max <= PHASE_CAP.
PHASE_CAP = 0.1

_UNDERFLOW = 1e-14


@dataclass
class Trajectory:
    """Sampled solution: times (strictly increasing) and one state per time."""

    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states)
        if len(self.times) != len(self.states):
            raise ValueError("one state per sample time required")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("sample times must be strictly increasing")

    def state_at(self, t: float) -> np.ndarray:
        i = int(np.searchsorted(self.times, t))
        if i >= len(self.times) or abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise KeyError(f"no sample at t = {t}")
        return self.states[i]


def _rk4_step(f, t, y, h):
    k1 = f(y, t)
    k2 = f(y + 0.5 * h * k1, t + 0.5 * h)
    k3 = f(y + 0.5 * h * k2, t + 0.5 * h)
    k4 = f(y + h * k3, t + h)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rkf45_step(f, t, y, h):
    """One Fehlberg 4(5) step: 5th-order advance plus embedded error estimate."""
    k1 = f(y, t)
    k2 = f(y + h * 0.25 * k1, t + 0.25 * h)
    k3 = f(y + h * (3.0 * k1 + 9.0 * k2) / 32.0, t + 0.375 * h)
    k4 = f(
        y + h * (1932.0 * k1 - 7200.0 * k2 + 7296.0 * k3) / 2197.0,
        t + 12.0 * h / 13.0,
    )
    k5 = f(
        y + h * (439.0 * k1 / 216.0 - 8.0 * k2 + 3680.0 * k3 / 513.0 - 845.0 * k4 / 4104.0),
        t + h,
    )
    k6 = f(
        y
        + h
        * (
            -8.0 * k1 / 27.0
            + 2.0 * k2
            - 3544.0 * k3 / 2565.0
            + 1859.0 * k4 / 4104.0
            - 11.0 * k5 / 40.0
        ),
        t + 0.5 * h,
    )
    y5 = y + h * (
        16.0 * k1 / 135.0
        + 6656.0 * k3 / 12825.0
        + 28561.0 * k4 / 56430.0
        - 9.0 * k5 / 50.0
        + 2.0 * k6 / 55.0
    )
    err = h * (
        k1 / 360.0 - 128.0 * k3 / 4275.0 - 2197.0 * k4 / 75240.0 + k5 / 50.0 + 2.0 * k6 / 55.0
    )
    return y5, err


def _error_norm(err, y_old, y_new, rtol, atol):
    # Complex states are compared component-wise on their real pairs.
    e = np.abs(err.view(np.float64)) if np.iscomplexobj(err) else np.abs(err)
    a = np.abs(y_old.view(np.float64)) if np.iscomplexobj(y_old) else np.abs(y_old)
    b = np.abs(y_new.view(np.float64)) if np.iscomplexobj(y_new) else np.abs(y_new)
    scale = atol + rtol * np.maximum(a, b)
    return float(np.max(e / scale)) if e.size else 0.0


def integrate(
    rhs: Callable[[np.ndarray, float], np.ndarray],
    y0,
    t0: float,
    t1: float,
    *,
    method: str = "rk45",
    h: Optional[float] = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    sample_times: Optional[Iterable[float]] = None,
    omega_max: float = 0.0,
) -> Trajectory:
    """Integrate y' = rhs(y, t) from t0 to t1.

    method "rk4" takes fixed steps of size h (capped so that
    h * omega_max <= 0.1, resolving the fastest retained oscillation);
    method "rk45" adapts the step to the rtol/atol tolerances.  When
    sample_times is given, steps are subdivided to land on them exactly and
    only those times are recorded; otherwise every accepted step is.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    y = np.array(y0, dtype=complex).ravel()
    if t1 == t0:
        return Trajectory(np.array([t0]), np.array([y]), {"method": method, "steps": 0})

    span = t1 - t0
    cap = PHASE_CAP / omega_max if omega_max > 0 else np.inf
    if sample_times is None:
        requested = None
        boundaries = [t1]
    else:
        requested = set(float(t) for t in sample_times)
        if any(t < t0 or t > t1 for t in requested):
            raise ValueError("sample times must lie inside [t0, t1]")
        boundaries = sorted(requested | {t1})

    times = [t0]
    states = [y.copy()]
    recorded = {t0}
    steps = 0
    rejected = 0

    def record(t, y):
        if (requested is None or t in requested) and t not in recorded:
            times.append(t)
            states.append(y.copy())
            recorded.add(t)

    if method == "rk4":
        if h is None:
            raise ValueError("fixed-step integration needs a step size h")
        h = min(h, cap)
        t = t0
        for boundary in boundaries:
            while t < boundary - 1e-15 * span:
                step = min(h, boundary - t)
                y = _rk4_step(rhs, t, y, step)
                t = min(t + step, boundary)
                steps += 1
                if requested is None:
                    record(t, y)
            t = boundary
            record(t, y)
    elif method == "rk45":
        t = t0
        if h is None:
            # Start at the derivative scale so the first trials stay finite
            # even when the horizon dwarfs the fastest dynamics.
            rate = float(np.max(np.abs(rhs(y, t0)))) if y.size else 0.0
            scale = float(np.max(np.abs(y))) if y.size else 0.0
            h = 0.01 * (scale + atol) / rate if rate > 0 else span / 100.0
        hcur = min(h, cap, span)
        for boundary in boundaries:
            while t < boundary - 1e-15 * span:
                step = min(hcur, boundary - t)
                with np.errstate(over="ignore", invalid="ignore"):
                    y_new, err = _rkf45_step(rhs, t, y, step)
                    enorm = _error_norm(err, y, y_new, rtol, atol)
                if np.isfinite(enorm) and enorm <= 1.0:
                    t = min(t + step, boundary)
                    y = y_new
                    steps += 1
                    if requested is None:
                        record(t, y)
                else:
                    rejected += 1
                if not np.isfinite(enorm):
                    factor = 0.2
                elif enorm == 0.0:
                    factor = 5.0
                else:
                    factor = min(5.0, max(0.2, 0.9 * enorm**-0.2))
                hcur = step * factor
                if hcur < _UNDERFLOW * span:
                    raise RuntimeError(f"adaptive step underflow at t = {t}")
            t = boundary
            record(t, y)
    else:
        raise ValueError(f"unknown method {method!r}")

    meta = {
        "method": method,
        "steps": steps,
        "rejected": rejected,
        "rtol": rtol,
        "atol": atol,
        "h": h,
        "omega_max": omega_max,
    }
    return Trajectory(np.array(times), np.array(states), meta)


def drift_report(traj: Trajectory, functionals) -> dict:
    """Evaluate named functionals along a trajectory and report their drift.

    `functionals` maps names to callables f(state, t) -> float.  For each,
    the report carries the initial value and the maximum absolute and
    relative deviation from it over all samples.
    """
    if isinstance(functionals, dict):
        items = list(functionals.items())
    else:
        items = list(functionals)
    out = {}
    for name, fn in items:
        values = np.array([fn(s, t) for s, t in zip(traj.states, traj.times)], dtype=float)
        v0 = values[0]
        dev = np.abs(values - v0)
        out[name] = {
            "initial": float(v0),
            "max_abs_drift": float(dev.max()),
            "max_rel_drift": float(dev.max() / abs(v0)) if v0 != 0 else float(dev.max()),
        }
    return out
