"""The finite cascade system and its embedding into a generational set.

Collapsing the resonant mode equations on a verified generational set (one
complex amplitude per generation) leaves a nearest-neighbour chain of P
oscillators with implicit zero boundary values.  This module provides the
chain's right-hand side, its mass, the amplitude-time scaling symmetry, a
seeded shooting search for orbits that move nearly all mass from a source
generation to a target generation, and the embedding back into a spectral
state.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .genset import GenerationalSet
from .ode import integrate
from .spectral import SpectralState


def toy_rhs(b: np.ndarray) -> np.ndarray:
    """Time derivative of the chain: -i b_j' = -b_j|b_j|^2 + 2(b_{j+1}^2 + b_{j-1}^2) conj(b_j).

    Boundary convention b_0 = b_{P+1} = 0.  Note the neighbours enter
    squared (not in modulus), so each coordinate's zero set is invariant.
    """
    b = np.asarray(b, dtype=complex)
    padded = np.zeros(len(b) + 2, dtype=complex)
    padded[1:-1] = b
    up = padded[2:]
    down = padded[:-2]
    return 1j * (-b * np.abs(b) ** 2 + 2.0 * (up**2 + down**2) * np.conj(b))


def toy_mass(b: np.ndarray) -> float:
    """sum |b_j|^2, conserved by the chain flow."""
    b = np.asarray(b, dtype=complex)
    return float(np.sum(np.abs(b) ** 2))


def scale_initial(b0: np.ndarray, lam: float) -> np.ndarray:
    """Initial data of the rescaled solution b(t/lam^2)/lam."""
    if lam <= 0:
        raise ValueError("scaling factor must be positive")
    return np.asarray(b0, dtype=complex) / lam


def cascade_endpoints(p: int) -> tuple[int, int]:
    """1-based (source, target) generations for a cascade demonstration.

    (3, P-2) once P >= 6; for small-P demos the interior offsets serve no
    purpose and the first and last generations are used instead.
    """
    if p >= 6:
        return 3, p - 2
    return 1, p


def cascade_initial_state(p: int, eps: float, seed: int) -> np.ndarray:
    """Shooting initial data: mass concentrated at the source generation.

    The source amplitude is sqrt(1 - eps^2); the remaining eps^2 of mass is
    split evenly over every other generation with seeded random phases.
    Every coordinate must start nonzero -- the chain cannot excite an
    exactly-zero amplitude -- which is why the eps-mass is spread across all
    later generations rather than parked next door.
    """
    if p < 1:
        raise ValueError("need at least one generation")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    source, _ = cascade_endpoints(p)
    rng = np.random.default_rng(seed)
    b0 = np.zeros(p, dtype=complex)
    b0[source - 1] = np.sqrt(1.0 - eps * eps)
    others = [j for j in range(p) if j != source - 1]
    if others:
        amp = eps / np.sqrt(len(others))
        phases = rng.uniform(0.0, 2.0 * np.pi, size=len(others))
        for j, th in zip(others, phases):
            b0[j] = amp * np.exp(1j * th)
    return b0


def find_cascade_orbit(
    p: int,
    eps: float,
    t_max: float,
    seed: int,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    sample_dt: float = 0.25,
) -> Optional[tuple[np.ndarray, float]]:
    """Shooting search for a mass-transfer orbit of the chain.

    Integrates the seeded initial state and scans the samples for the first
    time T <= t_max at which the target generation holds at least
    (1 - eps) of the mass, i.e. |b_target(T)|^2 >= (1 - eps) * mass.
    Returns (initial state, T), or None when the horizon is exhausted
    (a normal outcome; try another seed).
    """
    if p == 1:
        return np.ones(1, dtype=complex), 0.0
    b0 = cascade_initial_state(p, eps, seed)
    _, target = cascade_endpoints(p)
    threshold = (1.0 - eps) * toy_mass(b0)
    # Integrate in windows so a hit near t = 0 does not cost the full horizon.
    window = 200 * sample_dt
    y = b0
    t_done = 0.0
    while t_done < t_max:
        t_end = min(t_max, t_done + window)
        samples = np.arange(t_done + sample_dt, t_end + 0.5 * sample_dt, sample_dt)
        samples = samples[samples <= t_end]
        traj = integrate(
            lambda y, t: toy_rhs(y),
            y,
            t_done,
            t_end,
            method="rk45",
            rtol=rtol,
            atol=atol,
            sample_times=samples,
        )
        share = np.abs(traj.states[:, target - 1]) ** 2
        hits = np.nonzero(share >= threshold)[0]
        if len(hits):
            return b0, float(traj.times[hits[0]])
        y = traj.states[-1]
        t_done = t_end
    return None


def embed_toy(g: GenerationalSet, b: np.ndarray) -> SpectralState:
    """Spectral state with amplitude b_j at every frequency of generation j."""
    b = np.asarray(b, dtype=complex)
    if len(b) != g.p:
        raise ValueError(
            f"generation count mismatch: set has {g.p}, state has {len(b)}"
        )
    amplitudes = {}
    for j, gen in enumerate(g.generations):
        for n in sorted(gen):
            amplitudes[n] = complex(b[j])
    return SpectralState(amplitudes)
