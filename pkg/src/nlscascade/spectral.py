"""Spectral states and the gauged cubic mode equations.

A state assigns a complex amplitude to finitely many lattice frequencies.
The dynamics keeps, for every target mode, the cubic interactions over
parallelograms whose resonance factor lies within a cutoff: the unbounded
cutoff is the full cubic nonlinearity, cutoff 0 the resonant (first Birkhoff
normal form) system.  A SystemSpec freezes the finite support box and
precomputes the retained interactions; the right-hand side then works on a
flat complex vector so the integrator stays fast.

Conserved functionals (mass, the cutoff Hamiltonian), weighted norms, and
the symmetry maps (free-phase recovery of the physical coefficients,
Galilean frequency shift, superposition of disjointly supported states)
live here as plain functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .lattice import (
    UNBOUNDED,
    Cutoff,
    Frequency,
    check_cutoff,
    cutoff_keeps,
    enumerate_triples,
)


@dataclass
class SpectralState:
    """Finitely supported map frequency -> complex amplitude.

    Amplitudes are stored exactly as given (explicit zeros included); the
    support is the set of keys with nonzero amplitude.
    """

    amplitudes: dict[Frequency, complex]

    def __post_init__(self):
        self.amplitudes = {Frequency(*n): complex(a) for n, a in self.amplitudes.items()}

    def get(self, n: Frequency) -> complex:
        return self.amplitudes.get(n, 0j)

    def support(self) -> frozenset[Frequency]:
        return frozenset(n for n, a in self.amplitudes.items() if a != 0)

    def to_json(self):
        return {
            "modes": [
                {"n": n.to_json(), "re": a.real, "im": a.imag}
                for n, a in sorted(self.amplitudes.items())
            ]
        }

    @classmethod
    def from_json(cls, obj) -> "SpectralState":
        return cls(
            {
                Frequency.from_json(m["n"]): complex(m["re"], m["im"])
                for m in obj["modes"]
            }
        )


def mass(state: SpectralState) -> float:
    """Conserved mass sum |a_n|^2."""
    return float(sum(abs(a) ** 2 for _, a in sorted(state.amplitudes.items())))


def sobolev_norm(state: SpectralState, s: float) -> float:
    """Weighted norm (sum <n>^{2s} |a_n|^2)^{1/2} with <n> = (1 + |n|^2)^{1/2}."""
    total = sum(
        (1 + n.norm2()) ** s * abs(a) ** 2 for n, a in sorted(state.amplitudes.items())
    )
    return float(total**0.5)


def l1_norm(state: SpectralState, restrict: Optional[Iterable[Frequency]] = None) -> float:
    """Sum of |a_n| over all modes, or over the given restriction set."""
    if restrict is None:
        return float(sum(abs(a) for _, a in sorted(state.amplitudes.items())))
    allowed = frozenset(restrict)
    return float(
        sum(abs(a) for n, a in sorted(state.amplitudes.items()) if n in allowed)
    )


def to_physical(state: SpectralState, t: float) -> SpectralState:
    """Fourier coefficients of the ungauged solution at time t.

    Multiplies each amplitude by the free phase e^{i |n|^2 t}.  The global
    modulus-one gauge phase is omitted: it cancels in the mass, the
    Hamiltonian, and every norm computed here.
    """
    return SpectralState(
        {n: a * np.exp(1j * n.norm2() * t) for n, a in state.amplitudes.items()}
    )


def galilean_shift(state: SpectralState, v: Frequency, t: float) -> SpectralState:
    """Galilean symmetry in mode variables: translate frequencies by v.

    The coefficient at m moves to m + v with phase e^{i (2 m.v + |v|^2) t}
    (the modulus-one factor e^{i |v|^2 t} is retained).  Mass is preserved
    exactly; supports translate rigidly.
    """
    v = Frequency(*v)
    return SpectralState(
        {
            m + v: a * np.exp(1j * (2 * m.dot(v) + v.norm2()) * t)
            for m, a in state.amplitudes.items()
        }
    )


def paste(a: SpectralState, b: SpectralState) -> SpectralState:
    """Superpose two states with disjoint supports."""
    overlap = a.support() & b.support()
    if overlap:
        raise ValueError(f"supports overlap on {sorted(overlap)[:3]}")
    merged = dict(sorted(a.amplitudes.items()))
    for n, amp in sorted(b.amplitudes.items()):
        if n in merged:
            merged[n] = merged[n] + amp
        else:
            merged[n] = amp
    return SpectralState(merged)


class SystemSpec:
    """A finite truncation of the mode equations on a fixed support box.

    Retained interactions (all triples from the box with |omega4| within the
    cutoff) are enumerated once at construction, target-major and then in
    lexicographic (n1, n3) order; this fixed summation order is what makes
    superposition of disjointly supported solutions exact in floating point.
    """

    def __init__(self, cutoff: Cutoff, support_box: Iterable[Frequency]):
        self.cutoff = check_cutoff(cutoff)
        self.box = tuple(sorted({Frequency(*n) for n in support_box}))
        if not self.box:
            raise ValueError("support box must be nonempty")
        self.index = {n: i for i, n in enumerate(self.box)}
        box_set = frozenset(self.box)
        i1, i2, i3, it, om = [], [], [], [], []
        for k, target in enumerate(self.box):
            for tr in enumerate_triples(target, box_set, cutoff):
                i1.append(self.index[tr.n1])
                i2.append(self.index[tr.n2])
                i3.append(self.index[tr.n3])
                it.append(k)
                om.append(tr.omega4)
        self._i1 = np.array(i1, dtype=np.intp)
        self._i2 = np.array(i2, dtype=np.intp)
        self._i3 = np.array(i3, dtype=np.intp)
        self._it = np.array(it, dtype=np.intp)
        self._om = np.array(om, dtype=np.float64)
        # The retained resonance factors take few distinct values; the phase
        # factors are evaluated once per distinct value and gathered.
        self._om_unique, self._om_inv = np.unique(self._om, return_inverse=True)
        self.omega_max = float(np.max(np.abs(self._om))) if len(om) else 0.0
        self.autonomous = bool(np.all(self._om == 0.0))

    @property
    def dim(self) -> int:
        return len(self.box)

    @property
    def n_interactions(self) -> int:
        return len(self._it)

    def vector(self, state: SpectralState) -> np.ndarray:
        """Flatten a state onto the box order; error off-box support."""
        stray = state.support() - set(self.box)
        if stray:
            raise ValueError(f"state supported outside the box: {sorted(stray)[:3]}")
        y = np.zeros(self.dim, dtype=complex)
        for n, a in state.amplitudes.items():
            y[self.index[n]] = a
        return y

    def state(self, y: np.ndarray) -> SpectralState:
        return SpectralState({n: complex(y[i]) for i, n in enumerate(self.box)})

    def rhs_vec(self, y: np.ndarray, t: float) -> np.ndarray:
        """d/dt of the flat amplitude vector at time t."""
        terms = y[self._i1] * np.conj(y[self._i2]) * y[self._i3]
        if not self.autonomous:
            terms = terms * np.exp((1j * t) * self._om_unique)[self._om_inv]
        re = np.bincount(self._it, weights=terms.real, minlength=self.dim)
        im = np.bincount(self._it, weights=terms.imag, minlength=self.dim)
        return 1j * ((re + 1j * im) - y * np.abs(y) ** 2)


def rhs(spec: SystemSpec, state: SpectralState, t: float) -> SpectralState:
    """Time derivative of a state under the truncated mode equations."""
    return spec.state(spec.rhs_vec(spec.vector(state), t))


def _pair_sums(coeffs: SpectralState) -> dict:
    """Ordered pair sums A[(n1+n3, |n1|^2+|n3|^2)] = sum u(n1) u(n3)."""
    items = [(n, a) for n, a in sorted(coeffs.amplitudes.items()) if a != 0]
    sums: dict[tuple, complex] = {}
    for n1, a1 in items:
        for n3, a3 in items:
            key = (n1.x + n3.x, n1.y + n3.y, n1.norm2() + n3.norm2())
            sums[key] = sums.get(key, 0j) + a1 * a3
    return sums


def hamiltonian(coeffs: SpectralState, cutoff: Cutoff) -> float:
    """Conserved energy of the truncated system.

    sum |n|^2 |u(n)|^2 plus half the quadrilinear sum over all frequency
    quadruples with n1 - n2 + n3 - n4 = 0 and |omega4| within the cutoff
    (no self-exclusions here).  The quadrilinear part is assembled from
    ordered pair sums grouped by (n1 + n3, |n1|^2 + |n3|^2); its imaginary
    residue must vanish to rounding, else the enumeration is broken.
    """
    check_cutoff(cutoff)
    linear = sum(
        n.norm2() * abs(a) ** 2 for n, a in sorted(coeffs.amplitudes.items())
    )
    sums = _pair_sums(coeffs)
    by_vertex_sum: dict[tuple, list] = {}
    for (sx, sy, q), val in sorted(sums.items()):
        by_vertex_sum.setdefault((sx, sy), []).append((q, val))
    quad = 0j
    scale = float(linear)
    for group in by_vertex_sum.values():
        for q1, a1 in group:
            for q2, a2 in group:
                if cutoff_keeps(cutoff, q1 - q2):
                    quad += a1 * np.conj(a2)
                    scale += 0.5 * abs(a1) * abs(a2)
    if abs(quad.imag) > 1e-12 * max(scale, 1e-30):
        raise ArithmeticError(
            f"quadrilinear sum has imaginary residue {quad.imag} (scale {scale})"
        )
    return float(linear + 0.5 * quad.real)


def resonant_quartic_form(coeffs: SpectralState) -> float:
    """The resonant quadrilinear term written as a sum of squares.

    sum over (n, k) of |sum_{n1+n3=n, |n1|^2+|n3|^2=k} u(n1) u(n3)|^2, which
    is nonnegative and equals the cutoff-0 quadrilinear sum of `hamiltonian`
    before its 1/2 weight.
    """
    return float(sum(abs(v) ** 2 for _, v in sorted(_pair_sums(coeffs).items())))
