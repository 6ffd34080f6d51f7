"""Finite spectral reductions of the cubic NLS on the 2-torus.

Exact integer resonance geometry on Z^2, generational frequency sets,
truncated cubic mode dynamics with conserved-quantity monitoring, the
finite cascade ("toy") system, and a declarative experiment runner.
"""

from .lattice import (
    UNBOUNDED,
    Frequency,
    InteractionTriple,
    ParallelogramWitness,
    check_r_closure,
    complete_parallelogram,
    enumerate_triples,
    find_connecting_parallelograms,
    find_rectangles,
    omega4,
    rectangle_defect,
)
from .genset import (
    GenerationalSet,
    NuclearFamily,
    PropertyReport,
    affine_place,
    build_lambda0,
    choose_v0,
    find_nuclear_families,
    norm_explosion_ratio,
    seed_family_p2,
    separate_from,
    verify_properties,
)
from .spectral import (
    SpectralState,
    SystemSpec,
    galilean_shift,
    hamiltonian,
    l1_norm,
    mass,
    paste,
    resonant_quartic_form,
    rhs,
    sobolev_norm,
    to_physical,
)
from .toy import (
    embed_toy,
    find_cascade_orbit,
    scale_initial,
    toy_mass,
    toy_rhs,
)
from .ode import Trajectory, drift_report, integrate

__all__ = [
    "UNBOUNDED",
    "Frequency",
    "InteractionTriple",
    "ParallelogramWitness",
    "check_r_closure",
    "complete_parallelogram",
    "enumerate_triples",
    "find_connecting_parallelograms",
    "find_rectangles",
    "omega4",
    "rectangle_defect",
    "GenerationalSet",
    "NuclearFamily",
    "PropertyReport",
    "affine_place",
    "build_lambda0",
    "choose_v0",
    "find_nuclear_families",
    "norm_explosion_ratio",
    "seed_family_p2",
    "separate_from",
    "verify_properties",
    "SpectralState",
    "SystemSpec",
    "galilean_shift",
    "hamiltonian",
    "l1_norm",
    "mass",
    "paste",
    "resonant_quartic_form",
    "rhs",
    "sobolev_norm",
    "to_physical",
    "embed_toy",
    "find_cascade_orbit",
    "scale_initial",
    "toy_mass",
    "toy_rhs",
    "Trajectory",
    "drift_report",
    "integrate",
]
