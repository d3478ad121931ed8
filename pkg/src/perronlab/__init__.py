"""Spectral and order-theoretic analysis of nonnegative matrices.

The public API re-exports the main entry points of the submodules.
"""
__version__ = "0.1.0"

from .lattice import (  # noqa: E402
    CoordinateIdeal, NegativeEntryError, NotInvariantError, PositiveOperator, in_closure_principal_ideal,
    induce, invariant_ideals, is_invariant, is_quasi_interior,
)
from .spectral import (  # noqa: E402
    OnSpectrumError, SpectrumError, adjoint, eigenspace, is_cyclic_set, peripheral_spectrum, resolvent,
    spectrum,
)
from .structure import frobenius_normal_form, irreducibility, zhang_condition  # noqa: E402
from .growth import (  # noqa: E402
    abel_bound, check_estimate_2_1, classify_eigenvector_growth, growth_profile, power_and_cesaro,
)
from .schemes import (  # noqa: E402
    WeightingSchemeSpec, abel_scheme, cesaro_scheme, power_scheme, validate_scheme, ws_bound,
    ws_invariant_ideal,
)
from .generators import cyclic_family, jordan_growth_family, random_families  # noqa: E402

__all__ = [
    "CoordinateIdeal", "NegativeEntryError", "NotInvariantError", "OnSpectrumError", "PositiveOperator",
    "SpectrumError", "WeightingSchemeSpec", "abel_bound", "abel_scheme", "adjoint", "cesaro_scheme",
    "check_estimate_2_1", "classify_eigenvector_growth", "cyclic_family", "eigenspace",
    "frobenius_normal_form", "growth_profile", "in_closure_principal_ideal", "induce", "invariant_ideals",
    "irreducibility", "is_cyclic_set", "is_invariant", "is_quasi_interior", "jordan_growth_family",
    "peripheral_spectrum", "power_and_cesaro", "power_scheme", "random_families", "resolvent", "spectrum",
    "validate_scheme", "ws_bound", "ws_invariant_ideal", "zhang_condition",
]
