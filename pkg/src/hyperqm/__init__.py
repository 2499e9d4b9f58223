"""Hypercomplex algebras and bicomplex plane-wave quantum mechanics."""

from .algebra import (
    DAGGER,
    INNER,
    OUTER,
    PLAIN,
    AlgebraError,
    AlgebraSpec,
    ConjugationKind,
    ConvergenceError,
    Element,
    SignedBasisTerm,
    SpecParseError,
    associator,
    basis_change_bicomplex,
    builtin,
    conjugate,
    exp,
    left_mul_matrix,
    mul,
    parse_spec,
    power,
    resolve_algebra,
)
from .analysis import (
    PropertyReport,
    check_ft_conditions,
    classify,
    find_complex_subalgebras_bicomplex,
    find_idempotents,
    is_ideal,
    zero_divisor_partner,
)
from .wavefunction import PlaneWave, apply, evaluate, generalized_ft, make_phi_C, make_phi_J, operator
from .relativity import FourVector, boost, check_clifford, gamma_set, minkowski_dot, spin_eigen_check

__version__ = "0.1.0"
