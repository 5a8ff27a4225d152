"""Norm-attaining symmetric multilinear forms on small real and complex Hilbert spaces."""

from .errors import (ArgumentError, CapacityError, FieldMismatchError, GridTooCoarseError, InternalError,
                     NotAttainingError, PreconditionError, SymformsError, UnsupportedError)
from .forms import (ElementaryTensor, Field, OrthonormalBasis, SymmetricForm, contract, diagonal_eval,
                    gram_schmidt, lift, multilinear_eval, polarization_eval, restrict)
from .grids import SphereGrid, circle_grid, complex_sphere_grid, make_grid, real_sphere_grid
from .norms import (NormResult, attainment_defect, form_norm, multilinear_norm_bruteforce,
                    sup_norm_complex_2d, sup_norm_real_2d, sup_norm_sphere)
from .projective import (ComplexificationGap, PisResult, UniquenessResult, complexification_gap,
                         exposedness_check, pis_elementary, uniqueness_on_span)
from .witness import (AttainmentCertificate, DyadicVector, approx_witness, bilinear_witness, chebyshev_P,
                      chebyshev_Q, collinear_witness, diagonalize_bilinear, dyadic_witness,
                      rotated_complex_basis, step1_witness, witness_for_tuple)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "AttainmentCertificate", "CapacityError", "ComplexificationGap", "DyadicVector",
    "ElementaryTensor", "Field", "FieldMismatchError", "GridTooCoarseError", "InternalError",
    "NormResult", "NotAttainingError", "OrthonormalBasis", "PisResult", "PreconditionError",
    "SphereGrid", "SymformsError", "SymmetricForm", "UniquenessResult", "UnsupportedError",
    "approx_witness", "attainment_defect", "bilinear_witness", "chebyshev_P", "chebyshev_Q",
    "circle_grid", "collinear_witness", "complex_sphere_grid", "complexification_gap", "contract",
    "diagonal_eval", "diagonalize_bilinear", "dyadic_witness", "exposedness_check", "form_norm",
    "gram_schmidt", "lift", "make_grid", "multilinear_eval", "multilinear_norm_bruteforce",
    "pis_elementary", "polarization_eval", "real_sphere_grid", "restrict", "rotated_complex_basis",
    "step1_witness", "sup_norm_complex_2d", "sup_norm_real_2d", "sup_norm_sphere", "uniqueness_on_span",
    "witness_for_tuple",
]
