"""tiltlab: exact computation with extended module categories and
multi-term silting complexes over bound quiver algebras."""

from .algebra import BoundQuiverAlgebra, MonomialIdeal, Quiver, build_algebra
from .catalog import linear_an, nakayama_rad_square_zero
from .heart import (e_ext, f_class_membership, fac_membership, module_stalk,
                    p_presentation, t_class_membership, to_window,
                    truncate_window)
from .homotopy import (ProjComplex, hom_k, iso_k, left_mutation, minimize,
                       proj_cone, proj_direct_sum, proj_stalk,
                       right_mutation)
from .linalg import DEFAULT_P
from .repcat import (Representation, ModuleMap, decompose, ext_dim, hom_basis,
                     hom_dim, injective, kernel, cokernel, image, module_iso,
                     projective, projective_cover, simple)
from .repcomplex import RepComplex, homology_dims
from .silting import enumerate_silting, is_presilting, is_silting
from .tiltcheck import (Universe, build_universe, check_air_tilting,
                        check_equivalence, check_quasi_tilting, check_tilting,
                        qtilt_closure_trials, schanuel_trials,
                        verify_bijection, verify_torsion_reports)

__all__ = [
    "BoundQuiverAlgebra", "MonomialIdeal", "Quiver", "build_algebra",
    "linear_an", "nakayama_rad_square_zero",
    "e_ext", "f_class_membership", "fac_membership", "module_stalk",
    "p_presentation", "t_class_membership", "to_window", "truncate_window",
    "ProjComplex", "hom_k", "iso_k", "left_mutation", "minimize",
    "proj_cone", "proj_direct_sum", "proj_stalk", "right_mutation",
    "DEFAULT_P", "Representation", "ModuleMap", "decompose", "ext_dim",
    "hom_basis", "hom_dim", "injective", "kernel", "cokernel", "image",
    "module_iso", "projective", "projective_cover", "simple",
    "RepComplex", "homology_dims",
    "enumerate_silting", "is_presilting", "is_silting",
    "Universe", "build_universe", "check_air_tilting", "check_equivalence",
    "check_quasi_tilting", "check_tilting", "qtilt_closure_trials",
    "schanuel_trials", "verify_bijection", "verify_torsion_reports",
]
