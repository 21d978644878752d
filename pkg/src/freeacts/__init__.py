"""Finite monoids, free S-acts, and automorphisms of the truncated category of free S-acts."""
from .acts import (
    ActElement,
    ActHom,
    FreeAct,
    SemilinearMap,
    apply_hom,
    compose_homs,
    enumerate_act_automorphisms,
    enumerate_homs,
    enumerate_semilinear_bijections,
    structural_morphisms,
)
from .catalog import MonoidCatalog, TheoremReport, classify_catalog, generate_monoids, run_theorem_suite
from .category import (
    SemiInnerCertificate,
    TruncatedFunctor,
    TruncatedSkeleton,
    build_truncated_skeleton,
    check_functoriality,
    enumerate_category_automorphisms,
    extract_sigma,
    is_inner,
    normalize_injection_constant,
    outer_group_of_category,
    semi_inner_certificate,
    twisted_functor,
)
from .errors import (
    BadIdentity,
    IndexOutOfRange,
    NotAssociative,
    NotFunctorial,
    NotTranslationClosed,
    Timeout,
    TooLarge,
)
from .monoid import (
    FiniteMonoid,
    MonoidAutomorphism,
    TruncatedFreeMonoid,
    are_isomorphic,
    enumerate_automorphisms,
    inner_automorphisms,
    outer_group,
    truncated_free_monoid,
    units,
    validate_monoid,
)
from .unary import (
    UnarySignature,
    build_free_unary_algebra,
    perfectness_check,
    permutation_twist,
    verify_letter_permutation_rigidity,
)

__version__ = "0.1.0"
