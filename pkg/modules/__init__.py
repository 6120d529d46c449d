"""
Schinzel Lab computational modules.
Permutations, groups, Nielsen classes, reducibility verdicts, catalogs and search.
"""

from modules.perm_core import (
    Perm,
    parse_perm,
    compose,
    product,
    cycle_decomposition,
    index,
    n_cycle,
)

from modules.group_engine import (
    # Types
    PermGroup,
    ConjClass,
    CosetAction,
    GroupAutomorphism,
    # Construction
    generate,
    subgroup_generated,
    conjugacy_classes,
    coset_action,
    point_stabilizer,
    block_systems,
    intermediate_subgroups,
    normalizer_in_symmetric,
    # Automorphisms
    automorphism_from_images,
    inner_automorphism,
    is_class_preserving,
    automorphisms,
)

from modules.nielsen import (
    Equivalence,
    BranchTuple,
    NielsenClassSpec,
    BranchSlotMap,
    verify_nielsen,
    genus,
    is_polynomial_tuple,
    rotate_tuple,
    branch_slot_map,
    enumerate_nielsen,
    equivalence_class_map,
)

from modules.schinzel import (
    Verdict,
    PairSetup,
    ExtGroup,
    factor_orbit_lengths,
    trace,
    trace_profile_equal,
    positive_trace_criterion,
    is_newly_reducible,
    build_ext_group,
    caz_outside_symmetric,
    charschinzel_check,
)

from modules.dihedral_catalog import (
    AffineElem,
    affine_group,
    dihedral_group,
    cheby_tuple,
    caz_dihedral,
    modular_tuple,
    galois_closure_genus,
    odd_dihedral_conjugacy,
    dihedral_dossier,
)

from modules.wreath_ext import (
    WreathElem,
    wreath_embed,
    sigma_star_infinity,
    check_wreath_conditions,
    disjointness_condition,
    solve_comp_branch,
    restrict_to_fiber,
)

from modules.search import (
    SearchConfig,
    CandidateReport,
    gusic_criterion,
    mult_map_index,
    classify_normal_sigma_infty,
    search_schinzel,
    verify_gusic_conjecture,
)

__all__ = [
    # Permutations
    "Perm",
    "parse_perm",
    "compose",
    "product",
    "cycle_decomposition",
    "index",
    "n_cycle",
    # Groups
    "PermGroup",
    "ConjClass",
    "CosetAction",
    "GroupAutomorphism",
    "generate",
    "subgroup_generated",
    "conjugacy_classes",
    "coset_action",
    "point_stabilizer",
    "block_systems",
    "intermediate_subgroups",
    "normalizer_in_symmetric",
    "automorphism_from_images",
    "inner_automorphism",
    "is_class_preserving",
    "automorphisms",
    # Nielsen classes
    "Equivalence",
    "BranchTuple",
    "NielsenClassSpec",
    "BranchSlotMap",
    "verify_nielsen",
    "genus",
    "is_polynomial_tuple",
    "rotate_tuple",
    "branch_slot_map",
    "enumerate_nielsen",
    "equivalence_class_map",
    # Reducibility
    "Verdict",
    "PairSetup",
    "ExtGroup",
    "factor_orbit_lengths",
    "trace",
    "trace_profile_equal",
    "positive_trace_criterion",
    "is_newly_reducible",
    "build_ext_group",
    "caz_outside_symmetric",
    "charschinzel_check",
    # Dihedral catalog
    "AffineElem",
    "affine_group",
    "dihedral_group",
    "cheby_tuple",
    "caz_dihedral",
    "modular_tuple",
    "galois_closure_genus",
    "odd_dihedral_conjugacy",
    "dihedral_dossier",
    # Wreath extension
    "WreathElem",
    "wreath_embed",
    "sigma_star_infinity",
    "check_wreath_conditions",
    "disjointness_condition",
    "solve_comp_branch",
    "restrict_to_fiber",
    # Search
    "SearchConfig",
    "CandidateReport",
    "gusic_criterion",
    "mult_map_index",
    "classify_normal_sigma_infty",
    "search_schinzel",
    "verify_gusic_conjecture",
]
