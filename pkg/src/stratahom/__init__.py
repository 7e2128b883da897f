"""Exact integer (co)homology of root-multiplicity strata of real polynomials
and projectivized real binary forms, via combinatorial differential complexes."""

__version__ = "0.1.0"

from .complexes import (
    ChainComplex,
    FormalSum,
    boundary,
    boundary_polynomial,
    boundary_projective,
    build,
    dualize,
    dump_lines,
    homology_all,
    homology_at,
    verify_anticommute,
)
from .errors import InvariantViolation
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    group,
    hermite_normal_form,
    homology_from_boundaries,
    homology_oracle,
    kernel_basis,
    modp_rank,
    parse_group,
    smith_invariants,
    smith_normal_form,
)
from .patterns import (
    Pattern,
    cell_dimension,
    compositions_of,
    enumerate_cells,
    format_pattern,
    insert,
    insert_inf,
    merge,
    merge_inf,
    parse_pattern,
    precedes,
)
from .posets import (
    DISC,
    EMPTY,
    FULL,
    ALL_REAL,
    Family,
    GENERATED,
    MAX_GE,
    Realization,
    SINGLE,
    SKELETON,
    close,
    complement,
    eta,
    is_closed,
    maximal_elements,
    parse_family,
    psi,
    realize_family,
)
from .reference import (
    single_pattern_reference,
    skeleton_reference,
    triple_root_reference,
)
from .render import (
    FORMATS,
    Table,
    format_group,
    profile_payload,
    render_profile,
    render_table,
    stabilization_table,
    verdict,
)
from .spaces import (
    CellCounts,
    CountPolynomial,
    HomologyProfile,
    cell_counts,
    cohomology_B_complement,
    cohomology_P_complement,
    discriminant_oracle,
    homology_B,
    reduced_homology_P,
    relative_homology_B,
    twisted_homology_B_complement,
)
from .stabilization import (
    StabilizationReport,
    StabRow,
    TruncMap,
    build_trunc,
    dim_K,
    stability_report,
)

__all__ = [
    "AbelianGroup",
    "ALL_REAL",
    "boundary",
    "boundary_polynomial",
    "boundary_projective",
    "build",
    "build_trunc",
    "cell_counts",
    "cell_dimension",
    "CellCounts",
    "ChainComplex",
    "close",
    "cohomology_B_complement",
    "cohomology_P_complement",
    "complement",
    "compositions_of",
    "CountPolynomial",
    "dim_K",
    "DISC",
    "discriminant_oracle",
    "dualize",
    "dump_lines",
    "EMPTY",
    "enumerate_cells",
    "eta",
    "Family",
    "FormalSum",
    "format_group",
    "format_pattern",
    "FORMATS",
    "FULL",
    "GENERATED",
    "group",
    "hermite_normal_form",
    "homology_all",
    "homology_at",
    "homology_B",
    "homology_from_boundaries",
    "homology_oracle",
    "HomologyProfile",
    "insert",
    "insert_inf",
    "IntMatrix",
    "InvariantViolation",
    "is_closed",
    "kernel_basis",
    "MAX_GE",
    "maximal_elements",
    "merge",
    "merge_inf",
    "modp_rank",
    "parse_family",
    "parse_group",
    "parse_pattern",
    "Pattern",
    "precedes",
    "profile_payload",
    "psi",
    "Realization",
    "realize_family",
    "reduced_homology_P",
    "relative_homology_B",
    "render_profile",
    "render_table",
    "SINGLE",
    "single_pattern_reference",
    "SKELETON",
    "skeleton_reference",
    "smith_invariants",
    "smith_normal_form",
    "stability_report",
    "stabilization_table",
    "StabilizationReport",
    "StabRow",
    "Table",
    "triple_root_reference",
    "TruncMap",
    "twisted_homology_B_complement",
    "verdict",
    "verify_anticommute",
    "__version__",
]
