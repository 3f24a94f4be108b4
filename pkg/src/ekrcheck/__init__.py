"""Exact checks for maximum 2-intersecting families of permutations and perfect matchings."""

from .boolfn import (
    BooleanFunction,
    CubeFunction,
    classify_degree1,
    cube_degree,
    degree2_sensitivity_scan,
    indicator_of_family,
    lift_to_cube,
    polynomial_degree,
    restrict_to_coset,
    sensitivity_at,
)
from .cert import (
    ExtendedCertificate,
    bound_T,
    certificate_complexity,
    check_extended_reduction,
    check_pairwise_certificate_intersection,
    complete_avoiding,
    find_cover,
    min_certificate,
    one_side_certificate_complexity,
)
from .clique import build_graph, enumerate_maximum_cliques, max_clique_size, verify_uniqueness
from .domains import (
    DomainDescriptor,
    Kind,
    PerfectMatching,
    Permutation,
    coset_elements,
    enumerate_domain,
    get_domain,
    intersection_size,
    is_t_intersecting,
)
from .errors import CapacityError, EkrError, MathematicalAssertionError, UsageError
from .representation import (
    Tableau,
    column_stabilizer,
    decompose,
    isotypic_project,
    partitions_of,
    spectral_degree,
)

__version__ = "0.1.0"

__all__ = [
    "build_graph",
    "enumerate_maximum_cliques",
    "max_clique_size",
    "verify_uniqueness",
    "CapacityError",
    "EkrError",
    "MathematicalAssertionError",
    "UsageError",
    "BooleanFunction",
    "CubeFunction",
    "classify_degree1",
    "cube_degree",
    "degree2_sensitivity_scan",
    "indicator_of_family",
    "lift_to_cube",
    "polynomial_degree",
    "restrict_to_coset",
    "sensitivity_at",
    "ExtendedCertificate",
    "bound_T",
    "certificate_complexity",
    "check_extended_reduction",
    "check_pairwise_certificate_intersection",
    "complete_avoiding",
    "find_cover",
    "min_certificate",
    "one_side_certificate_complexity",
    "DomainDescriptor",
    "Kind",
    "PerfectMatching",
    "Permutation",
    "coset_elements",
    "enumerate_domain",
    "get_domain",
    "intersection_size",
    "is_t_intersecting",
    "Tableau",
    "column_stabilizer",
    "decompose",
    "isotypic_project",
    "partitions_of",
    "spectral_degree",
]
