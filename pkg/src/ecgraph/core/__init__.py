from .cayley import CayleyGraph, build_graph, export_edge_list, is_adjacent
from .ec_check import (
    brute_force_ec,
    char_sums,
    extender,
    find_least_q1,
    forbidden_set,
    sufficient_condition,
    verify_weil_bound,
)
from .number_theory import (
    gauss_sum,
    is_pythagorean_prime,
    jacobi_symbol,
    legendre_symbol,
    quadratic_character,
    unit_squares,
)
from .pseudorandom import (
    best_pr_trend,
    cheeger_bruteforce,
    cheeger_spectral_lower,
    edge_count,
    jumbledness_alpha,
    mixing_scan,
    quasirandom_stats,
)
from .spectrum import (
    character_sum_eigenvalue,
    closed_form_spectrum,
    eigenvalue_for_frequency,
    numerical_spectrum,
)

__all__ = [
    "CayleyGraph",
    "best_pr_trend",
    "brute_force_ec",
    "build_graph",
    "char_sums",
    "character_sum_eigenvalue",
    "cheeger_bruteforce",
    "cheeger_spectral_lower",
    "closed_form_spectrum",
    "edge_count",
    "eigenvalue_for_frequency",
    "export_edge_list",
    "extender",
    "find_least_q1",
    "forbidden_set",
    "gauss_sum",
    "is_adjacent",
    "is_pythagorean_prime",
    "jacobi_symbol",
    "jumbledness_alpha",
    "legendre_symbol",
    "mixing_scan",
    "numerical_spectrum",
    "quadratic_character",
    "quasirandom_stats",
    "sufficient_condition",
    "unit_squares",
    "verify_weil_bound",
]
