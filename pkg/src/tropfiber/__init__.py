"""Exact detection of non-displaceable toric fibers from moment polytope data."""

from importlib import resources

from .balancing import (adapted_basis, balanced_candidates, detect,
                        find_separating_primary_normal, is_strongly_bulk_balanced,
                        leading_term_system, primary_normals, solvable_over_torus)
from .hspace import HSystem
from .polytope import (InvariantError, ParseError, Polytope, energy_filtration,
                       facet_value, leading_order_potential, translate_facet, validate)
from .tropical import (PLComplex, TropicalPolynomial, intersect, isolated_points,
                       log_derivative_trop, member, properly_at, trop_poly, trop_relative)

__version__ = "0.1.0"

EXAMPLES = ("cp2", "blowup1", "blowup2a", "blowup2b")


def example_path(name: str):
    return resources.files(__name__).joinpath("data", f"{name}.json")


def load_example(name: str, **params) -> Polytope:
    from .polytope import parse
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return parse(example_path(name).read_text(), params=params or None)
