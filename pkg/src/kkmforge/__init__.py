"""kkmforge: exact-arithmetic checkers for cohomological obstructions,
section gluing, and covering/partition theorems at desk scale."""

from .complexes import (
    Gf2Cochain,
    ProductComplex,
    QuotientMap,
    SimplicialComplex,
    build_complex,
    coboundary,
    cohomology_basis,
    cup_product,
    is_coboundary,
    product_complex,
    projective_space,
    pullback_cochain,
    restrict_cochain,
)

__version__ = "0.1.0"
