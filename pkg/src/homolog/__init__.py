"""Finite models of semiexact and homological categories.

Concrete instances (pairs of sets, pointed sets, groups and pairs of groups,
lattices with Galois connections, group actions) share one category contract,
so normal factorisations, normal-subobject transfer, subquotients, exact
couples and spectral pages are written once and audited on every instance.
"""

from .core import (
    Bounds,
    Category,
    CategoryError,
    Functor,
    check_ex0,
    check_ex1,
    check_ex2,
    check_ex3,
    check_functor_exactness,
    check_nsb_duality,
    is_exact_at,
    is_exact_morphism,
    normal_factorise,
)
from .ltc import LTC, Connection, biproduct, connection
from .nsb import direct_image, inverse_image, nsb_connection, nsb_lattice, psp_quotient
from .pairs import GP, GP2, NGP, QCAT, SET2, SETPT
from .actions import ACT, ACT_PRIME, NAC
from .subquotient import Subquotient, induced_factorisation, regular_induction, subquotient
from .couples import (
    Couple,
    FilteredComplex,
    Tower,
    bigraded_pages,
    check_exact_couple,
    complex_couple,
    derive_couple,
    iterate,
    tower_couple,
)

__version__ = "0.1.0"

__all__ = [
    "ACT", "ACT_PRIME", "Bounds", "Category", "CategoryError", "Connection", "Couple", "FilteredComplex",
    "Functor", "GP", "GP2", "LTC", "NAC", "NGP", "QCAT", "SET2", "SETPT", "Subquotient", "Tower",
    "bigraded_pages", "biproduct", "check_ex0", "check_ex1", "check_ex2", "check_ex3", "check_exact_couple",
    "check_functor_exactness", "check_nsb_duality", "complex_couple", "connection", "derive_couple",
    "direct_image", "induced_factorisation", "inverse_image", "is_exact_at", "is_exact_morphism", "iterate",
    "normal_factorise", "nsb_connection", "nsb_lattice", "psp_quotient", "regular_induction", "subquotient",
    "tower_couple",
]
