"""Exact computation of canonical bases of U_q^+ and their crystal graphs."""

__version__ = "0.1.0"

from .cartan import CartanDatum, load_cartan, preset, validate_cartan  # noqa: E402
from .coeff import LaurentPoly, RationalCoeff  # noqa: E402
from .engine import AlgebraElement, UPlusEngine  # noqa: E402
from .canonical import CanonicalStore, CanonicalVertex  # noqa: E402
from .crystal import build_graph, export_graph, verify_lemma_suite  # noqa: E402
from .pipeline import build_store  # noqa: E402

__all__ = [
    "AlgebraElement",
    "CanonicalStore",
    "CanonicalVertex",
    "CartanDatum",
    "LaurentPoly",
    "RationalCoeff",
    "UPlusEngine",
    "build_graph",
    "build_store",
    "export_graph",
    "load_cartan",
    "preset",
    "validate_cartan",
    "verify_lemma_suite",
]
