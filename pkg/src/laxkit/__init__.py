"""Finite quantales, lax extensions of monads, unitary relations and presheaf monads, with executable law checks."""

from .report import CapExceeded, LawReport, LawResult, StructureError
from .quantale import Quantale, quantale_by_name
from .vrel import FinMap, FinSet, VRel, fset
from .finmonad import Enrichment, FinMonad, MonadMorphism, monad_by_name
from .laxext import LaxExtension, barr_ultrafilter_extension, identity_extension, kleisli_extension
from .urel import Context, PresheafMonad, TVRel

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "Context",
    "Enrichment",
    "FinMap",
    "FinMonad",
    "FinSet",
    "LawReport",
    "LawResult",
    "LaxExtension",
    "MonadMorphism",
    "PresheafMonad",
    "Quantale",
    "StructureError",
    "TVRel",
    "VRel",
    "barr_ultrafilter_extension",
    "fset",
    "identity_extension",
    "kleisli_extension",
    "monad_by_name",
    "quantale_by_name",
]
