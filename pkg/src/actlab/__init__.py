"""actlab: regularity and classification for acts of finite monoids."""

from .act import (
    ActCongruence,
    ActHom,
    FiniteAct,
    congruence_generated,
    coproduct,
    cyclic_subact,
    enumerate_congruences,
    iter_congruences,
    pointed_iso,
    quotient_act,
    regular_representation,
    validate_act,
)
from .classify import (
    Kind,
    ReportConfig,
    Verdict,
    axiomatizability_report,
    completeness_report,
    equalizer_family,
    full_report,
    idempotent_cover,
    model_completeness_report,
    omega_stability_report,
    orbit_iso_band,
    stability_report,
    superstability_report,
    validate_report,
)
from .errors import ActlabError
from .families import (
    b22_plus_1,
    cg,
    chain_of_groups,
    layered_monoid_64,
    rect_band_monoid,
    rz2_plus_1,
    syn9,
    trivial,
)
from .lazy import LazyMonoid, bounded_classify, lazy_family
from .logic import evaluate, parse_formula
from .monoid import FiniteMonoid, depth, idempotents, kernel, rect_band_decompose, validate_monoid
from .regular import is_act_regular, is_regular_act, monoid_regular_core, regular_core
from .textio import parse_act, parse_monoid, read_act, read_monoid
from .witness import build_counting, build_grid, build_tree, enumerate_triples, extract_triple

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
