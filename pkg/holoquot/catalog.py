"""Registry of the built-in examples.

Entries are built on first use and cached. Every entry passes the d∘d = 0
self-check before it is handed out.
"""

import logging
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

from .ambient import fibrewise_reduction, flat_r8_quotient, gh_hopf, round_s7_ambient
from .asd_bundle import bs_asd_bundle, gh_link, nk_link
from .claims import CatalogEntry, algebra_claims, g2_claims, spin7_claims
from .errors import CatalogError, ConsistencyError, HoloquotError
from .g2 import G2Structure
from .nilmanifolds import (
    balanced_b5t2_a,
    balanced_b5t2_b,
    balanced_b5t2_second_iteration,
    flat_R8,
    flat_T7,
    flat_T8,
    nil_cy,
)
from .residuals import Checker
from .serialization import ImportedAlgebra
from .spin7 import Spin7Structure

logger = logging.getLogger(__name__)

Builder = Callable[[], CatalogEntry]

REGISTRY: Dict[str, Tuple[Builder, str]] = {
    "flat_T7": (flat_T7, "flat 7-torus with the model 3-form"),
    "flat_T8": (flat_T8, "trivial circle bundle over the flat 7-torus"),
    "flat_R8": (flat_R8, "flat R⁸ in polar coordinates around a circle action"),
    "nil_cy": (nil_cy, "Calabi-type quotient over the Heisenberg nilmanifold"),
    "balanced_b5t2_a": (balanced_b5t2_a, "balanced lift over a nilmanifold, first choice of λ"),
    "balanced_b5t2_b": (balanced_b5t2_b, "balanced lift over a nilmanifold, second choice of λ"),
    "balanced_b5t2_second_iteration": (
        balanced_b5t2_second_iteration,
        "quotient of the second balanced lift by a further circle",
    ),
    "round_s7_ambient": (round_s7_ambient, "cone over the round 7-sphere with the quaternionic 4-form"),
    "bs_asd_bundle": (bs_asd_bundle, "Bryant-Salamon metric and its cones on the ASD bundle over S⁴"),
    "flat_r8_quotient": (flat_r8_quotient, "flat R⁸ reduced by the diagonal circle"),
    "gh_hopf": (gh_hopf, "Gibbons-Hawking data from the Hopf action on R⁴"),
    "gh_link": (gh_link, "half-flat SU(3) link of the Gibbons-Hawking cone"),
    "nk_link": (nk_link, "nearly Kähler link of the Bryant-Salamon cone"),
}


def list_entries() -> List[Tuple[str, str]]:
    """Identifiers and descriptions, without building anything."""
    return sorted((entry_id, description) for entry_id, (_, description) in REGISTRY.items())


def self_check(entry: CatalogEntry, checker: Checker) -> None:
    algebras = {"primary": entry.algebra, **entry.algebras}
    for name, algebra in algebras.items():
        for label, residual in algebra.d_squared_residuals().items():
            measurement = checker.measure(residual, algebra)
            if not measurement.passed:
                raise ConsistencyError(
                    f"{entry.id}: d∘d fails on {label} of the {name} algebra", measurement.residual
                )


@lru_cache(maxsize=None)
def load(entry_id: str) -> CatalogEntry:
    if entry_id not in REGISTRY:
        known = ", ".join(sorted(REGISTRY))
        raise CatalogError(f"unknown catalog entry {entry_id!r}; known entries: {known}")
    builder, _ = REGISTRY[entry_id]
    logger.info("building catalog entry %s", entry_id)
    entry = builder()
    self_check(entry, Checker(mode="auto", tol=1e-9, points=5))
    return entry


def entry_from_algebra(imported: ImportedAlgebra, entry_id: str) -> CatalogEntry:
    """Wrap a user-supplied algebra in an entry with the generic claims.

    Named 3-forms on a 7-dimensional algebra are read as G₂ structures and
    named 4-forms on an 8-dimensional one as Spin(7) structures; forms that
    are not admissible are skipped with a warning.
    """
    algebra = imported.algebra
    entry = CatalogEntry(entry_id, f"frame algebra read from {entry_id}", algebra)
    entry.forms.update(imported.forms)
    entry.vectors.update(imported.vectors)
    entry.add(*algebra_claims(entry_id, "input", algebra))
    for name, form in sorted(imported.forms.items()):
        try:
            if algebra.dim == 7 and form.degree == 3:
                structure = G2Structure(algebra, form, name=name)
                entry.structures[name] = structure
                entry.add(*g2_claims(entry_id, name, structure))
            elif algebra.dim == 8 and form.degree == 4:
                structure = Spin7Structure(algebra, form, name=name)
                entry.structures[name] = structure
                entry.add(*spin7_claims(entry_id, name, structure))
        except HoloquotError as exc:
            logger.warning("form %s is not a structure form: %s", name, exc.message)
    return entry


__all__ = ["REGISTRY", "entry_from_algebra", "fibrewise_reduction", "list_entries", "load", "self_check"]
