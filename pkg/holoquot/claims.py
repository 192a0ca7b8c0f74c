"""Checkable claims attached to catalog entries, and the generic claim builders.

A claim is a lazily computed quantity with an expectation: a residual that
must vanish, an exact label or integer, or a number within a tolerance.
Suites select claims by name; the verification service evaluates them.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from .curvature import CurvatureForms, curvature_of, ricci_lc, scal_lc
from .frame_algebra import FrameAlgebra, Sampler, VectorField
from .g2 import G2Structure, g2_torsion
from .g2 import scal_from_torsion as g2_scal_from_torsion
from .g2 import torsion_residuals as g2_torsion_residuals
from .quotient import (
    QuotientData,
    determined_components,
    hodge_transfer_residuals,
    round_trip_residuals,
    submersion_scalar_residual,
    torsion_budget,
    torsion_relations,
)
from .residuals import Checker
from .spin7 import Spin7Structure, classify, ricci_from_torsion, spin7_torsion
from .spin7 import scal_from_torsion as spin7_scal_from_torsion
from .spin7 import torsion_residuals as spin7_torsion_residuals

logger = logging.getLogger(__name__)

SUITES = (
    "algebra",
    "hodge-transfer",
    "torsion-relations",
    "torsion-free-quotient",
    "lcp-quotient",
    "balanced-quotient",
    "calabi",
    "gibbons-hawking",
    "ricci-oracle",
    "holonomy-rank",
    "flat-r8",
    "bryant-salamon",
    "su3-link",
)


@dataclass(frozen=True)
class RunContext:
    checker: Checker
    rank_points: int = 10
    rank_thresholds: Tuple[float, ...] = (1e-6, 1e-8, 1e-10)


@dataclass(frozen=True)
class Claim:
    """One checkable statement.

    With ``expected`` unset the computed value is a residual that must vanish.
    A string or integer ``expected`` is compared exactly; a number with a
    ``tolerance`` is compared within it. Informational claims are reported
    but never fail a suite.
    """

    id: str
    anchor: str
    suites: Tuple[str, ...]
    compute: Callable[[RunContext], Any]
    algebra: Optional[FrameAlgebra] = None
    sampler: Optional[Sampler] = None
    expected: Any = None
    tolerance: Optional[float] = None
    gating: bool = True


@dataclass
class CatalogEntry:
    id: str
    description: str
    algebra: FrameAlgebra
    algebras: Dict[str, FrameAlgebra] = field(default_factory=dict)
    structures: Dict[str, Any] = field(default_factory=dict)
    vectors: Dict[str, VectorField] = field(default_factory=dict)
    quotients: Dict[str, QuotientData] = field(default_factory=dict)
    forms: Dict[str, Any] = field(default_factory=dict)
    claims: List[Claim] = field(default_factory=list)

    def claims_for(self, suite: str) -> List[Claim]:
        if suite == "all":
            return sorted(self.claims, key=lambda c: c.id)
        return sorted((c for c in self.claims if suite in c.suites), key=lambda c: c.id)

    def add(self, *claims: Claim) -> None:
        self.claims.extend(claims)


def lazy(fn: Callable[[], Any]) -> Callable[[], Any]:
    """Zero-argument function evaluated once."""
    return lru_cache(maxsize=None)(fn)


def item(getter: Callable[[], Dict[str, Any]], key: str) -> Callable[[RunContext], Any]:
    return lambda ctx: getter()[key]


def residual_claims(
    prefix: str,
    getter: Callable[[], Dict[str, Any]],
    keys: Sequence[str],
    suites: Tuple[str, ...],
    algebra: FrameAlgebra,
    anchor: str,
    sampler: Optional[Sampler] = None,
    gating: bool = True,
) -> List[Claim]:
    return [
        Claim(f"{prefix}/{key}", anchor, suites, item(getter, key), algebra, sampler, gating=gating)
        for key in keys
    ]


@lru_cache(maxsize=64)
def curvature(algebra: FrameAlgebra) -> CurvatureForms:
    return curvature_of(algebra, checker=None)


# ------------------------------------------------------------------ generic builders


def algebra_claims(entry_id: str, name: str, algebra: FrameAlgebra) -> List[Claim]:
    return [
        Claim(
            f"{entry_id}/{name}/d squared",
            "d∘d = 0 on the coframe and the generators",
            ("algebra",),
            lambda ctx: list(algebra.d_squared_residuals().values()),
            algebra,
        )
    ]


def g2_claims(entry_id: str, name: str, structure: G2Structure) -> List[Claim]:
    prefix = f"{entry_id}/{name}"
    algebra = structure.algebra
    torsion = lazy(lambda: g2_torsion(structure))
    residuals = lazy(lambda: g2_torsion_residuals(structure, torsion()))
    claims = residual_claims(
        prefix,
        residuals,
        ("dphi reconstruction", "dpsi reconstruction", "tau2 in 14", "tau3 wedge phi", "tau3 wedge psi"),
        ("torsion-relations",),
        algebra,
        "G2 torsion decomposition",
    )
    claims.append(
        Claim(
            f"{prefix}/scalar curvature from torsion",
            "Scal(g_φ) from the torsion forms against Levi-Civita",
            ("ricci-oracle",),
            lambda ctx: g2_scal_from_torsion(structure, torsion()) - scal_lc(curvature(algebra)),
            algebra,
        )
    )
    return claims


def spin7_claims(
    entry_id: str,
    name: str,
    structure: Spin7Structure,
    torsion_type: Optional[str] = None,
    type_suites: Tuple[str, ...] = ("torsion-relations",),
    rank: Optional[int] = None,
) -> List[Claim]:
    prefix = f"{entry_id}/{name}"
    algebra = structure.algebra
    torsion = lazy(lambda: spin7_torsion(structure))
    claims = [
        Claim(
            f"{prefix}/T5 type condition",
            "∗T⁵∧Φ = 0",
            ("torsion-relations",),
            lambda ctx: spin7_torsion_residuals(structure, torsion())["T5 type condition"],
            algebra,
        ),
        Claim(
            f"{prefix}/scalar curvature from torsion",
            "Scal from T¹ and T⁵ against Levi-Civita",
            ("ricci-oracle",),
            lambda ctx: spin7_scal_from_torsion(structure, torsion()) - scal_lc(curvature(algebra)),
            algebra,
        ),
    ]
    if torsion_type is not None:
        claims.append(
            Claim(
                f"{prefix}/torsion type",
                "torsion class",
                type_suites,
                lambda ctx: classify(structure, ctx.checker, torsion()),
                algebra,
                expected=torsion_type,
            )
        )
    if not any(c.free_symbols for c in structure.Phi.coefficients()):
        claims.append(
            Claim(
                f"{prefix}/ricci from torsion",
                "Ric from T¹ and T⁵ against Levi-Civita",
                ("ricci-oracle",),
                lambda ctx: ricci_from_torsion(structure, torsion()) - ricci_lc(curvature(algebra)),
                algebra,
            )
        )
    if rank is not None:
        claims.append(holonomy_claim(prefix, algebra, rank))
    return claims


def holonomy_claim(prefix: str, algebra: FrameAlgebra, rank: int, sampler: Optional[Sampler] = None) -> Claim:
    from .curvature import holonomy_span_rank

    def compute(ctx: RunContext) -> int:
        points = algebra.sample_points(ctx.rank_points, ctx.checker.seed, sampler)
        return holonomy_span_rank(curvature(algebra), points, ctx.rank_thresholds)

    return Claim(
        f"{prefix}/holonomy span rank",
        "dimension of the span of the curvature endomorphisms",
        ("holonomy-rank",),
        compute,
        algebra,
        sampler,
        expected=rank,
    )


def quotient_claims(entry_id: str, name: str, q: QuotientData, sampler: Optional[Sampler] = None) -> List[Claim]:
    """Hodge transfer, torsion relations, round trip and (for s ≡ 1) curvature checks of one quotient."""
    prefix = f"{entry_id}/{name}"
    total = q.total
    transfer = lazy(lambda: hodge_transfer_residuals(q))
    report = lazy(lambda: torsion_relations(q))
    relations = lazy(lambda: report().relations)
    informational = lazy(lambda: report().informational)
    round_trip = lazy(lambda: round_trip_residuals(q))
    determined = lazy(lambda: determined_components(q, report()))
    budget = lazy(lambda: torsion_budget(q, report()))

    claims = residual_claims(
        f"{prefix}/hodge transfer",
        transfer,
        (
            "alpha wedge phi",
            "beta wedge phi",
            "one-form",
            "fibre volume",
            "eta wedge alpha",
            "eta wedge beta",
            "eta wedge one-form",
            "volume split",
        ),
        ("hodge-transfer",),
        total,
        "Hodge star of the total space against the quotient",
        sampler,
    )
    claims += residual_claims(
        f"{prefix}/round trip",
        round_trip,
        ("round trip phi", "round trip eta", "round trip Phi"),
        ("hodge-transfer", "torsion-relations"),
        total,
        "reduce(assemble(q)) = q",
        sampler,
    )
    claims += residual_claims(
        f"{prefix}/relation",
        relations,
        (
            "fibre component",
            "T1_7",
            "T5_7",
            "T5_14",
            "T4_27",
            "T4_1",
            "L map",
            "T5_7 from T1_7",
            "tau1 from T1_7 and T5_7",
            "T5 reconstruction",
            "curvature is basic",
        ),
        ("torsion-relations",),
        total,
        "Spin(7) torsion in terms of the quotient data",
        sampler,
    )
    claims += residual_claims(
        f"{prefix}/relation",
        informational,
        ("L map, printed scaling",),
        ("torsion-relations",),
        total,
        "L map with the s^{-4/3} scaling",
        sampler,
        gating=False,
    )
    claims += residual_claims(
        f"{prefix}/determined",
        determined,
        ("T5_7 predicted", "T4_7 predicted"),
        ("torsion-relations",),
        total,
        "T¹₇ determines T⁵₇ and T⁴₇",
        sampler,
    )
    claims += residual_claims(
        f"{prefix}/budget",
        lambda: budget()[0],
        ("codifferential of T1", "norm of T1", "norm of T5"),
        ("ricci-oracle",),
        total,
        "δT¹, ‖T¹‖² and ‖T⁵‖² from quotient data",
        sampler,
    )
    claims += residual_claims(
        f"{prefix}/budget",
        lambda: budget()[1],
        ("norm of T5, printed scaling",),
        ("ricci-oracle",),
        total,
        "‖T⁵‖² with the s^{4/3} scaling",
        sampler,
        gating=False,
    )
    if sympy.simplify(q.s - 1) == 0:
        claims.append(
            Claim(
                f"{prefix}/submersion scalar curvature",
                "Scal(g_Φ) from the base scalar curvature and dη",
                ("ricci-oracle",),
                lambda ctx: submersion_scalar_residual(q, scal_lc(curvature(total)), ctx.checker),
                total,
                sampler,
            )
        )
    return claims


def value_claim(
    claim_id: str,
    anchor: str,
    suites: Tuple[str, ...],
    compute: Callable[[RunContext], Any],
    algebra: FrameAlgebra,
    sampler: Optional[Sampler] = None,
    gating: bool = True,
) -> Claim:
    return Claim(claim_id, anchor, suites, compute, algebra, sampler, gating=gating)


def number_claim(
    claim_id: str,
    anchor: str,
    suites: Tuple[str, ...],
    compute: Callable[[RunContext], float],
    expected: float,
    tolerance: float,
    algebra: Optional[FrameAlgebra] = None,
) -> Claim:
    return Claim(claim_id, anchor, suites, compute, algebra, expected=expected, tolerance=tolerance)
