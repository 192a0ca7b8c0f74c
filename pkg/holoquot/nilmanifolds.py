"""Flat tori, the nilmanifold Calabi example and the balanced nilmanifold lifts."""

import logging
from typing import Dict, Sequence, Tuple

import numpy as np
import sympy

from .claims import (
    CatalogEntry,
    algebra_claims,
    curvature,
    g2_claims,
    number_claim,
    quotient_claims,
    residual_claims,
    spin7_claims,
    value_claim,
)
from .curvature import RadialProfile, rm_decay_slope
from .frame_algebra import Form, FrameAlgebra, SymTensor
from .g2 import PHI0_TERMS, G2Structure, SU3Data, model_form, standard_phi0
from .quotient import (
    assemble,
    balanced_curvature,
    balanced_lift,
    calabi_ansatz,
    calabi_metric,
    calabi_profile,
    calabi_residuals,
    from_base,
    reduce,
    torsion_free_curvature,
)
from .scalars import generator_symbol
from .spin7 import BALANCED, TORSION_FREE, Spin7Structure, balanced_identity, spin7_torsion, standard_Phi0

logger = logging.getLogger(__name__)

SEVEN = tuple(f"e{i}" for i in range(1, 8))


def flat_algebra(labels: Sequence[str], name: str) -> FrameAlgebra:
    return FrameAlgebra(labels, name=name).freeze()


def flat_T7() -> CatalogEntry:
    algebra = flat_algebra(SEVEN, "flat_T7")
    structure = G2Structure(algebra, standard_phi0(algebra), name="flat_T7")
    entry = CatalogEntry("flat_T7", "flat 7-torus with the model 3-form", algebra)
    entry.structures["phi"] = structure
    entry.add(*algebra_claims(entry.id, "T7", algebra))
    entry.add(*g2_claims(entry.id, "phi", structure))
    return entry


def flat_T8() -> CatalogEntry:
    base = flat_T7().structures["phi"]
    q = from_base(base, 1, base.algebra.zero(2), eta_label="e0", name="flat_T8")
    Phi = assemble(q)
    entry = CatalogEntry("flat_T8", "trivial circle bundle over the flat 7-torus", q.total)
    entry.algebras["base"] = base.algebra
    entry.structures.update(phi=base, Phi=Phi)
    entry.quotients["trivial"] = q
    entry.add(*algebra_claims(entry.id, "T8", q.total))
    entry.add(*quotient_claims(entry.id, "trivial", q))
    entry.add(*spin7_claims(entry.id, "Phi", Phi, TORSION_FREE, ("torsion-free-quotient",), rank=0))
    entry.add(
        value_claim(
            f"{entry.id}/Phi/model form",
            "η∧φ₀ + ∗φ₀ is the model 4-form",
            ("hodge-transfer", "torsion-free-quotient"),
            lambda ctx: Phi.Phi - standard_Phi0(q.total),
            q.total,
        )
    )
    return entry


def flat_R8() -> CatalogEntry:
    labels = tuple(f"e{i}" for i in range(8))
    algebra = FrameAlgebra(labels, {f"x{i}": False for i in range(8)}, name="flat_R8")
    for i in range(8):
        algebra.declare_differential(f"x{i}", algebra.e(i))
    algebra.freeze()
    Phi = Spin7Structure(algebra, standard_Phi0(algebra), name="flat_R8")
    q = reduce(Phi, algebra.frame_vector("e0"), name="flat_R8/translation")

    entry = CatalogEntry("flat_R8", "flat R⁸ reduced along a translation", algebra)
    entry.structures["Phi"] = Phi
    entry.vectors["translation"] = q.fibre
    entry.quotients["translation"] = q
    entry.add(*algebra_claims(entry.id, "R8", algebra))
    entry.add(*spin7_claims(entry.id, "Phi", Phi, TORSION_FREE, ("torsion-free-quotient",), rank=0))
    entry.add(*quotient_claims(entry.id, "translation", q))
    entry.add(
        *residual_claims(
            f"{entry.id}/translation",
            lambda: {
                "phi is the model form": q.phi - model_form(algebra, PHI0_TERMS, 1),
                "eta is dx0": q.eta - algebra.e(0),
                "unit fibre": q.s - 1,
            },
            ("phi is the model form", "eta is dx0", "unit fibre"),
            ("hodge-transfer",),
            algebra,
            "reduction of Φ₀ along ∂₀ gives (φ₀, 1, dx₀)",
        )
    )
    return entry


# ------------------------------------------------------------------ Calabi example


def nil_cy_su3(cy: FrameAlgebra) -> SU3Data:
    e = cy.e
    return SU3Data(
        omega=e("e1", "e2") + e("e3", "e4") + e("e5", "e6"),
        omega_plus=e("e1", "e3", "e5") - e("e1", "e4", "e6") - e("e2", "e3", "e6") - e("e2", "e4", "e5"),
        omega_minus=e("e1", "e3", "e6") + e("e1", "e4", "e5") + e("e2", "e3", "e5") - e("e2", "e4", "e6"),
    )


def heisenberg_coordinates() -> Tuple[FrameAlgebra, Form, Form]:
    """Coordinates θ₁..θ₇ with e^i = dθ_i, the connection η and ω."""
    labels = SEVEN
    algebra = FrameAlgebra(labels, {f"theta{i}": False for i in range(1, 8)}, name="nil_cy/coordinates")
    for i in range(1, 8):
        algebra.declare_differential(f"theta{i}", algebra.e(f"e{i}"))
    algebra.freeze()
    t2, t4, t6 = algebra.symbols("theta2", "theta4", "theta6")
    e = algebra.e
    eta = e("e7") + t2 * e("e1") + t4 * e("e3") + t6 * e("e5")
    omega = e("e1", "e2") + e("e3", "e4") + e("e5", "e6")
    return algebra, eta, omega


def nil_cy() -> CatalogEntry:
    cy = flat_algebra(tuple(f"e{i}" for i in range(1, 7)), "nil_cy/cy")
    su3 = nil_cy_su3(cy)
    r = generator_symbol("r")
    q, Phi = calabi_ansatz(cy, su3, "r", r ** 3, name="nil_cy")
    total, base = q.total, q.base.algebra
    r = total.symbol("r")
    coordinates, eta_coordinates, omega_coordinates = heisenberg_coordinates()

    entry = CatalogEntry("nil_cy", "Calabi ansatz over the flat 6-torus with s = r³", total)
    entry.algebras.update(cy=cy, base=base, coordinates=coordinates)
    entry.structures.update(phi=q.base, Phi=Phi)
    entry.quotients["calabi"] = q
    entry.forms.update(
        omega=su3.omega, omega_plus=su3.omega_plus, omega_minus=su3.omega_minus, eta=eta_coordinates
    )
    for name, algebra in (("base", base), ("total", total), ("coordinates", coordinates)):
        entry.add(*algebra_claims(entry.id, name, algebra))
    entry.add(*quotient_claims(entry.id, "calabi", q))
    entry.add(*spin7_claims(entry.id, "Phi", Phi, TORSION_FREE, ("torsion-free-quotient", "calabi"), rank=15))
    entry.add(*g2_claims(entry.id, "base", q.base))

    entry.add(
        *residual_claims(
            f"{entry.id}/calabi",
            lambda: calabi_residuals(q, su3, Phi),
            ("Kahler form closed", "Calabi decomposition", "closed"),
            ("calabi", "torsion-free-quotient"),
            total,
            "Φ = ½ω̂² + Re Ω̂ for the Calabi ansatz",
        )
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/calabi",
            lambda: torsion_free_curvature(q),
            ("curvature 7 part", "curvature 14 part", "base calibrated"),
            ("torsion-free-quotient",),
            total,
            "curvature conditions of a torsion-free quotient",
        )
    )

    entry.add(
        value_claim(
            f"{entry.id}/calabi/metric",
            "g_Φ = r⁻⁶η² + r²(dr-part + g_CY)",
            ("calabi",),
            lambda ctx: calabi_metric(q)
            - SymTensor(q.reframing.source, sympy.diag(r ** -6, *([r ** 2] * 7))),
            q.reframing.source,
        ),
        value_claim(
            f"{entry.id}/calabi/radial coframe",
            "dr = f¹/(2r³)",
            ("calabi",),
            lambda ctx: base.differential(base.symbol("r")) - base.e("f1") / (2 * base.symbol("r") ** 3),
            base,
        ),
        value_claim(
            f"{entry.id}/coordinates/connection",
            "d(dθ₇ + θ₂e¹ + θ₄e³ + θ₆e⁵) = −ω",
            ("calabi",),
            lambda ctx: eta_coordinates.d() + omega_coordinates,
            coordinates,
        ),
    )

    profile = calabi_profile(q, "r")
    distances = np.geomspace(10.0, 1000.0, 12)
    entry.add(
        number_claim(
            f"{entry.id}/asymptotics/volume growth",
            "volume growth exponent 8/5",
            ("calabi",),
            lambda ctx: profile.volume_growth_slope(distances),
            1.6,
            0.05,
        ),
        number_claim(
            f"{entry.id}/asymptotics/curvature decay",
            "|Rm| decays like distance⁻²",
            ("calabi",),
            lambda ctx: _rm_decay(total, profile, distances),
            -2.0,
            0.05,
        ),
    )
    return entry


def _rm_decay(total: FrameAlgebra, profile: RadialProfile, distances: Sequence[float]) -> float:
    points = [total.point(r=profile.radius_at(rho)) for rho in distances]
    return rm_decay_slope(curvature(total), points, lambda p: profile.distance(p["r"]))


# ------------------------------------------------------------------ balanced lifts

BALANCED_LABELS = ("e1", "e3", "e7", "e0", "e4", "e6", "e2")
SECOND_LABELS = ("e5", "e0", "e1", "e2", "e3", "e6", "e7")


def balanced_base(labels: Sequence[str], structure: Dict[str, Sequence[Tuple[int, Tuple[str, str]]]], name: str) -> G2Structure:
    """Nilmanifold with φ the model form on the given coframe order.

    ``structure`` maps a label to (coefficient, (i, j)) pairs summing to its differential.
    """
    algebra = FrameAlgebra(labels, name=name)
    for label, pairs in structure.items():
        form = algebra.zero(2)
        for coefficient, (i, j) in pairs:
            form = form + coefficient * algebra.e(i, j)
        algebra.declare_structure(label, form)
    algebra.freeze()
    return G2Structure(algebra, standard_phi0(algebra), name=name)


def _balanced_entry(entry_id: str, description: str, base: G2Structure, lam: Form, eta_label: str, expected: Form):
    q, Phi = balanced_lift(base, lam, eta_label=eta_label, name=entry_id)
    entry = CatalogEntry(entry_id, description, q.total)
    entry.algebras["base"] = base.algebra
    entry.structures.update(phi=base, Phi=Phi)
    entry.quotients["lift"] = q
    entry.forms.update(lam=lam, deta=expected)
    entry.add(*algebra_claims(entry_id, "base", base.algebra))
    entry.add(*algebra_claims(entry_id, "total", q.total))
    entry.add(*quotient_claims(entry_id, "lift", q))
    entry.add(*spin7_claims(entry_id, "Phi", Phi, BALANCED, ("balanced-quotient",)))
    entry.add(*g2_claims(entry_id, "base", base))
    entry.add(
        *residual_claims(
            f"{entry_id}/lift",
            lambda: balanced_curvature(q),
            ("tau0", "curvature 7 part"),
            ("balanced-quotient",),
            q.total,
            "balanced quotient: τ₀ = 0 and (dη)₇ = −4∗(τ₁∧∗φ)",
        ),
        value_claim(
            f"{entry_id}/lift/curvature",
            "dη as displayed",
            ("balanced-quotient",),
            lambda ctx: q.descend(q.curvature) - expected,
            base.algebra,
        ),
        value_claim(
            f"{entry_id}/Phi/T1",
            "T¹ = 0",
            ("balanced-quotient",),
            lambda ctx: spin7_torsion(Phi).T1,
            q.total,
        ),
        value_claim(
            f"{entry_id}/Phi/balanced identity",
            "‖dΦ‖² vol = −d∗dΦ∧Φ",
            ("balanced-quotient",),
            lambda ctx: balanced_identity(Phi),
            q.total,
        ),
    )
    return entry, q, Phi


def _b5t2_base() -> G2Structure:
    return balanced_base(BALANCED_LABELS, {"e4": ((1, ("e0", "e2")), (1, ("e3", "e1")))}, "b5t2")


def balanced_b5t2_a() -> CatalogEntry:
    base = _b5t2_base()
    e = base.algebra.e
    third = sympy.Rational(1, 3)
    lam = third * (e("e0", "e3") + e("e1", "e2") + 2 * e("e4", "e7"))
    entry, _, _ = _balanced_entry(
        "balanced_b5t2_a",
        "balanced lift over the nilmanifold with de⁴ = e⁰²+e³¹, dη = e⁰³+e¹²",
        base,
        lam,
        "e5",
        e("e0", "e3") + e("e1", "e2"),
    )
    return entry


def _balanced_b() -> Tuple[CatalogEntry, object, Spin7Structure]:
    base = _b5t2_base()
    e = base.algebra.e
    lam = sympy.Rational(2, 3) * (2 * e("e1", "e2") - e("e0", "e3") + e("e4", "e7"))
    return _balanced_entry(
        "balanced_b5t2_b",
        "balanced lift over the nilmanifold with de⁴ = e⁰²+e³¹, dη = 2e¹²",
        base,
        lam,
        "e5",
        2 * e("e1", "e2"),
    )


def balanced_b5t2_b() -> CatalogEntry:
    return _balanced_b()[0]


def balanced_b5t2_second_iteration() -> CatalogEntry:
    """Reduce the second lift along e₄ and lift again with a new curvature."""
    _, _, Phi_b = _balanced_b()
    total_b = Phi_b.algebra
    reduced = reduce(Phi_b, total_b.frame_vector("e4"), name="balanced_b5t2_b/e4")
    e8 = total_b.e
    expected_phi = (
        e8("e5", "e0", "e1") + e8("e5", "e2", "e3") + e8("e5", "e6", "e7") + e8("e0", "e2", "e6")
        + e8("e0", "e7", "e3") - e8("e1", "e2", "e7") - e8("e1", "e3", "e6")
    )

    base = balanced_base(SECOND_LABELS, {"e5": ((2, ("e1", "e2")),)}, "b5t2_second")
    e = base.algebra.e
    lam = base.project2(e("e0", "e2") + e("e3", "e1"))[1] + e("e5", "e1") + 2 * e("e2", "e6") + e("e3", "e7")
    expected = e("e0", "e2") + e("e3", "e1") + e("e5", "e1") + 2 * e("e2", "e6") + e("e3", "e7")
    entry, q, Phi = _balanced_entry(
        "balanced_b5t2_second_iteration",
        "second balanced lift after reducing along e₄",
        base,
        lam,
        "xi",
        expected,
    )
    entry.algebras["first_total"] = total_b
    entry.quotients["reduced"] = reduced
    entry.add(
        *residual_claims(
            f"{entry.id}/reduced",
            lambda: {
                "phi": reduced.phi - expected_phi,
                "eta": reduced.eta - e8("e4"),
                "curvature": reduced.curvature - e8("e0", "e2") - e8("e3", "e1"),
            },
            ("phi", "eta", "curvature"),
            ("balanced-quotient",),
            total_b,
            "reduction of the second lift along e₄",
        )
    )
    return entry
