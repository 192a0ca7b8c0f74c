"""The anti-self-dual bundle of S⁴: Bryant-Salamon forms, the conical quotient and the CP³ links.

Coframe (b¹, b², b³, e¹, e², e³, e⁴): e is the round S⁴ coframe of the x₅-chart,
bⁱ = daᵢ + aⱼψʲᵢ are the vertical forms of the induced connection. R and
w = √(1 − R²) are independent positive generators tied together by the
samplers, which keep R inside (0.2, 0.9) away from the chart boundary.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import sympy
from sympy import Rational

from .claims import (
    CatalogEntry,
    algebra_claims,
    curvature,
    g2_claims,
    lazy,
    quotient_claims,
    residual_claims,
    value_claim,
)
from .curvature import scal_lc
from .frame_algebra import Form, FrameAlgebra, Reframing, reframe, restrict_tangential
from .g2 import G2Structure, SU3Data, g2_torsion, hypersurface_su3, standard_phi0
from .quotient import from_base

logger = logging.getLogger(__name__)

BUNDLE_LABELS = ("b1", "b2", "b3", "e1", "e2", "e3", "e4")
ADAPTED_LABELS = tuple(f"f{i}" for i in range(1, 8))
radius = sympy.Symbol("radius", positive=True)


def _sample(rng: np.random.Generator, fibre_radius: float) -> Dict[str, float]:
    R = rng.uniform(0.2, 0.9)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    a = fibre_radius * direction
    return {"R": R, "w": np.sqrt(1.0 - R * R), "a1": a[0], "a2": a[1], "a3": a[2]}


def sample_bundle(rng: np.random.Generator) -> Dict[str, float]:
    return _sample(rng, rng.uniform(0.3, 2.0))


def sample_link(rng: np.random.Generator) -> Dict[str, float]:
    """Points of the unit sphere bundle ρ = 1."""
    return _sample(rng, 1.0)


@dataclass(frozen=True)
class AsdBundle:
    algebra: FrameAlgebra
    rho: sympy.Expr
    c: Tuple[Form, Form, Form]
    b: Tuple[Form, Form, Form]
    sigma: Form
    alpha: Form
    tau: Form
    beta: Form

    @property
    def b123(self) -> Form:
        return self.beta / 6

    def closed_form(self, A, B) -> Form:
        """A b¹²³ + B dτ, closed exactly when A = 2 dB/dρ."""
        return A * self.b123 + B * self.tau.d()


@lru_cache(maxsize=1)
def asd_bundle() -> AsdBundle:
    algebra = FrameAlgebra(
        BUNDLE_LABELS,
        {"R": True, "w": True, "a1": False, "a2": False, "a3": False},
        name="asd_bundle",
        sampler=sample_bundle,
    )
    R, w = algebra.symbols("R", "w")
    a = algebra.symbols("a1", "a2", "a3")

    def e(*ix: int) -> Form:
        return algebra.e(*(f"e{i}" for i in ix))

    algebra.declare_differential("R", -w * e(4))
    algebra.declare_differential("w", R * e(4))
    algebra.declare_structure("e1", (2 / R) * e(2, 3) + (w / R) * e(1, 4))
    algebra.declare_structure("e2", (2 / R) * e(3, 1) + (w / R) * e(2, 4))
    algebra.declare_structure("e3", (2 / R) * e(1, 2) + (w / R) * e(3, 4))

    # ψʲᵢ = sign·k·eᵐ, keyed by (j, i)
    k = (w + 1) / R
    pattern = {(1, 0): (1, 1), (0, 2): (2, 1), (1, 2): (3, 1)}
    pattern.update({(i, j): (m, -sign) for (j, i), (m, sign) in list(pattern.items())})
    psi = [[algebra.zero(1) for _ in range(3)] for _ in range(3)]
    dpsi = [[algebra.zero(2) for _ in range(3)] for _ in range(3)]
    for (j, i), (m, sign) in pattern.items():
        psi[j][i] = sign * k * e(m)
        dpsi[j][i] = sign * (algebra.d_scalar(k).wedge(e(m)) + k * algebra.structure(f"e{m}"))
    b = tuple(algebra.e(f"b{i}") for i in (1, 2, 3))
    da = []
    for i in range(3):
        form = b[i]
        for j in range(3):
            form = form - a[j] * psi[j][i]
        algebra.declare_differential(f"a{i + 1}", form)
        da.append(form)
    for i in range(3):
        db = algebra.zero(2)
        for j in range(3):
            db = db + da[j].wedge(psi[j][i]) + a[j] * dpsi[j][i]
        algebra.declare_structure(f"b{i + 1}", db)
    algebra.freeze()

    c = (e(1, 2) - e(3, 4), e(1, 3) - e(4, 2), e(1, 4) - e(2, 3))
    rho = a[0] ** 2 + a[1] ** 2 + a[2] ** 2
    sigma = 2 * (a[0] * b[1].wedge(b[2]) + a[1] * b[2].wedge(b[0]) + a[2] * b[0].wedge(b[1]))
    alpha = algebra.zero(3)
    for i, j, l in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        alpha = alpha + a[i] * (b[j].wedge(c[l]) - b[l].wedge(c[j]))
    tau = a[0] * c[0] + a[1] * c[1] + a[2] * c[2]
    beta = 6 * b[0].wedge(b[1]).wedge(b[2])
    return AsdBundle(algebra, rho, c, b, sigma, alpha, tau, beta)


# ------------------------------------------------------------------ conical profiles


@dataclass(frozen=True)
class ConeProfile:
    """φ = A b¹²³ + B dτ as functions of the fibre radius √ρ, with the cone parameter t.

    The cone metric is dt² + t²(base·g_{S⁴} + fibre·ĝ_{S²}).
    """

    name: str
    A: sympy.Expr
    B: sympy.Expr
    t: Optional[sympy.Expr] = None
    base: Optional[sympy.Expr] = None
    fibre: Optional[sympy.Expr] = None

    def at(self, expr: sympy.Expr, bundle: AsdBundle, shift: Optional[Callable] = None) -> sympy.Expr:
        value = sympy.sqrt(bundle.rho)
        if shift is not None:
            value = shift(value)
        return expr.subs(radius, value)

    def form(self, bundle: AsdBundle, shift: Optional[Callable] = None) -> Form:
        return bundle.closed_form(self.at(self.A, bundle, shift), self.at(self.B, bundle, shift))

    def scales(self, bundle: AsdBundle) -> Tuple[sympy.Expr, sympy.Expr]:
        """P, Q with P³ = A and PQ² = B."""
        P = self.A ** Rational(1, 3)
        Q = sympy.sqrt(self.B / P)
        return self.at(P, bundle), self.at(Q, bundle)

    def cone_residuals(self, bundle: AsdBundle) -> list:
        P = self.A ** Rational(1, 3)
        Q_sq = self.B / P
        residuals = [
            P - sympy.diff(self.t, radius),
            Q_sq - self.base * self.t ** 2,
            P ** 2 * radius ** 2 - self.fibre * self.t ** 2,
        ]
        return [self.at(r, bundle) for r in residuals]


BRYANT_SALAMON = ConeProfile(
    "bryant_salamon",
    A=(2 * radius ** 2 + 1) ** Rational(-3, 4),
    B=(2 * radius ** 2 + 1) ** Rational(1, 4),
)
BS_CONE = ConeProfile(
    "bs_cone",
    A=radius ** Rational(-3, 2),
    B=2 * radius ** Rational(1, 2),
    t=2 * radius ** Rational(1, 2),
    base=Rational(1, 2),
    fibre=Rational(1, 4),
)
GH_CONE = ConeProfile(
    "gh_cone",
    A=radius ** Rational(-9, 5),
    B=5 * radius ** Rational(1, 5),
    t=Rational(5, 2) * radius ** Rational(2, 5),
    base=Rational(4, 5),
    fibre=Rational(4, 25),
)


def adapted_structure(bundle: AsdBundle, profile: ConeProfile, name: str) -> Tuple[Reframing, G2Structure, Form]:
    """Reframe along (Pb, Qe¹, Qe², Qe³, −Qe⁴); returns the reframing, the model structure and φ pushed."""
    P, Q = profile.scales(bundle)
    frame = reframe(bundle.algebra, sympy.diag(P, P, P, Q, Q, Q, -Q), labels=ADAPTED_LABELS, name=name)
    target = frame.target
    return frame, G2Structure(target, standard_phi0(target), name=name), frame.push(profile.form(bundle))


def _torsion_list(structure: G2Structure, keep=("tau0", "tau1", "tau2", "tau3")):
    torsion = g2_torsion(structure)
    return [getattr(torsion, name) for name in keep]


def bs_asd_bundle() -> CatalogEntry:
    bundle = asd_bundle()
    algebra = bundle.algebra
    entry = CatalogEntry(
        "bs_asd_bundle", "Bryant-Salamon G2 forms on the ASD bundle of S⁴ and the conical quotient", algebra
    )
    entry.forms.update(
        rho=algebra.scalar(bundle.rho), sigma=bundle.sigma, alpha=bundle.alpha, tau=bundle.tau, beta=bundle.beta
    )
    suites = ("bryant-salamon",)
    entry.add(*algebra_claims(entry.id, "bundle", algebra))

    def global_forms() -> Dict[str, object]:
        drho = algebra.d_scalar(bundle.rho)
        a = algebra.symbols("a1", "a2", "a3")
        return {
            "d rho": drho - 2 * sum((ai * bi for ai, bi in zip(a, bundle.b)), algebra.zero(1)),
            "d tau": bundle.tau.d() - sum((bi.wedge(ci) for bi, ci in zip(bundle.b, bundle.c)), algebra.zero(3)),
            "d b123": bundle.b123.d() + drho.wedge(bundle.tau.d()) / 2,
        }

    entry.add(
        *residual_claims(
            f"{entry.id}/global forms",
            lazy(global_forms),
            ("d rho", "d tau", "d b123"),
            suites,
            algebra,
            "ρ, τ and β on the total space",
        )
    )

    def plus_one(value):
        return sympy.sqrt(value ** 2 + 1)

    for profile in (BRYANT_SALAMON, BS_CONE, GH_CONE):
        entry.forms[profile.name] = profile.form(bundle)
        entry.add(
            value_claim(
                f"{entry.id}/{profile.name}/closed",
                "A = 2B′ makes A b¹²³ + B dτ closed",
                suites,
                lambda ctx, profile=profile: profile.form(bundle).d(),
                algebra,
            )
        )
    for profile in (BS_CONE, GH_CONE):
        entry.add(
            value_claim(
                f"{entry.id}/{profile.name}/smoothed closed",
                "ρ → ρ + 1 keeps the form closed",
                suites,
                lambda ctx, profile=profile: profile.form(bundle, plus_one).d(),
                algebra,
            ),
            value_claim(
                f"{entry.id}/{profile.name}/radius plus one",
                "R → R + 1 read literally in the fibre radius",
                suites,
                lambda ctx, profile=profile: profile.form(bundle, lambda value: value + 1).d(),
                algebra,
                gating=False,
            ),
            value_claim(
                f"{entry.id}/{profile.name}/cone metric",
                "g = dt² + t²(a g_{S⁴} + b ĝ_{S²})",
                suites,
                lambda ctx, profile=profile: profile.cone_residuals(bundle),
                algebra,
            ),
        )

    torsion_free = ("tau0", "tau1", "tau2", "tau3")
    for profile, keep in ((BRYANT_SALAMON, torsion_free), (BS_CONE, torsion_free), (GH_CONE, ("tau0", "tau1", "tau3"))):
        frame, structure, pushed = adapted_structure(bundle, profile, f"{entry.id}/{profile.name}")
        entry.algebras[profile.name] = frame.target
        entry.structures[profile.name] = structure
        entry.add(
            value_claim(
                f"{entry.id}/{profile.name}/model form",
                "φ is the model form in (Pb, Qe)",
                suites,
                lambda ctx, pushed=pushed, structure=structure: pushed - structure.phi,
                frame.target,
            ),
            value_claim(
                f"{entry.id}/{profile.name}/torsion",
                "torsion free" if len(keep) == 4 else "closed: only τ₂ survives",
                suites,
                lambda ctx, structure=structure, keep=keep: _torsion_list(structure, keep),
                frame.target,
            ),
        )
        if profile is not BS_CONE:
            entry.add(*g2_claims(entry.id, profile.name, structure))
        if profile is BRYANT_SALAMON:
            entry.add(
                value_claim(
                    f"{entry.id}/{profile.name}/coclosed",
                    "d∗φ_BS = 0",
                    suites,
                    lambda ctx, structure=structure: structure.psi.d(),
                    frame.target,
                )
            )
        if profile is GH_CONE:
            s = (2 * sympy.sqrt(bundle.rho)) ** Rational(-3, 10)
            q = from_base(structure, s, frame.target.zero(2), name=f"{entry.id}/gh_quotient")
            entry.quotients["gh"] = q
            entry.add(*quotient_claims(entry.id, "gh quotient", q))
    return entry


# ------------------------------------------------------------------ CP³ links


@dataclass(frozen=True)
class LinkData:
    frame: Reframing
    structure: G2Structure
    normal: object
    su3: SU3Data


def cylinder(bundle: AsdBundle, profile: ConeProfile, name: str) -> Tuple[Reframing, Form]:
    """t⁻²g = (dt/t)² + g_link in the coframe t⁻¹(Pb, Qe¹, Qe², Qe³, −Qe⁴), points on ρ = 1."""
    P, Q = profile.scales(bundle)
    t = profile.at(profile.t, bundle)
    frame = reframe(
        bundle.algebra,
        sympy.diag(P / t, P / t, P / t, Q / t, Q / t, Q / t, -Q / t),
        labels=ADAPTED_LABELS,
        name=name,
        sampler=sample_link,
    )
    return frame, frame.push(profile.form(bundle) / t ** 3)


def link_data(bundle: AsdBundle, profile: ConeProfile, frame: Reframing) -> LinkData:
    target = frame.target
    structure = G2Structure(target, standard_phi0(target), name=target.name)
    dlog = target.d_scalar(sympy.log(profile.at(profile.t, bundle)))
    normal = target.vector([dlog.terms.get((i,), 0) for i in range(target.dim)])
    return LinkData(frame, structure, normal, hypersurface_su3(structure, normal))


def _link_entry(
    entry_id: str, description: str, profile: ConeProfile, scal: int
) -> Tuple[CatalogEntry, Callable[[Form], Form], Callable[[], LinkData]]:
    bundle = asd_bundle()
    frame, pushed = cylinder(bundle, profile, entry_id)
    algebra = frame.target
    data = lazy(lambda: link_data(bundle, profile, frame))
    entry = CatalogEntry(entry_id, description, algebra)
    entry.algebras["bundle"] = bundle.algebra
    entry.forms.update(
        sigma=frame.push(bundle.sigma), tau=frame.push(bundle.tau), alpha=frame.push(bundle.alpha)
    )
    suites = ("su3-link",)
    entry.add(*algebra_claims(entry.id, "cylinder", algebra))
    entry.add(
        value_claim(
            f"{entry.id}/cylinder model form",
            "t⁻³φ is the model form on the cylinder",
            suites,
            lambda ctx: pushed - standard_phi0(algebra),
            algebra,
        ),
        value_claim(
            f"{entry.id}/scalar curvature",
            "scalar curvature of the link",
            ("su3-link", "ricci-oracle"),
            lambda ctx: scal_lc(curvature(algebra)) - scal,
            algebra,
        ),
    )

    def tangential(form: Form) -> Form:
        return restrict_tangential(form, data().normal)

    def structure_residuals() -> Dict[str, object]:
        su3 = data().su3
        return {
            **su3.compatibility_residuals(),
            "unit normal": data().normal.norm_sq() - 1,
            "d omega": tangential(su3.omega.d()) - 3 * su3.omega_plus,
        }

    entry.add(
        *residual_claims(
            f"{entry.id}/su3",
            lazy(structure_residuals),
            ("omega wedge re", "omega wedge im", "volume normalisation", "unit normal", "d omega"),
            suites,
            algebra,
            "SU(3)-structure induced on the link, dω = 3Ω⁺",
        )
    )
    return entry, tangential, data


def gh_link() -> CatalogEntry:
    entry, tangential, data = _link_entry(
        "gh_link", "SU(3)-structure on CP³ induced by the Gibbons-Hawking quotient cone", GH_CONE, 27
    )
    algebra = entry.algebra
    sigma, tau, alpha = entry.forms["sigma"], entry.forms["tau"], entry.forms["alpha"]
    extra = sigma / 5 - tau
    suites = ("su3-link",)

    def residuals() -> Dict[str, object]:
        su3 = data().su3
        omega = su3.omega
        return {
            "omega": omega - (Rational(4, 5) * tau + Rational(2, 25) * sigma),
            "Omega plus": su3.omega_plus - Rational(8, 25) * tangential(tau.d()),
            "Omega minus": su3.omega_minus + Rational(8, 25) * tangential(alpha),
            "d Omega minus": tangential(su3.omega_minus.d())
            + 2 * omega.wedge(omega)
            + Rational(4, 5) * extra.wedge(omega),
            "extra torsion norm": (extra / 5).norm_sq() - Rational(3, 8),
        }

    def printed() -> Dict[str, object]:
        su3 = data().su3
        omega = su3.omega
        return {
            "d Omega minus, printed coefficient": tangential(su3.omega_minus.d())
            + 2 * omega.wedge(omega)
            + Rational(1, 5) * extra.wedge(omega),
            "scalar curvature, printed value": scal_lc(curvature(algebra)) - Rational(477, 16),
        }

    keys = ("omega", "Omega plus", "Omega minus", "d Omega minus", "extra torsion norm")
    entry.add(
        *residual_claims(f"{entry.id}/su3", lazy(residuals), keys, suites, algebra, "half-flat link of the quotient cone")
    )
    entry.add(
        *residual_claims(
            f"{entry.id}/su3",
            lazy(printed),
            ("d Omega minus, printed coefficient", "scalar curvature, printed value"),
            suites,
            algebra,
            "dΩ⁻ with −(1/5)(σ/5 − τ)∧ω and Scal = 477/16",
            gating=False,
        )
    )
    return entry


def nk_link() -> CatalogEntry:
    entry, tangential, data = _link_entry(
        "nk_link", "nearly Kähler CP³ as the link of the Bryant-Salamon cone", BS_CONE, 30
    )
    algebra = entry.algebra
    sigma, tau, alpha = entry.forms["sigma"], entry.forms["tau"], entry.forms["alpha"]

    def residuals() -> Dict[str, object]:
        su3 = data().su3
        omega = su3.omega
        return {
            "omega": omega - (tau / 2 + sigma / 8),
            "Omega plus": su3.omega_plus - tangential(tau.d()) / 4,
            "Omega minus": su3.omega_minus + tangential(alpha) / 4,
            "d Omega minus": tangential(su3.omega_minus.d()) + 2 * omega.wedge(omega),
            "Fubini-Study form closed": tangential((tau / 2 - sigma / 4).d()),
        }

    keys = ("omega", "Omega plus", "Omega minus", "d Omega minus", "Fubini-Study form closed")
    entry.add(
        *residual_claims(
            f"{entry.id}/su3", lazy(residuals), keys, ("su3-link",), algebra, "nearly Kähler structure on CP³"
        )
    )
    return entry
