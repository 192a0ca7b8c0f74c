"""S¹-invariant Spin(7)-structures and their G2 quotients.

An invariant Spin(7)-structure on the total space of a circle bundle is
encoded by the quotient data (φ, s, η): Φ = η∧φ + s^{4/3}∗_φφ and
g_Φ = s⁻²η² + s^{2/3}g_φ. Everything here lives on the 8-dimensional total
algebra; base forms are carried along as horizontal forms, and the base
Hodge star comes from HorizontalG2Structure.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import sympy

from .curvature import RadialProfile
from .errors import DomainError, InvarianceError, PreconditionError, StructuralError
from .frame_algebra import Form, FrameAlgebra, Reframing, SymTensor, VectorField, reframe
from .g2 import G2Structure, G2Torsion, HorizontalG2Structure, SU3Data, checked_torsion, g2_torsion
from .g2 import scal_from_torsion as g2_scal_from_torsion
from .residuals import DEFAULT_CHECKER, Checker
from .scalars import evaluate, normalize
from .spin7 import Spin7Structure, Spin7Torsion, spin7_torsion

logger = logging.getLogger(__name__)

THIRD = sympy.Rational(1, 3)
HALF = sympy.Rational(1, 2)


def _shift(form: Form, target: FrameAlgebra, offset: int = 1) -> Form:
    return target.form(form.degree, {tuple(i + offset for i in idx): c for idx, c in form.items()})


@dataclass
class QuotientData:
    """Quotient data of an S¹-invariant Spin(7)-structure.

    ``total`` is orthonormal for g_Φ, ``fibre`` generates the circle action
    with η(fibre) = 1, and ``phi`` is horizontal. When the data was built from
    a native base, ``base`` and ``reframing`` record where it came from and
    ``lift``/``descend`` move forms between the two algebras.
    """

    total: FrameAlgebra
    s: sympy.Expr
    eta: Form
    phi: Form
    fibre: VectorField
    base: Optional[G2Structure] = None
    reframing: Optional[Reframing] = None
    name: str = ""
    _horizontal: Optional[HorizontalG2Structure] = field(default=None, init=False, repr=False)

    @property
    def sigma(self) -> sympy.Expr:
        return normalize(self.s ** sympy.Rational(4, 3))

    @property
    def horizontal(self) -> HorizontalG2Structure:
        if self._horizontal is None:
            self._horizontal = HorizontalG2Structure(self.total, self.phi, self.eta, self.s, self.fibre, self.name)
        return self._horizontal

    @property
    def curvature(self) -> Form:
        return self.eta.d()

    def lift(self, form: Form) -> Form:
        """Base form c e^I as the horizontal form c s^{-|I|/3} E^{I+1}."""
        if self.base is None:
            raise StructuralError(f"{self.name!r} has no native base")
        if form.algebra is not self.base.algebra:
            raise StructuralError("form does not live on the base algebra")
        factor = self.s ** sympy.Rational(-form.degree, 3)
        return factor * _shift(form, self.total)

    def descend(self, form: Form) -> Form:
        if self.base is None:
            raise StructuralError(f"{self.name!r} has no native base")
        if any(0 in idx for idx in form.terms):
            raise StructuralError("form has a component along the fibre")
        factor = self.s ** sympy.Rational(form.degree, 3)
        return factor * _shift(form, self.base.algebra, -1)

    def base_star(self, form: Form) -> Form:
        """∗_φ through the native base when there is one."""
        if self.base is not None:
            return self.lift(self.base.star(self.descend(form)))
        return self.horizontal.star(form)

    def base_volume(self) -> Form:
        if self.base is not None:
            return self.lift(self.base.volume())
        return sympy.Rational(1, 7) * self.phi.wedge(self.horizontal.psi)


# ------------------------------------------------------------------ assemble / reduce


def from_base(
    base: G2Structure,
    s,
    deta: Form,
    eta_label: str = "eta",
    name: str = "",
    checker: Checker = DEFAULT_CHECKER,
) -> QuotientData:
    """Circle bundle over a native base with curvature ``deta`` and fibre size ``s``."""
    if deta.algebra is not base.algebra or deta.degree != 2:
        raise PreconditionError("the curvature must be a 2-form on the base algebra")
    checker.require(deta.d(), "d of the curvature", base.algebra, error=PreconditionError)
    s = normalize(s)
    for point in base.algebra.sample_points(3, seed=checker.seed):
        if evaluate(s, point.values) <= 0:
            raise DomainError(f"s is not positive at {point}")
    if eta_label in base.algebra.labels:
        raise StructuralError(f"fibre label {eta_label!r} clashes with the base coframe")

    name = name or f"{base.name}+S1"
    unscaled = FrameAlgebra(
        (eta_label,) + base.algebra.labels,
        {g.name: g.positive for g in base.algebra.generators},
        name=f"{name}/unscaled",
        sampler=base.algebra.sampler,
    )
    unscaled.declare_structure(0, _shift(deta, unscaled))
    for i in range(base.algebra.dim):
        unscaled.declare_structure(i + 1, _shift(base.algebra.structure(i), unscaled))
    for gen in base.algebra.generators:
        unscaled.declare_differential(gen.name, _shift(base.algebra.differential(gen.symbol), unscaled))
    unscaled.freeze()

    scale = s ** THIRD
    matrix = sympy.diag(1 / s, *([scale] * 7))
    reframing = reframe(unscaled, matrix, name=name)
    total = reframing.target
    eta = reframing.push(unscaled.e(0))
    fibre = reframing.push_vector(unscaled.frame_vector(0))
    phi = scale ** -3 * _shift(base.phi, total)
    logger.debug("built %s over %s", name, base.name)
    return QuotientData(total, s, eta, phi, fibre, base=base, reframing=reframing, name=name)


def assemble(q: QuotientData, checker: Optional[Checker] = DEFAULT_CHECKER) -> Spin7Structure:
    """Φ = η∧φ + s^{4/3}∗_φφ."""
    Phi = q.eta.wedge(q.phi) + q.sigma * q.horizontal.psi
    return Spin7Structure(q.total, Phi, name=q.name, checker=checker)


def reduce(
    structure: Spin7Structure,
    fibre: VectorField,
    s=None,
    name: str = "",
    checker: Checker = DEFAULT_CHECKER,
) -> QuotientData:
    """Quotient data of Φ along an invariant vector field: φ = ι_XΦ, η = s²g_Φ(X, ·)."""
    algebra = structure.algebra
    if fibre.algebra is not algebra:
        raise StructuralError("fibre field lives on a different algebra")
    measurement = checker.measure(structure.Phi.lie(fibre), algebra)
    if not measurement.passed:
        raise InvarianceError("the fibre field does not preserve Φ", measurement.residual)
    norm_sq = fibre.norm_sq()
    if norm_sq == 0:
        raise DomainError("the fibre field vanishes identically")
    for point in checker.points_for(algebra):
        if evaluate(norm_sq, point.values) <= 1e-12:
            raise DomainError(f"the fibre field vanishes at {point}", point.as_dict())
    if s is None:
        s = normalize(norm_sq ** sympy.Rational(-1, 2))
    else:
        s = normalize(s)
        checker.require(s ** -2 - norm_sq, "s⁻² − ‖X‖²", algebra, error=PreconditionError)
    eta = normalize(s ** 2) * fibre.flat()
    phi = structure.Phi.interior(fibre)
    return QuotientData(algebra, s, eta, phi, fibre, name=name or f"{structure.name}/S1")


def round_trip_residuals(q: QuotientData, checker: Checker = DEFAULT_CHECKER) -> Dict[str, Any]:
    """Assemble then reduce along the same fibre; every entry must vanish."""
    Phi = assemble(q, checker=None)
    again = reduce(Phi, q.fibre, s=q.s, checker=checker)
    rebuilt = assemble(again, checker=None)
    return {
        "round trip phi": again.phi - q.phi,
        "round trip eta": again.eta - q.eta,
        "round trip Phi": rebuilt.Phi - Phi.Phi,
    }


# ------------------------------------------------------------------ Hodge transfer


def sample_forms(q: QuotientData) -> Tuple[Form, Form, Form]:
    """(α ∈ Λ²₇, β ∈ Λ²₁₄, γ ∈ Λ¹) built from the base coframe."""
    H = q.horizontal
    if q.base is not None:
        e = q.base.algebra.e
        gamma = q.lift(e(0) + 2 * e(3) - e(5))
        two = q.lift(e(0, 1) + 3 * e(2, 5) - e(4, 6))
    else:
        horizontal = [H.horizontal(q.total.e(i)) for i in range(q.total.dim)]
        nonzero = [h for h in horizontal if not h.is_zero()]
        gamma = nonzero[0] + 2 * nonzero[-1]
        two = nonzero[1].wedge(nonzero[2]) + nonzero[3].wedge(nonzero[-1])
    alpha, beta = H.project2(two)
    return alpha, beta, gamma


def hodge_transfer_residuals(q: QuotientData) -> Dict[str, Form]:
    """Relations between ∗_Φ on the total space and ∗_φ on the quotient."""
    s, eta, phi = q.s, q.eta, q.phi
    alpha, beta, gamma = sample_forms(q)
    star = q.base_star
    return {
        "alpha wedge phi": (alpha.wedge(phi)).hodge() + 2 * s ** -2 * eta.wedge(alpha),
        "beta wedge phi": (beta.wedge(phi)).hodge() - s ** -2 * eta.wedge(beta),
        "one-form": gamma.hodge() + s ** sympy.Rational(2, 3) * eta.wedge(star(gamma)),
        "fibre volume": eta.hodge() - s ** sympy.Rational(10, 3) * q.base_volume(),
        "eta wedge alpha": eta.wedge(alpha).hodge() - HALF * s ** 2 * alpha.wedge(phi),
        "eta wedge beta": eta.wedge(beta).hodge() + s ** 2 * beta.wedge(phi),
        "eta wedge one-form": eta.wedge(gamma).hodge() - s ** sympy.Rational(8, 3) * star(gamma),
        "volume split": q.total.volume() - q.sigma * eta.wedge(q.base_volume()),
    }


# ------------------------------------------------------------------ torsion


@dataclass(frozen=True)
class QuotientTorsionReport:
    """Spin(7) torsion split along the fibre, plus the relations to the base torsion."""

    f: sympy.Expr
    T1_7: Form
    T5_7: Form
    T5_14: Form
    T4_1: Form
    T4_7: Form
    T4_27: Form
    spin7: Spin7Torsion
    base: G2Torsion
    relations: Dict[str, Any]
    informational: Dict[str, Any]

    def require(self, algebra: FrameAlgebra, checker: Checker = DEFAULT_CHECKER) -> None:
        for name, residual in sorted(self.relations.items()):
            checker.require(residual, f"quotient relation {name!r}", algebra)


def _curvature_parts(q: QuotientData) -> Tuple[Form, Form, Form]:
    deta = q.curvature
    d7, d14 = q.horizontal.project2(deta)
    return deta, d7, d14


def _mean_curvature(q: QuotientData, d7: Form) -> Form:
    """∗_φ((dη)₇∧∗_φφ)."""
    H = q.horizontal
    return H.star(d7.wedge(H.psi))


def quotient_torsion(q: QuotientData, torsion: Optional[Spin7Torsion] = None):
    """(f, T¹₇, T⁵₇, T⁵₁₄, T⁴₁, T⁴₇, T⁴₂₇) with T¹ = fη + T¹₇ and T⁵ = T⁵₇ + T⁵₁₄ + η∧T⁴."""
    H, X, eta = q.horizontal, q.fibre, q.eta
    torsion = torsion or spin7_torsion(assemble(q, checker=None))
    f = torsion.T1.interior(X).scalar_value()
    T1_7 = torsion.T1 - f * eta
    T4 = torsion.T5.interior(X)
    T5_h = torsion.T5 - eta.wedge(T4)
    a7, a14 = H.project2(H.star(T5_h))
    c1, c7, c27 = H.project3(H.star(T4))
    return torsion, f, T1_7, H.star(a7), H.star(a14), H.star(c1), H.star(c7), H.star(c27)


def torsion_relations(q: QuotientData, torsion: Optional[Spin7Torsion] = None) -> QuotientTorsionReport:
    H, eta, phi = q.horizontal, q.eta, q.phi
    psi, star = H.psi, H.star
    sigma = q.sigma
    torsion, f, T1_7, T5_7, T5_14, T4_1, T4_7, T4_27 = quotient_torsion(q, torsion)
    base = g2_torsion(H)
    deta, d7, d14 = _curvature_parts(q)
    dsigma = q.total.d_scalar(sigma)
    K = _mean_curvature(q, d7)

    def L(form: Form) -> Form:
        return star(star(form).wedge(psi)).wedge(phi)

    relations = {
        "fibre component": f + sigma ** -1 * base.tau0,
        "T1_7": 7 * T1_7 - 24 * base.tau1 - 3 * sigma ** -1 * dsigma - 2 * sigma ** -1 * K,
        "T5_7": 7 * T5_7 - 4 * (d7.wedge(phi) + dsigma.wedge(psi) + sigma * base.tau1.wedge(psi)),
        "T5_14": T5_14 - d14.wedge(phi) - sigma * base.tau2.wedge(phi),
        "T4_27": T4_27 + star(base.tau3),
        "T4_1": T4_1,
        "L map": L(T5_7) - 4 * sigma * T4_7,
        "T5_7 from T1_7": T5_7
        - sympy.Rational(1, 6) * sigma * T1_7.wedge(psi)
        - HALF * (dsigma.wedge(psi) + d7.wedge(phi)),
        "tau1 from T1_7 and T5_7": 3 * base.tau1.wedge(psi)
        - T1_7.wedge(psi)
        + sympy.Rational(3, 4) * sigma ** -1 * T5_7,
        "T5 reconstruction": torsion.T5 - T5_7 - T5_14 - eta.wedge(T4_7 + T4_27),
        "curvature is basic": deta.interior(q.fibre),
    }
    informational = {"L map, printed scaling": L(7 * T5_7) - 4 * sigma ** -1 * T4_7}
    return QuotientTorsionReport(
        f, T1_7, T5_7, T5_14, T4_1, T4_7, T4_27, torsion, base, relations, informational
    )


def determined_components(q: QuotientData, report: Optional[QuotientTorsionReport] = None) -> Dict[str, Form]:
    """Predict T⁵₇ and T⁴₇ from T¹₇ and τ₁ and compare with extraction."""
    report = report or torsion_relations(q)
    H = q.horizontal
    gamma = report.T1_7 - 3 * report.base.tau1
    return {
        "T5_7 predicted": report.T5_7 - sympy.Rational(4, 3) * q.sigma * gamma.wedge(H.psi),
        "T4_7 predicted": report.T4_7 - gamma.wedge(q.phi),
    }


def torsion_free_curvature(q: QuotientData) -> Dict[str, Form]:
    """Conditions on dη and s forced by dΦ = 0."""
    H = q.horizontal
    _, d7, d14 = _curvature_parts(q)
    base = g2_torsion(H)
    return {
        "curvature 7 part": d7.wedge(H.psi) + sympy.Rational(3, 2) * H.star(q.total.d_scalar(q.sigma)),
        "curvature 14 part": d14 + q.sigma * base.tau2,
        "base calibrated": q.phi.d(),
    }


def balanced_curvature(q: QuotientData) -> Dict[str, Any]:
    """For s ≡ 1: τ₀ = 0 and (dη)₇ = −4∗_φ(τ₁∧∗_φφ)."""
    H = q.horizontal
    _, d7, _ = _curvature_parts(q)
    base = g2_torsion(H)
    return {"tau0": base.tau0, "curvature 7 part": d7 + 4 * H.star(base.tau1.wedge(H.psi))}


def lcp_constraints(
    q: QuotientData,
    report: Optional[QuotientTorsionReport] = None,
    checker: Checker = DEFAULT_CHECKER,
) -> Dict[str, Any]:
    """Constraints on a locally conformally parallel quotient.

    τ₃ and df always vanish; with f = 0 also τ₀ and dτ₁, otherwise the
    curvature is exact, dη = −(1/f)dT¹₇.
    """
    report = report or torsion_relations(q)
    base = report.base
    out: Dict[str, Any] = {
        "tau3": base.tau3,
        "f constant": q.total.d_scalar(report.f),
    }
    if checker.vanishes(report.f, q.total):
        out["tau0"] = base.tau0
        out["d tau1"] = base.tau1.d()
    else:
        out["curvature exact"] = q.curvature + report.T1_7.d() / report.f
    return out


# ------------------------------------------------------------------ torsion budget


def torsion_budget(
    q: QuotientData, report: Optional[QuotientTorsionReport] = None
) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """δT¹, ‖T¹‖² and ‖T⁵‖² from quotient data, as differences with the direct values.

    Returns (gating, informational). The fourth term of ‖T⁵‖² carries
    s^{-2/3}; the variant with s^{4/3} is informational and agrees with it
    when s ≡ 1.
    """
    report = report or torsion_relations(q)
    H = q.horizontal
    s, sigma = q.s, q.sigma
    tau = report.base
    _, d7, d14 = _curvature_parts(q)
    ds = q.total.d_scalar(s)
    dsigma = q.total.d_scalar(sigma)
    K = _mean_curvature(q, d7)
    r = sympy.Rational

    delta = r(1, 7) * s ** r(-4, 3) * H.codiff(
        24 * s ** r(2, 3) * tau.tau1 + 4 * s ** r(-1, 3) * ds + 2 * s ** r(-2, 3) * K
    ).scalar_value()
    t1_sq = s ** r(-2, 3) * tau.tau0 ** 2 + r(1, 49) * s ** r(-2, 3) * H.norm_sq(
        24 * tau.tau1 + 4 * s ** -1 * ds + 2 * s ** r(-4, 3) * K
    )
    common = (
        s ** r(-2, 3) * H.norm_sq(tau.tau3)
        + s ** r(-4, 3) * H.norm_sq(s ** -1 * d14 + s ** r(1, 3) * tau.tau2)
        + s ** r(-10, 3)
        * H.norm_sq(r(8, 7) * d7 + r(4, 7) * H.star(dsigma.wedge(H.psi)) + r(4, 7) * sigma * H.star(tau.tau1.wedge(H.psi)))
    )
    gamma = r(3, 7) * tau.tau1 + r(4, 7) * s ** -1 * ds + r(2, 7) * s ** r(-4, 3) * K
    t5_sq = common + 4 * s ** r(-2, 3) * H.norm_sq(gamma)
    printed = common + 4 * s ** r(4, 3) * H.norm_sq(gamma)
    T1, T5 = report.spin7.T1, report.spin7.T5
    gating = {
        "codifferential of T1": normalize(delta - T1.codiff().scalar_value()),
        "norm of T1": normalize(t1_sq - T1.norm_sq()),
        "norm of T5": normalize(t5_sq - T5.norm_sq()),
    }
    return gating, {"norm of T5, printed scaling": normalize(printed - T5.norm_sq())}


def submersion_scalar_residual(q: QuotientData, scal_total, checker: Checker = DEFAULT_CHECKER) -> sympy.Expr:
    """Scal(g_Φ) against the base scalar curvature for a Riemannian submersion (s ≡ 1).

    ``scal_total`` is computed independently, typically by the Levi-Civita oracle.
    """
    checker.require(q.s - 1, "s − 1", q.total, error=PreconditionError)
    H = q.horizontal
    tau = checked_torsion(H, checker)
    deta, d7, d14 = _curvature_parts(q)
    K = _mean_curvature(q, d7)
    predicted = (
        g2_scal_from_torsion(H, tau)
        - HALF * H.norm_sq(deta)
        - H.inner(d14, tau.tau2)
        + H.codiff(K).scalar_value()
        + 4 * H.inner(H.star(tau.tau1), d7.wedge(H.psi))
    )
    return normalize(scal_total - predicted)


# ------------------------------------------------------------------ Calabi ansatz


def calabi_ansatz(
    cy: FrameAlgebra,
    su3: SU3Data,
    variable: str,
    s,
    deta: Optional[Form] = None,
    name: str = "",
    checker: Checker = DEFAULT_CHECKER,
) -> Tuple[QuotientData, Spin7Structure]:
    """Circle bundle with dη = −ω over Z⁶ × ℝ⁺ for a torsion-free SU(3)-structure on Z⁶.

    ``s`` is a positive function of the generator ``variable``, which becomes
    the ℝ⁺ coordinate with f¹ = (2/3)s^{1/3}ds the new unit coframe element,
    so that the base carries φ = f¹∧ω + Ω⁺.
    """
    if cy.dim != 6:
        raise StructuralError(f"Calabi ansatz needs a 6-dimensional algebra, got {cy.dim}")
    for form in (su3.omega, su3.omega_plus, su3.omega_minus):
        if form.algebra is not cy:
            raise StructuralError("SU(3) forms do not live on the given algebra")
    if su3.omega.is_zero():
        raise PreconditionError("ω vanishes; the curvature dη = −ω would be flat")
    for what, form in (("dω", su3.omega.d()), ("dΩ⁺", su3.omega_plus.d()), ("dΩ⁻", su3.omega_minus.d())):
        checker.require(form, what, cy, error=PreconditionError)
    for what, residual in su3.compatibility_residuals().items():
        checker.require(residual, f"SU(3) {what}", cy, error=PreconditionError)

    name = name or f"calabi({cy.name})"
    generators = {g.name: g.positive for g in cy.generators}
    generators[variable] = True
    base = FrameAlgebra(("f1",) + cy.labels, generators, name=f"{name}/base", sampler=cy.sampler)
    var = base.symbol(variable)
    s = normalize(sympy.sympify(s).subs({sympy.Symbol(variable, positive=True): var}))
    for i in range(cy.dim):
        base.declare_structure(i + 1, _shift(cy.structure(i), base))
    for gen in cy.generators:
        base.declare_differential(gen.name, _shift(cy.differential(gen.symbol), base))
    slope = normalize(sympy.Rational(2, 3) * s ** THIRD * sympy.diff(s, var))
    base.declare_differential(variable, (1 / slope) * base.e(0))
    base.freeze()

    omega = _shift(su3.omega, base)
    phi = base.e(0).wedge(omega) + _shift(su3.omega_plus, base)
    g2 = G2Structure(base, phi, name=f"{name}/base")
    if deta is None:
        deta = -omega
    elif deta.algebra is not base:
        deta = _shift(deta, base) if deta.algebra is cy else deta
    checker.require(deta + omega, "dη + ω", base, error=PreconditionError)
    q = from_base(g2, s, deta, name=name, checker=checker)
    return q, assemble(q, checker)


def calabi_residuals(q: QuotientData, su3: SU3Data, Phi: Spin7Structure) -> Dict[str, Form]:
    """Φ = ½ω̂² + Re Ω̂ with ω̂ = s^{2/3}ω + η∧d(s^{2/3}) and Re Ω̂ = η∧Ω⁺ − s^{4/3}f¹∧Ω⁻."""
    base = q.base.algebra
    omega = q.lift(_shift(su3.omega, base))
    omega_plus = q.lift(_shift(su3.omega_plus, base))
    omega_minus = q.lift(_shift(su3.omega_minus, base))
    f1 = q.lift(base.e(0))
    two_thirds = sympy.Rational(2, 3)
    omega_hat = q.s ** two_thirds * omega + q.eta.wedge(q.total.d_scalar(q.s ** two_thirds))
    re_omega_hat = q.eta.wedge(omega_plus) - q.sigma * f1.wedge(omega_minus)
    return {
        "Kahler form closed": omega_hat.d(),
        "Calabi decomposition": HALF * omega_hat.wedge(omega_hat) + re_omega_hat - Phi.Phi,
        "closed": Phi.Phi.d(),
    }


def calabi_metric(q: QuotientData) -> SymTensor:
    """g_Φ in the coframe (η, f¹, Z⁶ coframe): diag(s⁻², s^{2/3}, ..., s^{2/3})."""
    if q.reframing is None:
        raise StructuralError("the metric in the unscaled coframe needs a reframing")
    M = q.reframing.matrix
    return SymTensor(q.reframing.source, M.T * M)


def calabi_profile(q: QuotientData, variable: str) -> RadialProfile:
    """|∂_r| and the volume density of ``calabi_metric`` in d(variable).

    The density omits the constant fibre length and the volume of Z⁶.
    """
    metric = calabi_metric(q)
    source = metric.algebra
    base = q.base.algebra
    r = base.symbol(variable)
    # dr = c f¹, so ∂_r has f¹-component 1/c
    c = base.differential(r).coefficient("f1")
    if c == 0:
        raise PreconditionError(f"d{variable} has no radial component")
    f1 = source.index_of("f1")
    speed = normalize(sympy.sqrt(metric[f1, f1]) / c)
    density = normalize(sympy.sqrt(metric.matrix.det()) / c)
    return RadialProfile(r, speed, density)


# ------------------------------------------------------------------ balanced lift


def balanced_lift(
    base: G2Structure,
    lam: Form,
    eta_label: str = "eta",
    name: str = "",
    checker: Checker = DEFAULT_CHECKER,
) -> Tuple[QuotientData, Spin7Structure]:
    """Circle bundle with dη = λ − 4∗_φ(τ₁∧∗_φφ) and s ≡ 1, balanced by construction.

    Integrality of the curvature class is not checked.
    """
    if lam.algebra is not base.algebra or lam.degree != 2:
        raise PreconditionError("λ must be a 2-form on the base algebra")
    tau = checked_torsion(base, checker)
    checker.require(tau.tau0, "τ₀", base.algebra, error=PreconditionError)
    checker.require(lam.wedge(base.psi), "λ∧∗φ", base.algebra, error=PreconditionError)
    deta = lam - 4 * base.star(tau.tau1.wedge(base.psi))
    checker.require(deta.d(), "d(λ − 4∗(τ₁∧∗φ))", base.algebra, error=PreconditionError)
    q = from_base(base, 1, deta, eta_label=eta_label, name=name, checker=checker)
    return q, assemble(q, checker)


# ------------------------------------------------------------------ Gibbons-Hawking


@dataclass(frozen=True)
class GibbonsHawking:
    algebra: FrameAlgebra
    f: sympy.Expr
    eta: Form
    omegas: Tuple[Form, Form, Form]
    metric: SymTensor
    volume: Form

    def residuals(self) -> Dict[str, Form]:
        out = {}
        for i, omega in enumerate(self.omegas, start=1):
            out[f"d omega{i}"] = omega.d()
        for i in range(3):
            for j in range(i, 3):
                expected = self.volume if i == j else self.algebra.zero(4)
                out[f"omega{i + 1} omega{j + 1}"] = HALF * self.omegas[i].wedge(self.omegas[j]) - expected
        return out


def gibbons_hawking(
    base: FrameAlgebra,
    f,
    deta: Form,
    eta_label: str = "eta",
    name: str = "",
    checker: Checker = DEFAULT_CHECKER,
) -> GibbonsHawking:
    """Hyperkähler 4-metric f g₀ + f⁻¹η² from a monopole ∗df = dη over a flat 3-dimensional base.

    The coframe of the result is (base coframe, η); it is not orthonormal,
    the metric is returned alongside.
    """
    if base.dim != 3:
        raise StructuralError(f"Gibbons-Hawking needs a 3-dimensional base, got {base.dim}")
    if deta.algebra is not base or deta.degree != 2:
        raise StructuralError("dη must be a 2-form on the base")
    f = normalize(f)
    checker.require(base.d_scalar(f).hodge() - deta, "monopole equation ∗df − dη", base, error=PreconditionError)

    algebra = FrameAlgebra(
        base.labels + (eta_label,),
        {g.name: g.positive for g in base.generators},
        name=name or f"GH({base.name})",
        sampler=base.sampler,
    )
    for i in range(3):
        algebra.declare_structure(i, _shift(base.structure(i), algebra, 0))
    algebra.declare_structure(3, _shift(deta, algebra, 0))
    for gen in base.generators:
        algebra.declare_differential(gen.name, _shift(base.differential(gen.symbol), algebra, 0))
    algebra.freeze()

    eta = algebra.e(3)
    e = [algebra.e(i) for i in range(3)]
    omegas = tuple(eta.wedge(e[i]) - f * e[(i + 1) % 3].wedge(e[(i + 2) % 3]) for i in range(3))
    metric = SymTensor(algebra, sympy.diag(f, f, f, 1 / f))
    volume = f * algebra.e(0, 1, 2, 3)
    return GibbonsHawking(algebra, f, eta, omegas, metric, volume)


# ------------------------------------------------------------------ T² reduction


@dataclass(frozen=True)
class T2Reduction:
    """Second circle reduction of a G2 quotient along a commuting field Y."""

    H: sympy.Expr
    xi: Form
    omega: Form
    omega_plus: Form
    sqrt_H_omega_minus: Form


def t2_reduction(q: QuotientData, Y: VectorField) -> T2Reduction:
    """H = ‖Y‖_φ⁻¹, ξ = H²g_φ(Y, ·), ω = ι_Yφ, H^{3/2}Ω⁺ = φ − ξ∧ω, H^{1/2}Ω⁻ = −ι_Y∗_φφ."""
    s, X = q.s, q.fibre
    pairing = normalize(sum(a * b for a, b in zip(X.components, Y.components)))
    inv_sq = normalize(s ** sympy.Rational(-2, 3) * (Y.norm_sq() - s ** 2 * pairing ** 2))
    H = normalize(inv_sq ** sympy.Rational(-1, 2))
    xi = H ** 2 * s ** sympy.Rational(-2, 3) * (Y.flat() - s ** 2 * pairing * X.flat())
    omega = q.phi.interior(Y)
    omega_plus = H ** sympy.Rational(-3, 2) * (q.phi - xi.wedge(omega))
    sqrt_H_omega_minus = -q.horizontal.psi.interior(Y)
    return T2Reduction(H, xi, omega, omega_plus, sqrt_H_omega_minus)


def t2_quotient_identity(q: QuotientData, t2: T2Reduction, Phi: Form) -> Form:
    """Φ − (η∧ξ∧ω + H^{3/2}η∧Ω⁺ + ½s^{4/3}H²ω² − s^{4/3}H^{1/2}ξ∧Ω⁻)."""
    H, sigma = t2.H, q.sigma
    expected = (
        q.eta.wedge(t2.xi).wedge(t2.omega)
        + H ** sympy.Rational(3, 2) * q.eta.wedge(t2.omega_plus)
        + HALF * sigma * H ** 2 * t2.omega.wedge(t2.omega)
        - sigma * t2.xi.wedge(t2.sqrt_H_omega_minus)
    )
    return Phi - expected


def commuting_residuals(q: QuotientData, Y: VectorField, Phi: Form) -> Dict[str, Any]:
    return {"Y preserves Phi": Phi.lie(Y), "X and Y commute": q.fibre.bracket(Y)}

