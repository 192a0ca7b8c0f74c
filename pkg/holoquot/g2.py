"""G2-structures: model 3-form, induced metric, type decompositions and torsion."""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import sympy

from .errors import PreconditionError, StructuralError
from .frame_algebra import Form, FrameAlgebra, SymTensor, VectorField, restrict_tangential
from .residuals import DEFAULT_CHECKER, Checker
from .scalars import normalize

logger = logging.getLogger(__name__)

# 1-based index triples of the model 3-form and its dual 4-form.
PHI0_TERMS = (
    ((1, 2, 3), 1), ((1, 4, 5), 1), ((1, 6, 7), 1), ((2, 4, 6), 1),
    ((2, 5, 7), -1), ((3, 4, 7), -1), ((3, 5, 6), -1),
)
PSI0_TERMS = (
    ((4, 5, 6, 7), 1), ((2, 3, 6, 7), 1), ((2, 3, 4, 5), 1), ((1, 3, 5, 7), 1),
    ((1, 3, 4, 6), -1), ((1, 2, 5, 6), -1), ((1, 2, 4, 7), -1),
)


def model_form(algebra: FrameAlgebra, terms, offset: int) -> Form:
    """Model form with 1-based index i placed on coframe element i - 1 + offset."""
    return algebra.form(len(terms[0][0]), {tuple(i - 1 + offset for i in idx): c for idx, c in terms})


def standard_phi0(algebra: FrameAlgebra) -> Form:
    if algebra.dim != 7:
        raise StructuralError(f"the model 3-form needs a 7-dimensional algebra, got {algebra.dim}")
    return model_form(algebra, PHI0_TERMS, 0)


def standard_psi0(algebra: FrameAlgebra) -> Form:
    if algebra.dim != 7:
        raise StructuralError(f"the model 4-form needs a 7-dimensional algebra, got {algebra.dim}")
    return model_form(algebra, PSI0_TERMS, 0)


def phi_bilinear(algebra: FrameAlgebra, phi: Form) -> sympy.Matrix:
    """B_ij with (1/6) ι_iφ∧ι_jφ∧φ = B_ij vol."""
    contractions = [phi.interior(algebra.frame_vector(i)) for i in range(algebra.dim)]
    top = tuple(range(algebra.dim))
    matrix = sympy.zeros(algebra.dim, algebra.dim)
    for i in range(algebra.dim):
        for j in range(i, algebra.dim):
            value = contractions[i].wedge(contractions[j]).wedge(phi).terms.get(top, 0)
            matrix[i, j] = matrix[j, i] = normalize(sympy.Rational(1, 6) * value)
    return matrix


def metric_from_phi(algebra: FrameAlgebra, phi: Form) -> SymTensor:
    """g = B·det(B)^{-1/9}, the metric for which φ has unit comass."""
    if algebra.dim != 7 or phi.degree != 3:
        raise StructuralError("metric_from_phi needs a 3-form on a 7-dimensional algebra")
    bilinear = phi_bilinear(algebra, phi)
    det = normalize(bilinear.det())
    if det == 1:
        return SymTensor(algebra, bilinear)
    return SymTensor(algebra, bilinear * det ** sympy.Rational(-1, 9))


def _require_adapted(algebra: FrameAlgebra, phi: Form, samples: int = 3) -> None:
    bilinear = phi_bilinear(algebra, phi)
    identity = sympy.eye(algebra.dim)
    if all(normalize(bilinear[i, j] - identity[i, j]) == 0 for i in range(7) for j in range(7)):
        return
    tensor = SymTensor(algebra, bilinear)
    for point in algebra.sample_points(samples, seed=0):
        values = tensor.evaluate(point)
        for i in range(7):
            if values[i, i] <= 0:
                pair = (algebra.labels[i], algebra.labels[i])
                raise StructuralError(f"3-form does not induce a positive metric: g{pair} <= 0 at {point}", pair)
        for i in range(7):
            for j in range(i + 1, 7):
                if values[i, i] * values[j, j] - values[i, j] ** 2 <= 0:
                    pair = (algebra.labels[i], algebra.labels[j])
                    raise StructuralError(f"3-form does not induce a positive metric on the pair {pair}", pair)
        if np.linalg.eigvalsh(values).min() <= 0:
            raise StructuralError("3-form does not induce a positive definite metric", point.as_dict())
        if np.max(np.abs(values - np.eye(7))) > 1e-9:
            raise StructuralError(
                f"coframe of {algebra.name!r} is not adapted to the 3-form (metric is not the identity)"
            )


class _G2Geometry:
    """Operations shared by native and horizontal G2-structures."""

    algebra: FrameAlgebra
    phi: Form
    psi: Form

    def star(self, form: Form) -> Form:
        raise NotImplementedError

    def inner(self, a: Form, b: Form) -> sympy.Expr:
        raise NotImplementedError

    def volume(self) -> Form:
        raise NotImplementedError

    def norm_sq(self, form: Form) -> sympy.Expr:
        return self.inner(form, form)

    def codiff(self, form: Form) -> Form:
        """δ_φ = (−1)^k ∗d∗ on k-forms."""
        if form.degree == 0:
            return form.algebra.zero(0)
        result = self.star(self.star(form).d())
        return -result if form.degree % 2 else result

    def torsion(self) -> "G2Torsion":
        return g2_torsion(self)

    def project2(self, form: Form) -> Tuple[Form, Form]:
        return project2_g2(self, form)

    def project3(self, form: Form) -> Tuple[Form, Form, Form]:
        return project3_g2(self, form)


class G2Structure(_G2Geometry):
    """Native G2-structure on a 7-dimensional algebra whose coframe is adapted to φ."""

    def __init__(self, algebra: FrameAlgebra, phi: Form, name: str = "", check: bool = True):
        if algebra.dim != 7:
            raise StructuralError(f"G2-structure needs a 7-dimensional algebra, got {algebra.dim}")
        if phi.algebra is not algebra or phi.degree != 3:
            raise StructuralError("φ must be a 3-form on the structure's algebra")
        if check:
            _require_adapted(algebra, phi)
        self.algebra = algebra
        self.phi = phi
        self.psi = phi.hodge()
        self.name = name or algebra.name

    def __repr__(self) -> str:
        return f"G2Structure({self.name})"

    @property
    def metric(self) -> SymTensor:
        return SymTensor.identity(self.algebra)

    def star(self, form: Form) -> Form:
        return form.hodge()

    def inner(self, a: Form, b: Form) -> sympy.Expr:
        return a.inner(b)

    def volume(self) -> Form:
        return self.algebra.volume()


class HorizontalG2Structure(_G2Geometry):
    """G2-structure on the horizontal forms of an 8-dimensional orthonormal algebra.

    φ is annihilated by the fibre field X, η(X) = 1, and everything is measured
    in the rescaled metric g_φ = s^{-2/3}(g_Φ − s⁻²η²). The formulas below hold
    for any form killed by ι_X.
    """

    def __init__(self, algebra: FrameAlgebra, phi: Form, eta: Form, s, fibre: VectorField, name: str = ""):
        if algebra.dim != 8:
            raise StructuralError("horizontal G2-structure needs an 8-dimensional algebra")
        if fibre.algebra is not algebra or phi.algebra is not algebra or eta.algebra is not algebra:
            raise StructuralError("φ, η and the fibre field must live on the same algebra")
        if not phi.interior(fibre).is_zero():
            # coefficients may cancel only numerically
            DEFAULT_CHECKER.require(phi.interior(fibre), "ι_Xφ", algebra, error=StructuralError)
        self.algebra = algebra
        self.phi = phi
        self.eta = eta
        self.s = normalize(s)
        self.fibre = fibre
        self.name = name or algebra.name
        self.psi = self.star(phi)

    def __repr__(self) -> str:
        return f"HorizontalG2Structure({self.name})"

    def horizontal(self, form: Form) -> Form:
        """h(a) = a − η∧ι_X a."""
        if form.degree == 0:
            return form
        return form - self.eta.wedge(form.interior(self.fibre))

    def star(self, form: Form) -> Form:
        k = form.degree
        return self.s ** sympy.Rational(2 * k - 10, 3) * self.eta.wedge(form).hodge()

    def inner(self, a: Form, b: Form) -> sympy.Expr:
        return normalize(self.s ** sympy.Rational(2 * a.degree, 3) * a.inner(b))

    def volume(self) -> Form:
        return self.s ** sympy.Rational(-10, 3) * self.eta.hodge()


G2Geometry = _G2Geometry


# ------------------------------------------------------------------ types


def project2_g2(structure: G2Geometry, form: Form) -> Tuple[Form, Form]:
    """(a₇, a₁₄): eigenvalues +2 and −1 of a ↦ ∗(a∧φ)."""
    if form.degree != 2:
        raise StructuralError(f"project2 needs a 2-form, got degree {form.degree}")
    twisted = structure.star(form.wedge(structure.phi))
    a7 = (form + twisted) / 3
    a14 = (2 * form - twisted) / 3
    return a7, a14


def project3_g2(structure: G2Geometry, form: Form) -> Tuple[Form, Form, Form]:
    """(c₁, c₇, c₂₇) with c₇ = −¼∗(∗(c∧φ)∧φ)."""
    if form.degree != 3:
        raise StructuralError(f"project3 needs a 3-form, got degree {form.degree}")
    phi = structure.phi
    c1 = structure.inner(form, phi) / 7 * phi
    c7 = -sympy.Rational(1, 4) * structure.star(structure.star(form.wedge(phi)).wedge(phi))
    c27 = form - c1 - c7
    return c1, c7, c27


def instanton_type(structure: G2Geometry, curvature: Form, checker: Checker = DEFAULT_CHECKER) -> str:
    a7, a14 = project2_g2(structure, curvature)
    flat7, flat14 = checker.vanishes(a7), checker.vanishes(a14)
    if flat7 and flat14:
        return "flat"
    if flat7:
        return "instanton"
    if flat14:
        return "anti-instanton"
    return "mixed"


# ------------------------------------------------------------------ torsion


@dataclass(frozen=True)
class G2Torsion:
    """τ₃ is stored as the 3-form whose Hodge dual appears in dφ."""

    tau0: sympy.Expr
    tau1: Form
    tau2: Form
    tau3: Form

    def is_zero(self, checker: Checker = DEFAULT_CHECKER) -> bool:
        return checker.vanishes([self.tau1, self.tau2, self.tau3, self.tau0], self.tau1.algebra)


def g2_torsion(structure: G2Geometry) -> G2Torsion:
    star, phi, psi = structure.star, structure.phi, structure.psi
    dphi = phi.d()
    tau0 = normalize(structure.inner(dphi, psi) / 7)
    tau1 = -sympy.Rational(1, 12) * star(star(dphi).wedge(phi))
    tau3 = star(dphi - tau0 * psi - 3 * tau1.wedge(phi))
    tau2 = -star(psi.d() - 4 * tau1.wedge(psi))
    return G2Torsion(tau0, tau1, tau2, tau3)


def torsion_residuals(structure: G2Geometry, torsion: G2Torsion) -> Dict[str, Form]:
    """Forms that vanish when the torsion decomposition is consistent."""
    star, phi, psi = structure.star, structure.phi, structure.psi
    return {
        "dphi reconstruction": phi.d() - torsion.tau0 * psi - 3 * torsion.tau1.wedge(phi) - star(torsion.tau3),
        "dpsi reconstruction": psi.d() - 4 * torsion.tau1.wedge(psi) - torsion.tau2.wedge(phi),
        "tau2 in 14": torsion.tau2.wedge(psi),
        "tau3 wedge phi": torsion.tau3.wedge(phi),
        "tau3 wedge psi": torsion.tau3.wedge(psi),
    }


def checked_torsion(structure: G2Geometry, checker: Checker = DEFAULT_CHECKER) -> G2Torsion:
    torsion = g2_torsion(structure)
    for name, residual in torsion_residuals(structure, torsion).items():
        checker.require(residual, f"G2 torsion {name}", structure.algebra)
    return torsion


def scal_from_torsion(structure: G2Geometry, torsion: Optional[G2Torsion] = None) -> sympy.Expr:
    """Scal(g_φ) = 12δτ₁ + (21/8)τ₀² + 30‖τ₁‖² − ½‖τ₂‖² − ½‖τ₃‖²."""
    t = torsion or g2_torsion(structure)
    half = sympy.Rational(1, 2)
    value = (
        12 * structure.codiff(t.tau1).scalar_value()
        + sympy.Rational(21, 8) * t.tau0 ** 2
        + 30 * structure.norm_sq(t.tau1)
        - half * structure.norm_sq(t.tau2)
        - half * structure.norm_sq(t.tau3)
    )
    return normalize(value)


def seven_module_residuals(structure: G2Geometry, alpha: Form, beta7: Form) -> Dict[str, Form]:
    """Identities relating φ, ∗φ and the seven-dimensional modules."""
    star, phi, psi = structure.star, structure.phi, structure.psi
    quarter, third = sympy.Rational(1, 4), sympy.Rational(1, 3)
    return {
        "beta7 psi identity": 2 * star(beta7.wedge(psi)).wedge(psi) - 3 * beta7.wedge(phi),
        "alpha phi identity": star(alpha) + quarter * star(alpha.wedge(phi)).wedge(phi),
        "alpha psi identity": star(alpha) - third * star(alpha.wedge(psi)).wedge(psi),
    }


# ------------------------------------------------------------------ SU(3)


@dataclass(frozen=True)
class SU3Data:
    omega: Form
    omega_plus: Form
    omega_minus: Form

    def compatibility_residuals(self) -> Dict[str, Form]:
        omega = self.omega
        return {
            "omega wedge re": omega.wedge(self.omega_plus),
            "omega wedge im": omega.wedge(self.omega_minus),
            "volume normalisation": sympy.Rational(2, 3) * omega.wedge(omega).wedge(omega)
            - self.omega_plus.wedge(self.omega_minus),
        }


def hypersurface_su3(
    structure: G2Structure, normal: VectorField, checker: Checker = DEFAULT_CHECKER
) -> SU3Data:
    """ω = ι_nφ, Ω⁺ = tangential part of φ, Ω⁻ = −ι_n∗φ."""
    if normal.algebra is not structure.algebra:
        raise StructuralError("normal lives on a different algebra")
    checker.require(normal.norm_sq() - 1, "unit normal condition", structure.algebra, error=PreconditionError)
    omega = structure.phi.interior(normal)
    return SU3Data(
        omega=omega,
        omega_plus=restrict_tangential(structure.phi, normal),
        omega_minus=-structure.psi.interior(normal),
    )
