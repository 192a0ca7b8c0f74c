"""Spin(7)-structures: model 4-form, Λ² types, the i/j maps, torsion and curvature formulas."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import sympy

from .errors import StructuralError
from .frame_algebra import Form, FrameAlgebra, SymTensor
from .g2 import PHI0_TERMS, PSI0_TERMS, model_form
from .residuals import DEFAULT_CHECKER, Checker
from .scalars import normalize

logger = logging.getLogger(__name__)

TORSION_FREE = "torsion_free"
BALANCED = "balanced"
LOCALLY_CONFORMALLY_PARALLEL = "locally_conformally_parallel"
GENERIC = "generic"


def standard_Phi0(algebra: FrameAlgebra) -> Form:
    """Φ₀ = e⁰∧φ₀ + ∗φ₀ with φ₀ on e¹..e⁷."""
    if algebra.dim != 8:
        raise StructuralError(f"the model 4-form needs an 8-dimensional algebra, got {algebra.dim}")
    return algebra.e(0).wedge(model_form(algebra, PHI0_TERMS, 1)) + model_form(algebra, PSI0_TERMS, 1)


class Spin7Structure:
    def __init__(
        self,
        algebra: FrameAlgebra,
        Phi: Form,
        name: str = "",
        checker: Optional[Checker] = DEFAULT_CHECKER,
    ):
        if algebra.dim != 8:
            raise StructuralError(f"Spin(7)-structure needs an 8-dimensional algebra, got {algebra.dim}")
        if Phi.algebra is not algebra or Phi.degree != 4:
            raise StructuralError("Φ must be a 4-form on the structure's algebra")
        self.algebra = algebra
        self.Phi = Phi
        self.name = name or algebra.name
        if checker is not None:
            checker.require(Phi.wedge(Phi) - 14 * algebra.volume(), "Φ∧Φ − 14 vol", error=StructuralError)
            checker.require(Phi.hodge() - Phi, "∗Φ − Φ", error=StructuralError)

    def __repr__(self) -> str:
        return f"Spin7Structure({self.name})"

    @property
    def metric(self) -> SymTensor:
        return SymTensor.identity(self.algebra)

    def star(self, form: Form) -> Form:
        return form.hodge()

    def inner(self, a: Form, b: Form) -> sympy.Expr:
        return a.inner(b)

    def norm_sq(self, form: Form) -> sympy.Expr:
        return form.norm_sq()

    def codiff(self, form: Form) -> Form:
        return form.codiff()

    def volume(self) -> Form:
        return self.algebra.volume()

    def torsion(self) -> "Spin7Torsion":
        return spin7_torsion(self)


@dataclass(frozen=True)
class Spin7Torsion:
    T1: Form
    T5: Form


def spin7_torsion(structure: Spin7Structure) -> Spin7Torsion:
    """T¹ = −(1/7)∗(∗dΦ∧Φ), T⁵ = dΦ − T¹∧Φ."""
    Phi = structure.Phi
    dPhi = Phi.d()
    T1 = -sympy.Rational(1, 7) * dPhi.hodge().wedge(Phi).hodge()
    return Spin7Torsion(T1, dPhi - T1.wedge(Phi))


def torsion_residuals(structure: Spin7Structure, torsion: Spin7Torsion) -> Dict[str, Form]:
    return {"T5 type condition": torsion.T5.hodge().wedge(structure.Phi)}


def checked_torsion(structure: Spin7Structure, checker: Checker = DEFAULT_CHECKER) -> Spin7Torsion:
    torsion = spin7_torsion(structure)
    for name, residual in torsion_residuals(structure, torsion).items():
        checker.require(residual, f"Spin(7) {name}", structure.algebra)
    return torsion


def classify(structure: Spin7Structure, checker: Checker = DEFAULT_CHECKER, torsion=None) -> str:
    torsion = torsion or spin7_torsion(structure)
    t1_zero = checker.vanishes(torsion.T1)
    t5_zero = checker.vanishes(torsion.T5)
    if t1_zero and t5_zero:
        return TORSION_FREE
    if t1_zero:
        return BALANCED
    if t5_zero:
        return LOCALLY_CONFORMALLY_PARALLEL
    return GENERIC


def project2_spin7(structure: Spin7Structure, form: Form) -> Tuple[Form, Form]:
    """(a₇, a₂₁): eigenvalues +3 and −1 of a ↦ ∗(a∧Φ)."""
    if form.degree != 2:
        raise StructuralError(f"project2 needs a 2-form, got degree {form.degree}")
    twisted = form.wedge(structure.Phi).hodge()
    return (form + twisted) / 4, (3 * form - twisted) / 4


# ------------------------------------------------------------------ i and j


def symmetric_basis(dim: int) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(dim) for b in range(a, dim)]


def insert_i(structure: Spin7Structure, h: SymTensor) -> Form:
    """i(h) = 2 Σ_ab h_ab e^a∧∗(e^b∧Φ), so that i(g) = 8Φ."""
    algebra, Phi = structure.algebra, structure.Phi
    result = algebra.zero(4)
    for b in range(8):
        dual = algebra.e(b).wedge(Phi).hodge()
        column = algebra.one_form([h[a, b] for a in range(8)])
        if not column.is_zero():
            result = result + column.wedge(dual)
    return 2 * result


@lru_cache(maxsize=16)
def _j_system(phi_terms: Tuple[Tuple[Tuple[int, ...], sympy.Expr], ...]):
    """Basis images i(E_ab) and the inverse Gram matrix for a constant Φ."""
    scratch = FrameAlgebra([f"e{i}" for i in range(8)], name="j-scratch").freeze()
    Phi = scratch.form(4, dict(phi_terms))
    structure = Spin7Structure(scratch, Phi, checker=None)
    images = []
    for a, b in symmetric_basis(8):
        matrix = sympy.zeros(8, 8)
        matrix[a, b] = matrix[b, a] = 1
        images.append(insert_i(structure, SymTensor(scratch, matrix)))
    gram = sympy.Matrix(len(images), len(images), lambda k, l: images[k].inner(images[l]))
    logger.debug("inverting the %dx%d Gram matrix of i", gram.rows, gram.cols)
    return tuple(dict(img.terms) for img in images), gram.inv()


def extract_j(structure: Spin7Structure, K: Form) -> SymTensor:
    """Inverse of i on its image, zero on the orthogonal complement."""
    if K.degree != 4:
        raise StructuralError(f"j needs a 4-form, got degree {K.degree}")
    Phi = structure.Phi
    if any(c.free_symbols for c in Phi.coefficients()):
        raise StructuralError("j needs Φ with constant coefficients in the coframe")
    image_terms, gram_inverse = _j_system(tuple(Phi.terms.items()))
    pairings = sympy.Matrix(
        [sympy.Add(*(c * K.terms.get(idx, 0) for idx, c in terms.items())) for terms in image_terms]
    )
    coefficients = gram_inverse * pairings
    matrix = sympy.zeros(8, 8)
    for (a, b), c in zip(symmetric_basis(8), coefficients):
        matrix[a, b] = matrix[b, a] = c
    return SymTensor(structure.algebra, matrix)


# ------------------------------------------------------------------ curvature


def scal_from_torsion(structure: Spin7Structure, torsion: Optional[Spin7Torsion] = None) -> sympy.Expr:
    """Scal = (7/2)δT¹ + (21/8)‖T¹‖² − ½‖T⁵‖²."""
    t = torsion or spin7_torsion(structure)
    value = (
        sympy.Rational(7, 2) * t.T1.codiff().scalar_value()
        + sympy.Rational(21, 8) * t.T1.norm_sq()
        - sympy.Rational(1, 2) * t.T5.norm_sq()
    )
    return normalize(value)


def ricci_from_torsion(structure: Spin7Structure, torsion: Optional[Spin7Torsion] = None) -> SymTensor:
    t = torsion or spin7_torsion(structure)
    algebra, Phi = structure.algebra, structure.Phi
    T1, T5 = t.T1, t.T5
    trace_part = (
        sympy.Rational(5, 8) * T1.codiff().scalar_value()
        + sympy.Rational(3, 8) * T1.norm_sq()
        - sympy.Rational(2, 7) * T5.norm_sq()
    )
    star_T5 = T5.hodge()
    K = (
        -3 * T1.wedge(Phi).codiff()
        + 4 * T5.codiff()
        - 2 * T1.wedge(star_T5)
        - sympy.Rational(9, 4) * T1.wedge(Phi).hodge().wedge(T1)
    )
    contractions = [star_T5.interior(algebra.frame_vector(a)) for a in range(8)]
    h = sympy.Matrix(8, 8, lambda a, b: contractions[a].inner(contractions[b]))
    return SymTensor(algebra, sympy.eye(8) * trace_part) + extract_j(structure, K) + SymTensor(algebra, h / 2)


def balanced_identity(structure: Spin7Structure) -> Form:
    """‖dΦ‖² vol + d∗dΦ∧Φ, which vanishes for balanced structures."""
    dPhi = structure.Phi.d()
    return dPhi.norm_sq() * structure.volume() + dPhi.hodge().d().wedge(structure.Phi)
