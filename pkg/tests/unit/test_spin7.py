import pytest
import sympy
from hypothesis import given, settings

from holoquot.errors import StructuralError
from holoquot.frame_algebra import FrameAlgebra, SymTensor
from holoquot.spin7 import (
    LOCALLY_CONFORMALLY_PARALLEL,
    TORSION_FREE,
    Spin7Structure,
    balanced_identity,
    classify,
    extract_j,
    insert_i,
    project2_spin7,
    ricci_from_torsion,
    scal_from_torsion,
    spin7_torsion,
    standard_Phi0,
    torsion_residuals,
)
from tests.utils import flat_algebra, forms

FLAT8 = flat_algebra(8, "flat8")
MODEL = Spin7Structure(FLAT8, standard_Phi0(FLAT8))


@pytest.mark.unit
class TestModelForm:
    """Φ₀ and the structure checks."""

    def test_model_form_has_fourteen_terms(self):
        assert len(MODEL.Phi.terms) == 14

    def test_self_dual(self):
        assert (MODEL.Phi.hodge() - MODEL.Phi).is_zero()

    def test_scaled_form_is_rejected(self):
        with pytest.raises(StructuralError):
            Spin7Structure(FLAT8, 2 * standard_Phi0(FLAT8))

    def test_wrong_dimension(self):
        with pytest.raises(StructuralError):
            standard_Phi0(flat_algebra(7))

    def test_flat_is_torsion_free(self):
        torsion = spin7_torsion(MODEL)
        assert torsion.T1.is_zero() and torsion.T5.is_zero()
        assert classify(MODEL) == TORSION_FREE
        assert scal_from_torsion(MODEL) == 0
        assert balanced_identity(MODEL).is_zero()


@pytest.mark.unit
class TestConformalChange:
    """A conformal rescaling of Φ₀ is locally conformally parallel."""

    @pytest.fixture
    def conformal(self):
        """Φ₀ on a conformally flat coframe: de^i = e^0∧e^i for i > 0."""
        algebra = FrameAlgebra([f"e{i}" for i in range(8)], {"u": True}, name="conformal")
        u = algebra.symbol("u")
        # e^i = u dx^i with du = u e^0, so de^i = e^0∧e^i
        for i in range(1, 8):
            algebra.declare_structure(i, algebra.e(0, i))
        algebra.declare_differential("u", algebra.form(1, {(0,): u}))
        algebra.freeze()
        return Spin7Structure(algebra, standard_Phi0(algebra))

    def test_classified_as_lcp(self, conformal):
        torsion = spin7_torsion(conformal)
        assert not torsion.T1.is_zero()
        assert torsion.T5.is_zero()
        assert classify(conformal) == LOCALLY_CONFORMALLY_PARALLEL

    def test_type_condition(self, conformal):
        residuals = torsion_residuals(conformal, spin7_torsion(conformal))
        assert residuals["T5 type condition"].is_zero()


@pytest.mark.unit
class TestIJMaps:
    """The i and j maps between symmetric tensors and 4-forms."""

    def test_i_of_the_metric(self):
        assert (insert_i(MODEL, SymTensor.identity(FLAT8)) - 8 * MODEL.Phi).is_zero()

    @pytest.mark.slow
    def test_j_inverts_i(self):
        matrix = sympy.zeros(8, 8)
        matrix[0, 0], matrix[1, 2], matrix[2, 1], matrix[3, 7], matrix[7, 3] = 2, 1, 1, -3, -3
        h = SymTensor(FLAT8, matrix)
        assert extract_j(MODEL, insert_i(MODEL, h)).matrix == h.matrix

    @pytest.mark.slow
    def test_ricci_of_flat_space(self):
        assert ricci_from_torsion(MODEL).matrix == sympy.zeros(8, 8)

    def test_j_needs_a_four_form(self):
        with pytest.raises(StructuralError):
            extract_j(MODEL, FLAT8.e(0, 1))


@pytest.mark.unit
@pytest.mark.property
@settings(max_examples=100, deadline=None)
@given(forms(FLAT8, 2, max_terms=8))
def test_two_forms_split_into_seven_and_twenty_one(a):
    a7, a21 = project2_spin7(MODEL, a)
    assert (a7 + a21 - a).is_zero()
    assert (a7.wedge(MODEL.Phi).hodge() - 3 * a7).is_zero()
    assert (a21.wedge(MODEL.Phi).hodge() + a21).is_zero()
