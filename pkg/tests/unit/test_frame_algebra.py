from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from holoquot.errors import StructuralError
from holoquot.frame_algebra import (
    Form,
    FrameAlgebra,
    SymTensor,
    eval_at,
    equals_exact,
    equals_numeric,
    reframe,
    restrict_tangential,
    sort_sign,
    wedge,
)
from tests.utils import flat_algebra, forms, heisenberg, hyperbolic_plane

FLAT4 = flat_algebra(4, "flat4")
FLAT5 = flat_algebra(5, "flat5")
HEIS = heisenberg()


@pytest.mark.unit
class TestDeclarations:
    """Building and freezing algebras."""

    def test_labels_must_be_distinct(self):
        with pytest.raises(StructuralError):
            FrameAlgebra(["a", "a"])

    def test_frozen_algebra_rejects_declarations(self):
        algebra = flat_algebra(2)
        with pytest.raises(StructuralError):
            algebra.declare_structure("e1", algebra.e("e1", "e2"))

    def test_structure_must_be_a_two_form(self):
        algebra = FrameAlgebra(["a", "b"])
        with pytest.raises(StructuralError):
            algebra.declare_structure("a", algebra.e("a"))

    def test_duplicate_generator(self):
        algebra = FrameAlgebra(["a"], {"t": True})
        with pytest.raises(StructuralError):
            algebra.add_generator("t")

    def test_unknown_label(self):
        with pytest.raises(StructuralError):
            FLAT4.index_of("e9")

    def test_undeclared_generator_has_zero_differential(self):
        algebra = FrameAlgebra(["a"], {"t": True}).freeze()
        assert algebra.differential(algebra.symbol("t")).is_zero()


@pytest.mark.unit
class TestForms:
    """Sparse forms and their basic algebra."""

    def test_sort_sign(self):
        assert sort_sign((2, 0, 1)) == (1, (0, 1, 2))
        assert sort_sign((1, 0)) == (-1, (0, 1))
        assert sort_sign((1, 1)) == (0, ())

    def test_basis_reordering(self):
        assert (FLAT4.e("e2", "e1") + FLAT4.e("e1", "e2")).is_zero()
        assert FLAT4.e("e1", "e1").is_zero()

    def test_indices_must_increase(self):
        with pytest.raises(StructuralError):
            Form(FLAT4, 2, {(1, 0): 1})

    def test_index_range(self):
        with pytest.raises(StructuralError):
            Form(FLAT4, 1, {(4,): 1})

    def test_forms_on_different_algebras_do_not_mix(self):
        with pytest.raises(StructuralError):
            FLAT4.e("e1") + FLAT5.e("e1")

    def test_degree_mismatch(self):
        with pytest.raises(StructuralError):
            FLAT4.e("e1") + FLAT4.e("e1", "e2")

    def test_coefficient_lookup_follows_order(self):
        form = 3 * FLAT4.e("e1", "e3")
        assert form.coefficient("e3", "e1") == -3

    def test_wedge_of_several(self):
        product = wedge(FLAT4.e("e1"), FLAT4.e("e2"), FLAT4.e("e3"))
        assert dict(product.terms) == {(0, 1, 2): 1}

    def test_hodge_in_three_dimensions(self):
        algebra = flat_algebra(3)
        assert dict(algebra.e("e1").hodge().terms) == {(1, 2): 1}
        assert dict(algebra.e("e2").hodge().terms) == {(0, 2): -1}
        assert dict(algebra.volume().hodge().terms) == {(): 1}

    def test_interior(self):
        X = FLAT4.frame_vector("e1")
        assert dict(FLAT4.e("e1", "e2").interior(X).terms) == {(1,): 1}
        assert dict(FLAT4.e("e2", "e1").interior(X).terms) == {(1,): -1}

    def test_inner_and_norm(self):
        a = 2 * FLAT4.e("e1", "e2") + FLAT4.e("e3", "e4")
        assert a.norm_sq() == 5
        assert a.inner(FLAT4.e("e1", "e2")) == 2

    def test_scalar_value_needs_degree_zero(self):
        with pytest.raises(StructuralError):
            FLAT4.e("e1").scalar_value()


@pytest.mark.unit
class TestExteriorDerivative:
    """d from the structure equations and the generator differentials."""

    def test_structure_equation(self):
        assert dict(HEIS.e("e3").d().terms) == {(0, 1): 1}

    def test_d_of_a_generator(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        assert dict(algebra.d_scalar(y**2).terms) == {(1,): 2 * y**2}

    def test_d_squared_on_a_consistent_algebra(self):
        assert all(r.is_zero() for r in hyperbolic_plane().d_squared_residuals().values())

    def test_d_squared_detects_a_broken_algebra(self):
        algebra = FrameAlgebra(["e1", "e2", "e3", "e4"], name="broken")
        algebra.declare_structure("e4", algebra.e("e1", "e2"))
        algebra.declare_structure("e1", algebra.e("e3", "e4"))
        algebra.freeze()
        residuals = algebra.d_squared_residuals()
        assert not residuals["d2 e4"].is_zero()

    def test_codifferential_of_constant_forms_on_flat_space(self):
        assert FLAT4.e("e1", "e2").codiff().is_zero()

    def test_cartan_formula_on_scalars(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        X = algebra.frame_vector("e2")
        assert algebra.scalar(y).lie(X).scalar_value() == y

    def test_bracket_from_structure(self):
        e1, e2 = HEIS.frame_vector("e1"), HEIS.frame_vector("e2")
        assert e1.bracket(e2).components == (0, 0, -1)

    def test_basis_differentials_are_shared_across_threads(self):
        algebra = heisenberg()
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda _: algebra.d_basis((2,)), range(64)))
        assert all(r is results[0] for r in results)
        assert dict(results[0].terms) == {(0, 1): 1}


@pytest.mark.unit
class TestNumerics:
    """Evaluation and comparison of forms."""

    def test_eval_at(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        form = algebra.form(1, {(0,): y, (1,): 2})
        values = eval_at(form, algebra.point(y=3.0))
        assert values == {(0,): pytest.approx(3.0), (1,): pytest.approx(2.0)}
        assert form.max_abs(algebra.point(y=3.0)) == pytest.approx(3.0)

    def test_equals_exact_uses_simplify(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        a = algebra.form(1, {(0,): (y**2 - 1) / (y - 1)})
        b = algebra.form(1, {(0,): y + 1})
        assert equals_exact(a, b)

    def test_equals_numeric(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        points = algebra.sample_points(4, seed=1)
        a = algebra.form(1, {(0,): y})
        assert equals_numeric(a, a + algebra.zero(1), points)
        assert not equals_numeric(a, 2 * a, points)

    def test_sample_points_are_seeded(self):
        algebra = hyperbolic_plane()
        first = [p.as_dict() for p in algebra.sample_points(3, seed=7)]
        second = [p.as_dict() for p in algebra.sample_points(3, seed=7)]
        assert first == second
        assert all(0.5 <= p["y"] <= 2.0 for p in first)

    def test_point_lookup_by_name(self):
        algebra = hyperbolic_plane()
        assert algebra.point(y=1.5)["y"] == 1.5


@pytest.mark.unit
class TestTensorsAndReframing:
    """Symmetric tensors, tangential parts and coframe changes."""

    def test_identity_tensor(self):
        g = SymTensor.identity(FLAT4)
        assert g.trace() == 4
        assert g.asymmetry() == [0] * 6
        assert np.allclose(g.evaluate(FLAT4.point()), np.eye(4))

    def test_tensor_shape(self):
        with pytest.raises(StructuralError):
            SymTensor(FLAT4, sympy.eye(3))

    def test_restrict_tangential(self):
        normal = FLAT4.frame_vector("e1")
        form = FLAT4.e("e1", "e2") + FLAT4.e("e3", "e4")
        assert dict(restrict_tangential(form, normal).terms) == {(2, 3): 1}

    def test_reframe_rescales_structure(self):
        framing = reframe(HEIS, sympy.diag(1, 1, 2), labels=["f1", "f2", "f3"], name="heis2")
        target = framing.target
        assert target.frozen
        assert dict(target.structure("f3").terms) == {(0, 1): 2}
        assert dict(framing.push(HEIS.e("e3")).terms) == {(2,): sympy.Rational(1, 2)}

    def test_reframe_pushes_vectors(self):
        framing = reframe(HEIS, sympy.diag(1, 1, 2))
        pushed = framing.push_vector(HEIS.frame_vector("e3"))
        assert pushed.components == (0, 0, 2)

    def test_reframe_with_generators(self):
        algebra = hyperbolic_plane()
        y = algebra.symbol("y")
        framing = reframe(algebra, sympy.diag(y, y))
        target = framing.target
        # y e1 = dx and y e2 = dy are closed
        assert all(target.structure(i).is_zero() for i in range(2))


@pytest.mark.unit
@pytest.mark.property
class TestExteriorAlgebraProperties:
    """Identities that hold for every form."""

    @settings(max_examples=100, deadline=None)
    @given(forms(FLAT5, 2), forms(FLAT5, 1))
    def test_graded_commutativity(self, a, b):
        assert (a.wedge(b) - b.wedge(a) * (-1) ** (a.degree * b.degree)).is_zero()

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=5).flatmap(lambda k: forms(FLAT5, k)))
    def test_double_hodge(self, a):
        sign = (-1) ** (a.degree * (5 - a.degree))
        assert (a.hodge().hodge() - sign * a).is_zero()

    @settings(max_examples=100, deadline=None)
    @given(forms(FLAT5, 2), forms(FLAT5, 2))
    def test_wedge_with_star_is_inner_product(self, a, b):
        assert (a.wedge(b.hodge()) - a.inner(b) * FLAT5.volume()).is_zero()

    @settings(max_examples=100, deadline=None)
    @given(forms(HEIS, 1), forms(HEIS, 1))
    def test_leibniz_rule(self, a, b):
        left = a.wedge(b).d()
        right = a.d().wedge(b) - a.wedge(b.d())
        assert (left - right).is_zero()

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=2).flatmap(lambda k: forms(HEIS, k)))
    def test_d_squared_vanishes(self, a):
        assert a.d().d().is_zero()

    @settings(max_examples=100, deadline=None)
    @given(forms(FLAT5, 2), forms(FLAT5, 2), st.sampled_from(range(5)))
    def test_interior_is_an_antiderivation(self, a, b, i):
        X = FLAT5.frame_vector(i)
        left = a.wedge(b).interior(X)
        right = a.interior(X).wedge(b) + a.wedge(b.interior(X))
        assert (left - right).is_zero()
