import numpy as np
import pytest
import sympy

from holoquot.errors import DomainError, PreconditionError, StructuralError
from holoquot.frame_algebra import FrameAlgebra
from holoquot.g2 import G2Structure, SU3Data, project2_g2, standard_phi0
from holoquot.nilmanifolds import nil_cy_su3
from holoquot.quotient import (
    assemble,
    balanced_lift,
    calabi_ansatz,
    calabi_metric,
    calabi_profile,
    calabi_residuals,
    commuting_residuals,
    from_base,
    gibbons_hawking,
    hodge_transfer_residuals,
    reduce,
    round_trip_residuals,
    t2_quotient_identity,
    t2_reduction,
    torsion_budget,
    torsion_free_curvature,
    torsion_relations,
)
from holoquot.scalars import generator_symbol
from holoquot.spin7 import BALANCED, TORSION_FREE, Spin7Structure, classify, standard_Phi0
from tests.utils import flat_algebra, nilpotent_seven, vanishes


def g2(algebra):
    return G2Structure(algebra, standard_phi0(algebra), name=algebra.name)


@pytest.fixture(scope="module")
def flat_base():
    return g2(flat_algebra(7, "flat7"))


@pytest.fixture(scope="module")
def nil_quotient():
    base = g2(nilpotent_seven())
    return from_base(base, 1, base.algebra.e("e1", "e2"))


@pytest.mark.unit
class TestAssemble:
    """Quotient data to Spin(7)-structure and back."""

    def test_trivial_bundle_gives_the_model_form(self, flat_base):
        q = from_base(flat_base, 1, flat_base.algebra.zero(2))
        assert q.total.labels[0] == "eta"
        assert (assemble(q).Phi - standard_Phi0(q.total)).is_zero()
        assert classify(assemble(q)) == TORSION_FREE

    def test_constant_fibre_size(self, flat_base):
        q = from_base(flat_base, 2, flat_base.algebra.zero(2))
        assert q.sigma == sympy.Integer(2) ** sympy.Rational(4, 3)
        for name, residual in round_trip_residuals(q).items():
            assert vanishes(residual, q.total), name

    def test_round_trip_over_a_nilmanifold(self, nil_quotient):
        for name, residual in round_trip_residuals(nil_quotient).items():
            assert vanishes(residual, nil_quotient.total), name

    def test_lift_and_descend(self, nil_quotient):
        base = nil_quotient.base.algebra
        form = base.e("e1", "e3") - 2 * base.e("e4", "e7")
        assert (nil_quotient.descend(nil_quotient.lift(form)) - form).is_zero()

    def test_descend_rejects_vertical_forms(self, nil_quotient):
        with pytest.raises(StructuralError):
            nil_quotient.descend(nil_quotient.eta)


@pytest.mark.unit
class TestHodgeTransfer:
    @pytest.mark.parametrize("s", [1, 3])
    def test_flat(self, flat_base, s):
        q = from_base(flat_base, s, flat_base.algebra.zero(2))
        for name, residual in hodge_transfer_residuals(q).items():
            assert vanishes(residual, q.total), name

    def test_nilmanifold(self, nil_quotient):
        for name, residual in hodge_transfer_residuals(nil_quotient).items():
            assert vanishes(residual, nil_quotient.total), name


@pytest.mark.unit
class TestTorsionRelations:
    def test_flat_relations_vanish(self, flat_base):
        q = from_base(flat_base, 1, flat_base.algebra.zero(2))
        report = torsion_relations(q)
        report.require(q.total)
        for name, residual in torsion_free_curvature(q).items():
            assert vanishes(residual, q.total), name

    @pytest.mark.slow
    def test_nilmanifold_relations_vanish(self, nil_quotient):
        report = torsion_relations(nil_quotient)
        for name, residual in report.relations.items():
            assert vanishes(residual, nil_quotient.total), name
        gating, _ = torsion_budget(nil_quotient, report)
        for name, residual in gating.items():
            assert vanishes(residual, nil_quotient.total), name


@pytest.mark.unit
class TestPreconditions:
    """Rejected quotient data."""

    def test_curvature_on_another_algebra(self, flat_base):
        other = flat_algebra(7, "other")
        with pytest.raises(PreconditionError):
            from_base(flat_base, 1, other.e("e1", "e2"))

    def test_curvature_must_be_closed(self):
        base = g2(nilpotent_seven())
        with pytest.raises(PreconditionError):
            from_base(base, 1, base.algebra.e("e6", "e7"))

    def test_fibre_size_must_be_positive(self, flat_base):
        with pytest.raises(DomainError):
            from_base(flat_base, -1, flat_base.algebra.zero(2))

    def test_fibre_label_clash(self, flat_base):
        with pytest.raises(StructuralError):
            from_base(flat_base, 1, flat_base.algebra.zero(2), eta_label="e3")

    def test_vanishing_fibre(self, flat_base):
        structure = assemble(from_base(flat_base, 1, flat_base.algebra.zero(2)))
        with pytest.raises(DomainError):
            reduce(structure, structure.algebra.vector([0] * 8))

    def test_fibre_size_must_match_the_norm(self, flat_base):
        structure = assemble(from_base(flat_base, 1, flat_base.algebra.zero(2)))
        fibre = structure.algebra.frame_vector(0)
        with pytest.raises(PreconditionError):
            reduce(structure, fibre, s=2)


@pytest.mark.unit
class TestGibbonsHawking:
    def test_trivial_monopole(self):
        base = flat_algebra(3, "R3")
        gh = gibbons_hawking(base, 1, base.zero(2))
        assert gh.algebra.labels == ("e1", "e2", "e3", "eta")
        for name, residual in gh.residuals().items():
            assert vanishes(residual, gh.algebra), name

    def test_linear_potential(self):
        base = FrameAlgebra(["e1", "e2", "e3"], {"x": True}, name="R3")
        base.declare_differential("x", base.e("e1"))
        base.freeze()
        gh = gibbons_hawking(base, base.symbol("x"), base.e("e2", "e3"))
        for name, residual in gh.residuals().items():
            assert vanishes(residual, gh.algebra), name

    def test_monopole_equation_is_enforced(self):
        base = flat_algebra(3, "R3")
        with pytest.raises(PreconditionError):
            gibbons_hawking(base, 2, base.e("e1", "e2"))

    def test_base_must_be_three_dimensional(self):
        base = flat_algebra(4)
        with pytest.raises(StructuralError):
            gibbons_hawking(base, 1, base.zero(2))


@pytest.fixture(scope="module")
def six_torus():
    cy = flat_algebra(6, "T6")
    return cy, nil_cy_su3(cy)


@pytest.fixture(scope="module")
def calabi(six_torus):
    cy, su3 = six_torus
    q, Phi = calabi_ansatz(cy, su3, "r", generator_symbol("r") ** 3, name="calabi")
    return q, Phi, su3


@pytest.mark.unit
class TestCalabiAnsatz:
    """Circle bundle over T⁶ × ℝ⁺ with dη = −ω and s = r³."""

    def test_decomposition_and_closedness(self, calabi):
        q, Phi, su3 = calabi
        for name, residual in calabi_residuals(q, su3, Phi).items():
            assert vanishes(residual, q.total), name

    def test_metric_in_the_unscaled_coframe(self, calabi):
        q, _, _ = calabi
        r = q.total.symbol("r")
        expected = sympy.diag(r ** -6, *([r ** 2] * 7))
        difference = calabi_metric(q).matrix - expected
        assert all(sympy.simplify(entry) == 0 for entry in difference)

    def test_radial_profile_is_read_from_the_metric(self, calabi):
        q, _, _ = calabi
        profile = calabi_profile(q, "r")
        r = profile.variable
        assert sympy.simplify(profile.speed - 2 * r ** 4) == 0
        assert sympy.simplify(profile.density - 2 * r ** 7) == 0
        assert profile.radius_at(0.4 * 2 ** 5) == pytest.approx(2.0, rel=1e-8)

    def test_volume_growth_exponent(self, calabi):
        q, _, _ = calabi
        slope = calabi_profile(q, "r").volume_growth_slope(np.geomspace(10.0, 1000.0, 12))
        assert slope == pytest.approx(1.6, abs=1e-6)

    def test_exponent_does_not_depend_on_the_radial_parameter(self, six_torus):
        cy, su3 = six_torus
        q, _ = calabi_ansatz(cy, su3, "r", generator_symbol("r"), name="calabi/linear")
        profile = calabi_profile(q, "r")
        r = profile.variable
        assert sympy.simplify(profile.speed - sympy.Rational(2, 3) * r ** sympy.Rational(2, 3)) == 0
        assert profile.volume_growth_slope(np.geomspace(10.0, 1000.0, 8)) == pytest.approx(1.6, abs=1e-6)

    def test_vanishing_kahler_form(self, six_torus):
        cy, su3 = six_torus
        data = SU3Data(omega=cy.zero(2), omega_plus=su3.omega_plus, omega_minus=su3.omega_minus)
        with pytest.raises(PreconditionError):
            calabi_ansatz(cy, data, "r", generator_symbol("r") ** 3)

    def test_curvature_must_be_minus_omega(self, six_torus):
        cy, su3 = six_torus
        with pytest.raises(PreconditionError):
            calabi_ansatz(cy, su3, "r", generator_symbol("r") ** 3, deta=cy.zero(2))

    def test_su3_compatibility(self, six_torus):
        cy, su3 = six_torus
        data = SU3Data(omega=su3.omega, omega_plus=2 * su3.omega_plus, omega_minus=su3.omega_minus)
        with pytest.raises(PreconditionError):
            calabi_ansatz(cy, data, "r", generator_symbol("r") ** 3)

    def test_base_must_be_six_dimensional(self):
        cy = flat_algebra(4, "T4")
        form = cy.e("e1", "e2")
        with pytest.raises(StructuralError):
            calabi_ansatz(cy, SU3Data(form, cy.zero(3), cy.zero(3)), "r", generator_symbol("r") ** 3)


@pytest.mark.unit
class TestBalancedLift:
    """s ≡ 1 lifts with dη = λ − 4∗(τ₁∧∗φ)."""

    def test_lift_over_the_flat_base(self, flat_base):
        _, lam = project2_g2(flat_base, flat_base.algebra.e("e2", "e3"))
        q, Phi = balanced_lift(flat_base, lam)
        assert vanishes(q.curvature - q.lift(lam), q.total)
        assert classify(Phi) == BALANCED

    def test_base_with_scalar_torsion(self):
        flat = flat_algebra(7, "flat7/contact")
        alpha = standard_phi0(flat).interior(flat.frame_vector("e7"))
        algebra = FrameAlgebra([f"e{i}" for i in range(1, 8)], name="contact")
        algebra.declare_structure("e7", algebra.form(2, dict(alpha.terms)))
        base = g2(algebra.freeze())
        with pytest.raises(PreconditionError):
            balanced_lift(base, algebra.zero(2))

    def test_lambda_must_lie_in_the_fourteen_part(self, flat_base):
        lam, _ = project2_g2(flat_base, flat_base.algebra.e("e2", "e3"))
        with pytest.raises(PreconditionError):
            balanced_lift(flat_base, lam)

    def test_curvature_must_be_closed(self):
        algebra = FrameAlgebra([f"e{i}" for i in range(1, 8)], {"x": True}, name="flat7/x")
        algebra.declare_differential("x", algebra.e("e1"))
        base = g2(algebra.freeze())
        _, beta = project2_g2(base, algebra.e("e2", "e3"))
        with pytest.raises(PreconditionError):
            balanced_lift(base, algebra.symbol("x") * beta)


@pytest.mark.unit
class TestTorusReduction:
    """Second reduction of flat R⁸ along orthonormal commuting fields."""

    @pytest.fixture(scope="class")
    def reduction(self):
        algebra = FrameAlgebra([f"e{i}" for i in range(8)], name="flat8").freeze()
        Phi = Spin7Structure(algebra, standard_Phi0(algebra), name="flat8")
        q = reduce(Phi, algebra.frame_vector("e0"))
        Y = algebra.frame_vector("e1")
        return q, Y, Phi

    def test_reduction_data(self, reduction):
        q, Y, _ = reduction
        t2 = t2_reduction(q, Y)
        assert sympy.simplify(t2.H - 1) == 0
        assert (t2.xi - q.total.e("e1")).is_zero()
        assert (t2.omega - q.total.e("e2", "e3") - q.total.e("e4", "e5") - q.total.e("e6", "e7")).is_zero()

    def test_quotient_identity(self, reduction):
        q, Y, Phi = reduction
        assert vanishes(t2_quotient_identity(q, t2_reduction(q, Y), Phi.Phi), q.total)

    def test_commuting_fields(self, reduction):
        q, Y, Phi = reduction
        residuals = commuting_residuals(q, Y, Phi.Phi)
        assert residuals["Y preserves Phi"].is_zero()
        assert all(c == 0 for c in residuals["X and Y commute"].components)
