import numpy as np
import pytest
import sympy

from holoquot.curvature import (
    RadialProfile,
    curvature_of,
    holonomy_span_rank,
    levi_civita,
    log_log_slope,
    ricci_lc,
    rm_decay_slope,
    rm_norm_sq,
    scal_lc,
    volume_growth_slope,
)
from holoquot.errors import AmbiguousRankError
from holoquot.residuals import Checker
from holoquot.scalars import generator_symbol
from tests.utils import flat_algebra, heisenberg, hyperbolic_plane, round_three_sphere, vanishes


@pytest.mark.unit
class TestLeviCivita:
    """Connection and curvature forms of small metric algebras."""

    @pytest.mark.parametrize("build", [heisenberg, hyperbolic_plane, round_three_sphere])
    def test_structure_equations_hold(self, build):
        algebra = build()
        connection = levi_civita(algebra)
        assert vanishes(connection.first_structure_residuals(), algebra)
        curvature = curvature_of(algebra)
        assert vanishes(curvature.bianchi_residuals(), algebra)

    def test_connection_is_skew(self):
        connection = levi_civita(round_three_sphere())
        for a in range(3):
            for b in range(3):
                assert (connection[a, b] + connection[b, a]).is_zero()

    def test_flat(self):
        curvature = curvature_of(flat_algebra(4))
        assert scal_lc(curvature) == 0
        assert rm_norm_sq(curvature) == 0

    def test_hyperbolic_plane(self):
        curvature = curvature_of(hyperbolic_plane())
        assert scal_lc(curvature) == -2
        assert ricci_lc(curvature).matrix == -sympy.eye(2)

    def test_round_three_sphere(self):
        curvature = curvature_of(round_three_sphere())
        assert scal_lc(curvature) == sympy.Rational(3, 2)
        assert ricci_lc(curvature).matrix == sympy.eye(3) / 2
        assert rm_norm_sq(curvature) == sympy.Rational(3, 16)

    def test_heisenberg_scalar_curvature(self):
        # −¼‖de³‖² for a nilpotent metric algebra
        assert scal_lc(curvature_of(heisenberg())) == sympy.Rational(-1, 4)


@pytest.mark.unit
class TestHolonomySpan:
    def test_ranks(self):
        checker = Checker(points=3)
        for build, expected in [(hyperbolic_plane, 1), (round_three_sphere, 3)]:
            algebra = build()
            assert holonomy_span_rank(curvature_of(algebra), checker.points_for(algebra)) == expected

    def test_flat_span_is_empty(self):
        algebra = flat_algebra(3)
        assert holonomy_span_rank(curvature_of(algebra), Checker(points=2).points_for(algebra)) == 0

    def test_unstable_rank_is_reported(self, mocker):
        algebra = round_three_sphere()
        mocker.patch("holoquot.curvature.np.linalg.svd", return_value=np.array([1.0, 1e-7, 1e-9]))
        with pytest.raises(AmbiguousRankError) as excinfo:
            holonomy_span_rank(curvature_of(algebra), Checker(points=1).points_for(algebra))
        assert excinfo.value.ranks == [1, 2, 3]


@pytest.mark.unit
class TestAsymptotics:
    def test_log_log_slope(self):
        xs = [1.0, 2.0, 4.0, 8.0]
        assert log_log_slope(xs, [x ** 2 for x in xs]) == pytest.approx(2.0)

    def test_volume_growth(self):
        slope = volume_growth_slope(lambda x: 3 * x ** 2, lambda x: x, [1.0, 2.0, 5.0, 10.0])
        assert slope == pytest.approx(3.0)

    def test_radial_profile_of_euclidean_space_in_half_radius(self):
        r = generator_symbol("r")
        profile = RadialProfile(r, sympy.Integer(2), 4 * sympy.pi * r ** 2)
        assert profile.distance(3.0) == pytest.approx(6.0)
        assert profile.radius_at(6.0) == pytest.approx(3.0)
        assert profile.volume_growth_slope([2.0, 20.0, 200.0]) == pytest.approx(3.0)

    def test_constant_curvature_does_not_decay(self):
        algebra = round_three_sphere()
        points = [algebra.point() for _ in range(3)]
        radii = iter([1.0, 2.0, 3.0])
        slope = rm_decay_slope(curvature_of(algebra), points, lambda _: next(radii))
        assert slope == pytest.approx(0.0, abs=1e-12)

    def test_hyperbolic_decay_in_y(self):
        # constant curvature: ‖Rm‖ is independent of y
        algebra = hyperbolic_plane()
        points = [algebra.point(y=y) for y in (1.0, 2.0, 4.0)]
        slope = rm_decay_slope(curvature_of(algebra), points, lambda p: p["y"])
        assert slope == pytest.approx(0.0, abs=1e-12)
