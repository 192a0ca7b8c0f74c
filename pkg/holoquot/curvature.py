"""Levi-Civita connection and curvature of an orthonormal coframe by Cartan's structure equations."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import integrate, optimize

from .errors import AmbiguousRankError, ConsistencyError
from .frame_algebra import Form, FrameAlgebra, Point, SymTensor
from .residuals import DEFAULT_CHECKER, Checker
from .scalars import evaluate_many, normalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConnectionForms:
    """ω^a_b with dθ^a = −ω^a_b∧θ^b and ω^a_b = −ω^b_a."""

    algebra: FrameAlgebra
    omega: Tuple[Tuple[Form, ...], ...]

    def __getitem__(self, key) -> Form:
        a, b = key
        return self.omega[a][b]

    def first_structure_residuals(self) -> List[Form]:
        n = self.algebra.dim
        residuals = []
        for a in range(n):
            total = self.algebra.structure(a)
            for b in range(n):
                total = total + self.omega[a][b].wedge(self.algebra.e(b))
            residuals.append(total)
        return residuals


@dataclass(frozen=True)
class CurvatureForms:
    algebra: FrameAlgebra
    F: Tuple[Tuple[Form, ...], ...]

    def __getitem__(self, key) -> Form:
        a, b = key
        return self.F[a][b]

    def bianchi_residuals(self) -> List[Form]:
        n = self.algebra.dim
        return [
            sum((self.F[a][b].wedge(self.algebra.e(b)) for b in range(n)), self.algebra.zero(3))
            for a in range(n)
        ]


def _structure_constants(algebra: FrameAlgebra):
    n = algebra.dim
    D = [[[sympy.Integer(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for (b, c), coeff in algebra.structure(a).items():
            D[a][b][c] = coeff
            D[a][c][b] = -coeff
    return D


def levi_civita(algebra: FrameAlgebra, checker: Optional[Checker] = DEFAULT_CHECKER) -> ConnectionForms:
    """Γ^a_{bc} = ½(D^a_{bc} + D^b_{ca} − D^c_{ab}), ω^a_b = Γ^a_{bc}θ^c."""
    n = algebra.dim
    D = _structure_constants(algebra)
    half = sympy.Rational(1, 2)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            coefficients = [half * (D[a][b][c] + D[b][c][a] - D[c][a][b]) for c in range(n)]
            row.append(algebra.one_form(coefficients))
        rows.append(tuple(row))
    connection = ConnectionForms(algebra, tuple(rows))
    if checker is not None:
        residuals = connection.first_structure_residuals()
        measurement = checker.measure(residuals, algebra)
        if not measurement.passed:
            raise ConsistencyError(
                f"first structure equation fails on {algebra.name!r}", measurement.residual
            )
    return connection


def riemann(connection: ConnectionForms) -> CurvatureForms:
    """F = dω + ω∧ω."""
    algebra, omega = connection.algebra, connection.omega
    n = algebra.dim
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            if b < a:
                row.append(-rows[b][a])
                continue
            total = omega[a][b].d()
            for c in range(n):
                if omega[a][c].is_zero() or omega[c][b].is_zero():
                    continue
                total = total + omega[a][c].wedge(omega[c][b])
            row.append(total)
        rows.append(tuple(row))
    return CurvatureForms(algebra, tuple(rows))


def curvature_of(algebra: FrameAlgebra, checker: Optional[Checker] = DEFAULT_CHECKER) -> CurvatureForms:
    return riemann(levi_civita(algebra, checker))


def ricci_lc(curvature: CurvatureForms) -> SymTensor:
    """Ric_ab = Σ_c F^c_a(e_c, e_b)."""
    algebra = curvature.algebra
    n = algebra.dim
    matrix = sympy.zeros(n, n)
    for a in range(n):
        for b in range(n):
            total = []
            for c in range(n):
                if c == b:
                    continue
                index = (c, b) if c < b else (b, c)
                sign = 1 if c < b else -1
                total.append(sign * curvature.F[c][a].terms.get(index, 0))
            matrix[a, b] = sympy.Add(*total)
    return SymTensor(algebra, matrix)


def scal_lc(curvature: CurvatureForms) -> sympy.Expr:
    return ricci_lc(curvature).trace()


def rm_norm_sq(curvature: CurvatureForms) -> sympy.Expr:
    """Σ_{a<b} ‖F^a_b‖²."""
    n = curvature.algebra.dim
    return normalize(sympy.Add(*(curvature.F[a][b].norm_sq() for a in range(n) for b in range(a + 1, n))))


# ------------------------------------------------------------------ holonomy


def curvature_matrix(curvature: CurvatureForms, point: Point) -> np.ndarray:
    """Rows F(e_c, e_d) for c<d, columns the so(n) entries a<b."""
    n = curvature.algebra.dim
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    exprs = [curvature.F[a][b].terms.get(cd, 0) for cd in pairs for (a, b) in pairs]
    values = evaluate_many(exprs, point.values)
    return values.reshape(len(pairs), len(pairs))


def holonomy_span_rank(
    curvature: CurvatureForms,
    points: Sequence[Point],
    thresholds: Sequence[float] = (1e-6, 1e-8, 1e-10),
) -> int:
    """Dimension of the span of the curvature endomorphisms over the given points."""
    stacked = np.vstack([curvature_matrix(curvature, p) for p in points])
    singular = np.linalg.svd(stacked, compute_uv=False)
    top = float(singular.max()) if singular.size else 0.0
    if top == 0.0:
        return 0
    ranks = [int(np.sum(singular > t * top)) for t in thresholds]
    if len(set(ranks)) != 1:
        raise AmbiguousRankError(f"curvature span rank unstable across thresholds: {ranks}", ranks)
    logger.debug("holonomy span rank %d on %s", ranks[0], curvature.algebra.name)
    return ranks[0]


# ------------------------------------------------------------------ asymptotics


def log_log_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs)), np.log(np.asarray(ys)), 1)
    return float(slope)


def volume_growth_slope(
    density: Callable[[float], float],
    distance: Callable[[float], float],
    radii: Sequence[float],
    start: float = 0.0,
) -> float:
    """Slope of log V against log ρ, where V(x) = ∫ density from ``start`` to x."""
    volumes = [integrate.quad(density, start, x)[0] for x in radii]
    return log_log_slope([distance(x) for x in radii], volumes)


def rm_decay_slope(
    curvature: CurvatureForms,
    points: Sequence[Point],
    distance: Callable[[Point], float],
) -> float:
    norm_sq = rm_norm_sq(curvature)
    values = [float(np.sqrt(evaluate_many([norm_sq], p.values)[0])) for p in points]
    return log_log_slope([distance(p) for p in points], values)


@dataclass(frozen=True)
class RadialProfile:
    """Metric along a positive radial generator: |∂_r| and the volume density in dr.

    Distances and volumes are measured from ``start``.
    """

    variable: sympy.Symbol
    speed: sympy.Expr
    density: sympy.Expr
    start: float = 0.0

    def _at(self, expr: sympy.Expr, r: float) -> float:
        return float(evaluate_many([expr], {self.variable: r})[0])

    def distance(self, r: float) -> float:
        if r <= self.start:
            return 0.0
        return integrate.quad(lambda x: self._at(self.speed, x), self.start, r)[0]

    def volume(self, r: float) -> float:
        if r <= self.start:
            return 0.0
        return integrate.quad(lambda x: self._at(self.density, x), self.start, r)[0]

    def radius_at(self, distance: float) -> float:
        """Inverse of ``distance``; the speed must be positive."""
        upper = self.start + 1.0
        while self.distance(upper) < distance:
            upper = self.start + 2.0 * (upper - self.start)
        return float(optimize.brentq(lambda r: self.distance(r) - distance, self.start, upper))

    def volume_growth_slope(self, distances: Sequence[float]) -> float:
        volumes = [self.volume(self.radius_at(rho)) for rho in distances]
        return log_log_slope(distances, volumes)
