"""Deciding whether a computed quantity vanishes, exactly or at sample points."""

import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Type

import numpy as np
import sympy

from .errors import ConsistencyError, HoloquotError, StructuralError
from .frame_algebra import Form, FrameAlgebra, Point, Sampler, SymTensor, VectorField
from .scalars import as_expr, evaluate_many, is_zero_cheap, is_zero_exact

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Measurement:
    mode: str
    residual: float
    passed: bool


def _expressions(value) -> Tuple[List[sympy.Expr], Optional[FrameAlgebra]]:
    if isinstance(value, Form):
        return value.coefficients(), value.algebra
    if isinstance(value, VectorField):
        return list(value.components), value.algebra
    if isinstance(value, SymTensor):
        return list(value.matrix), value.algebra
    if isinstance(value, (list, tuple)):
        exprs, algebra = [], None
        for item in value:
            sub, sub_algebra = _expressions(item)
            exprs.extend(sub)
            algebra = algebra or sub_algebra
        return exprs, algebra
    return [as_expr(value)], None


class Checker:
    """Vanishing test shared by every suite.

    ``exact`` decides through the sympy normal form and ``simplify``;
    ``numeric`` takes the largest absolute coefficient over the seeded sample
    points; ``auto`` accepts an exact zero of the cheap normal form and falls
    back to the numeric test otherwise.
    """

    def __init__(self, mode: str = "auto", tol: float = 1e-9, points: int = 20, seed: int = 0):
        if mode not in ("exact", "numeric", "auto"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.tol = tol
        self.points = points
        self.seed = seed
        self._cache: Dict[Tuple[int, Optional[int]], List[Point]] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_settings(cls, settings) -> "Checker":
        return cls(settings.mode, settings.tol, settings.points, settings.seed)

    def points_for(self, algebra: FrameAlgebra, sampler: Optional[Sampler] = None) -> List[Point]:
        key = (id(algebra), id(sampler) if sampler else None)
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            cached = algebra.sample_points(self.points, self.seed, sampler)
            with self._lock:
                self._cache[key] = cached
        return cached

    def numeric_residual(self, exprs: Sequence[sympy.Expr], points: Sequence[Point]) -> float:
        exprs = [e for e in exprs if e != 0]
        if not exprs:
            return 0.0
        worst = 0.0
        for point in points:
            values = evaluate_many(exprs, point.values)
            worst = max(worst, float(np.max(np.abs(values))))
        return worst

    def measure(
        self,
        value,
        algebra: Optional[FrameAlgebra] = None,
        points: Optional[Sequence[Point]] = None,
    ) -> Measurement:
        exprs, own_algebra = _expressions(value)
        algebra = algebra or own_algebra
        if self.mode != "numeric" and all(is_zero_cheap(e) for e in exprs):
            return Measurement("exact", 0.0, True)
        if self.mode == "exact":
            if all(is_zero_exact(e) for e in exprs):
                return Measurement("exact", 0.0, True)
            residual = self._informational_residual(exprs, algebra, points)
            return Measurement("exact", residual, False)
        if points is None:
            if algebra is None:
                raise StructuralError("numeric check of a bare scalar needs an algebra")
            points = self.points_for(algebra)
        residual = self.numeric_residual(exprs, points)
        return Measurement("numeric", residual, residual <= self.tol)

    def _informational_residual(self, exprs, algebra, points) -> float:
        try:
            if points is None:
                if algebra is None:
                    return float("nan")
                points = self.points_for(algebra)
            return self.numeric_residual(exprs, points)
        except HoloquotError as exc:
            logger.debug("no numeric residual available: %s", exc)
            return float("nan")

    def vanishes(self, value, algebra: Optional[FrameAlgebra] = None, points=None) -> bool:
        return self.measure(value, algebra, points).passed

    def require(
        self,
        value,
        what: str,
        algebra: Optional[FrameAlgebra] = None,
        error: Type[HoloquotError] = ConsistencyError,
        points=None,
    ) -> Measurement:
        measurement = self.measure(value, algebra, points)
        if not measurement.passed:
            if issubclass(error, ConsistencyError):
                raise error(f"{what} does not vanish", measurement.residual)
            raise error(f"{what} does not vanish (residual {measurement.residual:.3e})")
        return measurement


DEFAULT_CHECKER = Checker()
