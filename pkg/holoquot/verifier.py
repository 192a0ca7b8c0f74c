import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from . import catalog, serialization
from .claims import SUITES, CatalogEntry, Claim, RunContext, curvature
from .config import Settings, settings
from .curvature import scal_lc
from .errors import CatalogError, HoloquotError, ParseError
from .report import CatalogItem, CatalogListing, CheckResult, EvalResult, VerificationReport
from .residuals import Checker
from .scalars import evaluate, parse_prefix

logger = logging.getLogger(__name__)


class VerificationService:
    """Runs suites of claims against catalog entries or user-supplied algebras."""

    def __init__(self, run_settings: Optional[Settings] = None):
        self.settings = run_settings or settings

    # ------------------------------------------------------------ targets

    def resolve(self, target: str) -> CatalogEntry:
        if target in catalog.REGISTRY:
            return catalog.load(target)
        path = Path(target)
        if path.suffix == ".json" or path.exists():
            if not path.exists():
                raise CatalogError(f"no such file: {target}")
            imported = serialization.read(path)
            return catalog.entry_from_algebra(imported, path.stem)
        raise CatalogError(f"unknown target {target!r}: neither a catalog entry nor a JSON file")

    # ------------------------------------------------------------ claims

    def evaluate_claim(self, claim: Claim, ctx: RunContext) -> CheckResult:
        checker = ctx.checker
        try:
            value = claim.compute(ctx)
            if claim.expected is None:
                if isinstance(value, (float, np.floating)):
                    residual = abs(float(value))
                    return self._result(claim, "numeric", residual, residual <= checker.tol)
                points = checker.points_for(claim.algebra, claim.sampler) if claim.sampler else None
                measurement = checker.measure(value, claim.algebra, points)
                return self._result(claim, measurement.mode, measurement.residual, measurement.passed)
            if claim.tolerance is None:
                passed = value == claim.expected
                message = None if passed else f"got {value!r}, expected {claim.expected!r}"
                residual = 0.0 if passed else None
                if not passed and isinstance(value, (int, float)) and not isinstance(value, bool):
                    residual = abs(float(value) - float(claim.expected))
                return self._result(claim, "exact", residual, passed, message)
            residual = abs(float(value) - float(claim.expected))
            passed = residual <= claim.tolerance
            message = None if passed else f"got {float(value):.6g}, expected {claim.expected} ± {claim.tolerance}"
            return self._result(claim, "numeric", residual, passed, message)
        except HoloquotError as exc:
            logger.warning("❌ %s raised %s: %s", claim.id, type(exc).__name__, exc.message)
            residual = getattr(exc, "residual", None)
            return self._result(claim, checker.mode, residual, False, f"{type(exc).__name__}: {exc.message}")
        except Exception as exc:
            logger.exception("❌ %s failed unexpectedly", claim.id)
            return self._result(claim, checker.mode, None, False, f"{type(exc).__name__}: {exc}")

    @staticmethod
    def _result(
        claim: Claim, mode: str, residual: Optional[float], passed: bool, message: Optional[str] = None
    ) -> CheckResult:
        if passed:
            logger.info("✅ %s (%s, residual %s)", claim.id, mode, residual)
        elif claim.gating:
            logger.warning("❌ %s (%s, residual %s)", claim.id, mode, residual)
        else:
            logger.info("ℹ️  informational %s does not hold (%s, residual %s)", claim.id, mode, residual)
        return CheckResult(
            id=claim.id,
            anchor=claim.anchor,
            mode=mode,
            residual=residual,
            passed=passed,
            gating=claim.gating,
            message=message,
        )

    # ------------------------------------------------------------ operations

    @staticmethod
    def _failure(exc: HoloquotError) -> Dict[str, Any]:
        logger.error("❌ %s: %s", type(exc).__name__, exc.message)
        return {"success": False, "message": f"{type(exc).__name__}: {exc.message}", "error": exc}

    def run_suite(self, suite: str, target: str, run_settings: Optional[Settings] = None) -> Dict[str, Any]:
        run = run_settings or self.settings
        try:
            if suite != "all" and suite not in SUITES:
                raise CatalogError(f"unknown suite {suite!r}; known suites: {', '.join(SUITES)}, all")
            started = time.perf_counter()
            entry = self.resolve(target)
        except HoloquotError as exc:
            return self._failure(exc)
        claims = entry.claims_for(suite)
        ctx = RunContext(Checker.from_settings(run), run.rank_points, tuple(run.rank_thresholds))
        logger.info("🔍 running %d checks of suite %s on %s", len(claims), suite, entry.id)

        if run.workers > 1 and len(claims) > 1:
            with ThreadPoolExecutor(max_workers=run.workers) as pool:
                checks: List[CheckResult] = list(pool.map(lambda c: self.evaluate_claim(c, ctx), claims))
        else:
            checks = [self.evaluate_claim(c, ctx) for c in claims]

        report = VerificationReport(
            suite=suite,
            target=entry.id,
            seed=run.seed,
            tol=run.tol,
            points=run.points,
            mode=run.mode,
            wall_time=round(time.perf_counter() - started, 3),
            passed=all(c.passed for c in checks if c.gating),
            checks=checks,
        )
        message = report.summary() if checks else f"no checks of suite {suite} on {entry.id}"
        return {"success": report.passed, "message": message, "report": report}

    def export_entry(self, target: str, path: Optional[str] = None) -> Dict[str, Any]:
        try:
            entry = self.resolve(target)
            text = serialization.export_algebra(entry.algebra, entry.forms, entry.vectors)
        except HoloquotError as exc:
            return self._failure(exc)
        if path:
            serialization.write(text, path)
            logger.info("📄 wrote %s to %s", entry.id, path)
        return {"success": True, "message": f"exported {entry.id}", "text": text, "path": path}

    def evaluate(
        self, expression: str, target: str, point: Optional[Dict[str, float]] = None
    ) -> Dict[str, Any]:
        """Evaluate ``scal`` or a prefix expression at a point (default: the first sample point)."""
        try:
            entry = self.resolve(target)
            algebra = entry.algebra
            if expression == "scal":
                expr = scal_lc(curvature(algebra))
            else:
                symbols = {g.name: g.symbol for g in algebra.generators}
                expr = parse_prefix(expression, 1, dict(symbols))
                unknown = sorted(str(s) for s in expr.free_symbols if str(s) not in symbols)
                if unknown:
                    raise ParseError(f"unknown generator {unknown[0]!r}")
            if point is None:
                sample = Checker.from_settings(self.settings).points_for(algebra)[0]
                values = dict(sample.values)
            else:
                values = algebra.point(**point).values
            value = evaluate(expr, values)
        except HoloquotError as exc:
            return self._failure(exc)
        result = EvalResult(
            target=entry.id,
            expression=expression,
            point={str(k): float(v) for k, v in sorted(values.items(), key=lambda kv: str(kv[0]))},
            value=value,
        )
        return {"success": True, "message": f"{expression} = {value:.12g}", "result": result}

    def list_entries(self) -> Dict[str, Any]:
        items = [CatalogItem(id=entry_id, description=text) for entry_id, text in catalog.list_entries()]
        return {
            "success": True,
            "message": f"{len(items)} catalog entries",
            "listing": CatalogListing(entries=items),
        }


verification_service = VerificationService()
