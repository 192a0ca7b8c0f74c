import json

import pytest

from holoquot import catalog
from holoquot.claims import SUITES, RunContext
from holoquot.serialization import read

REPORT_KEYS = {"schema_version", "suite", "target", "seed", "tol", "points", "mode", "wall_time", "passed", "checks"}
CHECK_KEYS = {"id", "anchor", "mode", "residual", "passed", "gating", "message"}
FLAT = ["flat_T7", "flat_T8", "flat_R8"]


def failing(report):
    return [(c.id, c.residual, c.message) for c in report.failures()]


@pytest.mark.integration
class TestFlatEntries:
    """The flat examples pass every suite quickly."""

    @pytest.mark.parametrize("entry_id", FLAT)
    def test_all_suites_pass(self, service, entry_id):
        result = service.run_suite("all", entry_id)
        assert result["success"], failing(result["report"])
        assert result["report"].checks

    @pytest.mark.parametrize("suite", SUITES)
    def test_each_suite_on_the_trivial_bundle(self, service, suite):
        result = service.run_suite(suite, "flat_T8")
        assert result["success"], failing(result["report"])


@pytest.mark.integration
class TestReports:
    def test_schema(self, service):
        payload = json.loads(service.run_suite("all", "flat_T8")["report"].to_json())
        assert set(payload) == REPORT_KEYS
        assert payload["schema_version"] == "1.0"
        assert all(set(check) == CHECK_KEYS for check in payload["checks"])
        ids = [check["id"] for check in payload["checks"]]
        assert ids == sorted(ids)

    def test_runs_are_deterministic(self, service):
        first = json.loads(service.run_suite("all", "flat_R8")["report"].to_json())
        second = json.loads(service.run_suite("all", "flat_R8")["report"].to_json())
        first.pop("wall_time")
        second.pop("wall_time")
        assert first == second


@pytest.mark.integration
class TestJsonRoundTrip:
    def test_export_import_export(self, service, tmp_path):
        path = tmp_path / "flat_T8.json"
        text = service.export_entry("flat_T8", str(path))["text"]
        assert service.export_entry(str(path))["text"] == text

    @pytest.mark.parametrize("entry_id", ["flat_T8", "gh_hopf"])
    def test_exported_algebras_still_satisfy_d_squared(self, service, tmp_path, entry_id):
        path = tmp_path / f"{entry_id}.json"
        service.export_entry(entry_id, str(path))
        assert read(path).algebra.dim == catalog.load(entry_id).algebra.dim
        result = service.run_suite("algebra", str(path))
        assert result["success"], failing(result["report"])


@pytest.mark.integration
class TestSelectedClaims:
    """Individual claims of the larger entries, without running their whole suites."""

    def run_claims(self, service, checker, entry_id, *fragments):
        entry = catalog.load(entry_id)
        claims = [c for c in entry.claims if any(f in c.id for f in fragments)]
        assert claims
        return [service.evaluate_claim(c, RunContext(checker)) for c in claims]

    def test_calabi_asymptotics(self, service, checker):
        results = self.run_claims(service, checker, "nil_cy", "/asymptotics/")
        assert len(results) == 2
        assert all(r.passed for r in results), [(r.id, r.message) for r in results]

    def test_hopf_decomposition_of_the_round_sphere(self, service, checker):
        results = self.run_claims(
            service, checker, "round_s7_ambient", "/hopf/phi_S7", "/hopf/omega horizontal", "/hopf/Omega+ horizontal"
        )
        assert len(results) == 3
        assert all(r.passed for r in results), [(r.id, r.residual) for r in results]


@pytest.mark.integration
@pytest.mark.slow
class TestWholeCatalog:
    """Every built-in example, every suite."""

    @pytest.mark.parametrize("entry_id", [entry_id for entry_id, _ in catalog.list_entries()])
    def test_entry_passes(self, service, entry_id):
        result = service.run_suite("all", entry_id)
        assert result["success"], failing(result["report"])

    @pytest.mark.parametrize("entry_id, scal", [("gh_link", 27), ("nk_link", 30)])
    def test_link_scalar_curvature(self, service, entry_id, scal):
        report = service.run_suite("su3-link", entry_id)["report"]
        check = next(c for c in report.checks if c.id == f"{entry_id}/scalar curvature")
        assert check.passed, (scal, check.residual)
