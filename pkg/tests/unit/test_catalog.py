import pytest

from holoquot import catalog
from holoquot.claims import CatalogEntry
from holoquot.errors import CatalogError, ConsistencyError
from holoquot.frame_algebra import FrameAlgebra
from holoquot.g2 import standard_phi0
from holoquot.residuals import Checker
from holoquot.serialization import ImportedAlgebra
from holoquot.spin7 import standard_Phi0
from tests.utils import flat_algebra

EXPECTED_IDS = [
    "balanced_b5t2_a",
    "balanced_b5t2_b",
    "balanced_b5t2_second_iteration",
    "bs_asd_bundle",
    "flat_R8",
    "flat_T7",
    "flat_T8",
    "flat_r8_quotient",
    "gh_hopf",
    "gh_link",
    "nil_cy",
    "nk_link",
    "round_s7_ambient",
]


def broken_algebra() -> FrameAlgebra:
    """de4 = e1∧e2 and de2 = e3∧e4, which is not a differential."""
    algebra = FrameAlgebra(["e1", "e2", "e3", "e4"], name="broken")
    algebra.declare_structure("e4", algebra.e("e1", "e2"))
    algebra.declare_structure("e2", algebra.e("e3", "e4"))
    return algebra.freeze()


@pytest.mark.unit
class TestRegistry:
    def test_entries_are_listed_sorted(self):
        assert [entry_id for entry_id, _ in catalog.list_entries()] == sorted(EXPECTED_IDS)

    def test_listing_does_not_build(self, mocker):
        builder = mocker.Mock()
        mocker.patch.dict(catalog.REGISTRY, {"zz_unbuilt": (builder, "never built")})
        assert ("zz_unbuilt", "never built") in catalog.list_entries()
        builder.assert_not_called()

    def test_unknown_entry(self):
        with pytest.raises(CatalogError, match="known entries: .*flat_T7"):
            catalog.load("no_such_entry")

    def test_entries_are_cached(self):
        assert catalog.load("flat_T7") is catalog.load("flat_T7")

    def test_flat_entry_contents(self, load_entry):
        entry = load_entry("flat_T7")
        assert entry.algebra.dim == 7
        assert "phi" in entry.structures
        assert entry.claims_for("algebra")


@pytest.mark.unit
class TestSelfCheck:
    def test_broken_algebra_is_rejected(self):
        entry = CatalogEntry("broken", "not a differential", broken_algebra())
        with pytest.raises(ConsistencyError, match="d∘d fails"):
            catalog.self_check(entry, Checker(points=2))

    def test_load_runs_the_self_check(self, mocker):
        builder = mocker.Mock(return_value=CatalogEntry("zz_broken", "", broken_algebra()))
        mocker.patch.dict(catalog.REGISTRY, {"zz_broken": (builder, "broken on purpose")})
        with pytest.raises(ConsistencyError):
            catalog.load("zz_broken")

    def test_secondary_algebras_are_checked(self):
        entry = CatalogEntry("mixed", "", flat_algebra(3))
        entry.algebras["extra"] = broken_algebra()
        with pytest.raises(ConsistencyError, match="extra"):
            catalog.self_check(entry, Checker(points=2))


@pytest.mark.unit
class TestImportedEntries:
    """Entries wrapped around algebras read from JSON."""

    def test_three_forms_become_g2_structures(self):
        algebra = flat_algebra(7)
        imported = ImportedAlgebra(
            algebra, {"phi": standard_phi0(algebra), "scaled": 2 * standard_phi0(algebra)}
        )
        entry = catalog.entry_from_algebra(imported, "mine")
        assert list(entry.structures) == ["phi"]
        ids = [claim.id for claim in entry.claims]
        assert "mine/input/d squared" in ids
        assert "mine/phi/dphi reconstruction" in ids
        assert not any(i.startswith("mine/scaled") for i in ids)

    def test_four_forms_become_spin7_structures(self):
        algebra = flat_algebra(8)
        entry = catalog.entry_from_algebra(ImportedAlgebra(algebra, {"Phi": standard_Phi0(algebra)}), "eight")
        assert "Phi" in entry.structures
        assert entry.forms["Phi"] is not None

    def test_other_forms_are_kept_but_not_checked(self):
        algebra = flat_algebra(5)
        entry = catalog.entry_from_algebra(ImportedAlgebra(algebra, {"w": algebra.e("e1", "e2")}), "five")
        assert entry.structures == {}
        assert "w" in entry.forms
        assert len(entry.claims) == 1
