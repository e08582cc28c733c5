import pytest

from msslab import BudgetError, MsslabError, assemble
from msslab.oracles import StructureDescription, o_claim, powerset
from msslab.search import SearchSpec, enumerate_structures, find_witness, oracle_check
from msslab.structure import verify

ORACLE_COMPARABLE = (
    "PT1",
    "PT2",
    "G1",
    "G2",
    "G3",
    "G4",
    "G5",
    "UL1",
    "UL2",
    "UL3",
    "TB",
    "i-coh",
    "n-coh",
    "i-coh-2",
    "strict-n-coh",
    "trans-1",
)


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_structures(SearchSpec(n=1, budget=10))) == 2
    assert sum(1 for _ in enumerate_structures(SearchSpec(n=2, budget=100))) == 16
    assert sum(1 for _ in enumerate_structures(SearchSpec(n=3, budget=1000))) == 512


def test_granulation_family_count():
    spec = SearchSpec(n=2, family="granulations", budget=100)
    assert sum(1 for _ in enumerate_structures(spec)) == 8


def test_extensional_family_respects_budget():
    spec = SearchSpec(n=2, family="extensional-deltas", budget=25, seed=5)
    assert sum(1 for _ in enumerate_structures(spec)) == 25


def test_infeasible_exhaustive_request_reports_required_budget():
    with pytest.raises(BudgetError) as err:
        list(enumerate_structures(SearchSpec(n=4, budget=1000)))
    assert err.value.required == 1 << 16


def test_enumeration_is_deterministic():
    spec = SearchSpec(n=2, family="extensional-deltas", budget=10, seed=42)

    def snapshot():
        return [
            (s.granulation.masks(), tuple(s.delta.sorted_table()))
            for s in enumerate_structures(spec)
        ]

    assert snapshot() == snapshot()


def test_find_witness_meta_theorem_returns_none():
    spec = SearchSpec(
        n=2,
        family="extensional-deltas",
        required=("strict-n-coh",),
        forbidden=("i-coh-2",),
        budget=300,
        seed=9,
    )
    assert find_witness(spec) is None


def test_find_witness_finds_inclusion_inner_coherence():
    spec = SearchSpec(n=2, delta="E0", required=("i-coh",), budget=100)
    witness = find_witness(spec)
    assert witness is not None
    assert witness.delta.kind == "E0"


def test_find_witness_trans1_with_proper_inclusion_has_no_model():
    spec = SearchSpec(n=2, delta="E1", required=("trans-1",), budget=100)
    assert find_witness(spec) is None


def test_oracle_claims_on_the_example(H, granulation, delta_builtins):
    s = assemble(H, granulation=granulation, delta=delta_builtins["E1"])
    assert oracle_check(s, "l-pre-valid-closed-form")
    assert oracle_check(s, "upper-additivity")
    assert oracle_check(s, "proposition-def2")
    with pytest.raises(MsslabError):
        oracle_check(s, "perpetual-motion")


def test_oracle_compatibility_matches_optimized_path(H, granulation, clustering, delta_builtins):
    from msslab import check_compatibility

    for name in ("E0", "E1", "E2", "uE1"):
        s = assemble(
            H, granulation=granulation, delta=delta_builtins[name], kappa=list(clustering)
        )
        fast = not check_compatibility(clustering, delta_builtins[name]).failed
        slow = oracle_check(s, "compatibility:overlap-closer")
        assert fast == slow, name


def test_verify_matches_oracle_on_all_two_element_structures():
    for delta_name in ("E0", "E1", "E2", "uE1"):
        for s in enumerate_structures(SearchSpec(n=2, delta=delta_name, budget=100)):
            verdicts = {v.axiom: v for v in verify(s, list(ORACLE_COMPARABLE))}
            desc = StructureDescription.from_structure(s)
            for axiom in ORACLE_COMPARABLE:
                fast = verdicts[axiom].status in ("holds", "vacuous")
                assert fast == o_claim(desc, f"axiom:{axiom}"), (delta_name, axiom)


def test_verify_matches_oracle_on_sampled_three_element_structures():
    structures = list(enumerate_structures(SearchSpec(n=3, delta="E1", budget=512)))
    for s in structures[:: 16]:
        verdicts = {v.axiom: v for v in verify(s, ["UL1", "UL2", "i-coh-2", "strict-n-coh"])}
        desc = StructureDescription.from_structure(s)
        for axiom, verdict in verdicts.items():
            fast = verdict.status in ("holds", "vacuous")
            assert fast == o_claim(desc, f"axiom:{axiom}"), axiom


def test_oracle_powerset_covers_everything():
    space = powerset(("a", "b", "c"))
    assert len(space) == 8 and len(set(space)) == 8


def test_search_spec_validation():
    with pytest.raises(MsslabError):
        SearchSpec(n=2, family="islands")
    with pytest.raises(MsslabError):
        SearchSpec(n=0)
    with pytest.raises(MsslabError):
        SearchSpec(n=2, budget=0)


def test_oracle_needs_granulation(H, delta_builtins):
    s = assemble(H, delta=delta_builtins["E0"])
    with pytest.raises(MsslabError):
        oracle_check(s, "upper-additivity")
