import itertools
import random

import pytest
from hypothesis import given, strategies as st

from msslab import (
    ConfigurationError,
    DeltaPredicate,
    Granulation,
    NearnessMap,
    OperatorSuite,
    SumOperation,
    Universe,
    check_coherence,
    check_def_compat,
    check_sum_axioms,
    eval_delta,
    eval_sum,
)
from msslab.delta import coherence_instance


def test_eval_delta_builtin_examples(H, ops, delta_builtins):
    a, b, c = H.subset(["x1"]), H.subset(["x1", "x2"]), H.subset(["x1", "x2", "x3"])
    assert eval_delta(delta_builtins["E1"], a, b, c)
    e2 = delta_builtins["E2"]
    assert eval_delta(e2, H.subset(["x1", "x2", "x3"]), H.subset(["x1", "x2"]), H.subset(["x4"]))


subsets4 = st.integers(0, 15)


@given(subsets4, subsets4)
def test_reflexive_inclusion_is_never_proper(H, a_mask, b_mask):
    a, b = H.from_mask(a_mask), H.from_mask(b_mask)
    e0 = DeltaPredicate.builtin("E0", H)
    e1 = DeltaPredicate.builtin("E1", H)
    assert eval_delta(e0, a, b, b)
    assert not eval_delta(e1, a, b, b)


def test_builtin_requiring_operators_without_them(H):
    with pytest.raises(ConfigurationError):
        DeltaPredicate.builtin("E2", H)
    with pytest.raises(ConfigurationError):
        DeltaPredicate.builtin("uE1", H)
    with pytest.raises(ConfigurationError):
        DeltaPredicate.builtin("E9", H)


def test_extensional_table_limit():
    big = Universe([f"e{i}" for i in range(7)])
    with pytest.raises(ConfigurationError):
        DeltaPredicate.extensional(big, [])


def test_extensional_table_canonical_order(H):
    d = DeltaPredicate.extensional(
        H, [(H.subset(["x2"]), H.empty, H.empty), (H.subset(["x1"]), H.empty, H.empty)]
    )
    assert d.sorted_table() == ((1, 0, 0), (2, 0, 0))


def test_eval_sum_examples(H, granulation):
    total = SumOperation.total_union(H)
    grain = SumOperation.granular(granulation)
    r = eval_sum(total, H.subset(["x1"]), H.subset(["x3"]))
    assert r.defined and r.value == H.subset(["x1", "x3"])
    assert not eval_sum(grain, H.subset(["x1"]), H.subset(["x3"])).defined
    r = eval_sum(grain, H.subset(["x1", "x2"]), H.subset(["x2", "x3"]))
    assert r.defined and r.value == H.subset(["x1", "x2", "x3"])


def test_coherence_verdict_table(H, delta_builtins):
    e0, e1 = delta_builtins["E0"], delta_builtins["E1"]
    assert check_coherence(e0, "i-coh").status == "holds"
    v = check_coherence(e0, "i-coh-2")
    assert v.status == "fails"
    assert coherence_instance(e0, "i-coh-2", v.witnesses[0]) is False
    assert check_coherence(e1, "i-coh-2").status == "holds"
    assert check_coherence(e1, "strict-n-coh").status == "holds"
    v = check_coherence(e1, "trans-1")
    assert v.status == "fails"
    assert coherence_instance(e1, "trans-1", v.witnesses[0]) is False


def test_witnesses_are_lexicographic_minima(H, delta_builtins):
    v = check_coherence(delta_builtins["E0"], "i-coh-2")
    assert [w.mask for w in v.witnesses[0]] == [0, 0]
    v = check_coherence(delta_builtins["E1"], "trans-1")
    assert [w.mask for w in v.witnesses[0]] == [0, 1, 3, 0]


def test_sum_axioms_total_union(H, delta_builtins):
    verdicts = check_sum_axioms(delta_builtins["E1"], SumOperation.total_union(H))
    assert {v.axiom: v.status for v in verdicts} == {
        "omega-star-com": "holds",
        "omega-id": "holds",
        "omega-asso": "holds",
        "delta-sum1": "holds",
        "delta-sum2": "holds",
        "delta-sum3": "holds",
    }


def test_sum_axioms_granular(H, granulation, delta_builtins):
    verdicts = check_sum_axioms(delta_builtins["E0"], SumOperation.granular(granulation))
    assert all(v.status == "holds" for v in verdicts)


def test_sum_axioms_full_table(H):
    top = 1 << H.size
    full = DeltaPredicate.extensional_from_masks(
        H, itertools.product(range(top), repeat=3)
    )
    verdicts = check_sum_axioms(full, SumOperation.total_union(H))
    assert all(v.status == "holds" for v in verdicts)


def test_sum_axioms_can_fail_on_extensional_tables(H):
    # a partial sum whose squared value moves the argument
    table = {(0, 0): 1}
    s = SumOperation.extensional(H, table)
    never = DeltaPredicate.extensional_from_masks(H, [(0, 2, 4)])
    verdicts = {v.axiom: v for v in check_sum_axioms(never, s)}
    assert verdicts["delta-sum1"].status == "fails"
    assert verdicts["omega-id"].status == "fails"


def test_def_compat_examples(H, delta_builtins):
    union = NearnessMap.union(H)
    assert check_def_compat(delta_builtins["E0"], union, "def0").status == "holds"
    assert check_def_compat(delta_builtins["E1"], union, "def1").status == "holds"
    v = check_def_compat(delta_builtins["E1"], union, "def2")
    assert v.status == "fails"
    a, b, c = v.witnesses[0]
    assert (a | b) <= (a | c) and not eval_delta(delta_builtins["E1"], a, b, c)
    never = DeltaPredicate.extensional_from_masks(H, [])
    assert check_def_compat(never, union, "def1").status == "vacuous"


def test_def0_with_union_map_matches_plain_inclusion(H, delta_builtins):
    induced = DeltaPredicate.from_nearness(NearnessMap.union(H))
    space = list(H.all_subsets())
    for a, b, c in itertools.product(space, repeat=3):
        assert induced(a, b, c) == delta_builtins["E0"](a, b, c)


def test_eval_is_independent_of_granule_order(H, granulation, delta_builtins):
    reversed_g = Granulation(H, list(reversed(list(granulation))))
    r_ops = OperatorSuite.from_granulation(reversed_g)
    e2_r = DeltaPredicate.builtin("E2", H, ops=r_ops)
    ue1_r = DeltaPredicate.builtin("uE1", H, ops=r_ops)
    space = list(H.all_subsets())
    rng = random.Random(3)
    for _ in range(300):
        a, b, c = (rng.choice(space) for _ in range(3))
        assert delta_builtins["E2"](a, b, c) == e2_r(a, b, c)
        assert delta_builtins["uE1"](a, b, c) == ue1_r(a, b, c)


def test_strict_coherence_of_proper_inclusion_all_sizes():
    for n in range(1, 5):
        u = Universe([f"x{i+1}" for i in range(n)])
        e1 = DeltaPredicate.builtin("E1", u)
        assert check_coherence(e1, "strict-n-coh").status in ("holds", "vacuous")
        assert check_coherence(e1, "i-coh-2").status == "holds"


def random_table(universe, rng, density=0.3):
    top = 1 << universe.size
    triples = [
        t for t in itertools.product(range(top), repeat=3) if rng.random() < density
    ]
    return DeltaPredicate.extensional_from_masks(universe, triples)


def test_meta_theorem_on_random_tables():
    for n in (1, 2, 3):
        u = Universe([f"x{i+1}" for i in range(n)])
        rng = random.Random(100 + n)
        for _ in range(120):
            d = random_table(u, rng)
            strict = check_coherence(d, "strict-n-coh")
            if strict.status in ("holds", "vacuous"):
                assert check_coherence(d, "i-coh-2").status in ("holds", "vacuous")


def test_unknown_axiom_and_mode_rejected(H, delta_builtins):
    with pytest.raises(Exception):
        check_coherence(delta_builtins["E0"], "coh-9")
    with pytest.raises(Exception):
        check_def_compat(delta_builtins["E0"], NearnessMap.union(H), "def9")


def test_nearness_table_must_be_total(H):
    with pytest.raises(ConfigurationError):
        NearnessMap.from_table(H, {(0, 0): 0})
