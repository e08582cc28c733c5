from pathlib import Path

import pytest

from msslab import (
    BinaryRelation,
    Clustering,
    DeltaPredicate,
    OperatorSuite,
    Universe,
    close_relation,
    predecessor_granulation,
)

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def H():
    return Universe(["x1", "x2", "x3", "x4"])


@pytest.fixture(scope="session")
def tolerance(H):
    generators = BinaryRelation(H, [("x1", "x2"), ("x2", "x3")])
    return close_relation(generators, reflexive=True, symmetric=True)


@pytest.fixture(scope="session")
def granulation(tolerance):
    return predecessor_granulation(tolerance)


@pytest.fixture(scope="session")
def ops(granulation):
    return OperatorSuite.from_granulation(granulation)


@pytest.fixture(scope="session")
def clustering(H):
    return Clustering(
        H,
        [H.subset(["x1", "x3"]), H.subset(["x2", "x3"]), H.subset(["x2", "x4"])],
    )


@pytest.fixture(scope="session")
def delta_builtins(H, ops):
    return {
        name: DeltaPredicate.builtin(name, H, ops=ops if name in ("E2", "uE1") else None)
        for name in ("E0", "E1", "E2", "uE1")
    }


@pytest.fixture(scope="session")
def repo_root():
    return ROOT
