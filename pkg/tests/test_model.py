import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnbundle.errors import (
    CycleDetected, DisconnectedNode, IncompletePlan, MissingHead, MultipleParents, UnknownNode,
)
from wsnbundle.model import BundlingPlan, RequirementSet, offspring_count, seconds_to_us, validate_topology

from .helpers import REF_EDGES
from .oracles import descendants, root_path


def test_reference_paths(ref_topo):
    assert ref_topo.path(4) == (4, 2, 1)
    assert ref_topo.path(3) == (3, 1)
    assert ref_topo.sensors == (1, 2, 3, 4)


def test_single_node():
    t = validate_topology([(1, 0)])
    assert t.path(1) == (1,)
    assert offspring_count(t, 1) == 0


@pytest.mark.parametrize("edges, exc, node", [
    ([(1, 0), (2, 1), (1, 2)], CycleDetected, 1),
    ([(1, 1)], CycleDetected, 1),
    ([(1, 0), (2, 1), (2, 0)], MultipleParents, 2),
    ([(1, 0), (2, 3), (3, 2)], CycleDetected, 2),
    ([(1, 0), (2, 5)], DisconnectedNode, 5),
    ([(1, 2), (2, 3)], DisconnectedNode, 3),
    ([], MissingHead, None),
])
def test_invalid_topologies(edges, exc, node):
    with pytest.raises(exc) as info:
        validate_topology(edges)
    if node is not None:
        assert node in info.value.nodes


def test_offspring_reference(ref_topo):
    # oracle: graph-library descendant count
    for n in ref_topo.sensors:
        assert offspring_count(ref_topo, n) == descendants(REF_EDGES, n)
    assert offspring_count(ref_topo, 1) == 3
    assert offspring_count(ref_topo, 2) == 1
    assert offspring_count(ref_topo, 4) == 0


def test_offspring_unknown(ref_topo):
    with pytest.raises(UnknownNode):
        offspring_count(ref_topo, 9)


@st.composite
def trees(draw, max_nodes=12):
    n = draw(st.integers(1, max_nodes))
    return [(i, draw(st.integers(0, i - 1))) for i in range(1, n + 1)]


@given(trees())
def test_tree_properties(edges):
    t = validate_topology(edges)
    head_children = [c for c, p in edges if p == 0]
    assert sum(1 + t.offspring[c] for c in head_children) == len(edges)
    for n in t.sensors:
        assert list(t.path(n)) == root_path(edges, n)
        assert t.depth(n) == len(t.path(n))
        assert t.offspring[n] == descendants(edges, n)


def test_requirement_validation():
    with pytest.raises(ValueError):
        RequirementSet(8, 0, chi_min=0)
    with pytest.raises(ValueError):
        RequirementSet(8, 0, chi_min=5, chi_max=4)
    with pytest.raises(ValueError):
        RequirementSet(0, 0)


def test_plan():
    p = BundlingPlan({2: 3, 1: 5})
    assert list(p.gamma) == [1, 2] and p.total == 8
    assert p == BundlingPlan({1: 5, 2: 3})
    assert p.check_bounds(1, 5) and not p.check_bounds(4, 5)
    with pytest.raises(IncompletePlan) as info:
        p.require([1, 2, 3])
    assert info.value.missing == (3,)
    with pytest.raises(ValueError):
        BundlingPlan({1: 0})


@pytest.mark.parametrize("text, us", [("1", 1_000_000), ("0.000005", 5), ("2.5", 2_500_000), (0.1, 100_000)])
def test_seconds_to_us(text, us):
    assert seconds_to_us(text) == us
