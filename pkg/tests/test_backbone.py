import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gafcells.backbone import (
    DEAD,
    NodeState,
    UnionFind,
    build_backbone,
    canonical_actives,
    degree_histogram,
    elect_active,
    is_connected,
)
from gafcells.constraints import max_params
from gafcells.geometry import SQRT3, Point
from gafcells.partition import FieldSpec, Scheme, SchemeParams, build_partition


def _node(i, e):
    return NodeState(i, Point(0, 0), e)


def test_election_examples():
    assert elect_active([_node(1, 5), _node(2, 9)]) == 2
    assert elect_active([_node(3, 7), _node(1, 7)]) == 1
    assert elect_active([]) is None
    assert elect_active([_node(4, 0)]) is None


def test_zero_energy_node_is_dead():
    assert _node(0, 0).role == DEAD
    with pytest.raises(ValueError):
        _node(0, -1)


# normal floats only: halving a subnormal energy can round it to zero (a dead node)
energies = st.one_of(st.just(0.0), st.floats(1e-300, 100))
nodes_st = st.lists(st.tuples(st.integers(0, 50), energies), max_size=12,
                    unique_by=lambda t: t[0])


@given(nodes_st, st.randoms(use_true_random=False))
def test_election_permutation_invariant(nodes, rnd):
    ns = [_node(i, e) for i, e in nodes]
    shuffled = ns[:]
    rnd.shuffle(shuffled)
    assert elect_active(ns) == elect_active(shuffled)


@given(nodes_st, st.sampled_from([0.5, 2.0, 4.0, 1024.0]))
def test_election_scale_invariant(nodes, c):
    # powers of two keep the scaling exact
    ns = [_node(i, e) for i, e in nodes]
    assert elect_active(ns) == elect_active([_node(i, e * c) for i, e in nodes])


def test_union_find():
    uf = UnionFind(range(5))
    assert uf.union(0, 1) and uf.union(3, 4) and not uf.union(1, 0)
    assert uf.count() == 3
    assert uf.find(0) == uf.find(1) != uf.find(2)


def _grid(n, R=1.0):
    return build_partition(FieldSpec(n, n, R), SchemeParams("ehgaf", 1.0))


def test_unit_grid_backbone():
    part = _grid(2)
    g = build_backbone(part, canonical_actives(part), 1.0)
    assert len(g.edges) == 4 and all(e.length == pytest.approx(1) for e in g.edges)
    assert not g.violations and is_connected(g)
    g = build_backbone(part, canonical_actives(part), 0.9)
    assert len(g.edges) == 4 and len(g.violations) == 4
    assert not is_connected(g)


def test_degree_histograms():
    part = _grid(3)
    g = build_backbone(part, canonical_actives(part), 1.0)
    assert degree_histogram(g) == {2: 4, 3: 4, 4: 1}
    pair = build_partition(FieldSpec(2, 1), SchemeParams("ehgaf", 1.0))
    assert degree_histogram(build_backbone(pair, canonical_actives(pair), 1.0)) == {1: 2}


def test_connectivity_examples():
    part = _grid(3)
    acts = canonical_actives(part)
    assert is_connected(build_backbone(part, acts, 1.0))
    # empty the two neighbours of the corner cell: it is cut off
    cut = {**acts, (1, 0): None, (0, 1): None}
    g = build_backbone(part, cut, 1.0)
    assert not is_connected(g) and g.component_count == 2
    single = build_partition(FieldSpec(1, 1), SchemeParams("ehgaf", 1.0))
    assert is_connected(build_backbone(single, canonical_actives(single), 1.0))
    assert is_connected(build_backbone(single, {}, 1.0))


def _sized_field(params, R=1.0):
    if params.scheme is Scheme.TRIANGLE:
        return FieldSpec(6 * 2 * params.r / SQRT3, 4 * params.r, R)
    if params.scheme is Scheme.TWOTYPE:
        return FieldSpec(8 * R, 4 * SQRT3 * R, R)
    n = 5
    return FieldSpec(n * params.r, n * params.r, R)


@pytest.mark.parametrize("scheme", ["gaf", "hgaf", "ehgaf", "ehgaf-triangle", "ehgaf-twotype"])
def test_maximal_partitions_connect(scheme):
    params = max_params(scheme)
    part = build_partition(_sized_field(params), params)
    g = build_backbone(part, canonical_actives(part), 1.0)
    assert not g.violations and is_connected(g)


@pytest.mark.parametrize("scheme", ["gaf", "hgaf", "ehgaf"])
def test_square_meshes_have_interior_degree_four(scheme):
    params = max_params(scheme)
    part = build_partition(_sized_field(params), params)
    g = build_backbone(part, canonical_actives(part), 1.0)
    inner = [c for c in part.cells
             if 0 < c.id[0] < 4 and 0 < c.id[1] < 4]
    deg = {v: 0 for v in g.vertices}
    for e in g.edges:
        deg[e.a] += 1
        deg[e.b] += 1
    assert {deg[c.id] for c in inner} == {4}


def test_two_type_interior_has_low_degree():
    part = build_partition(FieldSpec(8, 4 * SQRT3), SchemeParams("ehgaf-twotype", k=4))
    g = build_backbone(part, canonical_actives(part), 1.0)
    assert is_connected(g) and not g.violations
    assert g.max_edge_length == pytest.approx(1.0, abs=1e-9)
    hist = degree_histogram(g)
    assert any(d < 4 and n > 0 for d, n in hist.items())
    # A cells away from the field edge and from any B column link only sideways
    deg = {v: 0 for v in g.vertices}
    for e in g.edges:
        deg[e.a] += 1
        deg[e.b] += 1
    assert deg[(1, 1)] == 2


def test_backbone_to_dict():
    part = _grid(2)
    d = build_backbone(part, canonical_actives(part), 1.0).to_dict()
    assert d["violations"] == 0 and d["component_count"] == 1 and len(d["edges"]) == 4
    assert math.isclose(d["edges"][0]["length"], 1.0)
