import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minhom.csp import MAX_POINTS
from minhom.relations import (
    ArityError,
    ConstraintLanguage,
    DomainMismatch,
    OperationTable,
    Relation,
    WeightedInstance,
    box,
    compose,
    cross,
    crossed_pair,
    is_pp_member,
    lin,
    pr1,
    pr2,
    preserves,
    project,
    project_binary,
    restrict,
    transpose,
)
from support import BMIN, EQ, EVEN3, GE, LE, NE, OR, discriminator, lang, naive_preserves


@st.composite
def binary_relations(draw, d=None):
    d = d or draw(st.integers(1, 3))
    pairs = list(itertools.product(range(d), repeat=2))
    chosen = draw(st.sets(st.sampled_from(pairs)))
    return Relation(2, d, frozenset(chosen))


@st.composite
def relations(draw, d, max_arity=3, max_size=8):
    arity = draw(st.integers(1, max_arity))
    pts = list(itertools.product(range(d), repeat=arity))
    chosen = draw(st.sets(st.sampled_from(pts), max_size=max_size))
    return Relation(arity, d, frozenset(chosen))


@st.composite
def operations(draw, d, max_arity=3):
    arity = draw(st.integers(1, max_arity))
    table = draw(st.lists(st.integers(0, d - 1), min_size=d ** arity, max_size=d ** arity))
    return OperationTable(arity, d, tuple(table))


def test_relation_validation():
    with pytest.raises(ArityError):
        Relation(2, 2, frozenset({(0,)}))
    with pytest.raises(ValueError):
        Relation(1, 2, frozenset({(2,)}))
    with pytest.raises(ArityError):
        Relation.of(2, [])
    assert Relation.of(2, [], arity=2).tuples == frozenset()


def test_transpose_examples():
    assert transpose(Relation.of(2, [(0, 1)])) == Relation.of(2, [(1, 0)])
    assert transpose(EQ) == EQ
    assert transpose(LE) == GE


def test_compose_examples():
    assert compose(LE, LE) == LE
    assert compose(NE, NE) == EQ
    # {0,1}^2 minus (1,1), composed after the two-pair cross (0,1;0,1) which is !=
    assert cross(2, 0, 1, 0, 1) == NE
    nand = Relation.of(2, [(0, 0), (0, 1), (1, 0)])
    assert compose(NE, nand) == GE


def test_projection_examples():
    assert project_binary(Relation.of(2, [(0, 1, 1)]), 1, 3) == Relation.of(2, [(0, 1)])
    assert project_binary(EVEN3, 1, 2) == Relation.full(2, 2)
    assert project_binary(LE, 1, 2) == LE
    assert project(EVEN3, [2]) == Relation.unary(2, [0, 1])
    assert pr1(LE) == Relation.unary(2, [0, 1])
    assert pr2(Relation.of(2, [(0, 1)])) == Relation.unary(2, [1])
    empty = Relation(2, 2, frozenset())
    assert pr1(empty).tuples == frozenset() and pr2(empty).tuples == frozenset()


def test_named_predicates():
    assert crossed_pair(2, 1, 0) == OR
    assert box(3, 0, 1, 2, 0) == Relation.of(3, [(0, 2), (0, 0), (1, 2)])
    assert lin(2, 0, 1) == EVEN3
    assert lin(3, 2, 0) == Relation.of(3, [(2, 2, 2), (2, 0, 0), (0, 2, 0), (0, 0, 2)])
    with pytest.raises(ValueError):
        box(2, 0, 0, 0, 1)


def test_preserves_examples():
    assert preserves(BMIN, LE)
    assert not preserves(BMIN, NE)
    # full enumeration over the 4^3 row triples
    assert preserves(discriminator(2), EVEN3) is False
    assert preserves(discriminator(2), NE)


def test_preserves_rejects_mismatched_domain():
    with pytest.raises(DomainMismatch):
        preserves(BMIN, Relation.unary(3, [0]))


def test_restrict_examples():
    assert restrict(BMIN, [0, 1]) == BMIN
    assert restrict(discriminator(3), [0, 1]) == discriminator(2)
    proj = OperationTable.projection(4, 3, 1)
    assert restrict(proj, [1, 3]) == OperationTable.projection(2, 3, 1)


def test_restrict_requires_closed_subset():
    succ = OperationTable.from_function(3, 1, lambda x: (x + 1) % 3)
    with pytest.raises(ValueError):
        restrict(succ, [0, 1])


def test_is_pp_member_examples():
    assert is_pp_member(OR, lang(2, NE, LE))
    for rel in (NE, LE):
        assert is_pp_member(rel, lang(2, NE, LE))
    assert not is_pp_member(NE, lang(2, LE))
    assert is_pp_member(EQ, lang(2, LE))


def test_is_pp_member_tuple_order_irrelevant():
    shuffled = Relation.of(2, [(1, 1), (1, 0), (0, 1)])
    assert is_pp_member(shuffled, lang(2, NE, LE))


def test_language_rules():
    with pytest.raises(ValueError):
        ConstraintLanguage(2, (("a", LE), ("a", NE)))
    with pytest.raises(DomainMismatch):
        ConstraintLanguage.of(2, {"x": Relation.unary(3, [0])})
    g = ConstraintLanguage.of(2, {"le": LE})
    assert g["le"] == LE and list(g) == [LE] and len(g) == 1


def test_weighted_instance_validation():
    with pytest.raises(ArityError):
        WeightedInstance.build(2, 2, [(LE, (0,))])
    with pytest.raises(ValueError):
        WeightedInstance.build(2, 2, [(LE, (0, 2))])
    with pytest.raises(ValueError):
        WeightedInstance.build(1, 2, [], [[0, -1]])
    with pytest.raises(ValueError):
        WeightedInstance.build(1, 2, [], [[0, 1, 2]])
    inst = WeightedInstance.build(2, 2, [(LE, (0, 1))], [[1, 2], [3, 4]])
    assert inst.measure((0, 1)) == 5
    assert inst.satisfies((0, 1)) and not inst.satisfies((1, 0))


def test_operation_table_indexing():
    f = OperationTable.from_function(3, 3, lambda x, y, z: (x + 2 * y + z) % 3)
    for args in itertools.product(range(3), repeat=3):
        assert f(*args) == (args[0] + 2 * args[1] + args[2]) % 3
        assert f.array[args] == f(*args)
    assert not f.is_conservative
    assert discriminator(3).is_conservative


@given(binary_relations())
def test_transpose_involution(rho):
    assert transpose(transpose(rho)) == rho


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(binary_relations(d), binary_relations(d), binary_relations(d))))
def test_compose_associative(triple):
    a, b, c = triple
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(binary_relations())
def test_compose_equality_is_identity(rho):
    eq = Relation.equality(rho.domain_size)
    assert compose(rho, eq) == rho
    assert compose(eq, rho) == rho


@given(binary_relations())
def test_compose_matches_definition(rho):
    d = rho.domain_size
    other = transpose(rho)
    want = {(x, y) for x in range(d) for y in range(d)
            if any((x, z) in rho.tuples and (z, y) in other.tuples for z in range(d))}
    assert compose(rho, other).tuples == frozenset(want)


@settings(max_examples=300)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(operations(d), relations(d))))
def test_preserves_matches_naive(pair):
    f, rho = pair
    assert preserves(f, rho) == naive_preserves(f, rho)


def _closure_steps(rels, d):
    out = []
    for a in rels:
        if a.arity == 2:
            out.append(transpose(a))
            for b in rels:
                if b.arity == 2:
                    out.append(compose(a, b))
                    out.append(a.intersect(b))
        if a.arity >= 2:
            out.append(project(a, [0]))
        if a.arity == 3:
            out.append(project(a, [0, 2]))
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3).flatmap(lambda d: st.lists(relations(d, max_arity=3, max_size=6), min_size=1, max_size=2)))
def test_pp_member_closed_under_constructions(rels):
    d = rels[0].domain_size
    g = ConstraintLanguage.of(d, rels)
    for rel in rels:
        assert is_pp_member(rel, g)
    for derived in _closure_steps(rels, d):
        # membership search builds a |rho|-ary table; skip relations beyond its cap
        if d ** len(derived) <= MAX_POINTS:
            assert is_pp_member(derived, g)


def test_relation_matrix_roundtrip():
    m = LE.matrix
    assert isinstance(m, np.ndarray) and m.dtype == bool
    assert Relation.from_matrix(m) == LE
