"""Injections between grades and their 0/1 matrix embedding."""

import math

import pytest

from impcirc.errors import GradingError
from impcirc.grading import (
    Injection,
    compose,
    discard,
    embed,
    enumerate_injections,
    identity,
    symmetry,
    tensor,
)
from impcirc.stoch import identity_matrix, kron, matmul, swap_matrix


def test_validation():
    Injection(3, 2, (2, 0))
    with pytest.raises(GradingError):
        Injection(3, 2, (2, 2))  # not injective
    with pytest.raises(GradingError):
        Injection(3, 2, (3, 0))  # out of range
    with pytest.raises(GradingError):
        Injection(1, 2, (0, 0))


def test_identity_and_discard():
    assert identity(3) == Injection(3, 3, (0, 1, 2))
    assert discard(2) == Injection(2, 0, ())
    assert str(Injection(3, 2, (2, 0))) == "inj 3->2 [2,0]"


def test_compose_reindexes():
    s = Injection(4, 2, (3, 1))
    t = Injection(2, 1, (1,))
    assert compose(s, t) == Injection(4, 1, (1,))
    with pytest.raises(GradingError):
        compose(t, s)


def test_tensor_shifts_right_block():
    s = Injection(2, 1, (0,))
    t = Injection(3, 2, (2, 1))
    assert tensor(s, t) == Injection(5, 3, (0, 4, 3))


def test_symmetry():
    assert symmetry(2, 1) == Injection(3, 3, (2, 0, 1))
    assert symmetry(0, 2) == identity(2)
    assert compose(symmetry(2, 1), symmetry(1, 2)) == identity(3)


def test_enumeration_counts_and_order():
    for a in range(5):
        for b in range(5):
            found = enumerate_injections(a, b)
            expected = math.perm(a, b) if b <= a else 0
            assert len(found) == expected
            assert len(set(found)) == len(found)
    # lexicographic, identity first
    assert enumerate_injections(2, 2)[0] == identity(2)
    assert [t.map for t in enumerate_injections(3, 2)] == [
        (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


def test_embed_examples():
    # dropping the only grade wire merges both settings into the empty word
    m = embed(discard(1))
    assert m.rows == ((1, 1),)
    assert embed(identity(2)) == identity_matrix(2)
    assert embed(symmetry(1, 1)) == swap_matrix(1, 1)


def test_embed_symmetry_is_swap():
    for a in range(4):
        for b in range(4 - a):
            assert embed(symmetry(a, b)) == swap_matrix(a, b)


def test_embed_functorial():
    # exhaustive over all composable pairs up to grade 3
    for n in range(4):
        for m in range(n + 1):
            for l in range(m + 1):
                for s in enumerate_injections(n, m):
                    for t in enumerate_injections(m, l):
                        left = embed(compose(s, t))
                        right = matmul(embed(s), embed(t))
                        assert left == right


def test_embed_monoidal():
    for s in enumerate_injections(2, 1):
        for t in enumerate_injections(2, 2):
            assert embed(tensor(s, t)) == kron(embed(s), embed(t))
