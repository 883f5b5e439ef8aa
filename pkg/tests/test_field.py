from __future__ import annotations

import random

import pytest

from clact.curvefield.field import FieldCtx, FieldError, embed, project


@pytest.mark.parametrize("q,k", [(11, 1), (11, 2), (13, 2), (13, 6),
                                 (131, 5), (419, 2), (5, 3)])
def test_field_axioms_random(q, k):
    F = FieldCtx.get(q, k)
    rng = random.Random(q * 100 + k)
    for _ in range(40):
        a, b, c = F.rand(rng), F.rand(rng), F.rand(rng)
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a != F.zero:
            assert F.mul(a, F.inv(a)) == F.one
    nz = F.one
    assert F.pow(nz, F.size - 1) == F.one


def test_modpoly_deterministic_and_minimal():
    # first irreducible binomial over F_11 is x^2 + 1 (since -1 is not a QR)
    assert FieldCtx.get(11, 2).modpoly == (1, 0, 1)
    # over F_13, x^2+1 splits (13 = 1 mod 4); x^2+2 is the first irreducible
    assert FieldCtx.get(13, 2).modpoly == (2, 0, 1)


def test_fermat_in_extension():
    F = FieldCtx.get(13, 3)
    rng = random.Random(0)
    for _ in range(20):
        a = F.rand(rng)
        if a == F.zero:
            continue
        assert F.pow(a, F.size - 1) == F.one


def test_sqrt_round_trip():
    for (q, k) in [(11, 1), (11, 2), (13, 2), (419, 1)]:
        F = FieldCtx.get(q, k)
        rng = random.Random(1)
        for _ in range(30):
            a = F.rand(rng)
            s = F.sqrt(F.mul(a, a))
            assert s is not None and s in (a, F.neg(a))


def test_sqrt_nonresidue_is_none():
    F = FieldCtx.get(11, 1)
    # 2 is not a QR mod 11
    assert F.sqrt((2,)) is None


def test_roots_of_small_polys():
    F = FieldCtx.get(13, 1)
    # x^2 + 1 has roots 5, 8 mod 13
    assert F.roots([F.one, F.zero, F.one]) == [(5,), (8,)]
    # x^4 - 1 has the four 4th roots of unity
    quartic = [F.neg(F.one), F.zero, F.zero, F.zero, F.one]
    assert sorted(F.roots(quartic)) == [(1,), (5,), (8,), (12,)]


def test_embedding_is_field_hom_and_sectioned():
    F2, F4 = FieldCtx.get(13, 2), FieldCtx.get(13, 4)
    rng = random.Random(2)
    for _ in range(30):
        a, b = F2.rand(rng), F2.rand(rng)
        ea, eb = embed(F2, F4, a), embed(F2, F4, b)
        assert embed(F2, F4, F2.mul(a, b)) == F4.mul(ea, eb)
        assert embed(F2, F4, F2.add(a, b)) == F4.add(ea, eb)
        assert project(F4, F2, ea) == a
    # elements outside the subfield project to None
    misses = sum(1 for _ in range(50) if project(F4, F2, F4.rand(rng)) is None)
    assert misses > 40


def test_embedding_deterministic():
    F1, F3 = FieldCtx.get(7, 1), FieldCtx.get(7, 3)
    x = (3,)
    y1 = embed(F1, F3, x)
    y2 = embed(F1, F3, x)
    assert y1 == y2 == (3, 0, 0)


def test_unsupported_fields_rejected():
    with pytest.raises(FieldError):
        FieldCtx(11, 7)
    with pytest.raises(FieldError):
        FieldCtx(1 << 17, 1)
