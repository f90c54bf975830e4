import pytest

from plateau.field import FieldCtx, default_modulus, is_irreducible


def test_default_modulus_known_values():
    # classic minimal irreducibles in little-endian coefficient order
    assert default_modulus(2, 1) == (0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    assert default_modulus(3, 2) == (1, 0, 1)


def test_is_irreducible_rejects_products():
    # (x+1)^2 = x^2 + 2x + 1 over F_3
    assert not is_irreducible((1, 2, 1), 3)
    assert not is_irreducible((0, 0, 0, 1), 2)
    assert is_irreducible((1, 1, 1), 2)
    assert is_irreducible((1, 0, 1), 3)


def test_field_axioms_exhaustive_small():
    for p, deg in ((2, 3), (3, 2)):
        ctx = FieldCtx(p, deg)
        q = p**deg
        for a in range(q):
            assert ctx.mul(a, 1) == a
            assert ctx.mul(a, 0) == 0
            assert ctx.add(a, 0) == a
            for b in range(q):
                assert ctx.mul(a, b) == ctx.mul(b, a)
                assert ctx.add(ctx.sub(a, b), b) == a
                for c in range(q):
                    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(
                        ctx.mul(a, b), ctx.mul(a, c)
                    )
        for a in range(1, q):
            assert ctx.mul(a, ctx.inv(a)) == 1


def test_mul_associative_sampled():
    import random

    rng = random.Random(3)
    for p, deg in ((2, 6), (5, 2)):
        ctx = FieldCtx(p, deg)
        q = p**deg
        for _ in range(200):
            a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
            assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))


def test_pow_and_order():
    ctx = FieldCtx(2, 4)
    for a in range(1, 16):
        assert ctx.pow(a, 15) == 1
        assert ctx.pow(a, 16) == a
    assert ctx.pow(0, 0) == 1
    assert ctx.pow(0, 5) == 0
    with pytest.raises(ValueError):
        ctx.pow(1, -1)
    with pytest.raises(ZeroDivisionError):
        ctx.inv(0)


def test_frobenius_is_additive():
    for p, deg in ((2, 5), (3, 3)):
        ctx = FieldCtx(p, deg)
        q = p**deg
        import random

        rng = random.Random(11)
        for _ in range(100):
            a, b = rng.randrange(q), rng.randrange(q)
            left = ctx.pow(ctx.add(a, b), p)
            assert left == ctx.add(ctx.pow(a, p), ctx.pow(b, p))


def test_absolute_trace_properties():
    """Tr to the prime field is additive, onto, and fixed by Frobenius."""
    for p, deg in ((2, 4), (3, 3)):
        ctx = FieldCtx(p, deg)
        q = p**deg
        values = [ctx.rel_trace(a, 1) for a in range(q)]
        assert all(0 <= v < p for v in values)
        counts = [values.count(v) for v in range(p)]
        assert counts == [q // p] * p
        for a in range(q):
            assert ctx.rel_trace(ctx.pow(a, p), 1) == values[a]
            for b in range(q):
                s = ctx.add(a, b)
                assert values[s] == (values[a] + values[b]) % p


def test_relative_trace_composes_with_subfield_trace():
    """Tr^n_1 = Tr^m_1 of Tr^n_m, with the middle field its own context."""
    for p, deg, m in ((2, 6, 3), (2, 6, 2), (3, 4, 2)):
        big = FieldCtx(p, deg)
        small = FieldCtx(p, m)
        for a in range(p**deg):
            via = small.rel_trace(big.rel_trace(a, m), 1)
            assert via == big.rel_trace(a, 1), (p, deg, m, a)


def test_relative_trace_is_onto_subfield():
    big = FieldCtx(2, 6)
    seen = {big.rel_trace(a, 3) for a in range(64)}
    assert seen == set(range(8))
    counts = {}
    for a in range(64):
        t = big.rel_trace(a, 3)
        counts[t] = counts.get(t, 0) + 1
    assert set(counts.values()) == {8}


def test_rel_trace_validates_divisor():
    ctx = FieldCtx(2, 6)
    with pytest.raises(ValueError):
        ctx.rel_trace(1, 4)
    with pytest.raises(ValueError):
        ctx.rel_trace(64, 3)


def test_modulus_override():
    # x^4 + x^3 + 1 instead of the default x^4 + x + 1
    ctx = FieldCtx(2, 4, modulus=(1, 0, 0, 1, 1))
    assert ctx.modulus == (1, 0, 0, 1, 1)
    for a in range(1, 16):
        assert ctx.mul(a, ctx.inv(a)) == 1
    with pytest.raises(ValueError):
        FieldCtx(2, 4, modulus=(1, 1, 0, 0, 1, 1))
    with pytest.raises(ValueError):
        FieldCtx(2, 4, modulus=(0, 0, 0, 0, 1))
    with pytest.raises(ValueError):
        FieldCtx(2, 4, modulus=(1, 1, 0, 0, 2))


def test_trace_encoding_consistent_across_moduli():
    """Both F_16 presentations hand the same multiset of traces to F_4."""
    a16 = FieldCtx(2, 4)
    b16 = FieldCtx(2, 4, modulus=(1, 0, 0, 1, 1))
    ta = sorted(a16.rel_trace(x, 2) for x in range(16))
    tb = sorted(b16.rel_trace(x, 2) for x in range(16))
    assert ta == tb
    assert sorted(set(ta)) == [0, 1, 2, 3]


def test_ctx_immutable_and_checked():
    ctx = FieldCtx(3, 2)
    with pytest.raises(AttributeError):
        ctx.p = 5
    with pytest.raises(ValueError):
        ctx.mul(9, 1)
    with pytest.raises(ValueError):
        FieldCtx(4, 2)
    with pytest.raises(ValueError):
        FieldCtx(2, 0)
