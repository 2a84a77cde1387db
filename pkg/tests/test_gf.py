"""Field engine: construction, arithmetic, Frobenius, trace/norm, subfields."""

import random
from collections import Counter

import numpy as np
import pytest

from qlinset.errors import DivisionByZero, InvalidModulus, NotADivisor, NotPrime, TooLarge
from qlinset.gf import build_field


def test_build_field_sizes():
    assert build_field(2, 1, 5).size == 32
    assert build_field(3, 1, 5).size == 243
    assert build_field(2, 2, 2).size == 16


def test_build_field_multiplicative_order(f32):
    assert f32.order == 31
    g = f32.gen
    assert f32.pow_int(g, 31) == 1
    assert all(f32.pow_int(g, k) != 1 for k in range(1, 31))


def test_modulus_is_deterministic_and_frozen():
    # lexicographically least primitive polynomials, constant term first
    assert build_field(2, 1, 5).modulus == (1, 0, 0, 1, 0, 1)  # 1 + x^3 + x^5
    assert build_field(3, 1, 5).modulus == (1, 0, 0, 0, 2, 1)
    assert build_field(2, 2, 2).modulus == (1, 0, 0, 1, 1)
    assert build_field(2, 1, 5).spec_string == "2^1^5/1,0,0,1,0,1"


def test_modulus_override_roundtrip():
    ref = build_field(2, 1, 5)
    again = build_field(2, 1, 5, modulus=list(ref.modulus))
    assert again.modulus == ref.modulus
    # x^5 + x^2 + 1 is primitive too, and gives a different log table
    other = build_field(2, 1, 5, modulus=[1, 0, 1, 0, 0, 1])
    assert other.modulus == (1, 0, 1, 0, 0, 1)
    assert other.size == 32
    with pytest.raises(InvalidModulus):
        build_field(2, 1, 5, modulus=[1, 1, 1, 1, 1, 1])  # reducible
    with pytest.raises(InvalidModulus):
        # x^4+x^3+x^2+x+1 is irreducible but its root has order 5, not 15
        build_field(2, 1, 4, modulus=[1, 1, 1, 1, 1])


def test_construction_guards():
    with pytest.raises(NotPrime):
        build_field(4, 1, 3)
    with pytest.raises(TooLarge):
        build_field(2, 1, 25)


def test_scalar_arithmetic(f32):
    g = f32.gen
    assert f32.inv(1) == 1
    assert f32.mul(g, f32.pow_int(g, f32.order - 1)) == 1
    r = random.Random(0)
    for _ in range(100):
        x = r.randrange(f32.size)
        assert f32.add(x, f32.neg(x)) == 0
    with pytest.raises(DivisionByZero):
        f32.inv(0)


def test_addition_against_packed_oracle(f243):
    # Zech addition must agree with coefficient-wise addition mod p
    ctx = f243
    r = random.Random(1)
    for _ in range(2000):
        a, b = r.randrange(ctx.size), r.randrange(ctx.size)
        pa, pb = int(ctx._pck[a]), int(ctx._pck[b])
        ps = 0
        mult = 1
        for _ in range(ctx.m):
            ps += ((pa % ctx.p + pb % ctx.p) % ctx.p) * mult
            pa //= ctx.p
            pb //= ctx.p
            mult *= ctx.p
        assert ctx.add(a, b) == int(ctx._idx[ps])


def test_frobenius_matches_brute_force(f243):
    ctx = f243
    r = random.Random(2)

    def slow_pow_p_e(x, e):
        for _ in range(e):
            y = 1
            for _ in range(ctx.p):
                y = ctx.mul(y, x)
            x = y
        return x

    for _ in range(50):
        x = r.randrange(ctx.size)
        e = r.randrange(ctx.m)
        assert ctx.frobenius(x, e) == slow_pow_p_e(x, e)
    g = ctx.gen
    assert ctx.frobenius(g, ctx.h) != g  # g lies in no proper subfield


def test_frobenius_identity_and_period(f32):
    r = random.Random(3)
    for _ in range(50):
        x = r.randrange(f32.size)
        assert f32.frobenius(x, 0) == x
        y = f32.frobenius(x, f32.h)
        y = f32.frobenius(y, (f32.h * (f32.n - 1)) % f32.m)
        assert y == x


def test_frobenius_is_automorphism(f1024):
    ctx = f1024
    r = random.Random(4)
    for _ in range(10_000):
        a, b, e = r.randrange(ctx.size), r.randrange(ctx.size), r.randrange(ctx.m)
        assert ctx.frobenius(ctx.add(a, b), e) == ctx.add(
            ctx.frobenius(a, e), ctx.frobenius(b, e)
        )
        assert ctx.frobenius(ctx.mul(a, b), e) == ctx.mul(
            ctx.frobenius(a, e), ctx.frobenius(b, e)
        )


def test_trace_definition_and_range(f32):
    ctx = f32
    assert ctx.trace_rel(1, 1) == 1  # n = 5 terms in characteristic 2
    for x in ctx.elements():
        t = ctx.trace_rel(x, 1)
        assert ctx.in_subfield(t, 1)
        # direct orbit sum oracle
        acc, cur = 0, x
        for _ in range(ctx.n):
            acc = ctx.add(acc, cur)
            cur = ctx.frobenius(cur, ctx.h)
        assert acc == t
    with pytest.raises(NotADivisor):
        ctx.trace_rel(1, 2)


def test_trace_surjectivity_counts(f32):
    counts = Counter(f32.trace_rel(x, 1) for x in f32.elements())
    assert counts == {0: 16, 1: 16}  # each value hit q^(n-1) times


def test_norm_multiplicative_and_counts(f243):
    ctx = f243
    r = random.Random(5)
    assert ctx.norm_rel(1, 1) == 1
    assert ctx.norm_rel(0, 1) == 0
    for _ in range(200):
        x, y = r.randrange(ctx.size), r.randrange(ctx.size)
        assert ctx.norm_rel(ctx.mul(x, y), 1) == ctx.mul(
            ctx.norm_rel(x, 1), ctx.norm_rel(y, 1)
        )
    counts = Counter(ctx.norm_rel(x, 1) for x in ctx.nonzero())
    assert sorted(counts.values()) == [121, 121]  # (3^5-1)/2 each


def test_norm_against_orbit_product(f16_tower):
    ctx = f16_tower
    for s in (1, 2):
        for x in ctx.elements():
            prod, cur = 1, x
            for _ in range(ctx.n // s):
                prod = ctx.mul(prod, cur)
                cur = ctx.frobenius(cur, (ctx.h * s) % ctx.m)
            assert prod == ctx.norm_rel(x, s)
            assert ctx.in_subfield(ctx.norm_rel(x, s), s) or ctx.norm_rel(x, s) == 0


def test_trace_norm_orbit_formula_exhaustive(f243):
    # both maps agree with their defining Frobenius-orbit sum/product on
    # every element, for every divisor of n
    ctx = f243
    for s in (1, 5):
        for x in ctx.elements():
            acc, prod, cur = 0, 1, x
            for _ in range(ctx.n // s):
                acc = ctx.add(acc, cur)
                prod = ctx.mul(prod, cur)
                cur = ctx.frobenius(cur, (ctx.h * s) % ctx.m)
            assert acc == ctx.trace_rel(x, s)
            assert prod == ctx.norm_rel(x, s)


def test_tower_subfield_is_frobenius_fixed(f16_tower):
    ctx = f16_tower  # F_2 in F_4 in F_16
    f4 = [x for x in ctx.elements() if ctx.in_subfield(x, 1)]
    assert len(f4) == 4
    for x in f4:
        assert ctx.pow_int(x, 4) == x if x else True


def test_subfield_degree(f32):
    ctx = f32
    assert ctx.subfield_degree(0) == 1
    assert ctx.subfield_degree(ctx.gen) == ctx.m
    e = ctx.from_exp((ctx.size - 1) // (ctx.p - 1))
    assert ctx.subfield_degree(e) == 1

    # oracle: smallest d (any d, not only divisors) with x^(p^d) = x
    def slow_degree(x):
        cur = x
        for d in range(1, ctx.m + 1):
            cur = ctx.frobenius(cur, 1)
            if cur == x:
                return d
        raise AssertionError

    for x in ctx.elements():
        assert ctx.subfield_degree(x) == slow_degree(x)


def test_power_map_image_size():
    # x -> x^(q-1) has image of size (q^n-1)/(q-1), exhaustively for small fields
    for (p, h, n) in [(2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2)]:
        ctx = build_field(p, h, n)
        img = {ctx.pow_int(x, ctx.q - 1) for x in ctx.nonzero()}
        assert len(img) == (ctx.size - 1) // (ctx.q - 1)


def test_vector_ops_match_scalar(f243):
    ctx = f243
    rng = np.random.default_rng(6)
    A = rng.integers(0, ctx.size, 3000)
    B = rng.integers(0, ctx.size, 3000)
    va, vm = ctx.vadd(A, B), ctx.vmul(A, B)
    vn, vi = ctx.vneg(A), ctx.vinv(A)
    vp = ctx.vpow(A, 17)
    vf = ctx.vfrob(A, 3)
    for i in range(A.size):
        a, b = int(A[i]), int(B[i])
        assert va[i] == ctx.add(a, b)
        assert vm[i] == ctx.mul(a, b)
        assert vn[i] == ctx.neg(a)
        assert vi[i] == (ctx.inv(a) if a else 0)
        assert vp[i] == (ctx.pow_int(a, 17) if a else 0)
        assert vf[i] == ctx.frobenius(a, 3)
    total = 0
    for a in A.tolist():
        total = ctx.add(total, a)
    assert ctx.vfold_add(A) == total


def test_element_parse_format(f32):
    assert f32.fmt(0) == "0"
    assert f32.fmt(1) == "g^0"
    assert f32.parse("g^3") == 4
    assert f32.parse("0") == 0
    assert f32.parse("1") == 1
    with pytest.raises(ValueError):
        f32.parse("h^2")
