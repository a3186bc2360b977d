import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from superspecial.field import (
    FieldError,
    PrimeCtx,
    get_ctx,
    is_prime,
    is_squarefree,
    poly_divmod,
    poly_eval,
    poly_from_roots,
    poly_gcd,
    poly_mul,
    poly_roots,
    sqrt_mod,
)

PRIMES = [7, 11, 13, 127, 8191, 1000003]


def elems(p):
    return st.tuples(st.integers(0, p - 1), st.integers(0, p - 1)).map(lambda c: get_ctx(p)(*c))


def test_convention_for_d():
    assert get_ctx(11).d % 11 == 10
    assert get_ctx(127).d % 127 == 126
    # 13 = 1 mod 4: smallest non-residue is 2
    assert get_ctx(13).d == 2
    assert get_ctx(17).d == 3


def test_bad_contexts():
    with pytest.raises(FieldError):
        PrimeCtx(15)
    with pytest.raises(FieldError):
        PrimeCtx(5)
    with pytest.raises(FieldError):
        PrimeCtx(13, 4)  # a square


def test_small_identities():
    ctx = get_ctx(11)
    t = ctx.t
    assert t * t == ctx(10)
    assert (ctx(3, 2) * ctx(3, -2)) == ctx(2)
    assert ctx(3).sqrt() == ctx(5)
    assert ctx(-1).sqrt() == t
    assert ctx(0).sqrt() == ctx.zero
    with pytest.raises(FieldError):
        ctx.zero.inv()


def test_encoding_round_trip_and_order():
    ctx = get_ctx(127)
    x = ctx(5, 100)
    assert x.encode() == "05+64*t"
    assert ctx.decode(x.encode()) == x
    xs = sorted(ctx.random(random.Random(i)) for i in range(50))
    assert [a.encode() for a in xs] == sorted(a.encode() for a in xs)


@pytest.mark.parametrize("p", [11, 13, 17])
def test_every_element_of_small_field(p):
    ctx = get_ctx(p)
    squares = 0
    for x in ctx.elements():
        if x.is_zero():
            continue
        assert x * x.inv() == ctx.one
        assert x ** (p * p - 1) == ctx.one
        r = x.sqrt()
        assert (r is not None) == x.is_square()
        if r is not None:
            squares += 1
            assert r * r == x
            assert r.key() <= (-r).key()
    assert squares == (p * p - 1) // 2


@settings(max_examples=200, deadline=None)
@given(elems(8191), elems(8191), elems(8191))
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == a.ctx.zero
    if not b.is_zero():
        assert (a / b) * b == a
    assert a.frobenius().frobenius() == a
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_is_prime_and_sqrt_mod():
    small = [n for n in range(2, 200) if all(n % k for k in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == small
    for p in [13, 17, 97, 8191]:
        for a in range(1, 60):
            r = sqrt_mod(a, p)
            if r is None:
                assert pow(a, (p - 1) // 2, p) == p - 1
            else:
                assert r * r % p == a % p


def test_roots_x3_minus_x():
    ctx = get_ctx(11)
    f = [ctx.zero, ctx(-1), ctx.zero, ctx.one]
    assert poly_roots(f) == [ctx(0), ctx(1), ctx(10)]


def test_roots_against_brute_force():
    ctx = get_ctx(11)
    rng = random.Random(5)
    everything = list(ctx.elements())
    for _ in range(200):
        f = [ctx.random(rng) for _ in range(6)] + [ctx.one]
        brute = []
        for x in everything:
            g, k = f, 0
            while True:
                q, r = poly_divmod(g, [-x, ctx.one])
                if any(not c.is_zero() for c in r):
                    break
                g, k = q, k + 1
            brute += [x] * k
        assert poly_roots(f, seed=rng.randrange(100)) == sorted(brute)


def test_polynomial_helpers():
    ctx = get_ctx(127)
    rs = [ctx(1), ctx(2, 3), ctx(5)]
    f = poly_from_roots(rs, ctx(7))
    assert all(poly_eval(f, r).is_zero() for r in rs)
    assert is_squarefree(f)
    assert not is_squarefree(poly_mul(f, poly_from_roots([ctx(1)])))
    g = poly_gcd(f, poly_from_roots([ctx(5), ctx(9)]))
    assert g == poly_from_roots([ctx(5)])
    q, r = poly_divmod(poly_mul(f, f), f)
    assert q == f and not r


@pytest.mark.parametrize("p", [127, 8191, 1000003])
def test_split_products_of_linear_factors(p):
    ctx = get_ctx(p)
    rng = random.Random(p)
    for _ in range(10):
        rs = sorted({ctx.random(rng) for _ in range(6)})
        assert poly_roots(poly_from_roots(rs, ctx(3))) == rs
