import random
from collections import Counter

import pytest

from superspecial.field import FieldError, get_ctx
from superspecial.genus1 import (
    EllipticModel,
    NotSupersingularError,
    PathNotFoundError,
    cgl_hash,
    count_points,
    curve_from_j,
    dual_kernel,
    is_supersingular,
    j_invariant,
    mitm_path,
    neighbors,
    neighbors_j,
    random_walk_path,
    supersingular_j,
    two_isogeny_step,
    two_torsion,
)
from superspecial.graphwalk import count_s1


def closure(p):
    seen, todo = set(), [supersingular_j(p)]
    while todo:
        j = todo.pop()
        if j in seen:
            continue
        seen.add(j)
        todo.extend(neighbors_j(j))
    return seen


@pytest.mark.parametrize("p", [11, 13, 19, 23, 31, 47, 127])
def test_graph_size_matches_count(p):
    assert len(closure(p)) == count_s1(p)


def test_curve_from_j():
    ctx = get_ctx(127)
    rng = random.Random(0)
    for j in [ctx(0), ctx(1728)] + [ctx.random(rng) for _ in range(20)]:
        assert j_invariant(curve_from_j(j)) == j
    with pytest.raises(FieldError):
        EllipticModel(ctx.zero, ctx.zero)


@pytest.mark.parametrize("p", [11, 19, 23])
def test_weighted_symmetry(p):
    aut = lambda j: 6 if j == 0 else 4 if j == 1728 else 2
    verts = closure(p)
    for j in verts:
        c = Counter(neighbors_j(j))
        for k, m in c.items():
            assert m * aut(k) == Counter(neighbors_j(k))[j] * aut(j)


def test_dual_kernel_returns():
    ctx = get_ctx(8191)
    rng = random.Random(1)
    j = ctx(1728)
    for _ in range(60):
        jj, x = neighbors(j)[rng.randrange(3)]
        back, xd = dual_kernel(j, x)
        assert back == jj
        assert j_invariant(two_isogeny_step(curve_from_j(jj), xd)) == j
        j = jj


def test_supersingularity_against_point_counts():
    ctx = get_ctx(11)
    ss = closure(11)
    for j in ctx.elements():
        m = curve_from_j(j)
        # supersingular iff the trace over F_{p^2} is divisible by p
        exhaustive = (ctx.p ** 2 + 1 - count_points(m)) % ctx.p == 0
        assert is_supersingular(m) == exhaustive == (j in ss)


def test_ordinary_vertex_rejected():
    ctx = get_ctx(127)
    ordinary = next(j for j in (ctx(k) for k in range(1, 127)) if not is_supersingular(curve_from_j(j)))
    if len(two_torsion(curve_from_j(ordinary))) != 3:
        with pytest.raises(NotSupersingularError):
            neighbors(ordinary)


def test_mitm_small_prime():
    ctx = get_ctx(127)
    verts = sorted(closure(127))
    for a in verts:
        for b in verts:
            path = mitm_path(a, b)
            assert path.verify() and path.start == a and path.end == b and path.is_path()
            for par in (0, 1):
                q = mitm_path(a, b, parity=par)
                assert q.verify() and len(q) % 2 == par
            back = path.reversed()
            assert back.verify() and back.start == b


def test_mitm_budget():
    verts = sorted(closure(127))
    a = verts[0]
    far = next(b for b in verts if len(mitm_path(a, b)) >= 2)
    with pytest.raises(PathNotFoundError):
        mitm_path(a, far, max_len=1)


def test_random_walk_path():
    verts = sorted(closure(127))
    path = random_walk_path(verts[0], verts[-1], seed=3)
    assert path.verify() and path.end == verts[-1]


def test_cgl_hash():
    ctx = get_ctx(127)
    j0 = ctx(1728)
    prev = neighbors_j(j0)[0]
    a = cgl_hash(ctx, j0, prev, "0110")
    assert a == cgl_hash(ctx, j0, prev, "0110")
    j, digest = a
    assert digest == (j.c0 + j.c1) % 127
    assert cgl_hash(ctx, j0, prev, "") == (j0, 1728 % 127)
    with pytest.raises(ValueError):
        cgl_hash(ctx, j0, prev, "012")


@pytest.mark.parametrize("p,expected", [(127, 1728), (13, None), (29, 0), (37, None)])
def test_supersingular_j(p, expected):
    j = supersingular_j(p)
    if expected is not None:
        assert j == expected
    assert j.in_base_field()
    assert (p * p + 1 - count_points(curve_from_j(j))) % p == 0
