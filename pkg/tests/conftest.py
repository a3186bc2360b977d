import random

import pytest

from superspecial.field import get_ctx
from superspecial.genus2 import GenusTwoModel, INF, transform
from superspecial.graphwalk import census, default_start


@pytest.fixture(scope="session")
def census_cache():
    cache = {}

    def get(p):
        if p not in cache:
            cache[p] = census(p)
        return cache[p]

    return get


def random_mobius(ctx, rng):
    while True:
        M = ((ctx.random(rng), ctx.random(rng)), (ctx.random(rng), ctx.random(rng)))
        (a, b), (c, d) = M
        if not (a * d - b * c).is_zero():
            return M


def random_twist(m, rng):
    """Random Mobius change of coordinates and rescaling of the leading coefficient."""
    ctx = m.ctx
    scale = ctx.zero
    while scale.is_zero():
        scale = ctx.random(rng)
    return transform(m, random_mobius(ctx, rng), scale)


def random_model(ctx, rng, with_inf=False):
    roots = set()
    while len(roots) < (5 if with_inf else 6):
        roots.add(ctx.random(rng))
    roots = list(roots) + ([INF] if with_inf else [])
    lc = ctx.zero
    while lc.is_zero():
        lc = ctx.random(rng)
    return GenusTwoModel(lc, tuple(roots))
