"""Supersingular elliptic curves over F_{p^2} and their 2-isogeny graph.

Vertices are j-invariants. Each j is realised on a fixed short Weierstrass
model (:func:`curve_from_j`) and edges are 2-isogenies computed with
Velu's formulas from the three roots of the 2-division cubic. Neighbour
lists are sorted by (codomain j, kernel x) encoding so walks and hashes are
machine independent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .field import Fp2Element, FieldError, PrimeCtx, get_ctx, poly_roots

__all__ = [
    "EllipticModel",
    "EllipticPath",
    "NotSupersingularError",
    "PathNotFoundError",
    "curve_from_j",
    "j_invariant",
    "two_torsion",
    "two_isogeny_step",
    "neighbors",
    "neighbors_j",
    "dual_kernel",
    "kernel_to",
    "is_supersingular",
    "supersingular_j",
    "count_points",
    "mitm_path",
    "random_walk_path",
    "cgl_hash",
]


class NotSupersingularError(ValueError):
    """The curve lacks full rational 2-torsion, so it cannot be a graph vertex."""


class PathNotFoundError(RuntimeError):
    pass


@dataclass(frozen=True)
class EllipticModel:
    """y^2 = x^3 + a*x + b."""

    a: Fp2Element
    b: Fp2Element

    def __post_init__(self):
        if (self.a * self.a * self.a * 4 + self.b * self.b * 27).is_zero():
            raise FieldError("singular elliptic model")

    @property
    def ctx(self) -> PrimeCtx:
        return self.a.ctx


def j_invariant(m: EllipticModel) -> Fp2Element:
    a3 = m.a * m.a * m.a * 4
    return a3 * 1728 / (a3 + m.b * m.b * 27)


def curve_from_j(j: Fp2Element) -> EllipticModel:
    ctx = j.ctx
    if j.is_zero():
        return EllipticModel(ctx.zero, ctx.one)
    if j == 1728:
        return EllipticModel(ctx.one, ctx.zero)
    k = j * (1728 - j)
    return EllipticModel(k * 3, k * (1728 - j) * 2)


def two_torsion(m: EllipticModel) -> list[Fp2Element]:
    """Sorted x-coordinates of the nonzero 2-torsion points defined over F_{p^2}."""
    ctx = m.ctx
    return poly_roots([m.b, m.a, ctx.zero, ctx.one])


def two_isogeny_step(m: EllipticModel, x0: Fp2Element) -> EllipticModel:
    """Codomain of the 2-isogeny with kernel <(x0, 0)> (Velu)."""
    if not (x0 * x0 * x0 + m.a * x0 + m.b).is_zero():
        raise ValueError(f"{x0!r} is not a 2-torsion abscissa")
    v = x0 * x0 * 3 + m.a
    return EllipticModel(m.a - v * 5, m.b - x0 * v * 7)


@lru_cache(maxsize=1 << 16)
def neighbors(j: Fp2Element) -> tuple[tuple[Fp2Element, Fp2Element], ...]:
    """The three 2-isogeny edges out of j as sorted (codomain j, kernel x) pairs.

    Kernels are expressed on ``curve_from_j(j)``.
    """
    m = curve_from_j(j)
    xs = two_torsion(m)
    if len(xs) != 3:
        raise NotSupersingularError(
            f"j={j!r} has {len(xs)} rational 2-torsion points: not supersingular-compatible"
        )
    out = [(j_invariant(two_isogeny_step(m, x)), x) for x in xs]
    out.sort(key=lambda e: (e[0].key(), e[1].key()))
    return tuple(out)


def neighbors_j(j: Fp2Element) -> list[Fp2Element]:
    return [e[0] for e in neighbors(j)]


def kernel_to(j: Fp2Element, target: Fp2Element) -> Fp2Element:
    """First kernel (in canonical order) of an edge j -> target."""
    for jj, x in neighbors(j):
        if jj == target:
            return x
    raise ValueError(f"{target!r} is not adjacent to {j!r}")


def _cube_root(x: Fp2Element) -> Fp2Element | None:
    roots = poly_roots([-x, x.ctx.zero, x.ctx.zero, x.ctx.one])
    return roots[0] if roots else None


def dual_kernel(j: Fp2Element, x0: Fp2Element) -> tuple[Fp2Element, Fp2Element]:
    """(j', x') where x' is the kernel of the dual of j --x0--> j' on curve_from_j(j')."""
    m = curve_from_j(j)
    image = two_isogeny_step(m, x0)
    jj = j_invariant(image)
    x1 = next(x for x in two_torsion(m) if x != x0)
    v = x0 * x0 * 3 + m.a
    xd = x1 + v / (x1 - x0)
    target = curve_from_j(jj)
    # isomorphism image -> target acts on abscissas as x -> u^2 x
    if not image.a.is_zero() and not image.b.is_zero():
        u2 = target.a * image.b / (image.a * target.b)
    elif image.b.is_zero():
        u2 = (target.a / image.a).sqrt()
    else:
        u2 = _cube_root(target.b / image.b)
    if u2 is not None:
        xt = u2 * xd
        if (xt * xt * xt + target.a * xt + target.b).is_zero():
            if j_invariant(two_isogeny_step(target, xt)) == j:
                return jj, xt
    return jj, kernel_to(jj, j)


# -- supersingularity ---------------------------------------------------------


def _ec_add(P, Q, a):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2).is_zero():
            return None
        lam = (x1 * x1 * 3 + a) / (y1 * 2)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def _ec_mul(P, n, a):
    R = None
    while n:
        if n & 1:
            R = _ec_add(R, P, a)
        P = _ec_add(P, P, a)
        n >>= 1
    return R


def _random_point(m: EllipticModel, rng: random.Random):
    ctx = m.ctx
    while True:
        x = ctx.random(rng)
        y = (x * x * x + m.a * x + m.b).sqrt()
        if y is not None:
            return (x, y)


def count_points(m: EllipticModel) -> int:
    """#E(F_{p^2}) by exhaustive character sum; intended for small p only."""
    ctx = m.ctx
    p = ctx.p
    total = 1
    for x in ctx.elements():
        r = x * x * x + m.a * x + m.b
        if r.is_zero():
            total += 1
        else:
            total += 2 if pow(r.norm(), (p - 1) // 2, p) == 1 else 0
    return total


def is_supersingular(m: EllipticModel, rounds: int = 64, seed: int = 0) -> bool:
    """Probabilistic test; error below 2^-rounds for ordinary curves.

    :func:`count_points` gives the exhaustive answer (trace = 0 mod p) at
    small p and is used to cross-check this routine.

    The test runs on ``curve_from_j(j(m))``, a twist whose group over
    F_{p^2} has exponent p+1 or p-1 whenever the curve is supersingular.
    """
    j = j_invariant(m)
    ctx = j.ctx
    p = ctx.p
    base = curve_from_j(j)
    rng = random.Random(seed)
    plus = minus = True
    for _ in range(rounds):
        P = _random_point(base, rng)
        if plus and _ec_mul(P, p + 1, base.a) is not None:
            plus = False
        if minus and _ec_mul(P, p - 1, base.a) is not None:
            minus = False
        if not (plus or minus):
            return False
    return plus or minus


def supersingular_j(p: int) -> Fp2Element:
    """A fixed supersingular j: 1728 if p = 3 (mod 4), else 0 if p = 2 (mod 3),
    else the smallest one in F_p."""
    ctx = get_ctx(p)
    if p % 4 == 3:
        return ctx(1728)
    if p % 3 == 2:
        return ctx(0)
    for k in range(1, p):
        j = ctx(k)
        if len(two_torsion(curve_from_j(j))) == 3 and is_supersingular(curve_from_j(j)):
            return j
    raise NotSupersingularError(f"no supersingular j found in F_{p}")


# -- paths --------------------------------------------------------------------


@dataclass
class EllipticPath:
    """Walk j_0 -> ... -> j_n with the kernel abscissa of each step on curve_from_j(j_i)."""

    vertices: list[Fp2Element]
    kernels: list[Fp2Element] = field(default_factory=list)

    def __len__(self):
        return len(self.kernels)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def is_path(self) -> bool:
        """True when no vertex repeats (an acyclic walk)."""
        return len(set(self.vertices)) == len(self.vertices)

    def verify(self) -> bool:
        if len(self.vertices) != len(self.kernels) + 1:
            return False
        for j, x, jn in zip(self.vertices, self.kernels, self.vertices[1:]):
            try:
                if j_invariant(two_isogeny_step(curve_from_j(j), x)) != jn:
                    return False
            except (ValueError, FieldError):
                return False
        return True

    def reversed(self) -> "EllipticPath":
        verts = [self.vertices[-1]]
        kers = []
        for j, x in zip(reversed(self.vertices[:-1]), reversed(self.kernels)):
            _, xd = dual_kernel(j, x)
            kers.append(xd)
            verts.append(j)
        return EllipticPath(verts, kers)


def _expand(frontier, seen, parity_mode):
    """Expand one BFS layer. States are j or (j, parity); seen maps state -> (parent, kernel, depth)."""
    nxt = []
    for state in frontier:
        j, par = state if parity_mode else (state, None)
        depth = seen[state][2] + 1
        for jj, x in neighbors(j):
            s = (jj, par ^ 1) if parity_mode else jj
            if s not in seen:
                seen[s] = (state, x, depth)
                nxt.append(s)
    return nxt


def _trace(seen, state):
    """States from the BFS root to ``state`` together with the kernels used."""
    states, kers = [state], []
    while seen[state][0] is not None:
        state, x, _ = seen[state]
        states.append(state)
        kers.append(x)
    states.reverse()
    kers.reverse()
    return states, kers


def mitm_path(
    j1: Fp2Element,
    j2: Fp2Element,
    parity: int | str | None = None,
    max_len: int = 256,
) -> EllipticPath:
    """Bidirectional breadth-first search from j1 and j2.

    Without a parity the result is a shortest path. With ``parity`` (0/1 or
    "even"/"odd") the search runs on (vertex, length parity) states and
    returns a shortest walk of that parity, which may revisit a vertex.
    """
    if isinstance(parity, str):
        parity = {"even": 0, "odd": 1}[parity]
    pm = parity is not None
    s1 = (j1, 0) if pm else j1
    s2 = (j2, 0) if pm else j2
    seen1, seen2 = {s1: (None, None, 0)}, {s2: (None, None, 0)}

    def partner(s):
        return (s[0], s[1] ^ parity) if pm else s

    def best_hit(new, seen, other):
        best = None
        for s in new:
            o = partner(s)
            if o in other:
                key = (seen[s][2] + other[o][2], (s[0] if pm else s).key())
                if best is None or key < best[0]:
                    best = (key, s, o)
        return best

    f1, f2 = [s1], [s2]
    hit = best_hit(f1, seen1, seen2)
    if hit is not None:
        a, b = hit[1], hit[2]
    d1 = d2 = 0
    while hit is None:
        if d1 + d2 >= max_len or (not f1 and not f2):
            raise PathNotFoundError(
                f"no path within length {max_len}; retry with a larger max_len"
            )
        if f1 and (len(f1) <= len(f2) or not f2):
            f1 = _expand(f1, seen1, pm)
            d1 += 1
            hit = best_hit(f1, seen1, seen2)
            if hit is not None:
                a, b = hit[1], hit[2]
        else:
            f2 = _expand(f2, seen2, pm)
            d2 += 1
            hit = best_hit(f2, seen2, seen1)
            if hit is not None:
                b, a = hit[1], hit[2]
    states1, k1 = _trace(seen1, a)
    states2, k2 = _trace(seen2, b)
    verts = [s[0] if pm else s for s in states1]
    kers = list(k1)
    back = [s[0] if pm else s for s in states2]
    # second tree is walked backwards: back[i+1] -> back[i]
    for i in range(len(back) - 2, -1, -1):
        _, xd = dual_kernel(back[i], k2[i])
        kers.append(xd)
        verts.append(back[i])
    return EllipticPath(verts, kers)


def random_walk_path(
    j1: Fp2Element,
    j2: Fp2Element,
    seed: int = 0,
    max_steps: int = 10**7,
) -> EllipticPath:
    """Low-memory fallback: non-backtracking random walk from j1 until it hits j2."""
    rng = random.Random(seed)
    verts, kers = [j1], []
    back = None
    j = j1
    for _ in range(max_steps):
        if j == j2:
            return EllipticPath(verts, kers)
        edges = [e for e in neighbors(j) if e[1] != back] or list(neighbors(j))
        jj, x = edges[rng.randrange(len(edges))]
        _, back = dual_kernel(j, x)
        verts.append(jj)
        kers.append(x)
        j = jj
    raise PathNotFoundError(f"random walk did not reach target in {max_steps} steps")


# -- CGL hash -----------------------------------------------------------------


def cgl_hash(
    ctx: PrimeCtx,
    j0: Fp2Element,
    j_prev: Fp2Element,
    msg: str,
    coeffs: tuple[int, int] = (1, 1),
) -> tuple[Fp2Element, int]:
    """Hash a bit string by a non-backtracking walk in the 2-isogeny graph.

    At each vertex one copy of the arriving vertex is removed from the
    neighbour multiset; the remaining two are ordered by encoding and the
    message bit selects one. The end point is finalised with the linear map
    (c0, c1) -> a*c0 + b*c1 over F_p.
    """
    if j_prev not in neighbors_j(j0):
        raise ValueError(f"{j_prev!r} is not a neighbour of {j0!r}")
    prev, cur = j_prev, j0
    for bit in msg:
        if bit not in "01":
            raise ValueError(f"message must be a bit string, got {msg!r}")
        nbrs = neighbors_j(cur)
        nbrs.remove(prev)
        prev, cur = cur, nbrs[int(bit)]
    a, b = coeffs
    return cur, (a * cur.c0 + b * cur.c1) % ctx.p
