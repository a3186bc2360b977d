"""(2,2)-isogenies: Richelot steps, splitting into products and gluing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..field import Fp2Element, FieldError
from ..genus1 import (
    EllipticModel,
    curve_from_j,
    j_invariant,
    neighbors,
    two_torsion,
)
from .model import INF, GenusTwoModel, SPLITTINGS, TwoTorsionNotRational, label_key, splitting_from_pairs

__all__ = [
    "DegenerateStepError",
    "JacobianOutcome",
    "ProductOutcome",
    "StepOutcome",
    "quadratic_forms",
    "richelot_delta",
    "richelot_step",
    "split_to_elliptic",
    "glue_elliptic",
    "product_neighbors",
    "jac_neighbors",
    "ANTI_ISOMETRIES",
]

# Bijections E1[2] -> E2[2] on sorted 2-torsion abscissas, indexed 1..6.
ANTI_ISOMETRIES = tuple(itertools.permutations(range(3)))


class DegenerateStepError(FieldError):
    """delta != 0 but the codomain polynomial is not squarefree."""


@dataclass(frozen=True)
class JacobianOutcome:
    model: GenusTwoModel
    dual: tuple
    delta: Fp2Element | None = None

    @property
    def is_product(self) -> bool:
        return False


@dataclass(frozen=True)
class ProductOutcome:
    j1: Fp2Element
    j2: Fp2Element
    kernel: tuple | None = None

    @property
    def is_product(self) -> bool:
        return True

    @property
    def pair(self) -> tuple:
        return (self.j1, self.j2)


StepOutcome = JacobianOutcome | ProductOutcome


# -- binary quadratic forms g2 X^2 + g1 XZ + g0 Z^2 ---------------------------


def _pair_form(r, s, ctx):
    if s is INF:
        return (ctx.zero, ctx.one, -r)
    if r is INF:
        return (ctx.zero, ctx.one, -s)
    return (ctx.one, -(r + s), r * s)


def quadratic_forms(m: GenusTwoModel, s) -> list[tuple]:
    """The three quadratics of a splitting, leading coefficient folded into the first."""
    ctx = m.ctx
    forms = [list(_pair_form(m.roots[a], m.roots[b], ctx)) for a, b in s]
    forms[0] = [c * m.lc for c in forms[0]]
    return [tuple(f) for f in forms]


def _det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _delta(G):
    # determinant with coefficient columns ordered from the constant term up
    return _det3([tuple(reversed(g)) for g in G])


def richelot_delta(m: GenusTwoModel, s) -> Fp2Element:
    return _delta(quadratic_forms(m, s))


def _jacobian_form(G, H):
    # G'H - GH' as a binary quadratic
    g2, g1, g0 = G
    h2, h1, h0 = H
    return (g2 * h1 - g1 * h2, (g2 * h0 - g0 * h2) * 2, g1 * h0 - g0 * h1)


def _form_roots(h):
    h2, h1, h0 = h
    if h2.is_zero():
        if h1.is_zero():
            raise DegenerateStepError("degenerate step: double root at infinity")
        return [-h0 / h1, INF]
    disc = h1 * h1 - h2 * h0 * 4
    if disc.is_zero():
        raise DegenerateStepError("degenerate step: repeated root")
    sq = disc.sqrt()
    if sq is None:
        raise TwoTorsionNotRational("2-torsion not rational on Richelot codomain")
    inv = (h2 * 2).inv()
    return [(-h1 + sq) * inv, (-h1 - sq) * inv]


def richelot_step(m: GenusTwoModel, s) -> StepOutcome:
    """Apply the (2,2)-isogeny with kernel given by the splitting s."""
    s = splitting_from_pairs(s)
    G = quadratic_forms(m, s)
    delta = _delta(G)
    if delta.is_zero():
        j1, j2 = split_to_elliptic(m, s)
        return ProductOutcome(j1, j2)
    H = [_jacobian_form(G[(i + 1) % 3], G[(i + 2) % 3]) for i in range(3)]
    root_pairs = [_form_roots(h) for h in H]
    flat = [r for pr in root_pairs for r in pr]
    if len({r.key() for r in flat}) != 6:
        raise DegenerateStepError("degenerate step: codomain sextic not squarefree")
    lc = delta.inv()
    for h in H:
        lc = lc * (h[0] if not h[0].is_zero() else h[1])
    model = GenusTwoModel(lc, tuple(flat))
    index = {r.key(): i for i, r in enumerate(model.roots)}
    dual = splitting_from_pairs([(index[a.key()], index[b.key()]) for a, b in root_pairs])
    return JacobianOutcome(model, dual, delta)


# -- products -------------------------------------------------------------------


class _QuadExt:
    """Arithmetic in F_{p^2}[w]/(w^2 - D) for a non-square D."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        self.a, self.b, self.D = a, b, D

    def _lift(self, o):
        if isinstance(o, _QuadExt):
            return o
        return _QuadExt(self.a.ctx(0) + o, self.a.ctx.zero, self.D)

    def __add__(self, o):
        o = self._lift(o)
        return _QuadExt(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return _QuadExt(-self.a, -self.b, self.D)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        return _QuadExt(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def inv(self):
        n = self.a * self.a - self.b * self.b * self.D
        ni = n.inv()
        return _QuadExt(self.a * ni, -self.b * ni, self.D)

    def __truediv__(self, o):
        return self * self._lift(o).inv()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inv()

    def __pow__(self, e):
        out = self._lift(1)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()


def _j_from_branch(u):
    """j-invariant of the double cover of P^1 branched at u1, u2, u3 and infinity."""
    lam = (u[2] - u[0]) / (u[1] - u[0])
    w = lam * lam - lam + 1
    return w * w * w * 256 / (lam * lam * (lam - 1) * (lam - 1))


def split_to_elliptic(m: GenusTwoModel, s) -> tuple[Fp2Element, Fp2Element]:
    """j-invariants of E1 x E2 when the splitting s has delta = 0.

    The quadratics span a pencil whose common harmonic pair (the roots of
    the Jacobian covariant of any two of them) is sent to 0 and infinity.
    Each quadratic then reads a_i X^2 + c_i Z^2, and the factors are
    y^2 = prod(a_i u + c_i) and y^2 = prod(c_i v + a_i).
    """
    ctx = m.ctx
    G = quadratic_forms(m, s)
    h2, h1, h0 = _jacobian_form(G[0], G[1])
    if h2.is_zero():
        if h1.is_zero():
            raise FieldError("degenerate diagonalisation")
        f1, f2 = (-h0, h1), (ctx.one, ctx.zero)
    else:
        disc = h1 * h1 - h2 * h0 * 4
        if disc.is_zero():
            raise FieldError("degenerate diagonalisation")
        sq = disc.sqrt()
        if sq is not None:
            w = sq
        else:
            w = _QuadExt(ctx.zero, ctx.one, disc)
        f1, f2 = (w - h1, h2 * 2), (-w - h1, h2 * 2)
    # (X, Z) = X' f2 + Z' f1 sends f1 -> 0 and f2 -> infinity
    us = []
    for g2, g1, g0 in G:
        a = g2 * f2[0] * f2[0] + g1 * f2[0] * f2[1] + g0 * f2[1] * f2[1]
        c = g2 * f1[0] * f1[0] + g1 * f1[0] * f1[1] + g0 * f1[1] * f1[1]
        mid = g2 * f1[0] * f2[0] * 2 + g1 * (f1[0] * f2[1] + f1[1] * f2[0]) + g0 * f1[1] * f2[1] * 2
        assert mid.is_zero(), "pencil not diagonalised"
        us.append(-c / a)
    j1 = _j_from_branch(us)
    j2 = _j_from_branch([u.inv() for u in us])
    if isinstance(j1, _QuadExt):
        assert j1.b.is_zero() and j2.b.is_zero(), "product factors not defined over F_{p^2}"
        j1, j2 = j1.a, j2.a
    j1, j2 = sorted((j1, j2), key=label_key)
    return j1, j2


def glue_elliptic(e1: EllipticModel, e2: EllipticModel, k: int) -> StepOutcome:
    """(2,2)-quotient of E1 x E2 by the graph of the k-th bijection E1[2] -> E2[2].

    The glued curve is y^2 = prod(x^2 - rho_i) where the rho_i are the
    shifted 2-torsion abscissas of E1 and 1/rho_i those of E2, arranged so
    the two cross-ratios match under the chosen bijection. When the
    bijection comes from an isomorphism E1 -> E2 the quotient is again a
    product and a ProductOutcome is returned.
    """
    if not 1 <= k <= 6:
        raise ValueError("anti-isometry index must be in 1..6")
    ctx = e1.ctx
    a = two_torsion(e1)
    b = two_torsion(e2)
    if len(a) != 3 or len(b) != 3:
        raise TwoTorsionNotRational("2-torsion not rational")
    sigma = ANTI_ISOMETRIES[k - 1]
    bb = [b[i] for i in sigma]
    lam1 = (a[2] - a[0]) / (a[1] - a[0])
    lam2 = (bb[2] - bb[0]) / (bb[1] - bb[0])
    mu = lam2 / lam1
    if mu == 1:
        return ProductOutcome(*sorted((j_invariant(e1), j_invariant(e2)), key=label_key))
    beta = (mu * a[2] - a[1]) / (1 - mu)
    rho = [x + beta for x in a]
    if any(r.is_zero() for r in rho):
        raise FieldError("degenerate gluing")
    squares = [r.is_square() for r in rho]
    if not all(squares):
        if any(squares):
            raise TwoTorsionNotRational("glued curve has irrational Weierstrass points")
        c = ctx.nonresidue_fp2()
        rho = [r * c for r in rho]
    pairs = []
    for r in rho:
        s = r.sqrt()
        pairs.append((s, -s))
    model = GenusTwoModel(ctx.one, tuple(x for pr in pairs for x in pr))
    index = {r.key(): i for i, r in enumerate(model.roots)}
    dual = splitting_from_pairs([(index[x.key()], index[y.key()]) for x, y in pairs])
    return JacobianOutcome(model, dual, None)


def product_neighbors(j1: Fp2Element, j2: Fp2Element) -> list[StepOutcome]:
    """The 15 outcomes out of E1 x E2: 9 products of 2-isogenies, then 6 gluings."""
    out: list[StepOutcome] = []
    for ja, xa in neighbors(j1):
        for jb, xb in neighbors(j2):
            out.append(ProductOutcome(*sorted((ja, jb), key=label_key), kernel=(xa, xb)))
    e1, e2 = curve_from_j(j1), curve_from_j(j2)
    for k in range(1, 7):
        out.append(glue_elliptic(e1, e2, k))
    return out


def jac_neighbors(m: GenusTwoModel) -> list[StepOutcome]:
    return [richelot_step(m, s) for s in SPLITTINGS]
