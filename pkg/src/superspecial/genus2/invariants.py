"""Isomorphism invariants of genus-2 models and products of elliptic curves."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..field import Fp2Element, FieldError
from .model import INF, GenusTwoModel, find_isomorphisms, SPLITTINGS

__all__ = [
    "IgusaClebsch",
    "igusa_clebsch",
    "node_id",
    "product_node_id",
    "is_product_id",
    "hasse_witt",
    "is_superspecial",
    "automorphism_count",
    "elliptic_aut_count",
    "HASSE_WITT_MAX_P",
]

HASSE_WITT_MAX_P = 1 << 16

_PAIRS = [(i, j) for i in range(6) for j in range(i + 1, 6)]
_TRIPLE_SPLITS = [
    (t, tuple(k for k in range(6) if k not in t))
    for t in itertools.combinations(range(6), 3)
    if 0 in t
]


@dataclass(frozen=True)
class IgusaClebsch:
    I2: Fp2Element
    I4: Fp2Element
    I6: Fp2Element
    I10: Fp2Element


def _squared_differences(m: GenusTwoModel) -> dict:
    ctx = m.ctx
    pts = [(ctx.one, ctx.zero) if r is INF else (r, ctx.one) for r in m.roots]
    D = {}
    for i, j in _PAIRS:
        (xi, zi), (xj, zj) = pts[i], pts[j]
        d = xi * zj - xj * zi
        D[i, j] = D[j, i] = d * d
    return D


def igusa_clebsch(m: GenusTwoModel) -> IgusaClebsch:
    """Igusa-Clebsch invariants as symmetric functions of the Weierstrass points.

    Uses the bracket expressions
      I2  = a^2  sum_15 (12)^2(34)^2(56)^2
      I4  = a^4  sum_10 (12)^2(23)^2(31)^2 (45)^2(56)^2(64)^2
      I6  = a^6  sum_60 (12)^2(23)^2(31)^2 (45)^2(56)^2(64)^2 (14)^2(25)^2(36)^2
      I10 = a^10 prod (ij)^2
    with brackets taken on projective coordinates so a root at infinity
    needs no special case.
    """
    D = _squared_differences(m)
    ctx = m.ctx
    i2 = ctx.zero
    for (a, b), (c, d), (e, f) in SPLITTINGS:
        i2 = i2 + D[a, b] * D[c, d] * D[e, f]
    i4 = ctx.zero
    i6 = ctx.zero
    for (a, b, c), (d, e, f) in _TRIPLE_SPLITS:
        inner = D[a, b] * D[b, c] * D[a, c] * D[d, e] * D[e, f] * D[d, f]
        i4 = i4 + inner
        cross = ctx.zero
        for x, y, z in itertools.permutations((d, e, f)):
            cross = cross + D[a, x] * D[b, y] * D[c, z]
        i6 = i6 + inner * cross
    i10 = ctx.one
    for pr in _PAIRS:
        i10 = i10 * D[pr]
    if i10.is_zero():
        raise FieldError("singular curve")
    a2 = m.lc * m.lc
    a4 = a2 * a2
    return IgusaClebsch(i2 * a2, i4 * a4, i6 * a4 * a2, i10 * a4 * a4 * a2)


def _normalized(ic: IgusaClebsch) -> tuple[str, list]:
    """Weight-0 coordinates of the weighted projective point (I2:I4:I6:I10).

    Case ladder:
      A  I2 != 0            I4/I2^2, I6/I2^3, I10/I2^5
      B  I2 = 0, I4 != 0    I6^2/I4^3, I6*I10/I4^4, I10^2/I4^5
      C  I2 = I4 = 0, I6 != 0   I10^3/I6^5
      D  I2 = I4 = I6 = 0   (a single point)
    Each tuple determines the point uniquely within its case.
    """
    I2, I4, I6, I10 = ic.I2, ic.I4, ic.I6, ic.I10
    zero = I2.ctx.zero
    if not I2.is_zero():
        u = I2.inv()
        u2 = u * u
        return "A", [I4 * u2, I6 * u2 * u, I10 * u2 * u2 * u]
    if not I4.is_zero():
        u = I4.inv()
        u3 = u * u * u
        return "B", [I6 * I6 * u3, I6 * I10 * u3 * u, I10 * I10 * u3 * u * u]
    if not I6.is_zero():
        u = I6.inv()
        u5 = u ** 5
        return "C", [I10 * I10 * I10 * u5, zero, zero]
    return "D", [zero, zero, zero]


def product_node_id(j1: Fp2Element, j2: Fp2Element) -> str:
    a, b = sorted((j1.encode(), j2.encode()))
    return f"P:{a},{b}"


def node_id(x) -> str:
    """Canonical label of an isomorphism class.

    ``J:<case>:<v1>,<v2>,<v3>`` for Jacobians, ``P:<j>,<j'>`` for products of
    elliptic curves given as a pair of j-invariants.
    """
    if isinstance(x, GenusTwoModel):
        case, vals = _normalized(igusa_clebsch(x))
        return f"J:{case}:" + ",".join(v.encode() for v in vals)
    j1, j2 = x
    return product_node_id(j1, j2)


def is_product_id(nid: str) -> bool:
    return nid.startswith("P:")


def _coeff_arrays(m: GenusTwoModel):
    f = m.poly()
    return (np.array([c.c0 for c in f], dtype=np.int64), np.array([c.c1 for c in f], dtype=np.int64))


def _mul_arrays(a, b, p, d):
    a0, a1 = a
    b0, b1 = b
    c00 = np.convolve(a0, b0) % p
    c11 = np.convolve(a1, b1) % p
    c01 = (np.convolve(a0, b1) + np.convolve(a1, b0)) % p
    return ((c00 + d * c11) % p, c01)


def hasse_witt(m: GenusTwoModel) -> list[list[Fp2Element]]:
    """Hasse-Witt matrix: coefficients of x^(i*p - j), i, j in {1, 2}, in f^((p-1)/2).

    The curve is superspecial exactly when this matrix vanishes.
    """
    ctx = m.ctx
    p = ctx.p
    if p > HASSE_WITT_MAX_P:
        raise ValueError(
            f"hasse_witt needs Theta(p) coefficient arithmetic; p={p} is too large, "
            "use walk-closure invariance instead"
        )
    base = _coeff_arrays(m)
    result = (np.array([1], dtype=np.int64), np.array([0], dtype=np.int64))
    e = (p - 1) // 2
    while e:
        if e & 1:
            result = _mul_arrays(result, base, p, ctx.d)
        e >>= 1
        if e:
            base = _mul_arrays(base, base, p, ctx.d)
    h0, h1 = result

    def coeff(k):
        if 0 <= k < len(h0):
            return ctx(int(h0[k]), int(h1[k]))
        return ctx.zero

    return [[coeff(i * p - j) for j in (1, 2)] for i in (1, 2)]


def is_superspecial(m: GenusTwoModel) -> bool:
    return all(c.is_zero() for row in hasse_witt(m) for c in row)


def elliptic_aut_count(j: Fp2Element) -> int:
    if j.is_zero():
        return 6
    if j == 1728:
        return 4
    return 2


def automorphism_count(nid: str, witness) -> int:
    """Order of the automorphism group of the principally polarised surface.

    Jacobians: twice the number of Mobius maps permuting the Weierstrass
    points (the factor 2 is the hyperelliptic involution). Products
    E1 x E2 with the product polarisation: |Aut E1| * |Aut E2|, doubled
    when E1 and E2 are isomorphic because the factors may be swapped.
    """
    if isinstance(witness, GenusTwoModel):
        if node_id(witness) != nid:
            raise ValueError("witness model does not match node id")
        return 2 * len(find_isomorphisms(witness, witness))
    j1, j2 = witness
    if product_node_id(j1, j2) != nid:
        raise ValueError("witness pair does not match node id")
    n = elliptic_aut_count(j1) * elliptic_aut_count(j2)
    return 2 * n if j1 == j2 else n
