"""Genus-2 curve models carried by their Weierstrass points.

A model is ``y^2 = lc * prod(x - r)`` over its finite roots; a root may be
the point at infinity, in which case the affine polynomial is a quintic.
Roots are stored sorted by encoding with infinity last, so a splitting can
be written as three pairs of root indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..field import Fp2Element, FieldError, PrimeCtx, poly_from_roots, poly_roots, is_squarefree, poly_trim

__all__ = [
    "INF",
    "Label",
    "GenusTwoModel",
    "TwoTorsionNotRational",
    "Splitting",
    "SPLITTINGS",
    "enumerate_splittings",
    "splitting_from_pairs",
    "label_key",
    "encode_label",
    "decode_label",
    "mobius_apply",
    "mobius_from_triples",
    "find_isomorphisms",
]


class _Infinity:
    """Marker for the Weierstrass point at infinity of a quintic model."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def key(self):
        return (1 << 64, 0)

    def encode(self):
        return "inf"


INF = _Infinity()
Label = "Fp2Element | _Infinity"

# A splitting is three disjoint pairs of root indices covering 0..5.
Splitting = tuple


class TwoTorsionNotRational(FieldError):
    """The hyperelliptic polynomial does not split over F_{p^2}."""


def label_key(x):
    return x.key()


def encode_label(x) -> str:
    return x.encode()


def decode_label(ctx: PrimeCtx, text: str):
    return INF if text == "inf" else ctx.decode(text)


def _all_splittings(items):
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _all_splittings(remaining):
            out.append(((first, other),) + tail)
    return out


SPLITTINGS: tuple = tuple(sorted(_all_splittings(list(range(6)))))


def splitting_from_pairs(pairs) -> Splitting:
    """Canonical form of a pairing: pairs sorted internally and by smaller member."""
    s = tuple(sorted(tuple(sorted(pr)) for pr in pairs))
    if s not in SPLITTINGS:
        raise ValueError(f"{pairs!r} is not a pairing of the six labels")
    return s


def enumerate_splittings(m: "GenusTwoModel") -> list[Splitting]:
    """The 15 quadratic splittings (Lagrangian subgroups of the 2-torsion)."""
    if len(m.roots) != 6:
        raise TwoTorsionNotRational("2-torsion not rational")
    return list(SPLITTINGS)


@dataclass(frozen=True)
class GenusTwoModel:
    lc: Fp2Element
    roots: tuple

    def __post_init__(self):
        roots = tuple(sorted(self.roots, key=label_key))
        object.__setattr__(self, "roots", roots)
        if len(roots) != 6:
            raise TwoTorsionNotRational(f"expected 6 rational Weierstrass points, got {len(roots)}")
        if self.lc.is_zero():
            raise FieldError("zero leading coefficient")
        if len({r.key() for r in roots}) != 6:
            raise FieldError("singular curve: repeated Weierstrass point")

    @property
    def ctx(self) -> PrimeCtx:
        return self.lc.ctx

    @property
    def has_infinity(self) -> bool:
        return self.roots[-1] is INF

    @property
    def finite_roots(self) -> list:
        return [r for r in self.roots if r is not INF]

    def poly(self) -> list:
        """Affine coefficients of f, lowest degree first."""
        return poly_from_roots(self.finite_roots, self.lc)

    @classmethod
    def from_poly(cls, f: list) -> "GenusTwoModel":
        f = poly_trim(list(f))
        if len(f) not in (6, 7):
            raise ValueError("hyperelliptic polynomial must have degree 5 or 6")
        if not is_squarefree(f):
            raise FieldError("singular curve: f is not squarefree")
        roots = poly_roots(f)
        if len(roots) != len(f) - 1:
            raise TwoTorsionNotRational("2-torsion not rational: f does not split over F_{p^2}")
        if len(f) == 6:
            roots.append(INF)
        return cls(f[-1], tuple(roots))

    def to_json(self) -> dict:
        return {"lc": self.lc.encode(), "roots": [r.encode() for r in self.roots]}

    @classmethod
    def from_json(cls, ctx: PrimeCtx, data: dict) -> "GenusTwoModel":
        return cls(ctx.decode(data["lc"]), tuple(decode_label(ctx, r) for r in data["roots"]))

    def __repr__(self):
        return f"GenusTwoModel(lc={self.lc!r}, roots={list(self.roots)!r})"


# -- Mobius transformations ---------------------------------------------------


def _proj(x, ctx):
    return (ctx.one, ctx.zero) if x is INF else (x, ctx.one)


def _unproj(v):
    x, z = v
    if z.is_zero():
        return INF
    return x / z


def mobius_apply(M, x, ctx):
    """Image of a label under the matrix ((a, b), (c, d))."""
    (a, b), (c, d) = M
    X, Z = _proj(x, ctx)
    return _unproj((a * X + b * Z, c * X + d * Z))


def _to_standard(pts, ctx):
    # matrix sending pts[0], pts[1], pts[2] to 0, inf, 1
    (x1, z1), (x2, z2), (x3, z3) = (_proj(q, ctx) for q in pts)
    l1 = (z1, -x1)
    l2 = (z2, -x2)
    lam = l2[0] * x3 + l2[1] * z3
    mu = l1[0] * x3 + l1[1] * z3
    return ((l1[0] * lam, l1[1] * lam), (l2[0] * mu, l2[1] * mu))


def _inverse(M):
    (a, b), (c, d) = M
    return ((d, -b), (-c, a))


def _compose(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mobius_from_triples(src, dst, ctx):
    """The unique Mobius map sending the three labels ``src`` to ``dst``."""
    return _compose(_inverse(_to_standard(dst, ctx)), _to_standard(src, ctx))


def find_isomorphisms(m1: GenusTwoModel, m2: GenusTwoModel, first_only: bool = False) -> list:
    """All Mobius maps over F_{p^2} carrying the Weierstrass points of m1 onto those of m2.

    Over an algebraically closed field these are exactly the isomorphisms
    of the curves modulo the hyperelliptic involution; since all roots are
    rational, every such map is defined over F_{p^2}.
    """
    ctx = m1.ctx
    target = {r.key() for r in m2.roots}
    src = m1.roots[:3]
    found = []
    for dst in itertools.permutations(m2.roots, 3):
        M = _compose(_inverse(_to_standard(dst, ctx)), _to_standard(src, ctx))
        if all(mobius_apply(M, r, ctx).key() in target for r in m1.roots[3:]):
            found.append(M)
            if first_only:
                break
    return found


def transform(m: GenusTwoModel, M, scale: Fp2Element | None = None) -> GenusTwoModel:
    """Apply x -> M(x) to the Weierstrass points and rescale the leading coefficient."""
    ctx = m.ctx
    roots = tuple(mobius_apply(M, r, ctx) for r in m.roots)
    return GenusTwoModel(m.lc * (scale if scale is not None else ctx.one), roots)
