"""Arithmetic in F_p, F_{p^2} = F_p(t) with t^2 = d, and polynomials over F_{p^2}.

Elements are immutable value objects bound to a shared :class:`PrimeCtx`.
Polynomials are plain lists of elements, lowest degree first, always
trimmed so the last entry is nonzero (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import random
from functools import lru_cache

__all__ = [
    "FieldError",
    "PrimeCtx",
    "Fp2Element",
    "get_ctx",
    "is_prime",
    "sqrt_mod",
    "poly_trim",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_scale",
    "poly_divmod",
    "poly_mod",
    "poly_monic",
    "poly_gcd",
    "poly_derivative",
    "poly_eval",
    "poly_from_roots",
    "poly_powmod",
    "is_squarefree",
    "poly_tools",
    "poly_roots",
]

P_MAX = 1 << 62


class FieldError(ArithmeticError):
    """Raised on division by zero or on malformed field data."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    r, s = n - 1, 0
    while r % 2 == 0:
        r //= 2
        s += 1
    for a in small:
        x = pow(a, r, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_mod(a: int, p: int) -> int | None:
    """Square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


class PrimeCtx:
    """The field F_{p^2} = F_p(t), t^2 = d.

    ``d`` is -1 when p = 3 (mod 4) and otherwise the smallest positive
    quadratic non-residue, so element encodings are reproducible.
    """

    __slots__ = ("p", "d", "width", "zero", "one", "t", "__weakref__")

    def __init__(self, p: int, d: int | None = None):
        p = int(p)
        if not (5 < p < P_MAX) or not is_prime(p):
            raise FieldError(f"p must be a prime with 5 < p < 2^62, got {p}")
        if d is None:
            if p % 4 == 3:
                d = p - 1
            else:
                d = 2
                while pow(d, (p - 1) // 2, p) != p - 1:
                    d += 1
        d %= p
        if pow(d, (p - 1) // 2, p) != p - 1:
            raise FieldError(f"d={d} is not a non-residue mod {p}")
        if p % 4 == 3 and d != p - 1:
            raise FieldError("p = 3 (mod 4) requires d = -1")
        self.p = p
        self.d = d
        self.width = len(format(p, "x"))
        self.zero = Fp2Element(self, 0, 0)
        self.one = Fp2Element(self, 1, 0)
        self.t = Fp2Element(self, 0, 1)

    def __repr__(self):
        return f"PrimeCtx(p={self.p}, d={self.signed_d})"

    def __reduce__(self):
        return (get_ctx, (self.p, self.d))

    @property
    def signed_d(self) -> int:
        return self.d - self.p if self.d > self.p // 2 else self.d

    def __call__(self, c0, c1: int = 0) -> "Fp2Element":
        if isinstance(c0, Fp2Element):
            return c0
        return Fp2Element(self, c0 % self.p, c1 % self.p)

    def random(self, rng: random.Random) -> "Fp2Element":
        return Fp2Element(self, rng.randrange(self.p), rng.randrange(self.p))

    def elements(self):
        """Every element of F_{p^2}, in encoding order."""
        for c0 in range(self.p):
            for c1 in range(self.p):
                yield Fp2Element(self, c0, c1)

    def decode(self, text: str) -> "Fp2Element":
        """Inverse of :meth:`Fp2Element.encode`."""
        try:
            a, b = text.split("+")
            if not b.endswith("*t") or len(a) != self.width or len(b) != self.width + 2:
                raise ValueError
            c0, c1 = int(a, 16), int(b[:-2], 16)
        except ValueError:
            raise FieldError(f"malformed field element {text!r}") from None
        if c0 >= self.p or c1 >= self.p:
            raise FieldError(f"unreduced field element {text!r}")
        return Fp2Element(self, c0, c1)

    def nonresidue_fp2(self) -> "Fp2Element":
        """Smallest (in encoding order) non-square of F_{p^2}."""
        for c0 in range(self.p):
            for c1 in range(1, self.p):
                x = Fp2Element(self, c0, c1)
                if not x.is_square():
                    return x
        raise FieldError("no non-square found")  # unreachable


@lru_cache(maxsize=None)
def get_ctx(p: int, d: int | None = None) -> PrimeCtx:
    """Shared context per (p, d); contexts are immutable."""
    return PrimeCtx(p, d)


class Fp2Element:
    """c0 + c1*t with coordinates reduced into [0, p)."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: PrimeCtx, c0: int, c1: int):
        self.ctx = ctx
        self.c0 = c0
        self.c1 = c1

    def _lift(self, other) -> "Fp2Element":
        if isinstance(other, Fp2Element):
            return other
        if isinstance(other, int):
            return Fp2Element(self.ctx, other % self.ctx.p, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return Fp2Element(self.ctx, (self.c0 + other.c0) % p, (self.c1 + other.c1) % p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return Fp2Element(self.ctx, (self.c0 - other.c0) % p, (self.c1 - other.c1) % p)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        p = self.ctx.p
        return Fp2Element(self.ctx, -self.c0 % p, -self.c1 % p)

    def __mul__(self, other):
        ctx = self.ctx
        p = ctx.p
        if isinstance(other, int):
            return Fp2Element(ctx, self.c0 * other % p, self.c1 * other % p)
        if not isinstance(other, Fp2Element):
            return NotImplemented
        a0, a1, b0, b1 = self.c0, self.c1, other.c0, other.c1
        return Fp2Element(ctx, (a0 * b0 + ctx.d * a1 * b1) % p, (a0 * b1 + a1 * b0) % p)

    __rmul__ = __mul__

    def norm(self) -> int:
        p = self.ctx.p
        return (self.c0 * self.c0 - self.ctx.d * self.c1 * self.c1) % p

    def inv(self) -> "Fp2Element":
        n = self.norm()
        if n == 0:
            raise FieldError("inverse of zero")
        p = self.ctx.p
        ni = pow(n, -1, p)
        return Fp2Element(self.ctx, self.c0 * ni % p, -self.c1 * ni % p)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Fp2Element):
            return self.c0 == other.c0 and self.c1 == other.c1 and self.ctx.p == other.ctx.p
        if isinstance(other, int):
            return self.c1 == 0 and self.c0 == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0 or self.c1)

    def key(self) -> tuple[int, int]:
        """Sort key consistent with the lexicographic order of encodings."""
        return (self.c0, self.c1)

    def __lt__(self, other: "Fp2Element"):
        return self.key() < other.key()

    def is_zero(self) -> bool:
        return not (self.c0 or self.c1)

    def in_base_field(self) -> bool:
        return self.c1 == 0

    def frobenius(self) -> "Fp2Element":
        return Fp2Element(self.ctx, self.c0, -self.c1 % self.ctx.p)

    def encode(self) -> str:
        w = self.ctx.width
        return f"{self.c0:0{w}x}+{self.c1:0{w}x}*t"

    def __repr__(self):
        return self.encode()

    def __str__(self):
        if self.c1 == 0:
            return str(self.c0)
        return f"{self.c0}+{self.c1}*t"

    def is_square(self) -> bool:
        # x is a square in F_{p^2} iff its norm is a square in F_p
        n = self.norm()
        return n == 0 or pow(n, (self.ctx.p - 1) // 2, self.ctx.p) == 1

    def sqrt(self) -> "Fp2Element | None":
        """Canonical square root (smaller encoding of the pair), or None."""
        ctx = self.ctx
        p = ctx.p
        a, b = self.c0, self.c1
        if b == 0:
            r = sqrt_mod(a, p)
            if r is not None:
                root = Fp2Element(ctx, r, 0)
            else:
                # a is a non-residue; a/d is then a residue and (s*t)^2 = s^2*d
                s = sqrt_mod(a * pow(ctx.d, -1, p), p)
                root = Fp2Element(ctx, 0, s)
        else:
            n = sqrt_mod(self.norm(), p)
            if n is None:
                return None
            half = (p + 1) // 2
            x2 = (a + n) * half % p
            x = sqrt_mod(x2, p)
            if x is None or x == 0:
                x2 = (a - n) * half % p
                x = sqrt_mod(x2, p)
            if x is None or x == 0:
                return None
            y = b * pow(2 * x, -1, p) % p
            root = Fp2Element(ctx, x, y)
            if root * root != self:
                return None
        neg = -root
        return neg if neg.key() < root.key() else root


def fp2_arith(x: Fp2Element, y: Fp2Element | None, op: str) -> Fp2Element:
    """Dispatch form of the element operators; ``y`` is the exponent for pow."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "inv":
        return x.inv()
    if op == "neg":
        return -x
    if op == "pow":
        return x ** int(y)
    raise ValueError(f"unknown op {op!r}")


# -- polynomials ------------------------------------------------------------


def poly_trim(f: list) -> list:
    while f and not f[-1]:
        f.pop()
    return f


def poly_add(f: list, g: list) -> list:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = out[i] + c
    return poly_trim(out)


def poly_sub(f: list, g: list) -> list:
    return poly_add(f, [-c for c in g])


def poly_scale(f: list, c) -> list:
    return poly_trim([a * c for a in f])


def poly_mul(f: list, g: list) -> list:
    if not f or not g:
        return []
    zero = f[0].ctx.zero
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_divmod(f: list, g: list) -> tuple[list, list]:
    if not g:
        raise FieldError("polynomial division by zero")
    r = list(f)
    if len(r) < len(g):
        return [], r
    inv_lc = g[-1].inv()
    q = [g[0].ctx.zero] * (len(r) - len(g) + 1)
    dg = len(g) - 1
    for k in range(len(r) - len(g), -1, -1):
        c = r[k + dg] * inv_lc
        q[k] = c
        if c:
            for j in range(dg + 1):
                r[k + j] = r[k + j] - c * g[j]
    return poly_trim(q), poly_trim(r[:dg])


def poly_mod(f: list, g: list) -> list:
    return poly_divmod(f, g)[1]


def poly_monic(f: list) -> list:
    if not f:
        return []
    inv_lc = f[-1].inv()
    return [c * inv_lc for c in f]


def poly_gcd(f: list, g: list) -> list:
    """Monic gcd; gcd(0, 0) is an error."""
    if not f and not g:
        raise FieldError("gcd(0, 0) is undefined")
    a, b = list(f), list(g)
    while b:
        a, b = b, poly_mod(a, b)
    return poly_monic(a)


def poly_derivative(f: list) -> list:
    return poly_trim([c * i for i, c in enumerate(f)][1:])


def poly_eval(f: list, x):
    acc = x.ctx.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_from_roots(roots: list, lc=None) -> list:
    ctx = roots[0].ctx if roots else lc.ctx
    f = [ctx.one if lc is None else lc]
    for r in roots:
        f = poly_mul(f, [-r, ctx.one])
    return f


def poly_powmod(base: list, e: int, mod: list) -> list:
    ctx = mod[0].ctx
    result = [ctx.one]
    b = poly_mod(base, mod)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, b), mod)
        b = poly_mod(poly_mul(b, b), mod)
        e >>= 1
    return result


def is_squarefree(f: list) -> bool:
    if len(f) <= 1:
        return bool(f)
    return len(poly_gcd(f, poly_derivative(f))) == 1


def poly_tools(f: list, g: list) -> dict:
    return {
        "gcd": poly_gcd(f, g),
        "is_squarefree": is_squarefree(f),
        "derivative": poly_derivative(f),
    }


def _split_linear(f: list, q: int, rng: random.Random) -> list:
    """Roots of a monic f that is a product of distinct linear factors."""
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [-f[0]]
    ctx = f[0].ctx
    half = (q - 1) // 2
    while True:
        a = ctx.random(rng)
        h = poly_powmod([a, ctx.one], half, f)
        h1 = poly_sub(h, [ctx.one])
        g = poly_gcd(f, h1) if h1 else list(f)
        if 1 < len(g) < len(f):
            return _split_linear(g, q, rng) + _split_linear(poly_divmod(f, g)[0], q, rng)


def poly_roots(f: list, seed: int = 0) -> list:
    """All roots of f in F_{p^2}, with multiplicity, sorted by encoding.

    Cantor-Zassenhaus equal-degree splitting of gcd(f, x^{p^2} - x),
    repeated on the quotient to collect multiplicities.
    """
    f = poly_trim(list(f))
    if not f:
        raise FieldError("roots of the zero polynomial")
    ctx = f[0].ctx
    q = ctx.p * ctx.p
    rng = random.Random(seed)
    roots = []
    f = poly_monic(f)
    while len(f) > 1:
        xq = poly_powmod([ctx.zero, ctx.one], q, f)
        xq = poly_sub(xq, [ctx.zero, ctx.one])
        g = poly_gcd(f, xq) if xq else list(f)
        if len(g) == 1:
            break
        found = _split_linear(g, q, rng)
        roots.extend(found)
        f = poly_divmod(f, g)[0]
    roots.sort(key=Fp2Element.key)
    return roots
