"""Closed-form counts: |S1|, Lagrangian subgroups, the mass formula, attack exponents."""

from __future__ import annotations

from fractions import Fraction
from math import comb

__all__ = ["count_s1", "gaussian_binomial", "lagrangian_count", "mass_formula", "table_exponents", "expected_product_count"]

# B_2, B_4
_BERNOULLI = {1: Fraction(1, 6), 2: Fraction(-1, 30)}

# The printed quantum-search row; g = 6 does not follow g(g+1)/8.
_GROVER_PRINTED = {1: 0.25, 2: 0.75, 3: 1.5, 4: 2.5, 5: 3.75, 6: 4.25}


def count_s1(p: int) -> int:
    """Number of supersingular j-invariants in characteristic p."""
    if p <= 3:
        raise ValueError("p must exceed 3")
    r = p % 12
    eps = 0 if r == 1 else 2 if r == 11 else 1
    return p // 12 + eps


def expected_product_count(p: int) -> int:
    """Unordered pairs {E1, E2} of supersingular curves."""
    n = count_s1(p)
    return n * (n + 1) // 2


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def lagrangian_count(g: int, ell: int) -> int:
    """Number of maximal isotropic subgroups of (Z/ell)^(2g), i.e. the graph degree."""
    if g < 1:
        raise ValueError("g must be positive")
    return sum(gaussian_binomial(g, d, ell) * ell ** comb(g - d + 1, 2) for d in range(g + 1))


def mass_formula(g: int, p: int) -> Fraction:
    """Sum of 1/#Aut over superspecial g-dimensional ppavs.

    Evaluates prod_{i=1..g} (B_{2i} / 4i) (1 + (-p)^i). For g = 1 the
    product is negative; the absolute value is returned so the result is
    always a mass.
    """
    if g not in _BERNOULLI:
        raise ValueError(f"mass formula only tabulated for g in {sorted(_BERNOULLI)}")
    out = Fraction(1)
    for i in range(1, g + 1):
        out *= _BERNOULLI[i] / (4 * i) * (1 + (-p) ** i)
    return abs(out)


def table_exponents(g: int) -> dict:
    """log_p of the running times of the isogeny-path algorithms in dimension g.

    Entries that do not apply are None.
    """
    if g < 1:
        raise ValueError("g must be positive")
    n = g * (g + 1)
    return {
        "g": g,
        "alg1_classical": None if g == 1 else g - 1,
        "pollard": n / 4,
        "alg1_quantum": None if g == 1 else (g - 1) / 2,
        "grover_bjs": _GROVER_PRINTED.get(g, n / 8),
        "vow": 3 * n / 16,
        "tani": n / 12,
    }
