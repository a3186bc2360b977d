"""Deterministic SHA-1 driven walks in the (2,2)-isogeny graph."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..field import get_ctx
from ..genus1 import supersingular_j
from ..genus2 import (
    GenusTwoModel,
    JacobianOutcome,
    ProductOutcome,
    SPLITTINGS,
    product_neighbors,
    richelot_step,
    takashima_admissible,
)

__all__ = [
    "WalkChain",
    "next_walk",
    "WalkStep",
    "WalkRecord",
    "walk_from",
    "choose_splitting",
    "default_start",
    "x5x_curve",
    "target_start",
    "MODES",
]

MODES = ("appendix", "nbt")


@dataclass(frozen=True)
class WalkChain:
    state: str
    origin: str = ""

    @classmethod
    def from_seed(cls, seed: str) -> "WalkChain":
        return cls(seed, seed)


def next_walk(chain: WalkChain) -> tuple[list[int], WalkChain]:
    """Digits 1..15 of the next walk and the advanced chain.

    The digest of the current state is the new state; its non-zero hex
    characters are the step digits.
    """
    h = hashlib.sha1(chain.state.encode()).hexdigest()
    return [int(c, 16) for c in h if c != "0"], WalkChain(h, chain.origin)


@dataclass(frozen=True)
class WalkStep:
    model: GenusTwoModel
    splitting: tuple

    def to_json(self) -> dict:
        return {"model": self.model.to_json(), "splitting": [list(pr) for pr in self.splitting]}


@dataclass
class WalkRecord:
    start: GenusTwoModel
    steps: list = field(default_factory=list)
    end: GenusTwoModel | None = None
    end_dual: tuple | None = None
    product: ProductOutcome | None = None
    digits_used: int = 0
    refused: int = 0


def choose_splitting(digit: int, mode: str, dual) -> tuple:
    if not 1 <= digit <= 15:
        raise ValueError("walk digits lie in 1..15")
    if mode == "appendix" or dual is None:
        return SPLITTINGS[digit - 1]
    if mode == "nbt":
        return takashima_admissible(dual)[(digit - 1) % 14]
    raise ValueError(f"unknown walk mode {mode!r}")


def walk_from(start: GenusTwoModel, digits, mode: str = "appendix", on_product: str = "stop", start_dual=None) -> WalkRecord:
    """Follow one splitting per digit from ``start``.

    ``on_product="stop"`` ends the walk at the first product outcome;
    ``"skip"`` stays put instead and moves on to the next digit.
    """
    if on_product not in ("stop", "skip"):
        raise ValueError("on_product must be 'stop' or 'skip'")
    rec = WalkRecord(start=start, end=start, end_dual=start_dual)
    model, dual = start, start_dual
    for d in digits:
        s = choose_splitting(d, mode, dual)
        out = richelot_step(model, s)
        rec.digits_used += 1
        if isinstance(out, ProductOutcome):
            if on_product == "skip":
                rec.refused += 1
                continue
            rec.steps.append(WalkStep(model, s))
            rec.product = out
            break
        rec.steps.append(WalkStep(model, s))
        model, dual = out.model, out.dual
    rec.end, rec.end_dual = model, dual
    return rec


def default_start(p: int) -> tuple[GenusTwoModel, tuple]:
    """First Jacobian obtained by gluing a supersingular curve to itself, with its dual kernel.

    The curve is j = 1728 when p = 3 (mod 4), see :func:`supersingular_j`.
    """
    j = supersingular_j(p)
    out = next(o for o in product_neighbors(j, j) if isinstance(o, JacobianOutcome))
    return out.model, out.dual


def x5x_curve(p: int) -> GenusTwoModel:
    """y^2 = x^5 + x; superspecial exactly when p = 5, 7 (mod 8)."""
    ctx = get_ctx(p)
    z, o = ctx.zero, ctx.one
    return GenusTwoModel.from_poly([z, o, z, z, z, o])


def target_start(p: int, seed: str = "0", base: GenusTwoModel | None = None) -> tuple[GenusTwoModel, tuple | None]:
    """A pseudo-random Jacobian: one skip-mode walk driven by ``seed`` from ``base``."""
    if base is None:
        base, dual = default_start(p)
    else:
        dual = None
    digits, _ = next_walk(WalkChain.from_seed(seed))
    rec = walk_from(base, digits, "appendix", "skip", dual)
    return rec.end, rec.end_dual
