"""Which of the 15 splittings a non-backtracking walk may take next."""

from __future__ import annotations

from dataclasses import dataclass

from .invariants import node_id
from .model import GenusTwoModel, SPLITTINGS, splitting_from_pairs
from .richelot import richelot_step

__all__ = ["cds_admissible", "takashima_admissible", "CdsHashResult", "cds_hash"]


def _check(dual):
    return splitting_from_pairs(dual)


def cds_admissible(dual) -> list:
    """The 8 splittings sharing no pair with ``dual``.

    These are the kernels meeting the incoming dual kernel trivially, so the
    composite of consecutive steps stays a (4,4)-type isogeny.
    """
    pairs = set(_check(dual))
    return [s for s in SPLITTINGS if not pairs.intersection(s)]


def takashima_admissible(dual) -> list:
    """Every splitting except the one leading straight back."""
    dual = _check(dual)
    return [s for s in SPLITTINGS if s != dual]


@dataclass
class CdsHashResult:
    node: str | None
    steps: int
    failed: bool = False

    def to_json(self) -> dict:
        return {"node_id": self.node, "steps": self.steps, "failed": self.failed}


def cds_hash(start: GenusTwoModel, start_dual, msg) -> CdsHashResult:
    """Hash a sequence of base-8 digits by walking the admissible splittings.

    Fails (``failed=True``, ``node=None``) as soon as a step reaches a
    product of elliptic curves.
    """
    model, dual = start, _check(start_dual)
    for i, digit in enumerate(msg):
        digit = int(digit)
        if not 0 <= digit < 8:
            raise ValueError(f"message digit {digit} is not base 8")
        out = richelot_step(model, cds_admissible(dual)[digit])
        if out.is_product:
            return CdsHashResult(None, i + 1, True)
        model, dual = out.model, out.dual
    return CdsHashResult(node_id(model), len(msg))
