"""Genus-2 curves, principally polarised abelian surfaces and their (2,2)-isogenies."""

from .model import *  # noqa: F401,F403
from .model import transform
from .invariants import *  # noqa: F401,F403
from .richelot import *  # noqa: F401,F403
from .rules import *  # noqa: F401,F403
from . import model, invariants, richelot, rules

__all__ = model.__all__ + invariants.__all__ + richelot.__all__ + rules.__all__ + ["transform"]
