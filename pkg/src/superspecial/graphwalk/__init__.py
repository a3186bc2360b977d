"""Walk engines, product hunts, census and counting formulas for the (2,2)-isogeny graph."""

from .formulas import *  # noqa: F401,F403
from .walks import *  # noqa: F401,F403
from .hunt import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from . import formulas, walks, hunt, graph

__all__ = formulas.__all__ + walks.__all__ + hunt.__all__ + graph.__all__
