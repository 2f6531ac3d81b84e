"""Entity linking for short social-media messages with author context."""

from ._core import *  # noqa: F401,F403
from ._core import DataError, NIL

__version__ = "0.1.0"
