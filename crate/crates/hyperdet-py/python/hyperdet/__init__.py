"""Fredholm determinants, Painleve tau functions and connection constants."""

from ._hyperdet import *  # noqa: F401,F403
from ._hyperdet import __all__  # noqa: F401
