"""Python interface to the scatlab C++ library."""

from ._core import *  # noqa: F401,F403
from ._core import ScatlabError, __doc__  # noqa: F401

__version__ = "0.1.0"
