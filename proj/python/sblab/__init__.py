"""Subordinate Brownian motion boundary-behavior laboratory."""

try:
    from sblab._core import *  # noqa: F401,F403  installed layout
    from sblab._core import __doc__  # noqa: F401
except ImportError:  # build-tree layout: _core on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __doc__  # noqa: F401
