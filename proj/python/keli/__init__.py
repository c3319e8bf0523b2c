"""High-precision toolkit for the completed-zeta coefficient pipeline.

Numeric values cross the Python boundary as decimal strings in an exact
round-trip format; parse them with decimal.Decimal or mpmath if you need
arithmetic on the Python side.
"""

try:
    # installed layout: the extension lives inside the package
    from ._core import *  # noqa: F401,F403
    from . import _core as core  # noqa: F401
except ImportError:
    # build-tree layout: cmake drops the extension next to the build dir,
    # which the test harness puts on PYTHONPATH
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__version__ = "1.0.0"
