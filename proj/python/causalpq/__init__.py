"""Causal structure learning from interventional path queries.

Thin wrapper around the compiled extension; see the project README for the
full surface.
"""

try:
    from ._causalpq import *  # noqa: F401,F403  (installed layout)
    from . import _causalpq as _impl
except ImportError:  # in-tree build: extension sits on sys.path directly
    from _causalpq import *  # noqa: F401,F403
    import _causalpq as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
