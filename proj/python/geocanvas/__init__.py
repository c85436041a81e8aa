"""Constraint-checked geometric construction engine.

The heavy lifting lives in the C++ extension; this package re-exports its
surface. JSON payloads cross the boundary as text.
"""

from ._core import (  # noqa: F401
    Session,
    analyze,
    eval_expr,
    export_catalog,
    integrate,
    nsolve,
    parse_expr,
    replay,
    run_scripted,
    verify,
    __version__,
)

__all__ = [
    "Session",
    "analyze",
    "eval_expr",
    "export_catalog",
    "integrate",
    "nsolve",
    "parse_expr",
    "replay",
    "run_scripted",
    "verify",
    "__version__",
]
