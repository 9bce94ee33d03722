"""Grammatic: modular grammar definitions, metadata weaving and ANTLR generation."""

try:
    from ._grammatic import *  # noqa: F401,F403
    from ._grammatic import __doc__  # noqa: F401
except ImportError:  # running against a build tree
    from _grammatic import *  # noqa: F401,F403
