"""Rule-based flat colouring of line art and AB-pair dataset tools."""

try:
    from ._flatcolor import *  # noqa: F401,F403
    from ._flatcolor import __doc__  # noqa: F401
except ImportError:
    # in-tree build: the extension sits next to the build outputs
    from _flatcolor import *  # noqa: F401,F403
