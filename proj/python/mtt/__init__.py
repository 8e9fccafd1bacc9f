"""Multi-tracklet tracking engine."""

try:
    from ._mtt import *  # installed wheel layout
    from ._mtt import __version__
except ImportError:  # in-tree build: module sits next to the package
    from _mtt import *  # noqa: F401,F403
    from _mtt import __version__  # noqa: F401
