"""Clifford+T circuit synthesis toolkit."""

import os
import sys


def _load_ext():
    try:
        from . import _tforge  # packaged install
        return _tforge
    except ImportError:
        pass
    extra = os.environ.get("TFORGE_MODULE_DIR")
    if extra and extra not in sys.path:
        sys.path.insert(0, extra)
    import _tforge  # build-tree fallback
    return _tforge


_ext = _load_ext()
__version__ = _ext.__version__
