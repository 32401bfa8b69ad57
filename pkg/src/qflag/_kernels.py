"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module. Set ``QFLAG_PURE_PYTHON=1`` to force the
fallback.
"""

import os

if os.environ.get("QFLAG_PURE_PYTHON", "") not in ("", "0"):
    from qflag import _pykernels as _impl
else:
    try:
        from qflag import _ckernels as _impl
    except ImportError:
        from qflag import _pykernels as _impl

BACKEND = _impl.NAME
enumerate_flag = _impl.enumerate_flag
lookup_subfaces = _impl.lookup_subfaces
gf2_rank = _impl.gf2_rank


def available_backends():
    """Importable kernel modules keyed by name."""
    from qflag import _pykernels

    found = {"python": _pykernels}
    try:
        from qflag import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
