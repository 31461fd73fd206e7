"""Backend selection for the hot training loops.

The compiled Cython extension is preferred; the numpy implementation is the
fallback.  Set ``UCP_ENSEMBLE_PURE=1`` to force the pure-python backend (used
by the benchmark and for debugging).
"""

import os

if os.environ.get("UCP_ENSEMBLE_PURE") == "1":
    from ._pykernels import BACKEND, mlp_train, svr_smo
else:
    try:
        from ._ckernels import BACKEND, mlp_train, svr_smo
    except ImportError:
        from ._pykernels import BACKEND, mlp_train, svr_smo

__all__ = ["BACKEND", "mlp_train", "svr_smo"]
