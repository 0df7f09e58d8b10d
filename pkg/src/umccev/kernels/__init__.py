"""Hot inner loops with a compiled backend and a numpy fallback.

The compiled module is preferred when it imports. Set ``UMCCEV_PURE_PYTHON=1``
to force the fallback (useful for benchmarking and for checking that both
backends agree).
"""
import os

import numpy as np

from . import _fallback

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_BACKENDS = {"python": _fallback}
if _core is not None:
    _BACKENDS["cython"] = _core

if os.environ.get("UMCCEV_PURE_PYTHON", "").strip() not in ("", "0") or _core is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = _BACKENDS[BACKEND]


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


def project_rows_capped_simplex(V):
    return _impl.project_rows_capped_simplex(np.ascontiguousarray(V, dtype=np.float64))


def firm_threshold_array(x, lam, a):
    x = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(x).ravel()
    return _impl.firm_threshold_array(flat, float(lam), float(a)).reshape(x.shape)


def pairwise_sq_dists(P):
    return _impl.pairwise_sq_dists(np.ascontiguousarray(P, dtype=np.float64))
