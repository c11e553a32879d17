"""Backend selection for the hot statevector loops.

The compiled ``qoshor._kernels`` module is used when importable.  Setting the
environment variable ``QOSHOR_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and not os.environ.get("QOSHOR_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

apply_1q = _impl.apply_1q
apply_cphase = _impl.apply_cphase
apply_cnot = _impl.apply_cnot
register_probabilities = _impl.register_probabilities
gcd_trace_lengths = _impl.gcd_trace_lengths


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _impl
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(BACKENDS)}") from None
