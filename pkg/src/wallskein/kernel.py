"""Backend selection for the term kernel.

The compiled ``_ckernel`` extension is used when it was built; otherwise the
pure-Python implementation in ``_kernel_py`` is used. Both expose
``mul_terms`` and ``div_terms`` with identical semantics.
"""

from __future__ import annotations

from . import _kernel_py

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = {"python": _kernel_py}
if _ckernel is not None:
    BACKENDS["cython"] = _ckernel

_active = _ckernel if _ckernel is not None else _kernel_py


def backend() -> str:
    """Name of the backend currently in use."""
    return "cython" if _active is _ckernel and _ckernel is not None else "python"


def use_backend(name: str) -> None:
    """Switch the active backend (``"python"`` or ``"cython"``)."""
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} is not available; have {sorted(BACKENDS)}")
    _active = BACKENDS[name]


def mul_terms(a, b, n, form):
    return _active.mul_terms(a, b, n, form)


def div_terms(num, den, n, form, den_left=False):
    return _active.div_terms(num, den, n, form, den_left)
