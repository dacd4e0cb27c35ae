"""Kernel backend selection.

Imports the compiled kernels when available, otherwise the pure-Python
twins.  SPLITG2_KERNELS=py forces the pure backend, SPLITG2_KERNELS=c
requires the compiled one (ImportError if it is not built).
"""

import os

_choice = os.environ.get("SPLITG2_KERNELS", "").strip().lower()

if _choice == "py":
    from . import _kernels_py as _impl
elif _choice == "c":
    from . import _kernels_c as _impl  # type: ignore[attr-defined]
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

term_gcd = _impl.term_gcd
poly_mul = _impl.poly_mul
poly_axpy = _impl.poly_axpy
merge_indices = _impl.merge_indices
wedge_terms = _impl.wedge_terms
wedge_collect = _impl.wedge_collect


def backend_name() -> str:
    """'c' when the compiled kernels are active, else 'py'."""
    return "c" if _impl.__name__.endswith("_kernels_c") else "py"
