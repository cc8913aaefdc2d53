"""Select the compiled kernels when available, else the pure-Python ones.

Set ``TROPBBS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as python

native = None
if not os.environ.get("TROPBBS_PURE_PYTHON"):
    try:
        from . import _ckernels as native
    except ImportError:  # extension not built
        native = None

_impl = native if native is not None else python
BACKEND = _impl.BACKEND

minplus_matmul = _impl.minplus_matmul
minplus_closure = _impl.minplus_closure
minplus_star = _impl.minplus_star
karp_mean = _impl.karp_mean
sweep_row = _impl.sweep_row
inverse_lax_matrix = _impl.inverse_lax_matrix
sweep = _impl.sweep
solve_q = _impl.solve_q
evolve_scaled = _impl.evolve_scaled
find_period = _impl.find_period
