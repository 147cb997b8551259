"""Kernel backend selection: compiled Cython core with numpy fallback.

The compiled extension miptkit._core is optional (see setup.py); when it is
missing, or when MIPTKIT_FORCE_PURE=1 is set, the numpy reference kernels in
miptkit._kernels_py are used instead.  Both expose the same functions over
the same bit-packed layout and are exercised against each other in the test
suite and in benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

from . import _kernels_py as pure

if os.environ.get("MIPTKIT_FORCE_PURE", "") == "1":
    _impl = pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND_NAME = _impl.BACKEND_NAME

apply_lookup1 = _impl.apply_lookup1
apply_lookup2 = _impl.apply_lookup2
measure_prepare = _impl.measure_prepare
measure_update_random = _impl.measure_update_random
measure_deterministic = _impl.measure_deterministic
rank_left_half = _impl.rank_left_half
compose_layers = _impl.compose_layers
