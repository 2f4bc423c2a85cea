"""Kernel selection: compiled extension when available, pure NumPy otherwise.

Set ``CHIROBARS_PURE=1`` to force the pure kernels (used by the benchmark
and by tests that compare both implementations).
"""

import os

from . import _pure

if os.environ.get("CHIROBARS_PURE"):
    impl = _pure
else:
    try:
        from . import _core as impl  # type: ignore[no-redef]
    except ImportError:
        impl = _pure

bars_and_depth = impl.bars_and_depth
count_windings = impl.count_windings
IMPLEMENTATION = impl.IMPLEMENTATION

__all__ = ["bars_and_depth", "count_windings", "IMPLEMENTATION", "impl", "_pure"]
