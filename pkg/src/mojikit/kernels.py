"""Kernel backend selection.

Prefers the compiled extension, falls back to pure Python. Override with
MOJIKIT_KERNELS=pure|compiled (compiled raises if the extension is absent,
so CI can prove it was built).
"""

from __future__ import annotations

import os

_forced = os.environ.get("MOJIKIT_KERNELS")

if _forced == "pure":
    from mojikit import _kernels as _impl
elif _forced == "compiled":
    from mojikit import _speedups as _impl  # type: ignore[no-redef]
else:
    try:
        from mojikit import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from mojikit import _kernels as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
ease_weight = _impl.ease_weight
sample_angle = _impl.sample_angle
sample_path = _impl.sample_path
xor_checksum = _impl.xor_checksum
