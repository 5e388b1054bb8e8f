"""Import-time selection of the compiled scan kernel.

Set CLARIFY_PURE=1 to ignore the extension even when it is installed
(useful for benchmarking and for reproducing fallback behaviour).
"""

from __future__ import annotations

import os

if os.environ.get("CLARIFY_PURE") == "1":
    kernel_scan = None
else:
    try:
        from ._kernel import scan as kernel_scan
    except ImportError:
        kernel_scan = None

HAVE_KERNEL = kernel_scan is not None
