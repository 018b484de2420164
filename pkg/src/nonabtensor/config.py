"""Runtime limits.

The order cap bounds every group that gets a full Cayley table; the coset
limit bounds every coset enumeration.  ``TENSOR_ORDER_CAP`` overrides the
default cap.
"""

from __future__ import annotations

import os

DEFAULT_ORDER_CAP = 20000
DEFAULT_COSET_LIMIT = 1_000_000
# associativity is checked exhaustively on load up to this order
ASSOC_CHECK_CAP = 512
# coset tables are int32; enumerations stop before exceeding this many bytes
TABLE_BYTES_BUDGET = 1_500_000_000


def order_cap() -> int:
    value = os.environ.get("TENSOR_ORDER_CAP")
    if value is None:
        return DEFAULT_ORDER_CAP
    cap = int(value)
    if cap <= 0:
        raise ValueError(f"TENSOR_ORDER_CAP must be positive, got {value!r}")
    return cap
