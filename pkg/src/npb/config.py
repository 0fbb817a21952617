"""Size guards, overridable through the NPB_GUARD_DIM environment variable."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import GuardExceeded


@dataclass(frozen=True)
class Guards:
    extensions: int = 4       # dim P + dim M for brute-force extension enumeration
    cochains: int = 20000     # largest cochain space a complex may hold
    free_degree: int = 12     # degree cap of free-algebra word stores


def guards() -> Guards:
    """
    ``NPB_GUARD_DIM=5`` raises the extension guard to 5;
    ``NPB_GUARD_DIM=extensions=5,cochains=50000`` sets fields by name.
    """
    raw = os.environ.get("NPB_GUARD_DIM", "").strip()
    g = Guards()
    if not raw:
        return g
    try:
        if "=" not in raw:
            return replace(g, extensions=int(raw))
        pairs = dict(item.split("=", 1) for item in raw.split(","))
        return replace(g, **{k.strip(): int(v) for k, v in pairs.items()})
    except (ValueError, TypeError) as exc:
        raise GuardExceeded(f"cannot parse NPB_GUARD_DIM={raw!r}: {exc}") from None


def check_cochain_size(dim: int, what: str = "cochain space"):
    cap = guards().cochains
    if dim > cap:
        raise GuardExceeded(f"{what} of dimension {dim} exceeds the guard {cap} (NPB_GUARD_DIM)")
