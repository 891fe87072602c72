"""Run-wide caps and determinism configuration.

All algorithms in this package are deterministic; there is no randomness to
seed.  Caps bound memory and time, and hitting one raises a distinct error
rather than silently truncating.  Each cap can be overridden through an
environment variable POLYCOMPLEX_CAP_<NAME>.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

_ENV_PREFIX = "POLYCOMPLEX_CAP_"

# Defaults sized so that every verification instance shipped with the test
# suite fits (largest group order needed: 98_304; largest coset table: 1152
# plus a cap-bounded divergent run).
DEFAULT_GROUP_ORDER_CAP = 2_000_000
DEFAULT_COSET_CAP = 1_000_000
DEFAULT_VERTEX_CAP = 2**20
DEFAULT_SEARCH_NODE_CAP = 10**7
DEFAULT_FLAG_CAP = 10**6


def _env_cap(name: str, default: int) -> int:
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return default
    value = int(raw)
    if value < 1:
        raise ValueError(f"{_ENV_PREFIX}{name} must be positive, got {value}")
    return value


def group_order_cap() -> int:
    return _env_cap("GROUP_ORDER", DEFAULT_GROUP_ORDER_CAP)


def coset_cap() -> int:
    return _env_cap("COSETS", DEFAULT_COSET_CAP)


def vertex_cap() -> int:
    return _env_cap("VERTICES", DEFAULT_VERTEX_CAP)


def search_node_cap() -> int:
    return _env_cap("SEARCH_NODES", DEFAULT_SEARCH_NODE_CAP)


def flag_cap() -> int:
    return _env_cap("FLAGS", DEFAULT_FLAG_CAP)


@dataclass(frozen=True)
class RunConfig:
    """Caps and output options for one CLI invocation.

    Identical configs on identical inputs produce byte-identical outputs.
    """

    group_order_cap: int = field(default_factory=group_order_cap)
    coset_cap: int = field(default_factory=coset_cap)
    vertex_cap: int = field(default_factory=vertex_cap)
    search_node_cap: int = field(default_factory=search_node_cap)
    flag_cap: int = field(default_factory=flag_cap)
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        for name in ("group_order_cap", "coset_cap", "vertex_cap",
                     "search_node_cap", "flag_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in ("json", "dot"):
            raise ValueError(f"unknown format {self.format!r}")
