from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict


@dataclass
class LimitSettings:
    canonical_max_size: int = 24
    free_algebra_cap: int = 1 << 22
    corpus_max_size: int = 7
    phi_max_size: int = 6
    dense_max_size: int = 1024


@dataclass
class CacheSettings:
    enabled: bool = True
    dir: str = ""


@dataclass
class SearchSettings:
    max_atoms: int = 6
    work_limit: int = 10 ** 8
    workers: int = 1


@dataclass
class AdvancedSettings:
    enable_debug_logging: bool = False


def defaults_dict() -> Dict[str, Any]:
    lim = LimitSettings()
    c = CacheSettings()
    s = SearchSettings()
    a = AdvancedSettings()
    return {
        # Limits
        "limits.canonical_max_size": lim.canonical_max_size,
        "limits.free_algebra_cap": lim.free_algebra_cap,
        "limits.corpus_max_size": lim.corpus_max_size,
        "limits.phi_max_size": lim.phi_max_size,
        "limits.dense_max_size": lim.dense_max_size,
        # Cover cache
        "cache.enabled": c.enabled,
        "cache.dir": c.dir,
        # Search
        "search.max_atoms": s.max_atoms,
        "search.work_limit": s.work_limit,
        "search.workers": s.workers,
        # Advanced
        "advanced.enable_debug_logging": a.enable_debug_logging,
    }
