"""Memo of canonical-cover entries with an optional on-disk JSON cache.

Entries are keyed by the content hash of a canonical object. The store is
the only shared mutable state of a run: reads are lock-free, computation and
insertion happen under ``lock``.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from core.canonical import DEFAULT_CAP as CANONICAL_CAP, content_key
from core.colimit import FREE_ALGEBRA_CAP
from core.errors import CodecError, InternalConsistencyError
from core.free import DENSE_MAX_SIZE
from core.morphism import Morphism
from core.semilattice import Semilattice
from core.serialization import decode_semilattice, encode_semilattice
from core.shelter import shelter_object

logger = logging.getLogger(__name__)

CACHE_FORMAT = 1
PHI_MAX_SIZE = 6

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class CoverEntry:
    """Φ-data of one object.

    ``sub_legs[X]`` holds ``(Φ_*(incl_X), Φ(incl_X))`` for every proper
    subobject X, both with domain Φ of the canonical form of X.
    """

    key: str
    obj: Semilattice
    phi_star: Semilattice
    eps_upper: Morphism
    mu_upper: Morphism
    phi: Semilattice
    eps: Morphism
    mu: Morphism
    sub_legs: Dict[Subset, Tuple[Morphism, Morphism]]
    sub_keys: Dict[Subset, str]

    def generating_set(self) -> List[int]:
        """``im ε^A`` together with the images of all ``Φ_*(incl_X)``."""
        found = set(self.eps_upper.map)
        for star, _ in self.sub_legs.values():
            found.update(star.map)
        return sorted(found)

    def summary(self) -> dict:
        return {
            "key": self.key,
            "object_size": self.obj.size,
            "phi_star_size": self.phi_star.size,
            "phi_size": self.phi.size,
            "eps": list(self.eps.map),
            "mu": list(self.mu.map),
            "eps_upper": list(self.eps_upper.map),
            "mu_upper": list(self.mu_upper.map),
        }


class CoverStore:
    def __init__(
        self,
        cache_dir: Optional[os.PathLike | str] = None,
        *,
        phi_max_size: int = PHI_MAX_SIZE,
        canonical_cap: int = CANONICAL_CAP,
        free_algebra_cap: int = FREE_ALGEBRA_CAP,
        dense_cap: int = DENSE_MAX_SIZE,
    ) -> None:
        self.lock = threading.RLock()
        self.phi_max_size = phi_max_size
        self.canonical_cap = canonical_cap
        self.free_algebra_cap = free_algebra_cap
        self.dense_cap = dense_cap
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._entries: Dict[str, CoverEntry] = {}
        # rebuilt on demand; never persisted
        self.colimits: Dict[str, tuple] = {}
        self.sparse: Dict[str, object] = {}
        self.iso_memo: Dict[Tuple[str, Tuple[int, ...]], Tuple[Morphism, Morphism]] = {}
        if self.cache_dir is not None:
            try:
                self.cache_dir.mkdir(parents=True, exist_ok=True, mode=0o700)
            except OSError as e:
                logger.warning("Cannot create cover cache %s: %s; continuing without it", self.cache_dir, e)
                self.cache_dir = None

    # --- API ---
    def get(self, key: str) -> Optional[CoverEntry]:
        entry = self._entries.get(key)
        if entry is None and self.cache_dir is not None:
            entry = self._load(key)
            if entry is not None:
                with self.lock:
                    self._entries.setdefault(key, entry)
                    entry = self._entries[key]
        return entry

    def put(self, entry: CoverEntry) -> CoverEntry:
        with self.lock:
            existing = self._entries.get(entry.key)
            if existing is not None:
                return existing
            self._entries[entry.key] = entry
        if self.cache_dir is not None:
            self._save(entry)
        return entry

    def entries(self) -> List[CoverEntry]:
        return sorted(self._entries.values(), key=lambda e: (e.obj.size, e.obj.table))

    def __contains__(self, key: str) -> bool:
        return self.get(key) is not None

    def __len__(self) -> int:
        return len(self._entries)

    # --- internals ---
    def _path(self, key: str) -> Path:
        assert self.cache_dir is not None
        return self.cache_dir / f"{key}.json"

    def _save(self, entry: CoverEntry) -> None:
        record = {
            "format": CACHE_FORMAT,
            "key": entry.key,
            "object": encode_semilattice(entry.obj),
            "phi_star": encode_semilattice(entry.phi_star),
            "eps_upper": list(entry.eps_upper.map),
            "mu_upper": list(entry.mu_upper.map),
            "mu": list(entry.mu.map),
            "sub_legs": [
                {"subset": list(x), "sub_key": entry.sub_keys[x], "star": list(star.map)}
                for x, (star, _) in sorted(entry.sub_legs.items())
            ],
        }
        path = self._path(entry.key)
        tmp = path.with_suffix(".json.tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as f:
                json.dump(record, f, ensure_ascii=False)
            os.chmod(tmp, 0o600)
            tmp.replace(path)
        except (IOError, OSError) as e:
            logger.warning("Error saving cover entry to %s: %s", path, e)

    def _load(self, key: str) -> Optional[CoverEntry]:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                record = json.load(f)
            return self._decode(key, record)
        except (json.JSONDecodeError, IOError, OSError, CodecError, KeyError, TypeError) as e:
            logger.warning("Ignoring unreadable cover entry %s: %s", path, e)
            return None

    def _decode(self, key: str, record: dict) -> CoverEntry:
        if record.get("format") != CACHE_FORMAT or record.get("key") != key:
            raise CodecError(f"cache record {key} has an unexpected format")
        obj = decode_semilattice(record["object"])
        if content_key(obj) != key:
            raise InternalConsistencyError(f"cache record {key} holds a different object")
        phi_star = decode_semilattice(record["phi_star"])
        eps_upper = Morphism(obj, phi_star, record["eps_upper"])
        mu_upper = Morphism(phi_star, obj, record["mu_upper"])
        sh = shelter_object(phi_star)
        mu = Morphism(sh.booleanized, obj, record["mu"])
        sub_legs: Dict[Subset, Tuple[Morphism, Morphism]] = {}
        sub_keys: Dict[Subset, str] = {}
        for leg in record["sub_legs"]:
            subset = tuple(leg["subset"])
            sub = self.get(leg["sub_key"])
            if sub is None:
                raise CodecError(f"cache record {key} depends on missing {leg['sub_key']}")
            star = Morphism(sub.phi, phi_star, leg["star"])
            sub_legs[subset] = (star, sh.eta * star)
            sub_keys[subset] = leg["sub_key"]
        logger.debug("Loaded cover entry %s from cache", key)
        return CoverEntry(
            key, obj, phi_star, eps_upper, mu_upper, sh.booleanized, sh.eta * eps_upper, mu,
            sub_legs, sub_keys,
        )
