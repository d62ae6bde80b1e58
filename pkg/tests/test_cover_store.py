from __future__ import annotations

import json
import stat

from core.canonical import content_key
from core.cover import phi_for
from core.cover_store import CoverStore
from core.semilattice import chain


class TestCoverStore:
    def test_memory_only(self, store):
        assert store.cache_dir is None
        assert len(store) == 0
        entry = phi_for(chain(2), store)
        assert entry.key in store
        assert store.put(entry) is entry
        assert [e.obj.size for e in store.entries()] == [1, 2]

    def test_entries_persist(self, tmp_path):
        cache = tmp_path / "phi"
        first = CoverStore(cache)
        phi_for(chain(3), first)
        files = sorted(p.name for p in cache.glob("*.json"))
        assert len(files) == 3
        for path in cache.glob("*.json"):
            assert stat.S_IMODE(path.stat().st_mode) == 0o600

        second = CoverStore(cache)
        entry = second.get(content_key(chain(3)))
        assert entry is not None
        assert entry.eps.map == (0, 1, 3)
        assert entry.mu.map == (0, 1, 2, 2)
        assert len(entry.sub_legs) == 3
        assert len(second) == 3

    def test_loaded_entry_matches_computed(self, tmp_path):
        cache = tmp_path / "phi"
        computed = phi_for(chain(3), CoverStore(cache)).summary()
        loaded = CoverStore(cache).get(content_key(chain(3))).summary()
        assert loaded == computed

    def test_unreadable_records_are_ignored(self, tmp_path, caplog):
        cache = tmp_path / "phi"
        store = CoverStore(cache)
        (cache / "garbage.json").write_text("{oops")
        (cache / "wrongformat.json").write_text(json.dumps({"format": 99, "key": "wrongformat"}))
        assert store.get("garbage") is None
        assert store.get("wrongformat") is None
        assert "Ignoring unreadable cover entry" in caplog.text

    def test_missing_key(self, tmp_path):
        assert CoverStore(tmp_path / "phi").get("absent") is None

    def test_generating_set(self, store):
        entry = phi_for(chain(3), store)
        assert entry.generating_set() == [0, 1, 2]
