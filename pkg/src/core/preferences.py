from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List

from config import WorkbenchConfig
from .settings_schema import defaults_dict

logger = logging.getLogger(__name__)

SettingListener = Callable[[str, Any], None]
AppliedListener = Callable[[Dict[str, Any]], None]


class PreferencesService:
    """Central preferences manager with persistence and change listeners."""

    def __init__(self, config: WorkbenchConfig | None = None) -> None:
        self._config = config or WorkbenchConfig()
        self._defaults: Dict[str, Any] = defaults_dict()
        self._cache: Dict[str, Any] = {}
        self._on_change: List[SettingListener] = []
        self._on_applied: List[AppliedListener] = []
        self._load()

    # --- listeners ---
    def on_setting_changed(self, listener: SettingListener) -> None:
        self._on_change.append(listener)

    def on_settings_applied(self, listener: AppliedListener) -> None:
        self._on_applied.append(listener)

    # --- API ---
    def get(self, key: str, default: Any | None = None) -> Any:
        if key in self._cache:
            return self._cache[key]
        return self._defaults.get(key, default)

    def set(self, key: str, value: Any, persist: bool = True) -> None:
        value = self._coerce(key, value)
        if self._cache.get(key) == value:
            return
        self._cache[key] = value
        if persist:
            self._persist_one(key, value)
        self._emit_change(key, value)

    def all(self) -> Dict[str, Any]:
        return dict(self._cache)

    def apply(self, values: Dict[str, Any], persist: bool = True) -> None:
        changed: Dict[str, Any] = {}
        for k, v in values.items():
            v = self._coerce(k, v)
            if self._cache.get(k) != v:
                self._cache[k] = v
                changed[k] = v
        if persist and changed:
            for k, v in changed.items():
                self._persist_one(k, v)
        if changed:
            for k, v in changed.items():
                self._emit_change(k, v)
            snapshot = dict(self._cache)
            for listener in self._on_applied:
                listener(snapshot)

    def reset_to_defaults(self) -> None:
        self.apply(self._defaults, persist=True)

    def reset_section(self, prefix: str) -> None:
        section = {k: v for k, v in self._defaults.items() if k.startswith(prefix)}
        if section:
            self.apply(section, persist=True)

    def defaults(self) -> Dict[str, Any]:
        return dict(self._defaults)

    def known(self, key: str) -> bool:
        return key in self._defaults

    def unset(self, key: str) -> None:
        """Forget the persisted value of ``key``; the default applies again."""
        self._config.remove_app_setting(key)
        self.apply({key: self._defaults.get(key)}, persist=False)

    def export(self, path: str | Path) -> bool:
        return self._config.export_config(path)

    def import_from(self, path: str | Path, merge: bool = True) -> bool:
        """Load a settings file into the store, then into this service."""
        if not self._config.import_config(path, merge):
            return False
        loaded = {k: self._config.get_app_setting(k, v) for k, v in self._defaults.items()}
        self.apply(loaded, persist=False)
        return True

    # --- internals ---
    def _coerce(self, key: str, value: Any) -> Any:
        """Match the type of the default; unknown keys pass through."""
        default = self._defaults.get(key)
        if default is None or value is None or isinstance(value, type(default)):
            return value
        try:
            if isinstance(default, bool):
                return str(value).strip().lower() in ("1", "true", "yes", "on")
            return type(default)(value)
        except (TypeError, ValueError):
            logger.warning("Ignoring %r for %s: expected %s", value, key, type(default).__name__)
            return default

    def _emit_change(self, key: str, value: Any) -> None:
        for listener in self._on_change:
            listener(key, value)

    def _load(self) -> None:
        for key, def_val in self._defaults.items():
            self._cache[key] = self._coerce(key, self._config.get_app_setting(key, def_val))

    def _persist_one(self, key: str, value: Any) -> None:
        self._config.set_app_setting(key, value)
