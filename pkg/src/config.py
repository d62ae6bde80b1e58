#!/usr/bin/env python3
"""
Workbench configuration management.
Persistent application settings and cache locations following XDG standards.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

APP_DIR = "semilattice-workbench"
CACHE_ENV = "SEMILATTICE_WORKBENCH_CACHE"
CONFIG_VERSION = "1.0"


def _xdg_dir(variable: str, fallback: str) -> Path:
    home = os.environ.get(variable)
    return Path(home) / APP_DIR if home else Path.home() / fallback / APP_DIR


def default_cache_dir() -> Path:
    """``$XDG_CACHE_HOME/semilattice-workbench/phi``"""
    return _xdg_dir("XDG_CACHE_HOME", ".cache") / "phi"


def resolve_cache_dir(flag: Optional[str], preference: str = "", enabled: bool = True) -> Optional[Path]:
    """Cover cache directory: CLI flag, then environment, then preference, then XDG default.

    An explicit flag or environment value wins even when the cache is
    disabled in the preferences.
    """
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    if not enabled:
        return None
    if preference:
        return Path(preference)
    return default_cache_dir()


class WorkbenchConfig:
    """Manages persistent workbench settings using the XDG Base Directory standard"""

    def __init__(self, config_path: Optional[Path] = None) -> None:
        self.config_path = Path(config_path) if config_path else self._get_config_path()
        self.config_data = self._load_config()

    def _get_config_path(self) -> Path:
        config_dir = _xdg_dir("XDG_CONFIG_HOME", ".config")
        try:
            config_dir.mkdir(parents=True, exist_ok=True, mode=0o700)
        except OSError as e:
            logger.warning("Cannot create config directory %s: %s", config_dir, e)
        return config_dir / "settings.json"

    @staticmethod
    def _default_config() -> Dict[str, Any]:
        return {"version": CONFIG_VERSION, "app_settings": {}}

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, return default if file doesn't exist"""
        try:
            if not self.config_path.exists():
                return self._default_config()
            with open(self.config_path, "r", encoding="utf-8") as f:
                config = json.load(f)
            if isinstance(config, dict) and "version" in config and isinstance(config.get("app_settings"), dict):
                return config
            logger.warning("Invalid config structure in %s, using defaults", self.config_path)
        except (json.JSONDecodeError, IOError, OSError) as e:
            logger.warning("Error loading config from %s: %s", self.config_path, e)
        return self._default_config()

    def _save_config(self) -> bool:
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True, mode=0o700)
            if self.config_path.exists():
                backup_path = self.config_path.with_suffix(".json.backup")
                self.config_path.replace(backup_path)
            with open(self.config_path, "w", encoding="utf-8") as f:
                json.dump(self.config_data, f, indent=2, ensure_ascii=False, sort_keys=True)
            # owner only
            os.chmod(self.config_path, 0o600)
            return True
        except (IOError, OSError) as e:
            logger.error("Error saving config to %s: %s", self.config_path, e)
            return False

    def get_app_setting(self, setting_name: str, default_value: Any = None) -> Any:
        return self.config_data.get("app_settings", {}).get(setting_name, default_value)

    def set_app_setting(self, setting_name: str, value: Any) -> bool:
        self.config_data.setdefault("app_settings", {})[setting_name] = value
        return self._save_config()

    def remove_app_setting(self, setting_name: str) -> bool:
        settings = self.config_data.get("app_settings", {})
        if setting_name not in settings:
            return True
        del settings[setting_name]
        return self._save_config()

    def export_config(self, export_path: str | Path) -> bool:
        try:
            with open(Path(export_path), "w", encoding="utf-8") as f:
                json.dump(self.config_data, f, indent=2, ensure_ascii=False, sort_keys=True)
            return True
        except (IOError, OSError) as e:
            logger.error("Error exporting config to %s: %s", export_path, e)
            return False

    def import_config(self, import_path: str | Path, merge: bool = True) -> bool:
        """Import settings from a file; ``merge`` keeps settings the file does not mention."""
        import_file = Path(import_path)
        if not import_file.exists():
            logger.error("Import file does not exist: %s", import_path)
            return False
        try:
            with open(import_file, "r", encoding="utf-8") as f:
                imported = json.load(f)
        except (json.JSONDecodeError, IOError, OSError) as e:
            logger.error("Error importing config from %s: %s", import_path, e)
            return False
        if not isinstance(imported, dict) or not isinstance(imported.get("app_settings", {}), dict):
            logger.error("Invalid config structure in %s", import_path)
            return False
        if merge:
            self.config_data.setdefault("app_settings", {}).update(imported.get("app_settings", {}))
        else:
            self.config_data = {
                "version": imported.get("version", CONFIG_VERSION),
                "app_settings": dict(imported.get("app_settings", {})),
            }
        return self._save_config()
