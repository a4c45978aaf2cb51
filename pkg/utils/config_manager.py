import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional

log = logging.getLogger(__name__)


class ConfigManager:
    """JSON-backed settings with schema validation and environment overrides.

    ``storage_path=None`` keeps everything in memory. Read or write failures
    of the JSON file are logged and the in-memory values stay authoritative.
    """

    def __init__(
        self,
        schema: Dict[str, Dict[str, Any]],
        storage_path: Optional[str] = "data/config.json",
        overrides: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.schema = schema
        self.file_path = Path(storage_path) if storage_path else None
        self._data: Dict[str, Any] = self._defaults()
        self._overrides: Dict[str, Any] = {}
        self.load()
        if overrides:
            for key, value in overrides.items():
                if value not in (None, "") and key in self.schema:
                    self._overrides[key] = self._cast_value(key, value)
            self._data.update(self._overrides)

    def _defaults(self) -> Dict[str, Any]:
        return {key: meta.get("default") for key, meta in self.schema.items()}

    # ------------------------------------------------------------------
    # Persistence helpers
    # ------------------------------------------------------------------
    def load(self) -> None:
        if self.file_path is None or not self.file_path.exists():
            return
        try:
            with self.file_path.open("r", encoding="utf-8") as handle:
                stored = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("Konfiguration %s konnte nicht gelesen werden: %s", self.file_path, exc)
            return
        for key, value in stored.items():
            if key in self.schema:
                try:
                    self._data[key] = self._cast_value(key, value)
                except ValueError as exc:
                    log.warning("Ignoriere %s aus %s: %s", key, self.file_path, exc)

    def save(self) -> None:
        if self.file_path is None:
            return
        # environment overrides are never written back
        stored = {key: value for key, value in self._data.items() if key not in self._overrides}
        try:
            self.file_path.parent.mkdir(parents=True, exist_ok=True)
            with self.file_path.open("w", encoding="utf-8") as handle:
                json.dump(stored, handle, indent=2)
        except OSError as exc:
            log.warning("Konfiguration %s konnte nicht gespeichert werden: %s", self.file_path, exc)

    def reset(self) -> None:
        self._data = self._defaults()
        self._data.update(self._overrides)
        self.save()

    # ------------------------------------------------------------------
    # Access helpers
    # ------------------------------------------------------------------
    def get(self, key: str, default: Optional[Any] = None) -> Any:
        return self._data.get(key, default)

    def get_int(self, key: str) -> int:
        return int(self._data.get(key, 0) or 0)

    def get_float(self, key: str) -> float:
        return float(self._data.get(key, 0.0) or 0.0)

    def get_str(self, key: str) -> str:
        return str(self._data.get(key, ""))

    def items(self):
        return self._data.items()

    def to_display_dict(self) -> Dict[str, Any]:
        return {key: self._data.get(key) for key in self.schema.keys()}

    def set_value(self, key: str, raw_value: Any) -> Any:
        if key not in self.schema:
            raise KeyError(f"Unbekannter Konfigurationsschlüssel: {key}")
        value = self._cast_value(key, raw_value)
        self._data[key] = value
        self._overrides.pop(key, None)
        self.save()
        return value

    # ------------------------------------------------------------------
    def _cast_value(self, key: str, value: Any) -> Any:
        meta = self.schema.get(key, {})
        expected_type: Optional[Callable[[Any], Any]] = meta.get("type")
        if expected_type is None or value is None:
            return value
        if expected_type is bool:
            if isinstance(value, str):
                return value.lower() in {"1", "true", "yes", "on"}
            return bool(value)
        try:
            cast = expected_type(value)
        except (ValueError, TypeError):
            raise ValueError(f"Wert '{value}' konnte nicht nach {expected_type.__name__} konvertiert werden")
        choices = meta.get("choices")
        if choices and cast not in choices:
            raise ValueError(f"Wert '{value}' ist für {key} nicht erlaubt (erlaubt: {', '.join(map(str, choices))})")
        return cast

    @property
    def schema_description(self) -> Dict[str, str]:
        return {key: meta.get("description", "") for key, meta in self.schema.items()}


__all__ = ["ConfigManager"]
