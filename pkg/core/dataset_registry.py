from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.errors import ConfigError, DataError


DATASETS_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "datasets"))
MANIFEST_FILE = os.path.join(DATASETS_DIR, "manifest.json")


@dataclass
class DatasetEntry:
    key: str
    name: str
    filename: str
    schema: str
    url: Optional[str] = None
    sha256: Optional[str] = None
    manual: bool = False
    instructions: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def schema_path(self) -> str:
        return os.path.join(DATASETS_DIR, self.schema)


class DatasetRegistry:
    """
    Loads the bundled fetch manifest and resolves dataset keys.

    - Case-insensitive key lookup
    - "all" expands to every manifest entry in manifest order
    - A manifest path can be passed for tests or private dataset lists
    """

    def __init__(self, manifest_path: Optional[str] = None) -> None:
        self.manifest_path = manifest_path or MANIFEST_FILE
        self._entries: Dict[str, DatasetEntry] = {}
        self._order: List[str] = []
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.manifest_path):
            raise DataError(f"Dataset manifest not found at {self.manifest_path}")
        with open(self.manifest_path, "r", encoding="utf-8") as f:
            data = json.load(f)
        known = {"key", "name", "filename", "schema", "url", "sha256", "manual", "instructions"}
        for raw in data.get("datasets", []):
            key = str(raw.get("key", "")).lower()
            if not key:
                raise DataError(f"Manifest entry without a key in {self.manifest_path}")
            entry = DatasetEntry(
                key=key,
                name=str(raw.get("name", key)),
                filename=str(raw.get("filename", f"{key}.csv")),
                schema=str(raw.get("schema", f"schemas/{key}.json")),
                url=raw.get("url"),
                sha256=raw.get("sha256"),
                manual=bool(raw.get("manual", False)),
                instructions=raw.get("instructions"),
                extra={k: v for k, v in raw.items() if k not in known},
            )
            if key not in self._entries:
                self._order.append(key)
            self._entries[key] = entry

    def get(self, key: str) -> DatasetEntry:
        entry = self._entries.get(key.strip().lower())
        if entry is None:
            raise ConfigError(f"Unknown dataset '{key}' (known: {', '.join(self._order)})")
        return entry

    def resolve(self, selector: str) -> List[DatasetEntry]:
        """Resolve "all" or a comma-separated list of keys, keeping the given order."""
        selector = (selector or "").strip()
        if not selector:
            raise ConfigError("Empty dataset selector")
        if selector.lower() == "all":
            return [self._entries[k] for k in self._order]
        out: List[DatasetEntry] = []
        for part in selector.split(","):
            part = part.strip()
            if not part:
                continue
            entry = self.get(part)
            if entry not in out:
                out.append(entry)
        return out

    def list_keys(self) -> List[str]:
        return list(self._order)
