from __future__ import annotations

import json
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd


class ArtifactStore:
    """Write and read run artifacts (JSON documents and CSV tables) under one directory.

    JSON is written with sorted keys and a 2-space indent so that identical
    content always produces identical bytes.
    """

    def __init__(self, dir_path: str) -> None:
        self.dir_path = os.path.abspath(dir_path)

    def path(self, name: str) -> str:
        safe = "".join(c for c in name if c.isalnum() or c in ("_", "-", "."))
        return os.path.join(self.dir_path, safe)

    def load_json(self, name: str) -> Optional[Dict[str, Any]]:
        path = self.path(name)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)

    def save_json(self, name: str, data: Dict[str, Any]) -> str:
        os.makedirs(self.dir_path, exist_ok=True)
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
        return path

    def save_csv(self, name: str, rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> str:
        os.makedirs(self.dir_path, exist_ok=True)
        path = self.path(name)
        frame = pd.DataFrame(list(rows), columns=list(columns))
        # repr-exact floats and "\n" line endings keep reports byte-identical across runs
        frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")
        return path

    def save_text(self, name: str, text: str) -> str:
        os.makedirs(self.dir_path, exist_ok=True)
        path = self.path(name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def list(self) -> List[str]:
        if not os.path.isdir(self.dir_path):
            return []
        return sorted(os.listdir(self.dir_path))
