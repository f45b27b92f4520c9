"""
Dataset download and verification.

A manifest entry may pin a sha256. Unpinned entries are pinned on first
successful fetch: the digest goes into ``<data_dir>/hashes.lock.json`` and
every later fetch or load refuses a file whose digest differs. Data is never
substituted silently.
"""
from __future__ import annotations

import json
import os
from typing import Dict, List, Optional

import requests

from core.dataset_registry import DatasetEntry, DatasetRegistry
from core.errors import DataError
from core.log import RunLogger
from core.resilience import RetryConfig, resilient_call
from data.dataset import Dataset
from data.loader import file_sha256, load_dataset
from data.schema import load_schema

LOCK_FILE = "hashes.lock.json"
REQUEST_TIMEOUT = 60


class HashLock:
    """Digests recorded by earlier fetches, one per dataset key."""

    def __init__(self, data_dir: str) -> None:
        self.path = os.path.join(data_dir, LOCK_FILE)

    def load(self) -> Dict[str, str]:
        if not os.path.exists(self.path):
            return {}
        with open(self.path, "r", encoding="utf-8") as f:
            try:
                return dict(json.load(f))
            except json.JSONDecodeError as e:
                raise DataError(f"hash lock file {self.path} is corrupt: {e}") from None

    def get(self, key: str) -> Optional[str]:
        return self.load().get(key)

    def record(self, key: str, digest: str) -> None:
        data = self.load()
        data[key] = digest
        os.makedirs(os.path.dirname(self.path), exist_ok=True)
        with open(self.path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")


def expected_digest(entry: DatasetEntry, lock: HashLock) -> Optional[str]:
    return entry.sha256 or lock.get(entry.key)


def verify_file(entry: DatasetEntry, path: str, data_dir: str, record: bool = True) -> str:
    """Check ``path`` against the pinned or locked digest; record it if neither exists."""
    lock = HashLock(data_dir)
    digest = file_sha256(path)
    expected = expected_digest(entry, lock)
    if expected is None:
        if record:
            lock.record(entry.key, digest)
        return digest
    if digest != expected:
        raise DataError(
            f"{entry.key}: {os.path.basename(path)} has sha256 {digest[:12]}…, expected {expected[:12]}…; refusing to use it"
        )
    return digest


def fetch_dataset(
    entry: DatasetEntry,
    data_dir: str,
    session: Optional[requests.Session] = None,
    offline: bool = False,
    retry_config: Optional[RetryConfig] = None,
    logger: Optional[RunLogger] = None,
) -> str:
    """Make sure ``<data_dir>/<filename>`` exists and verifies; download it if needed."""
    log = logger or RunLogger("fetch", entry.key)
    path = os.path.join(data_dir, entry.filename)

    if os.path.exists(path):
        verify_file(entry, path, data_dir)
        log.success(f"{entry.filename} present and verified")
        return path
    if offline or entry.manual:
        hint = entry.instructions or f"place {entry.filename} in {data_dir}"
        raise DataError(f"{entry.key}: {entry.filename} not found in {data_dir} ({hint})")
    if not entry.url:
        raise DataError(f"{entry.key}: manifest has no url")

    http = session or requests.Session()

    def _download() -> bytes:
        response = http.get(entry.url, timeout=REQUEST_TIMEOUT)
        response.raise_for_status()
        return response.content

    def _on_retry(attempt: int, error: Exception) -> None:
        log.warn(f"download attempt {attempt + 1} failed: {error}; retrying")

    log.info(f"downloading {entry.url}")
    try:
        content = resilient_call(_download, retry_config=retry_config, on_retry=_on_retry)
    except requests.RequestException as e:
        raise DataError(f"{entry.key}: download failed: {e}") from None

    os.makedirs(data_dir, exist_ok=True)
    partial = path + ".part"
    with open(partial, "wb") as f:
        f.write(content)
    try:
        verify_file(entry, partial, data_dir)
    except DataError:
        os.remove(partial)
        raise
    os.replace(partial, path)
    log.success(f"{entry.filename} saved ({len(content)} bytes)")
    return path


def fetch_all(
    entries: List[DatasetEntry],
    data_dir: str,
    session: Optional[requests.Session] = None,
    offline: bool = False,
    retry_config: Optional[RetryConfig] = None,
) -> Dict[str, str]:
    """Fetch every entry; returns key -> error message for the ones that failed."""
    failures: Dict[str, str] = {}
    for entry in entries:
        log = RunLogger("fetch", entry.key)
        try:
            fetch_dataset(entry, data_dir, session=session, offline=offline, retry_config=retry_config, logger=log)
        except DataError as e:
            log.error(str(e))
            failures[entry.key] = str(e)
    return failures


def load_registered(key: str, data_dir: str, registry: Optional[DatasetRegistry] = None) -> Dataset:
    """Load a manifest dataset from ``data_dir`` after verifying its digest."""
    entry = (registry or DatasetRegistry()).get(key)
    path = os.path.join(data_dir, entry.filename)
    if not os.path.exists(path):
        raise DataError(f"{key}: {entry.filename} not found in {data_dir}; run `simbench fetch --datasets {key}` first")
    verify_file(entry, path, data_dir)
    return load_dataset(path, load_schema(entry.schema_path), name=entry.key)
