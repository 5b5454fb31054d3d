"""File-backed store for processed analytics.

One directory per session, one JSON record per artifact, grouped by kind.
Records are written canonically (sorted keys, repr floats) with a SHA-256
content hash that is re-verified on read, and land via write-temp-then-
rename so readers never see a torn file. Nothing in a record depends on
wall-clock time: re-running a pipeline with the same seed reproduces every
byte.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, NotFoundError, StoreError

SCHEMA_VERSION = 1
KINDS = ("profile", "dataset", "heatmap", "anova", "model", "report")

_KEY_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_.-]*$")


@dataclass(frozen=True, order=True)
class RecordKey:
    session_id: str
    participant_id: str  # "" for session-level artifacts
    name: str


def _canonical_payload(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=True, separators=(",", ":"))


def _check_part(part: str, what: str, allow_empty: bool = False) -> None:
    if part == "" and allow_empty:
        return
    if not _KEY_RE.match(part):
        raise ConfigError(f"invalid {what} for a store key: {part!r}")


class Store:
    """put/get/list over the documented on-disk layout.

    Layout: ``<root>/<session>/<kind>/<participant or '_'>~<name>.json``
    (the separator ``~`` is outside the legal key alphabet, so parsing a
    filename back into a key is unambiguous)
    plus a ``manifest.json`` per session carrying the schema version.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _session_dir(self, session_id: str) -> Path:
        return self.root / session_id

    def _record_path(self, kind: str, key: RecordKey) -> Path:
        pid = key.participant_id or "_"
        return self._session_dir(key.session_id) / kind / f"{pid}~{key.name}.json"

    def _ensure_manifest(self, session_id: str) -> None:
        path = self._session_dir(session_id) / "manifest.json"
        if path.exists():
            manifest = json.loads(path.read_text(encoding="utf-8"))
            if manifest.get("schema_version") != SCHEMA_VERSION:
                raise StoreError(
                    f"store session {session_id!r} has schema version "
                    f"{manifest.get('schema_version')}, expected {SCHEMA_VERSION}; migrate first"
                )
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, _canonical_payload({"schema_version": SCHEMA_VERSION, "session_id": session_id}))

    def put(self, kind: str, key: RecordKey, payload: dict) -> Path:
        """Persist one record; identical payloads produce identical bytes."""
        if kind not in KINDS:
            raise ConfigError(f"unknown record kind {kind!r}; expected one of {KINDS}")
        _check_part(key.session_id, "session_id")
        _check_part(key.participant_id, "participant_id", allow_empty=True)
        _check_part(key.name, "name")
        self._ensure_manifest(key.session_id)
        body = _canonical_payload(payload)
        record = {
            "schema_version": SCHEMA_VERSION,
            "kind": kind,
            "session_id": key.session_id,
            "participant_id": key.participant_id,
            "name": key.name,
            "sha256": hashlib.sha256(body.encode("utf-8")).hexdigest(),
            "payload": payload,
        }
        path = self._record_path(kind, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, json.dumps(record, sort_keys=True, ensure_ascii=True, indent=1))
        return path

    def get(self, kind: str, key: RecordKey) -> dict:
        """Read one payload back, verifying version and content hash."""
        if kind not in KINDS:
            raise ConfigError(f"unknown record kind {kind!r}; expected one of {KINDS}")
        path = self._record_path(kind, key)
        if not path.exists():
            raise NotFoundError(f"no {kind} record for {key}")
        record = json.loads(path.read_text(encoding="utf-8"))
        if record.get("schema_version") != SCHEMA_VERSION:
            raise StoreError(
                f"record {path} has schema version {record.get('schema_version')}, "
                f"expected {SCHEMA_VERSION}; migrate first"
            )
        body = _canonical_payload(record["payload"])
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if digest != record.get("sha256"):
            raise StoreError(f"content hash mismatch for {path}: record is corrupt")
        return record["payload"]

    def list(self, kind: str, session_id: str | None = None) -> list[RecordKey]:
        """All keys of one kind, in deterministic lexicographic order."""
        if kind not in KINDS:
            raise ConfigError(f"unknown record kind {kind!r}; expected one of {KINDS}")
        keys: list[RecordKey] = []
        sessions = (
            [self._session_dir(session_id)]
            if session_id is not None
            else sorted(p for p in self.root.iterdir() if p.is_dir())
            if self.root.exists()
            else []
        )
        for sdir in sessions:
            kdir = sdir / kind
            if not kdir.is_dir():
                continue
            for f in sorted(kdir.glob("*.json")):
                pid, _, name = f.stem.partition("~")
                keys.append(
                    RecordKey(
                        session_id=sdir.name,
                        participant_id="" if pid == "_" else pid,
                        name=name,
                    )
                )
        keys.sort()
        return keys

    def sessions(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(p.name for p in self.root.iterdir() if (p / "manifest.json").exists())


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)
