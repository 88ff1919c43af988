"""
Append-only JSONL run log with a hash chain.

Each entry fingerprints the command, scenario configuration, seed and the
CSV it produced. No edits, no deletes; `verify` re-walks the chain.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from typing import Any, Iterator, Mapping

from cliqueperc.crypto import canonical_json, sha256_bytes, sha256_file

GENESIS_HASH = "0" * 64


@dataclass(frozen=True)
class RunLogEntry:
    idx: int
    ts_utc: str
    command: str
    config_fingerprint: str
    seed: int | None
    csv_sha256: str | None
    rows: int
    prev_entry_hash: str
    entry_hash: str
    extra: dict[str, Any] | None = None


class RunLog:
    def __init__(self, path: str):
        self.path = path
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)

    def _now_utc_iso(self) -> str:
        return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())

    def _raw_entries(self) -> Iterator[dict[str, Any]]:
        if not os.path.exists(self.path):
            return
        with open(self.path, "rb") as f:
            for line in f:
                if line.strip():
                    yield json.loads(line.decode("utf-8"))

    def entries(self) -> list[RunLogEntry]:
        return [RunLogEntry(**obj) for obj in self._raw_entries()]

    def append(
        self,
        command: str,
        config_fingerprint: str,
        *,
        seed: int | None = None,
        csv_path: str | None = None,
        rows: int = 0,
        extra: Mapping[str, Any] | None = None,
    ) -> RunLogEntry:
        prev = GENESIS_HASH
        idx = 0
        for obj in self._raw_entries():
            prev = obj["entry_hash"]
            idx += 1

        entry_core: dict[str, Any] = {
            "idx": idx,
            "ts_utc": self._now_utc_iso(),
            "command": command,
            "config_fingerprint": config_fingerprint,
            "seed": seed,
            "csv_sha256": sha256_file(csv_path) if csv_path else None,
            "rows": rows,
            "prev_entry_hash": prev,
            "extra": dict(extra) if extra else None,
        }
        entry_hash = sha256_bytes(canonical_json(entry_core))
        entry_obj = dict(entry_core)
        entry_obj["entry_hash"] = entry_hash

        with open(self.path, "ab") as f:
            f.write(canonical_json(entry_obj) + b"\n")
        return RunLogEntry(**entry_obj)

    def verify(self) -> bool:
        """True iff every entry hashes to its recorded value and links to its predecessor."""
        prev = GENESIS_HASH
        for expected_idx, obj in enumerate(self._raw_entries()):
            core = {k: v for k, v in obj.items() if k != "entry_hash"}
            if obj.get("idx") != expected_idx or obj.get("prev_entry_hash") != prev:
                return False
            if sha256_bytes(canonical_json(core)) != obj.get("entry_hash"):
                return False
            prev = obj["entry_hash"]
        return True
