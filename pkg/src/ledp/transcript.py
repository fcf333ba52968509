"""
Public transcript of a protocol run, serializable to JSON-lines.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Union

import numpy as np

from ..utils.logger import get_logger

logger = get_logger(__name__)


def to_jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (set, frozenset)):
        return sorted(int(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    return value


def same_payload(left: Any, right: Any) -> bool:
    """Equality of payloads after JSON normalization (arrays, sets and lists compare by content)."""
    return to_jsonable(left) == to_jsonable(right)


@dataclass
class TranscriptEntry:
    """
    One transcript row.

    ``collect`` rows carry (queried parties, randomizer id, randomizer privacy
    parameters, randomized outputs). ``post`` rows carry zero-cost curator
    post-processing: broadcasts, curator draws and chosen outputs.
    ``release`` rows are trusted-curator releases (central mode only).
    """

    kind: str
    label: str
    parties: Optional[np.ndarray] = None
    params: Dict[str, Any] = field(default_factory=dict)
    outputs: Optional[np.ndarray] = None
    payload: Any = None

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"kind": self.kind, "label": self.label}
        if self.kind in ("collect", "release"):
            row["parties"] = to_jsonable(self.parties)
            row["params"] = to_jsonable(self.params)
            row["outputs"] = to_jsonable(self.outputs)
        else:
            row["payload"] = to_jsonable(self.payload)
        return row

    @classmethod
    def from_dict(cls, row: Dict[str, Any]) -> "TranscriptEntry":
        if row["kind"] in ("collect", "release"):
            return cls(
                kind=row["kind"],
                label=row["label"],
                parties=np.asarray(row["parties"], dtype=np.int64),
                params=row.get("params", {}),
                outputs=np.asarray(row["outputs"]),
            )
        return cls(kind="post", label=row["label"], payload=row.get("payload"))


class Transcript:
    """Append-only record of a protocol run."""

    def __init__(self, keep: bool = True):
        self.keep = keep
        self._entries: List[TranscriptEntry] = []
        self.collect_rounds = 0

    def append(self, entry: TranscriptEntry) -> None:
        if entry.kind in ("collect", "release"):
            self.collect_rounds += 1
        if self.keep:
            self._entries.append(entry)

    @property
    def entries(self) -> List[TranscriptEntry]:
        return list(self._entries)

    def collects(self) -> List[TranscriptEntry]:
        return [e for e in self._entries if e.kind in ("collect", "release")]

    def __iter__(self) -> Iterator[TranscriptEntry]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict()) + "\n" for e in self._entries)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_jsonl(), encoding="utf-8")
        logger.info(f"Saved transcript with {len(self)} entries to {path}")
        return path

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        transcript = cls()
        for line in text.splitlines():
            if line.strip():
                transcript.append(TranscriptEntry.from_dict(json.loads(line)))
        return transcript

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Transcript":
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))
