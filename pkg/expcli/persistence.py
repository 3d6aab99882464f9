"""
Writing run artifacts inside the output directory.

Every file goes through ArtifactWriter, which refuses paths outside the
output directory and records a SHA-256 digest for the manifest.
"""
import csv
import hashlib
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List

from expcli.errors import IoFailure
from expcli.models import FileEntry, RunManifest

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def _cell(value: Any) -> str:
    # floats: shortest round-trip repr
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def table_to_csv(rows: List[Dict[str, Any]]) -> str:
    if not rows:
        return ""
    fieldnames = list(rows[0].keys())
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in fieldnames})
    return buffer.getvalue()


class ArtifactWriter:
    """Writes files under one output directory and indexes them."""

    def __init__(self, output_dir: str):
        self.base_path = Path(output_dir)
        try:
            self.base_path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoFailure(f"Cannot create output directory {output_dir}: {e}") from e
        self._entries: Dict[str, FileEntry] = {}

    def _target(self, filename: str) -> Path:
        file_path = self.base_path / filename
        try:
            file_path.resolve().relative_to(self.base_path.resolve())
        except ValueError:
            raise IoFailure(f"File {filename} is not within the output directory")
        return file_path

    def write_text(self, filename: str, content: str) -> Path:
        """
        Write ``content`` (UTF-8, LF newlines) and record its digest.

        Raises:
            IoFailure: If the path escapes the output directory or writing fails
        """
        file_path = self._target(filename)
        data = content.encode("utf-8")
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            file_path.write_bytes(data)
        except PermissionError as e:
            raise IoFailure(f"Insufficient permissions to write {filename}: {e}") from e
        except OSError as e:
            raise IoFailure(f"I/O error while writing file {filename}: {e}") from e
        self._entries[filename] = FileEntry(path=filename, sha256=sha256_bytes(data), size=len(data))
        logger.debug(f"Wrote {file_path} ({len(data)} bytes)")
        return file_path

    def write_json(self, filename: str, data: Any) -> Path:
        return self.write_text(filename, json.dumps(data, indent=2, sort_keys=True) + "\n")

    def write_table(self, stem: str, rows: List[Dict[str, Any]], fmt: str) -> Path:
        if fmt == "csv":
            return self.write_text(f"{stem}.csv", table_to_csv(rows))
        return self.write_json(f"{stem}.json", rows)

    @property
    def entries(self) -> List[FileEntry]:
        return [self._entries[k] for k in sorted(self._entries)]


def write_manifest(output_dir: str, manifest: RunManifest) -> Path:
    """The manifest indexes every other file, so it is written last and not listed in itself."""
    path = Path(output_dir) / MANIFEST_NAME
    try:
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"I/O error while writing manifest {path}: {e}") from e
    return path


def read_manifest(output_dir: str) -> RunManifest:
    path = Path(output_dir) / MANIFEST_NAME
    try:
        return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IoFailure(f"Cannot read manifest {path}: {e}") from e


def verify_manifest(output_dir: str, manifest: RunManifest) -> List[str]:
    """Paths whose current content does not match the recorded digest (missing files included)."""
    bad = []
    for entry in manifest.files:
        path = Path(output_dir) / entry.path
        if not path.is_file() or sha256_file(path) != entry.sha256:
            bad.append(entry.path)
    return bad
