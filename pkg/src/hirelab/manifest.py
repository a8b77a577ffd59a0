"""Run manifests: every CLI run records its resolved configuration, seed, and
content hashes of the files it wrote, so a run can be replayed and checked
byte-for-byte (wall time excluded from the hashed surface)."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__


def content_hash(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: Path, command: str, config: dict, master_seed: int,
                   wall_time_s: float, outputs: list[Path]) -> Path:
    manifest = {
        "tool_version": __version__,
        "command": command,
        "config": config,
        "master_seed": master_seed,
        "wall_time_s": wall_time_s,
        "outputs": {p.name: content_hash(p) for p in outputs},
    }
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
