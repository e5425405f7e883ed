"""Persistent result cache and append-only row tables.

Cache entries are JSON files named by a hash of (command, parameters,
schema-corpus hash), so editing a schema file invalidates every result that
depended on it.  Writes go to a temporary file that is renamed into place.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .relations import corpus_hash

CACHE_ENV = "LADDERFILT_CACHE"

TABLE_HEADERS = {
    "dim": "m,u,space,dim,provenance",
    "filtration": "m,u,f,o,e,dimF,dimG,provenance",
    "mu": "m,u,o,e,value,provenance",
    "bound": "m,u,bound,exact,sharp,provenance",
    "certify": "code,closure,algebra,coefficients,provenance",
}


def default_root() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "ladderfilt"


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Cache:
    """Key-value store of JSON results under ``root/results``."""

    def __init__(self, root=None, enabled: bool = True, schemas=None):
        self.root = Path(root) if root is not None else default_root()
        self.enabled = enabled
        self.corpus = corpus_hash(schemas)

    def key(self, command: str, params: dict) -> str:
        blob = json.dumps([command, params, self.corpus], sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key):
        return self.root / "results" / key[:2] / f"{key}.json"

    def get(self, command, params):
        if not self.enabled:
            return None
        path = self._path(self.key(command, params))
        try:
            return json.loads(path.read_text())["value"]
        except (FileNotFoundError, json.JSONDecodeError, KeyError):
            return None

    def put(self, command, params, value):
        if not self.enabled:
            return
        record = {"command": command, "params": params, "corpus": self.corpus, "value": value}
        atomic_write(self._path(self.key(command, params)), json.dumps(record, sort_keys=True) + "\n")

    def lookup(self, command, params, compute):
        """``(value, provenance)``: cached if present, else computed and stored."""
        hit = self.get(command, params)
        if hit is not None:
            return hit, "cached"
        value = compute()
        self.put(command, params, value)
        return value, "computed"


class TableStore:
    """Directory of ``tables/<name>.rows`` files with a header line.

    Rows are only ever appended; a row already present is not written twice.
    """

    def __init__(self, root=None):
        self.dir = (Path(root) if root is not None else default_root()) / "tables"

    def path(self, name: str) -> Path:
        return self.dir / f"{name}.rows"

    def rows(self, name: str) -> list:
        try:
            lines = self.path(name).read_text().splitlines()
        except FileNotFoundError:
            return []
        return [ln for ln in lines if ln and not ln.startswith("#")]

    def append(self, name: str, rows, header: str | None = None):
        header = header or TABLE_HEADERS.get(name, "")
        path = self.path(name)
        existing = set(self.rows(name))
        new = [r for r in rows if r not in existing]
        if not new and path.exists():
            return
        old = path.read_text() if path.exists() else f"# {header}\n"
        atomic_write(path, old + "".join(r + "\n" for r in new))
