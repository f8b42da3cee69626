"""On-disk cache of per-fiber class lists.

One text file per directory:

    # binquartic fiber cache v1
    # box 0.52 1.46 1.77
    # sha256 <hex digest of every line below the header>
    I J | count | a,b,c,d,e;a,b,c,d,e;...

Integers are written in decimal so nothing depends on machine word size.
"""
from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .enumeration import BOX_CONSTANTS
from .forms import InvariantPair, QuarticForm

CACHE_ENV = "BINQUARTIC_CACHE_DIR"
FILENAME = "fibers.txt"
MAGIC = "# binquartic fiber cache v1"


class CacheCorruptError(RuntimeError):
    pass


def default_cache_dir():
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "binquartic"))


def _encode(pair, forms):
    body = ";".join(",".join(str(t) for t in f) for f in forms)
    return f"{pair.I} {pair.J} | {len(forms)} | {body}"


def _decode(line):
    try:
        head, count, body = (s.strip() for s in line.split("|"))
        I, J = (int(t) for t in head.split())
        forms = [QuarticForm(*(int(t) for t in chunk.split(","))) for chunk in body.split(";") if chunk]
    except ValueError as exc:
        raise CacheCorruptError(f"malformed record: {line!r}") from exc
    if len(forms) != int(count):
        raise CacheCorruptError(f"record count mismatch: {line!r}")
    return InvariantPair(I, J), forms


def _digest(lines):
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()


class FiberCache:
    """get/put/flush interface used by the counting code."""

    def __init__(self, directory=None, box=BOX_CONSTANTS):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.path = self.directory / FILENAME
        self.box = tuple(box)
        self._data = {}
        self._dirty = False
        self.hits = 0
        self.misses = 0
        if self.path.exists():
            self._load()

    def _header(self, digest):
        return [MAGIC, "# box " + " ".join(str(k) for k in self.box), f"# sha256 {digest}"]

    def _load(self):
        lines = self.path.read_text().splitlines()
        if len(lines) < 3 or lines[0] != MAGIC:
            raise CacheCorruptError(f"{self.path}: bad header")
        box = tuple(float(t) for t in lines[1].removeprefix("# box ").split())
        if box != self.box:
            raise CacheCorruptError(f"{self.path}: written with box {box}, expected {self.box}")
        digest = lines[2].removeprefix("# sha256 ")
        body = lines[3:]
        if _digest(body) != digest:
            raise CacheCorruptError(f"{self.path}: checksum mismatch")
        for line in body:
            pair, forms = _decode(line)
            self._data[pair] = forms

    def get(self, pair):
        forms = self._data.get(InvariantPair(*pair))
        if forms is None:
            self.misses += 1
        else:
            self.hits += 1
        return forms

    def put(self, pair, forms):
        self._data[InvariantPair(*pair)] = [QuarticForm(*f) for f in forms]
        self._dirty = True

    def __len__(self):
        return len(self._data)

    def flush(self):
        if not self._dirty:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        body = [_encode(p, self._data[p]) for p in sorted(self._data)]
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text("\n".join(self._header(_digest(body)) + body) + "\n")
        tmp.replace(self.path)
        self._dirty = False
