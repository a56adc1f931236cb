"""On-disk cache of BFS layers of the building, one JSON file per layer.

Files are named by a hash of ``(kind, n, p, basepoint, layer)``; the format is
internal and may change between versions.
"""

import hashlib
import json
import os
from pathlib import Path

from .lattice import LatticeClass
from .padic import parse_quad

ENV_VAR = "WONDERBT_CACHE_DIR"


def default_cache_dir(explicit=None):
    if os.environ.get(ENV_VAR):
        return Path(os.environ[ENV_VAR])
    return Path(explicit) if explicit else None


class LayerCache:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, start, r):
        ident = json.dumps([start.kind, start.n, start.p, start.to_json(), r])
        digest = hashlib.sha256(ident.encode()).hexdigest()[:24]
        return self.directory / f"layer-n{start.n}-p{start.p}-r{r}-{digest}.json"

    def get(self, start, r):
        path = self._path(start, r)
        if not path.exists():
            self.misses += 1
            return None
        data = json.loads(path.read_text())
        self.hits += 1
        return [_decode(m, start.p, start.kind) for m in data["layer"]]

    def put(self, start, r, layer):
        path = self._path(start, r)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"layer": [v.to_json() for v in layer]}))
        tmp.replace(path)


def _decode(matrix, p, kind):
    from fractions import Fraction

    if kind == "quad":
        rows = tuple(tuple(parse_quad(x, p) for x in row) for row in matrix)
    else:
        rows = tuple(tuple(Fraction(x) for x in row) for row in matrix)
    return LatticeClass(rows, p, kind=kind, canonical=True)
