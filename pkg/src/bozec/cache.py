"""On-disk Gram cache: one JSON file per (datum content hash, degree).

The cache is purely an optimization; results must be identical with it
disabled, which the test suite checks.
"""

from __future__ import annotations

import json
from pathlib import Path

from .freealg import GramTable
from .scalars import format_scalar, parse_scalar


def _degree_key(beta) -> str:
    return "b" + "_".join(str(x) for x in beta)


class GramStore:
    def __init__(self, root: str):
        self.root = Path(root)

    def _path(self, datum, beta) -> Path:
        return self.root / datum.content_hash() / "grams" / (_degree_key(beta) + ".json")

    def load(self, datum, beta) -> GramTable | None:
        path = self._path(datum, beta)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        words = [tuple((int(i), int(l)) for i, l in w) for w in data["basis"]]
        matrix = [[parse_scalar(x) for x in row] for row in data["matrix"]]
        return GramTable(tuple(beta), words, matrix, int(data["rank"]), list(data["pivots"]))

    def save(self, datum, table: GramTable) -> None:
        path = self._path(datum, table.beta)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = {
            "basis": [[[i, l] for i, l in w] for w in table.words],
            "matrix": [[format_scalar(x) for x in row] for row in table.matrix],
            "rank": table.rank,
            "pivots": list(table.pivots),
        }
        path.write_text(json.dumps(data, sort_keys=True))

    def inspect(self, datum=None) -> dict:
        out = {}
        if not self.root.exists():
            return out
        roots = [self.root / datum.content_hash()] if datum else list(self.root.iterdir())
        for droot in roots:
            gdir = droot / "grams"
            if gdir.exists():
                out[droot.name] = sorted(p.stem for p in gdir.glob("*.json"))
        return out

    def clear(self, datum=None) -> int:
        import shutil

        removed = 0
        if not self.root.exists():
            return 0
        roots = [self.root / datum.content_hash()] if datum else list(self.root.iterdir())
        for droot in roots:
            if droot.exists():
                removed += sum(1 for _ in droot.rglob("*.json"))
                shutil.rmtree(droot)
        return removed
