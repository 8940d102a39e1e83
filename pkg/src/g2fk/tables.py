"""Building the ambient group tables S (cubic-form model) and U (matrix model)."""

from __future__ import annotations

import logging
import os
from pathlib import Path

import numpy as np

from .chevalley import ChevalleyModel, generate_u
from .field import check_prime
from .groups import GroupTable
from .poly_model import PolyModel

log = logging.getLogger(__name__)

MODELS = {"poly": PolyModel, "chevalley": ChevalleyModel}


def model_for(p: int, tag: str):
    if tag not in MODELS:
        raise ValueError(f"unknown model {tag!r}")
    return MODELS[tag](p)


def coordinate_closure(model) -> np.ndarray:
    """Breadth-first closure of the model generators on coordinate rows."""
    p = model.p
    radix = p ** np.arange(6, dtype=np.int64)
    seen = np.zeros(p**6, dtype=bool)
    seen[model.identity @ radix] = True
    frontier = model.identity[None]
    found = [frontier]
    gens = model.generator_coords
    while len(frontier):
        a = np.repeat(frontier, len(gens), axis=0)
        b = np.tile(gens, (len(frontier), 1))
        cand = model.multiply(a, b)
        codes = cand @ radix
        codes, first = np.unique(codes, return_index=True)
        fresh = ~seen[codes]
        seen[codes[fresh]] = True
        frontier = cand[first[fresh]]
        if len(frontier):
            found.append(frontier)
    return np.concatenate(found)


def canonical_order(coords: np.ndarray, p: int) -> np.ndarray:
    """Sort carrier rows by their base-p code so ids are reproducible."""
    codes = coords @ (p ** np.arange(6, dtype=np.int64))
    return coords[np.argsort(codes, kind="stable")]


def build_table(p: int, tag: str) -> GroupTable:
    p = check_prime(p)
    model = model_for(p, tag)
    coords = generate_u(p) if tag == "chevalley" else coordinate_closure(model)
    if len(coords) != p**6:
        raise RuntimeError(f"{tag} carrier has {len(coords)} elements, expected {p**6}")
    return GroupTable(model, canonical_order(coords, p))


def default_cache_dir() -> Path:
    return Path(os.environ.get("G2FK_CACHE_DIR", Path.home() / ".cache" / "g2fk"))


class TableStore:
    """Builds tables on demand, reusing the on-disk cache when a directory is given."""

    def __init__(self, cache_dir: Path | None = None, seed: int = 0):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.seed = seed
        self.hits = 0
        self._tables: dict[tuple[int, str], GroupTable] = {}

    def get(self, p: int, tag: str) -> GroupTable:
        from .cache import cache_path, load_table, save_table

        key = (p, tag)
        if key in self._tables:
            return self._tables[key]
        table = None
        if self.cache_dir is not None:
            path = cache_path(self.cache_dir, p, tag)
            if path.exists():
                table = load_table(path, seed=self.seed)
                self.hits += 1
                log.info("loaded %s from cache", path)
        if table is None:
            table = build_table(p, tag)
            if self.cache_dir is not None:
                save_table(table, cache_path(self.cache_dir, p, tag))
        self._tables[key] = table
        return table
