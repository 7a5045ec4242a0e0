"""Wiring of datum, caches and algebra layers, plus run configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .cache import GramStore
from .cartan import BorcherdsCartanDatum, Weight
from .freealg import FreeAlgebra
from .modules import HWModule
from .primitive import PrimitiveTable
from .ualg import UAlgebra
from .uplus import UPlus

CACHE_ENV = "BOZEC_CACHE_DIR"


@dataclass
class EngineConfig:
    height_budget: int = 8
    window: int = 8
    max_m: int = 3
    max_n: int = 3
    max_p: int = 3
    max_level: int = 2
    depth: int = 4
    sample: int = 5
    seed: int = 0
    cache_dir: str | None = None
    use_cache: bool = True

    def resolved_cache_dir(self) -> str | None:
        if not self.use_cache:
            return None
        return self.cache_dir or os.environ.get(CACHE_ENV) or None


class Engine:
    """One datum with its form, primitive, algebra and module machinery."""

    def __init__(self, datum: BorcherdsCartanDatum, config: EngineConfig | None = None):
        self.datum = datum
        self.config = config or EngineConfig()
        self.alg = FreeAlgebra(datum, height_budget=self.config.height_budget)
        cache_dir = self.config.resolved_cache_dir()
        if cache_dir:
            self.alg.gram_store = GramStore(cache_dir)
        self.prims = PrimitiveTable(self.alg)
        self.ua = UAlgebra(self.alg, self.prims, window=self.config.window)
        self.uplus = UPlus(self.ua)
        self._modules: dict = {}

    def module(self, lam: Weight, depth: int | None = None, kind: str = "irreducible") -> HWModule:
        depth = self.config.depth if depth is None else depth
        key = (lam, depth, kind)
        hit = self._modules.get(key)
        if hit is None:
            hit = HWModule(self.ua, lam, depth, kind)
            self._modules[key] = hit
        return hit
