"""Suite orchestration and the JSON report."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import MAX_PRIME, __version__
from .checks import CheckResult, run_tasks, summarize
from .field import is_prime

SUITES = ("structure", "aut", "chevalley", "p3", "iso")
MODELS = ("poly", "chevalley", "both")


class UsageError(ValueError):
    """Invalid run configuration (exit code 2)."""


@dataclass
class RunConfig:
    p: int
    model: str | None = None
    suites: tuple[str, ...] = ("all",)
    jobs: int = 1
    cache_dir: Path | None = None
    output: Path | None = None
    seed: int = 0
    pair_sample: int = 10_000

    def __post_init__(self):
        if not is_prime(self.p) or not 3 <= self.p <= MAX_PRIME:
            raise UsageError(f"p must be an odd prime between 3 and {MAX_PRIME}")
        if self.model is None:
            self.model = "chevalley" if self.p == 3 else "poly"
        if self.model not in MODELS:
            raise UsageError(f"unknown model {self.model!r}")
        if self.p == 3 and self.model != "chevalley":
            raise UsageError("model requires p ≥ 5")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        self.suites = tuple(self.suites)
        unknown = [s for s in self.suites if s != "all" and s not in SUITES]
        if unknown:
            raise UsageError(f"unknown suite {unknown[0]!r}")
        if self.p == 3 and ({"structure", "aut", "iso"} & set(self.suites)):
            raise UsageError("model requires p ≥ 5")
        if self.p != 3 and "p3" in self.suites:
            raise UsageError("the p3 suite runs only at p = 3")

    @property
    def selected(self) -> list[str]:
        if "all" in self.suites:
            return ["chevalley", "p3"] if self.p == 3 else ["structure", "aut", "chevalley"]
        return [s for s in SUITES if s in self.suites]

    @property
    def model_tags(self) -> list[str]:
        return ["poly", "chevalley"] if self.model == "both" else [self.model]

    def echo(self) -> dict:
        # paths and worker count do not change results, so they stay out of the report
        return {"suites": self.selected, "seed": self.seed, "pair_sample": self.pair_sample}


@dataclass
class Report:
    config: RunConfig
    suites: dict[str, list[CheckResult]]
    cache_hits: int = 0
    total_millis: int = 0
    build_millis: dict[str, int] = field(default_factory=dict)

    @property
    def checks(self) -> list[CheckResult]:
        return sorted((r for rs in self.suites.values() for r in rs), key=lambda r: r.id)

    @property
    def summary(self) -> dict[str, int]:
        return summarize(self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["fail"] else 0

    def to_dict(self, timings: bool = False) -> dict:
        cfg = self.config
        checks = []
        for r in self.checks:
            checks.append({
                "id": r.id, "status": r.status, "expected": r.expected, "actual": r.actual,
                "witness": r.witness, "millis": r.millis if timings else None,
            })
        return {
            "p": cfg.p,
            "model": cfg.model,
            "suite": "+".join(cfg.selected),
            "checks": checks,
            "summary": self.summary,
            "suites": {name: summarize(rs) for name, rs in self.suites.items()},
            "config": cfg.echo(),
            "version": __version__,
            "total_millis": self.total_millis if timings else None,
            "cache_hits": self.cache_hits if timings else None,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, ensure_ascii=False) + "\n"

    def timings(self) -> dict:
        return {
            "total_millis": self.total_millis,
            "cache_hits": self.cache_hits,
            "builds": self.build_millis,
            "checks": {r.id: r.millis for r in self.checks},
        }


def _prefix(results: list[CheckResult], tag: str) -> list[CheckResult]:
    for r in results:
        r.id = f"{tag}:{r.id}"
    return results


class Runner:
    def __init__(self, config: RunConfig):
        from .tables import TableStore, default_cache_dir

        self.config = config
        cache = config.cache_dir if config.cache_dir is not None else default_cache_dir()
        self.store = TableStore(cache, seed=config.seed)
        self.build_millis: dict[str, int] = {}
        self._iso = None
        self._aut_ctx = None

    def table(self, tag: str):
        start = time.perf_counter()
        t = self.store.get(self.config.p, tag)
        key = f"{tag}_p{self.config.p}"
        self.build_millis.setdefault(key, int(round((time.perf_counter() - start) * 1000)))
        return t

    @property
    def aut_ctx(self):
        from .automorphisms import AutContext

        if self._aut_ctx is None:
            self._aut_ctx = AutContext(self.table("poly"), seed=self.config.seed)
        return self._aut_ctx

    def iso(self):
        """(U -> S, S -> U) id maps: chevalley ids to poly ids and back."""
        from .chevalley import iso_maps

        if self._iso is None:
            fwd, bwd = iso_maps(self.table("poly"), self.table("chevalley"))
            if not (fwd.bijective and bwd.bijective):
                raise RuntimeError("the two models are not isomorphic under the root map")
            self._iso = (fwd.mapping, bwd.mapping)
        return self._iso

    def _poly_auts(self):
        """Inner maps by the generators and the B0 factor generators, on the cubic-form table."""
        t = self.table("poly")
        every = np.arange(t.n)
        auts = [(f"c_x{i + 1}", t.conj(every, g)) for i, g in enumerate(t.generators)]
        auts += [(a.label, a.perm) for a in self.aut_ctx.b.generators.values()]
        return auts

    def _delta(self, tag: str):
        """Generators of the group Delta acting on the W family (p = 7 only)."""
        from .automorphisms import delta_generators

        if self.config.p != 7:
            return None
        gens = delta_generators(self.aut_ctx)
        if tag == "poly":
            return gens
        t = self.table(tag)
        every = np.arange(t.n)
        return [t.conj(every, g) for g in t.generators] + [self._transport(gens[-1])]

    def _transport(self, perm: np.ndarray) -> np.ndarray:
        """A permutation of the poly carrier, conjugated over to the chevalley carrier."""
        u_to_s, s_to_u = self.iso()
        return s_to_u[perm[u_to_s]]

    def structure_tasks(self, tag: str):
        from .structure import structure_suite
        from .sylow import SylowContext

        t = self.table(tag)
        extra = self._poly_auts()
        if tag == "chevalley":
            extra = [(label, self._transport(perm)) for label, perm in extra]
        return structure_suite(SylowContext(t), extra_auts=extra, delta=self._delta(tag), seed=self.config.seed)

    def suite_tasks(self, name: str) -> list:
        cfg = self.config
        if name == "structure":
            return [("structure", tag, task) for tag in cfg.model_tags for task in self.structure_tasks(tag)]
        if name == "aut":
            from .automorphisms import aut_suite

            return [("aut", None, task) for task in aut_suite(self.aut_ctx, pair_sample=cfg.pair_sample)]
        if name == "chevalley":
            from .chevalley import iso_check, survey_checks

            tasks = [("chevalley", None, lambda: survey_checks(cfg.p))]
            if cfg.p >= 5:
                tasks.append(("chevalley", None, lambda: iso_check(self.table("poly"), self.table("chevalley"))))
            return tasks
        if name == "iso":
            from .chevalley import iso_check

            return [("iso", None, lambda: iso_check(self.table("poly"), self.table("chevalley")))]
        if name == "p3":
            from .p3 import build_p3, magma_fact_suite

            groups = build_p3(self.table("chevalley"))
            return [("p3", None, task) for task in magma_fact_suite(groups)]
        raise UsageError(f"unknown suite {name!r}")

    def run(self) -> Report:
        cfg = self.config
        start = time.perf_counter()
        entries = [e for name in cfg.selected for e in self.suite_tasks(name)]
        both = cfg.model == "both"

        def wrap(suite, tag, task):
            def go():
                out = list(task())
                return _prefix(out, tag) if both and tag else out
            return go

        # tasks may share lazily built state, so anything shared is built before fanning out
        if cfg.jobs > 1:
            self._warm()
        suites: dict[str, list[CheckResult]] = {name: [] for name in cfg.selected}
        for name in cfg.selected:
            mine = [wrap(*e) for e in entries if e[0] == name]
            suites[name] = run_tasks(mine, jobs=cfg.jobs)
        total = int(round((time.perf_counter() - start) * 1000))
        return Report(cfg, suites, cache_hits=self.store.hits, total_millis=total, build_millis=self.build_millis)

    def _warm(self):
        cfg = self.config
        for tag in cfg.model_tags:
            self.table(tag)
        if cfg.p >= 5 and {"structure", "aut"} & set(cfg.selected):
            self.aut_ctx.b
            self.aut_ctx.gram
        if "chevalley" in cfg.model_tags and "structure" in cfg.selected:
            self.iso()


def run(config: RunConfig) -> Report:
    return Runner(config).run()


def write_report(report: Report, path: Path | None, *, timings: bool = False) -> str:
    text = report.to_json()
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        if timings:
            side = path.with_name(path.stem + ".timings.json")
            side.write_text(json.dumps(report.timings(), indent=2) + "\n", encoding="utf-8")
    return text
