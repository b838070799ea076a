"""Three nested expanders and the star/unit/web builders, with greedy fallbacks at every stage."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional

import numpy as np

from .crux import crux_bounds
from .expansion import ExpanderParams, ExtractionError, extract_robust_expander
from .graph import Graph, Subgraph, average_degree, components
from .subdivision import (
    SubdivisionCertificate,
    greedy_best_subdivision,
    greedy_grow_subdivision,
    max_subdivision_bruteforce,
    trivial_certificate,
    verify_subdivision,
)
from .webs import build_units, build_webs, connect_units, connect_webs, find_disjoint_stars

PRESETS = {
    # multipliers on the asymptotic shapes; "desk" scales them into small-graph range
    "asymptotic": {"h1": 1.0, "h2": 1.0, "h3": 1.0, "h4": 1.0, "h5": 1.0},
    "desk": {"h1": 2e-7, "h2": 1.0, "h3": 0.005, "h4": 1.0, "h5": 0.0002},
}


@dataclass
class PipelineConfig:
    eps: float = 0.01
    alpha: str = "1/100"
    preset: str = "desk"
    multipliers: dict = field(default_factory=dict)  # overrides per h-name
    b: float = 1.0  # constant in the h4 shape
    exact_threshold: int = 14
    expander_trials: int = 3  # sampled sets per size class and kind
    crux_node_budget: int = 20_000
    oracle_threshold: int = 12  # components this small are solved exactly
    greedy_max_cores: int = 6
    greedy_max_restarts: int = 60
    greedy_reserves: tuple = (0, 4)
    skew_divisor: int = 10  # Q sets up to n / skew_divisor are sampled
    skew_ratio: int = 100  # skewed when d(G - Q) < d / skew_ratio
    stages: tuple = ("direct", "units", "webs", "crux_webs")
    seed: int = 0

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")
        ExpanderParams(self.eps, 1.0)
        if Fraction(self.alpha) <= 0:
            raise ValueError("alpha must be positive")
        if self.oracle_threshold < 0:
            raise ValueError("oracle_threshold must be non-negative")
        for name in ("exact_threshold", "expander_trials", "crux_node_budget", "skew_divisor", "skew_ratio"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        unknown = set(self.multipliers) - set(PRESETS["asymptotic"])
        if unknown:
            raise ValueError(f"unknown multipliers {sorted(unknown)}")
        self.greedy_reserves = tuple(self.greedy_reserves)
        self.stages = tuple(self.stages)

    def multiplier(self, name: str) -> float:
        return self.multipliers.get(name, PRESETS[self.preset][name])

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "PipelineConfig":
        if isinstance(data, str):
            data = json.loads(data)
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    def to_json(self) -> dict:
        out = asdict(self)
        out["greedy_reserves"] = list(self.greedy_reserves)
        out["stages"] = list(self.stages)
        return out


def h_schedule(cfg: PipelineConfig, n: int, d: float) -> dict:
    """h1..h5 as multiplier times the asymptotic shape, clamped to at least 1 (h3, h5 at least 2)."""
    ln = math.log(max(n, 3))
    lnln_d = math.log(math.log(max(d, 3)))
    shapes = {
        "h1": 2 * ln**10,
        "h2": d / ln**3,
        "h3": ln**4,
        "h4": cfg.b * d / max(lnln_d, 1e-9) ** 4,
        "h5": 50 * ln**4,
    }
    out = {}
    for name, val in shapes.items():
        lo = 2 if name in ("h3", "h5") else 1
        out[name] = max(lo, int(round(cfg.multiplier(name) * val)))
    return out


@dataclass
class PipelineResult:
    t: int
    certificate: Optional[SubdivisionCertificate]
    trace: list

    def trace_jsonl(self) -> str:
        return "\n".join(json.dumps(ev, sort_keys=True) for ev in self.trace)

    def to_json(self) -> dict:
        return {"t": self.t, "certificate": self.certificate.to_json() if self.certificate else None}


def _compose(outer: Subgraph, inner: Subgraph) -> Subgraph:
    return Subgraph(inner.graph, tuple(outer.ids[v] for v in inner.ids))


class _Run:
    def __init__(self, g: Graph, cfg: PipelineConfig):
        self.g = g
        self.cfg = cfg
        self.trace: list[dict] = []
        self.best = trivial_certificate(g)

    def emit(self, **ev):
        self.trace.append(ev)

    def offer(self, stage: str, sub: Subgraph, cert: Optional[SubdivisionCertificate]):
        """Lift a stage certificate to the input graph and keep it if it is the best so far."""
        if cert is None:
            return
        lifted = cert.lift(sub)
        viol = verify_subdivision(self.g, lifted)
        if viol:
            self.emit(stage=stage, event="rejected", violations=len(viol))
            return
        if self.best is None or lifted.t > self.best.t:
            self.best = lifted


def _extract(run: _Run, stage: str, sub: Subgraph, k: float, seed: int) -> Optional[Subgraph]:
    h = sub.graph
    if h.m == 0:
        return None
    cfg = run.cfg
    params = ExpanderParams(cfg.eps, max(1.0, k))
    try:
        ex = extract_robust_expander(
            h, params, exact_threshold=cfg.exact_threshold, trials=cfg.expander_trials, seed=seed
        )
        inner = ex.subgraph
        verdict, iters = ex.witness.verdict, ex.iterations
    except ExtractionError as err:
        inner, verdict, iters = err.best, "iteration-cap", -1
    out = _compose(sub, inner)
    run.emit(
        stage=stage,
        event="extract",
        k=round(params.k, 6),
        n_in=h.n,
        n_out=out.graph.n,
        m_out=out.graph.m,
        verdict=verdict,
        iterations=iters,
    )
    return out


def _space_bound(n: int, per_pair: float, per_hub: float) -> int:
    """Largest t with t (t - 1) per_pair + t per_hub <= n."""
    t = 1
    while (t + 1) * t * per_pair + (t + 1) * per_hub <= n:
        t += 1
    return t


def _units_stage(run: _Run, sub: Subgraph, d: float):
    h = sub.graph
    sched = h_schedule(run.cfg, h.n, d)
    h2, h3 = sched["h2"], sched["h3"]
    t = min(_space_bound(h.n, h2 + 2, 1), h.max_degree() + 1)
    if t < 3:
        run.emit(stage="units", event="skip", reason="no room for three units", n=h.n)
        return
    stars = find_disjoint_stars(h, (), h2, t * t)
    units = build_units(h, (), stars, t, t - 1, h2, h3)
    cert = connect_units(h, units) if len(units) >= 2 else None
    run.emit(
        stage="units",
        event="build",
        h1=t - 1,
        h2=h2,
        h3=h3,
        target_t=t,
        stars=len(stars),
        units=len(units),
        t=cert.t if cert else 0,
    )
    run.offer("units", sub, cert)


def _skew_split(h: Graph, d: Fraction, cfg: PipelineConfig):
    """Sampled Q (top-degree prefixes) with d(G - Q) < d / ratio, or None."""
    limit = h.n // cfg.skew_divisor
    order = np.lexsort((np.arange(h.n), -h.degrees))
    q = 1
    while q <= limit:
        rest = np.sort(order[q:])
        sub = h.induced(rest.tolist()).graph
        if sub.n == 0 or average_degree(sub) * cfg.skew_ratio < d:
            return sorted(order[:q].tolist())
        q *= 2
    return None


def _webs_stage(run: _Run, stage: str, sub: Subgraph, d: float):
    h = sub.graph
    cfg = run.cfg
    sched = h_schedule(cfg, h.n, d)
    h1 = min(sched["h1"], 4)
    h2, h3, h5 = sched["h2"], sched["h3"], sched["h5"]
    per_unit = 1 + h1 * (h2 + 2)
    t = min(_space_bound(h.n, per_unit + 1, 1), h.max_degree() + 1, sched["h4"] + 1)
    if t < 3:
        run.emit(stage=stage, event="skip", reason="no room for three webs", n=h.n)
        return
    q = _skew_split(h, average_degree(h), cfg)
    if q is not None:
        rest = sorted(set(range(h.n)) - set(q))
        stars = find_disjoint_stars(h, (), h2, t * (t - 1) * (h1 + 1), centers=q, leaf_pool=rest)
    else:
        stars = find_disjoint_stars(h, (), h2, t * (t - 1) * (h1 + 1))
    units = build_units(h, (), stars, t * (t - 1), h1, h2, h3)
    taken = set().union(*(u.vertices() for u in units)) if units else set()
    hubs = find_disjoint_stars(h, taken, 1, 4 * t)
    webs = build_webs(h, taken, hubs, units, t, t - 1, h5) if units else []
    cert = connect_webs(h, webs) if len(webs) >= 2 else None
    run.emit(
        stage=stage,
        event="build",
        case="skewed" if q is not None else "uniform",
        h1=h1,
        h2=h2,
        h3=h3,
        h4=t - 1,
        h5=h5,
        stars=len(stars),
        units=len(units),
        webs=len(webs),
        t=cert.t if cert else 0,
    )
    run.offer(stage, sub, cert)


def _light_greedy(run: _Run, stage: str, sub: Subgraph):
    cert = greedy_grow_subdivision(sub.graph, reserve=run.cfg.greedy_reserves[-1])
    run.offer(stage, sub, cert)


def _component(run: _Run, sub: Subgraph, index: int):
    cfg = run.cfg
    c = sub.graph
    d = float(average_degree(c))
    run.emit(stage="component", event="start", index=index, n=c.n, m=c.m, d=round(d, 6))
    if c.n <= cfg.oracle_threshold:
        t, cert = max_subdivision_bruteforce(c, threshold=cfg.oracle_threshold)
        run.offer("oracle", sub, cert)
        run.emit(stage="oracle", event="exact", t=t)
        return
    if "direct" in cfg.stages:
        cert = greedy_best_subdivision(
            c,
            max_cores=cfg.greedy_max_cores,
            max_restarts=cfg.greedy_max_restarts,
            reserves=cfg.greedy_reserves,
        )
        run.offer("direct", sub, cert)
        run.emit(stage="direct", event="greedy", t=cert.t if cert else 0)
    g1 = _extract(run, "G1", sub, cfg.eps * d, cfg.seed)
    if g1 is None:
        return
    if "units" in cfg.stages:
        _units_stage(run, g1, d)
        _light_greedy(run, "G1", g1)
    g2 = _extract(run, "G2", g1, d * d, cfg.seed + 1)
    if g2 is None:
        return
    if "webs" in cfg.stages:
        _webs_stage(run, "webs", g2, d)
        _light_greedy(run, "G2", g2)
    if "crux_webs" in cfg.stages and g2.graph.m:
        rep = crux_bounds(g2.graph, cfg.alpha, node_budget=cfg.crux_node_budget, samples=0)
        run.emit(stage="crux", event="bounds", lower=rep.lower, upper=rep.upper, mode=rep.mode)
        hsub = _extract(run, "H", g2, rep.upper / 100, cfg.seed + 2)
        if hsub is not None:
            _webs_stage(run, "crux_webs", hsub, d)
            _light_greedy(run, "H", hsub)


def pipeline_find_subdivision(g: Graph, config: Optional[PipelineConfig] = None) -> PipelineResult:
    """Largest verified clique subdivision found across all stages.

    A subdivision of K_t with t >= 3 is 2-connected, so each connected
    component is processed on its own (largest first) and the best
    certificate, lifted to ``g`` and re-verified there, is returned.
    """
    cfg = config or PipelineConfig()
    run = _Run(g, cfg)
    run.emit(stage="input", event="start", n=g.n, m=g.m, config=cfg.to_json())
    comps = sorted((cp for cp in components(g) if len(cp) >= 3), key=lambda cp: (-len(cp), cp[0]))
    for i, cp in enumerate(comps):
        sub = g.induced(cp)
        c = sub.graph
        bound = min(c.max_degree() + 1, c.n)
        if run.best is not None and bound <= run.best.t:
            continue
        if c.m < 3:
            continue
        _component(run, sub, i)
    best = run.best
    t = best.t if best is not None else 0
    if best is not None:
        assert not verify_subdivision(g, best), "pipeline produced an invalid certificate"
    run.emit(stage="result", event="done", t=t)
    return PipelineResult(t, best, run.trace)
