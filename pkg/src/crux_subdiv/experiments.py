"""Experiment runners whose reports are reproducible, CSV-exportable and re-verifiable."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from .generators import complete_bipartite, generate
from .graph import Graph, GraphError, average_degree
from .pipeline import PipelineConfig, pipeline_find_subdivision
from .subdivision import SubdivisionCertificate, max_subdivision_bruteforce, verify_subdivision


class ReportError(ValueError):
    """A stored report whose certificates no longer verify."""


def trial_seed(master: int, trial: int) -> int:
    """Per-trial 63-bit seed derived from (master, trial) by numpy's SeedSequence hash."""
    state = np.random.SeedSequence([int(master), int(trial)]).generate_state(2, np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)


@dataclass
class ExperimentReport:
    experiment: str
    inputs: dict
    trials: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    config: Optional[dict] = None
    columns: tuple = ()

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "inputs": self.inputs,
            "trials": self.trials,
            "summary": self.summary,
            "config": self.config,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        cols = list(self.columns) or sorted({k for r in self.trials for k in r if k != "certificate"})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for rec in self.trials:
            w.writerow([_csv_cell(rec.get(c)) for c in cols])
        return buf.getvalue()

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "ExperimentReport":
        """Load a report, re-verifying every recorded certificate against its regenerated graph."""
        if isinstance(data, str):
            data = json.loads(data)
        rep = cls(data["experiment"], data["inputs"], data["trials"], data["summary"], data.get("config"))
        for i, rec in enumerate(rep.trials):
            if rec.get("certificate") is None:
                continue
            g = generate(rec["graph"])
            viol = verify_subdivision(g, SubdivisionCertificate.from_json(rec["certificate"]))
            if viol:
                raise ReportError(f"trial {i}: certificate fails verification ({viol[0]['kind']})")
        return rep


def _csv_cell(x):
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, dict)):
        return json.dumps(x, sort_keys=True)
    return "" if x is None else x


def _config(config) -> PipelineConfig:
    if config is None:
        return PipelineConfig()
    if isinstance(config, PipelineConfig):
        return config
    return PipelineConfig.from_json(config)


def _run(spec: dict, cfg: PipelineConfig) -> dict:
    g = generate(spec)
    res = pipeline_find_subdivision(g, cfg)
    return {
        "graph": spec,
        "n": g.n,
        "m": g.m,
        "d": float(average_degree(g)) if g.n else 0.0,
        "t": res.t,
        "certificate": res.certificate.to_json() if res.certificate else None,
    }


def experiment_dichotomy(
    n: int,
    p_list: Sequence[float],
    trials: int = 3,
    config=None,
    seed: int = 0,
) -> ExperimentReport:
    """Pipeline t on G(n, p) for each p, with median t per p.

    Trial i uses the same derived seed for every p, so the graphs for one
    trial are nested as p grows.
    """
    if n < 1 or not p_list or trials < 1:
        raise ValueError("need n >= 1, a non-empty p list and trials >= 1")
    if n * max(p_list) < 1:
        raise ValueError("n * max(p) must be at least 1")
    cfg = _config(config)
    records = []
    for p in p_list:
        for i in range(trials):
            s = trial_seed(seed, i)
            rec = _run({"kind": "gnp", "n": n, "p": float(p), "seed": s}, cfg)
            rec.update(p=float(p), trial=i, seed=s, np=n * float(p), sqrt_n=math.sqrt(n))
            records.append(rec)
    medians = []
    for p in p_list:
        ts = [r["t"] for r in records if r["p"] == float(p)]
        medians.append({"p": float(p), "median_t": statistics.median(ts), "np": n * float(p)})
    mono = all(a["median_t"] <= b["median_t"] for a, b in zip(medians, medians[1:]))
    return ExperimentReport(
        "dichotomy",
        {"n": n, "p_list": [float(p) for p in p_list], "trials": trials, "seed": seed},
        records,
        {"median_t": medians, "non_decreasing": mono, "sqrt_n": math.sqrt(n)},
        cfg.to_json(),
        ("p", "trial", "seed", "n", "m", "d", "np", "sqrt_n", "t"),
    )


def experiment_jung(a: int, copies: int, config=None, oracle_limit: int = 6) -> ExperimentReport:
    """Pipeline t on K_{a,a} against t on a disjoint union of copies of it."""
    if a < 1 or copies < 1:
        raise ValueError("need a >= 1 and copies >= 1")
    cfg = _config(config)
    single = {"kind": "complete_bipartite", "a": a, "b": a}
    union = {"kind": "disjoint_union", "parts": [single] * copies}
    r1 = _run(single, cfg)
    r2 = _run(union, cfg)
    r1["role"], r2["role"] = "single", "union"
    summary = {"t_single": r1["t"], "t_union": r2["t"], "equal": r1["t"] == r2["t"]}
    if a <= oracle_limit:
        summary["oracle_t_single"] = max_subdivision_bruteforce(complete_bipartite(a, a))[0]
    return ExperimentReport(
        "jung",
        {"a": a, "copies": copies},
        [r1, r2],
        summary,
        cfg.to_json(),
        ("role", "n", "m", "d", "t"),
    )


def max_cross_edges(g: Graph, t: int) -> tuple[int, list[int], list[int]]:
    """Max e(X, Y) over disjoint X, Y with |X| + |Y| = t, by enumeration."""
    if not 0 <= t <= g.n:
        raise GraphError(f"need 0 <= t <= n, got t={t}, n={g.n}")
    masks = [int(x) for x in g.adj_masks()]
    best, bx, by = -1, [], []
    for chosen in itertools.combinations(range(g.n), t):
        if not chosen:
            return 0, [], []
        # the first chosen vertex sits in X; splits are symmetric
        head, rest = chosen[0], chosen[1:]
        for bits in range(1 << len(rest)):
            xs = [head] + [v for j, v in enumerate(rest) if bits >> j & 1]
            ys = [v for j, v in enumerate(rest) if not bits >> j & 1]
            ymask = 0
            for v in ys:
                ymask |= 1 << v
            cross = sum(bin(masks[u] & ymask).count("1") for u in xs)
            if cross > best:
                best, bx, by = cross, xs, ys
    return best, bx, by


def experiment_bipartite_obstruction(
    t: int, c: float = 1.0, seed: int = 0, host: Optional[Mapping[str, Any]] = None
) -> ExperimentReport:
    """Largest X-Y edge count over |X| + |Y| = t in a sparse random host.

    The host is G(N, c/4) with N = max(t, ceil(c t^2 / 100)); ``host`` may
    override it with any generator spec.
    """
    if not 1 <= t <= 14:
        raise ValueError("t must lie in [1, 14] for exhaustive enumeration")
    if not 0 < c <= 1:
        raise ValueError("c must lie in (0, 1]")
    if host is None:
        size = max(t, math.ceil(c * t * t / 100))
        spec = {"kind": "gnp", "n": size, "p": c / 4, "seed": trial_seed(seed, 0)}
    else:
        spec = dict(host)
    g = generate(spec)
    best, xs, ys = max_cross_edges(g, t)
    bound = Fraction(c).limit_denominator(10**6) * t * t / 12
    d = average_degree(g) if g.n else Fraction(0)
    degree_target = c * c * t * t / 1000
    rec = {
        "graph": spec,
        "n": g.n,
        "m": g.m,
        "max_cross_edges": best,
        "X": xs,
        "Y": ys,
        "bound": float(bound),
        "within_bound": best <= bound,
        "d": float(d),
        "degree_target": degree_target,
    }
    return ExperimentReport(
        "bipartite_obstruction",
        {"t": t, "c": c, "seed": seed, "host": spec},
        [rec],
        {
            "max_cross_edges": best,
            "bound": float(bound),
            "within_bound": best <= bound,
            "d": float(d),
            "degree_target": degree_target,
            "degree_at_target": float(d) >= degree_target,
            "degree_check": "single-sample empirical",
        },
        None,
        ("n", "m", "max_cross_edges", "bound", "within_bound", "d", "degree_target"),
    )


__all__ = [
    "ExperimentReport",
    "ReportError",
    "experiment_bipartite_obstruction",
    "experiment_dichotomy",
    "experiment_jung",
    "max_cross_edges",
    "trial_seed",
]
