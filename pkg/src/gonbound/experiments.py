"""Random graph generators and the spectral scaling study."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .divisors import divisorial_gonality
from .errors import GraphError
from .graph_core import SimpleGraph, components
from .spectral import lambda1_discrete

RNG_NAME = "numpy.random.Generator(PCG64)"
CSV_HEADER = ["model", "n", "param", "seed", "lambda1", "dmax", "bound_gon", "gamma_exact", "ms"]
MAX_PAIRING_ATTEMPTS = 10_000


def _graph(n, pairs) -> SimpleGraph:
    return SimpleGraph([str(i) for i in range(n)], [(str(a), str(b)) for a, b in pairs])


def gen_gnp(n: int, p: float, seed: int) -> SimpleGraph:
    """Erdős–Rényi G(n, p); may be disconnected (see ``SimpleGraph.connected``)."""
    if n < 2 or not 0 < p < 1:
        raise GraphError(f"need n >= 2 and 0 < p < 1, got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return _graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def gen_random_regular(n: int, d: int, seed: int) -> SimpleGraph:
    """Uniform simple d-regular graph by the pairing model with rejection.

    Attempt ``k`` draws from ``SeedSequence([seed, k])``.
    """
    if (n * d) % 2:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    if d < 3 or n <= d:
        raise GraphError(f"need d >= 3 and n > d, got n={n}, d={d}")
    stubs = np.repeat(np.arange(n), d)
    for attempt in range(MAX_PAIRING_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        perm = rng.permutation(stubs).reshape(-1, 2)
        a, b = perm.min(axis=1), perm.max(axis=1)
        if (a == b).any():
            continue
        keys = a * n + b
        if np.unique(keys).size != keys.size:
            continue
        return _graph(n, zip(a.tolist(), b.tolist()))
    raise GraphError(f"no simple pairing after {MAX_PAIRING_ATTEMPTS} attempts")


def largest_component(g: SimpleGraph) -> SimpleGraph:
    """The largest component (ties: the one holding the smallest vertex id)."""
    return g.induced(max(components(g), key=len))


@dataclass(frozen=True)
class ExperimentRow:
    model: str
    n: int
    param: float
    seed: int
    lambda1: float
    dmax: int
    bound_gon: float
    gamma_exact: int | None
    ms: int | None
    n_used: int = 0  # size of the component analysed
    giant_only: bool = False

    def csv_fields(self) -> list:
        return [self.model, self.n, repr(self.param), self.seed, repr(self.lambda1), self.dmax,
                repr(self.bound_gon), "" if self.gamma_exact is None else self.gamma_exact,
                "" if self.ms is None else self.ms]


@dataclass
class StudyConfig:
    model: str  # "gnp" or "regular"
    ns: list
    param: object  # p as a number or "c/n"; d for regular
    seeds: list = field(default_factory=lambda: list(range(10)))
    exact_max_n: int = 10
    timing: bool = True

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        seeds = data.get("seeds", 10)
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        return cls(model=data["model"], ns=list(data["n"]), param=data["param"], seeds=list(seeds),
                   exact_max_n=data.get("exact_max_n", 10), timing=data.get("timing", True))

    def param_for(self, n: int):
        if self.model == "regular":
            return int(self.param)
        if isinstance(self.param, str) and self.param.endswith("/n"):
            return float(self.param[:-2]) / n
        return float(self.param)


def run_row(model: str, n: int, param, seed: int, exact_max_n: int = 10,
            timing: bool = True) -> ExperimentRow:
    start = time.perf_counter()
    if model == "gnp":
        g = gen_gnp(n, param, seed)
    elif model == "regular":
        g = gen_random_regular(n, param, seed)
    else:
        raise GraphError(f"unknown model {model!r}")
    giant = not g.connected
    if giant:
        g = largest_component(g)
    if g.n < 2:
        lam, bound = 0.0, 0.0
    else:
        lam = lambda1_discrete(g)
        bound = g.n * lam / (24 * g.d_max)
    gamma = divisorial_gonality(g)[0] if g.n <= exact_max_n else None
    ms = int(round((time.perf_counter() - start) * 1000)) if timing else None
    return ExperimentRow(model, n, param, seed, lam, g.d_max, bound, gamma, ms, g.n, giant)


def run_scaling_study(config: StudyConfig) -> list:
    rows = []
    for n in sorted(config.ns):
        for seed in sorted(config.seeds):
            rows.append(run_row(config.model, n, config.param_for(n), seed,
                                config.exact_max_n, config.timing))
    return rows


def rows_to_csv(rows, config: StudyConfig | None = None) -> str:
    buf = io.StringIO()
    meta = {"rng": RNG_NAME}
    if config is not None:
        meta.update({"model": config.model, "n": sorted(config.ns), "param": config.param,
                     "seeds": sorted(config.seeds)})
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.csv_fields())
    return buf.getvalue()


def medians_by_n(rows, key) -> dict:
    out = {}
    for n in sorted({r.n for r in rows}):
        out[n] = float(np.median([key(r) for r in rows if r.n == n]))
    return out
