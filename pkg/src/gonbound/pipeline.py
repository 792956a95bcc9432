"""The subdivision construction and the stacked spectral lower bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GraphError
from .graph_core import (
    MetricGraph,
    PointOnGraph,
    SimpleGraph,
    as_fraction,
    require_valid,
    rescale,
    subdivide,
)
from .spectral import (
    disk_gaps,
    fiedler_pair,
    lambda1_discrete,
    lambda1_metric,
    lift_eigenvector,
    rayleigh_quotient,
)

C_CLOSED = Fraction(1, 1024)
C_LIFT = 128
DEFAULT_H = Fraction(1, 100)
TOL = 1e-6
PLACEMENTS = ("separated", "literal")


def bound_treewidth_spectral(g: SimpleGraph) -> float:
    """``|V| lambda_1 / (12 d_max) - 1``; a lower bound on treewidth."""
    return g.n * lambda1_discrete(g) / (12 * g.d_max) - 1


def bound_gonality_discrete(g: SimpleGraph) -> float:
    """``|V| lambda_1 / (24 d_max)``; a lower bound on gonality for the model ``g``."""
    return g.n * lambda1_discrete(g) / (24 * g.d_max)


def closed_form_bound(lambda1: float, l_min, mu, d_max: int) -> float:
    """``lambda_1 * l_min * mu / (1024 d_max)``; invariant under rescaling."""
    return lambda1 * float(l_min) * float(mu) / (1024 * d_max)


# ---------------------------------------------------------------- subdivision


def _separated_points(ell, ru, rv):
    """``ceil(4l) - 1`` points, with equal gaps between consecutive disks."""
    k = math.ceil(4 * ell) - 1
    t = (ell - ru - rv - Fraction(k, 16)) / (k + 1)
    return [ru + j * t + Fraction(2 * j - 1, 32) for j in range(1, k + 1)]


def _literal_points(ell, ru, rv):
    """``floor(4L') + 1`` equally spaced points on ``[u1, v1]`` where ``L' = v1 - u1``."""
    span = ell - ru - rv
    if span <= 0:
        raise GraphError("edge too short: the end points u1, v1 cross")
    n = math.floor(4 * span) + 1
    return [ru + span * j / (n - 1) for j in range(n)]


@dataclass(frozen=True)
class SubdivisionResult:
    metric: MetricGraph
    gbar: MetricGraph
    points: tuple  # sorted (edge, (offsets...)) pairs
    placement: str

    @property
    def point_map(self) -> dict:
        return dict(self.points)

    @property
    def counts(self) -> dict:
        return {e: len(p) for e, p in self.points}

    @property
    def n_vertices(self) -> int:
        return self.gbar.model.n

    def gaps(self) -> dict:
        return disk_gaps(self.gbar)

    def checks(self) -> list:
        """Exact checks as ``(name, holds, detail)``."""
        out = []
        lm = self.metric.length_map
        for e, c in self.counts.items():
            ell = lm[e]
            out.append(("count", 4 * ell - 1 <= c <= 4 * ell + 2,
                        f"{e[0]}-{e[1]}: 4l-1 <= |A_e| = {c} <= 4l+2 with l = {ell}"))
        mu = self.metric.mu
        out.append(("vertices", 3 * mu <= self.n_vertices <= 8 * mu,
                    f"3mu <= |Vbar| = {self.n_vertices} <= 8mu with mu = {mu}"))
        gaps = self.gaps()
        lo, hi = min(gaps.values()), max(gaps.values())
        out.append(("gaps", Fraction(1, 8) <= lo and hi <= Fraction(1, 2),
                    f"segments between disks lie in [{lo}, {hi}]"))
        spacing = [b - a for _, p in self.points for a, b in zip(p, p[1:])]
        if spacing:
            out.append(("spacing", min(spacing) >= Fraction(1, 4),
                        f"minimum spacing inside A_e is {min(spacing)}"))
        return out

    def failed(self, names=("count", "vertices", "gaps")) -> list:
        return [c for c in self.checks() if c[0] in names and not c[1]]


def build_subdivision(metric: MetricGraph, placement: str = "separated") -> SubdivisionResult:
    """Subdivide every edge of a metric graph with ``l_min >= 1``.

    ``separated``: ``ceil(4l) - 1`` points with the segments between the disks
    ``B(x)`` (radius ``1/(16 deg x)``) all of one length in ``[1/8, 1/4]``.
    ``literal``: the points sit at ``1/(16 deg)`` from the ends and are spread
    evenly in between; the disks then overlap near the ends.
    """
    if placement not in PLACEMENTS:
        raise GraphError(f"unknown placement {placement!r}; use one of {PLACEMENTS}")
    if metric.l_min < 1:
        raise GraphError(f"l_min = {metric.l_min} < 1; rescale by 1/l_min first")
    g = metric.model
    make = _separated_points if placement == "separated" else _literal_points
    points = {}
    for e, ell in metric.length_map.items():
        ru = Fraction(1, 16 * g.degree(e[0]))
        rv = Fraction(1, 16 * g.degree(e[1]))
        offs = make(ell, ru, rv)
        if not all(0 < x < ell for x in offs) or offs != sorted(set(offs)):
            raise GraphError(f"placement failed on {e[0]!r}-{e[1]!r}")
        points[e] = tuple(offs)
    gbar = subdivide(metric, [PointOnGraph(edge=e, offset=x) for e, xs in points.items() for x in xs])
    return SubdivisionResult(metric, gbar, tuple(sorted(points.items())), placement)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class Link:
    name: str
    formula: str
    lhs: float
    rhs: float
    holds: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "formula": self.formula, "lhs": self.lhs,
                "rhs": self.rhs, "holds": self.holds}


def _link(name, formula, lhs, rhs, tol=TOL):
    """``lhs >= rhs`` up to ``tol``."""
    return Link(name, formula, float(lhs), float(rhs), float(lhs) >= float(rhs) - tol)


@dataclass(frozen=True)
class BoundReport:
    n_vertices: int
    n_edges: int
    mu: Fraction
    l_min: Fraction
    beta: Fraction
    d_max: int
    d_max_model: int
    h: Fraction
    placement: str
    lambda1_model: float
    bound_tw: float
    bound_gon_discrete: float
    n_vbar: int
    mu_scaled: Fraction
    lambda1_gbar: float
    lambda1_metric_scaled: float
    lambda1_metric: float
    rayleigh_lift: float
    bound_gon_discrete_gbar: float
    bound_gon_chain: float
    bound_gon_closed_form: float
    bound_gon_closed_form_original: float
    links: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(l.holds for l in self.links)

    def first_broken(self):
        return next((l for l in self.links if not l.holds), None)


def bound_gonality_metric(metric: MetricGraph, h=DEFAULT_H, placement: str = "separated",
                          gonality: int | None = None) -> BoundReport:
    """Rescale to ``l_min = 1``, subdivide, and stack the discrete and metric bounds.

    ``h`` is the mesh size used on the rescaled graph. Passing a known
    ``gonality`` adds the links comparing it with the bounds.
    """
    require_valid(metric.model)
    g = metric.model
    if g.n < 2:
        raise GraphError("bounds need at least one edge")
    h = as_fraction(h)
    beta = 1 / metric.l_min
    scaled = rescale(metric, beta)
    sub = build_subdivision(scaled, placement)
    gbar = sub.gbar.model
    d = scaled.d_max
    lam_model = lambda1_discrete(g)
    lam_bar, vec_bar = fiedler_pair(gbar)
    lam_scaled = lambda1_metric(scaled, h)
    lam_metric = lam_scaled * float(beta) ** 2
    mu_s = scaled.mu
    if placement == "separated":
        rq = rayleigh_quotient(lift_eigenvector(scaled, sub.gbar, vec_bar, h))
    else:
        rq = float("nan")  # the disks overlap, so the lift is not defined
    discrete_bar = sub.n_vertices * lam_bar / (24 * d)
    chain = 3 * float(mu_s) * lam_bar / (24 * d)
    closed = closed_form_bound(lam_scaled, scaled.l_min, mu_s, d)
    closed_orig = closed_form_bound(lam_metric, metric.l_min, metric.mu, d)
    links = [
        _link("vertex count", "|Vbar| >= 3 mu", sub.n_vertices, 3 * mu_s, tol=0),
        _link("vertex count upper", "8 mu >= |Vbar|", 8 * mu_s, sub.n_vertices, tol=0),
        _link("lift", "128 lambda1(Gbar) >= lambda1(Gamma)", C_LIFT * lam_bar, lam_scaled),
        _link("discrete to chain", "|Vbar| l1(Gbar)/(24 d) >= 3 mu l1(Gbar)/(24 d)",
              discrete_bar, chain),
        _link("chain to closed form", "3 mu l1(Gbar)/(24 d) >= mu l1(Gamma)/(1024 d)",
              chain, closed),
        Link("scale free", "l1 * l_min * mu / d unchanged by rescaling",
             closed_orig, closed, abs(closed_orig - closed) <= TOL * max(1.0, abs(closed))),
    ]
    if placement == "separated":
        links.append(_link("lift quotient", "128 lambda1(Gbar) >= R(lifted f)", C_LIFT * lam_bar, rq))
        links.append(_link("variational", "R(lifted f) >= lambda1(Gamma)", rq, lam_scaled))
    if gonality is not None:
        links.append(_link("gonality vs discrete", "gon >= |V| l1(G)/(24 d_max(G))",
                           gonality, g.n * lam_model / (24 * g.d_max)))
        links.append(_link("gonality vs closed form", "gon >= l1 l_min mu/(1024 d)",
                           gonality, closed))
    return BoundReport(
        n_vertices=g.n, n_edges=g.m, mu=metric.mu, l_min=metric.l_min, beta=beta,
        d_max=d, d_max_model=g.d_max, h=h, placement=placement,
        lambda1_model=lam_model,
        bound_tw=g.n * lam_model / (12 * g.d_max) - 1,
        bound_gon_discrete=g.n * lam_model / (24 * g.d_max),
        n_vbar=sub.n_vertices, mu_scaled=mu_s, lambda1_gbar=lam_bar,
        lambda1_metric_scaled=lam_scaled, lambda1_metric=lam_metric, rayleigh_lift=rq,
        bound_gon_discrete_gbar=discrete_bar, bound_gon_chain=chain,
        bound_gon_closed_form=closed, bound_gon_closed_form_original=closed_orig,
        links=tuple(links),
    )
