"""``gonbound`` command line.

Exit codes: 0 success, 2 invalid input or failed validation, 3 instance above a cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import divisors, experiments, kernels, menger, pipeline, spectral, topology, width
from .errors import CapExceeded, GraphError
from .graph_core import as_fraction, fraction_str, graph_to_dict, load_graph, rescale

DEFAULT_H = "1/100"
DEFAULT_SEED = 0


class ValidationFailed(Exception):
    def __init__(self, payload, clause):
        super().__init__(clause)
        self.payload = payload
        self.clause = clause


def exact(x: Fraction) -> dict:
    return {"exact": fraction_str(x), "decimal": float(x)}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def _load_json(arg):
    """Inline JSON text or a path to a JSON file."""
    text = arg.strip()
    if text[:1] in "{[":
        return json.loads(text)
    with open(arg, encoding="utf-8") as fh:
        return json.load(fh)


def _vertex_list(text):
    return [v for v in text.split(",") if v]


# ---------------------------------------------------------------- commands


def cmd_gonality(a):
    g = load_graph(a.graph).model
    d, w = divisors.divisorial_gonality(g, cap=a.cap or divisors.DEFAULT_CAP)
    return {"gonality": d, "witness": w.as_dict()}


def cmd_rank(a):
    g = load_graph(a.graph).model
    D = divisors.Divisor(_load_json(a.divisor))
    return {"rank": divisors.rank(g, D, cap=a.cap or divisors.DEFAULT_CAP), "divisor": D.as_dict()}


def cmd_reduce(a):
    g = load_graph(a.graph).model
    D = divisors.Divisor(_load_json(a.divisor))
    out, rec = divisors.reduce(g, D, a.q)
    return {"q": a.q, "reduced": out.as_dict(), "firing": rec.as_dict()}


def cmd_treewidth(a):
    g = load_graph(a.graph).model
    tw, td = width.treewidth_exact(g, cap=a.cap or width.TW_CAP)
    return {"treewidth": tw, "decomposition": td.as_dict()}


def cmd_wtw(a):
    g = load_graph(a.graph).model
    w, wd = width.weak_treewidth_exact(g, cap=a.cap or width.WTW_CAP)
    return {"wtw": w, "decomposition": wd.as_dict()}


def cmd_sbn(a):
    g = load_graph(a.graph).model
    k, fam = width.strong_bramble_number_exact(g, cap=a.cap or width.SBN_CAP)
    return {"sbn": k, "family": fam.as_lists()}


def cmd_menger(a):
    g = load_graph(a.graph).model
    paths, sep = menger.menger(g, _vertex_list(a.x), _vertex_list(a.y))
    return {"connectivity": len(paths), "paths": paths, "separator": sorted(sep)}


def cmd_spectrum(a):
    g = load_graph(a.graph).model
    out = {"lambda1": spectral.lambda1_discrete(g), "n": g.n, "d_max": g.d_max}
    if g.n <= spectral.DENSE_LIMIT:
        w, _ = spectral.symmetric_eigh(spectral.laplacian(g))
        out["eigenvalues"] = [float(x) for x in w]
    return out


def cmd_metric_spectrum(a):
    return spectral.spectrum_report(load_graph(a.graph), as_fraction(a.h))


def cmd_subdivide(a):
    metric = load_graph(a.graph)
    beta = Fraction(1)
    if metric.l_min < 1 and a.rescale:
        beta = 1 / metric.l_min
        metric = rescale(metric, beta)
    sub = pipeline.build_subdivision(metric, a.placement)
    return {
        "placement": sub.placement,
        "beta": beta,
        "n_vertices": sub.n_vertices,
        "mu": metric.mu,
        "counts": [{"edge": list(e), "count": c} for e, c in sub.counts.items()],
        "checks": [{"name": n, "holds": ok, "detail": d} for n, ok, d in sub.checks()],
        "graph": graph_to_dict(sub.gbar),
    }


def report_dict(r: pipeline.BoundReport) -> dict:
    out = {k: getattr(r, k) for k in r.__dataclass_fields__ if k != "links"}
    out["links"] = [l.as_dict() for l in r.links]
    out["ok"] = r.ok
    return out


def cmd_bounds(a):
    metric = load_graph(a.graph)
    gon = None
    if a.with_gonality:
        gon = divisors.divisorial_gonality(metric.model, cap=a.cap or divisors.DEFAULT_CAP)[0]
    r = pipeline.bound_gonality_metric(metric, as_fraction(a.h), a.placement, gonality=gon)
    return report_dict(r)


def cmd_verify(a):
    metric = load_graph(a.graph)
    g = metric.model
    data = _load_json(a.certificate)
    if a.kind in ("td", "wtd"):
        weak = a.kind == "wtd"
        dec = width.decomposition_from_dict(data, weak=weak)
        rep = width.validate_wtd(g, dec) if weak else width.validate_td(g, dec)
        out = {"kind": a.kind, "valid": rep.ok, "violations": list(rep.violations)}
        if rep.ok:
            out["width"] = dec.width
    elif a.kind == "bramble":
        members = data["members"] if isinstance(data, dict) else data
        kind = data.get("kind", "strong") if isinstance(data, dict) else "strong"
        fam = width.VertexFamily(members, kind=kind)
        rep = width.validate_family(g, fam)
        out = {"kind": fam.kind, "valid": rep.ok, "violations": list(rep.violations)}
        if rep.ok:
            out["order"] = width.family_order(g, fam, cap=a.cap or 64)
    else:
        cert = topology.cert_from_dict(metric, data)
        bad = cert.violations()
        out = {"kind": "cert", "valid": not bad, "violations": bad}
        if not bad:
            out["order"] = topology.topological_bramble_order(cert)
    if not out["valid"]:
        raise ValidationFailed(out, out["violations"][0])
    return out


def cmd_experiment(a):
    config = experiments.StudyConfig.from_dict(_load_json(a.config))
    if a.seed is not None:
        config.seeds = [a.seed + k for k in range(len(config.seeds))]
    if a.no_timing:
        config.timing = False
    rows = experiments.run_scaling_study(config)
    return experiments.rows_to_csv(rows, config)


COMMANDS = {
    "gonality": cmd_gonality, "rank": cmd_rank, "reduce": cmd_reduce,
    "treewidth": cmd_treewidth, "wtw": cmd_wtw, "sbn": cmd_sbn, "menger": cmd_menger,
    "spectrum": cmd_spectrum, "metric-spectrum": cmd_metric_spectrum,
    "subdivide": cmd_subdivide, "bounds": cmd_bounds, "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--h", default=DEFAULT_H, help="mesh size, rational (default %(default)s)")
    common.add_argument("--cap", type=int, help="vertex cap for exact searches")
    common.add_argument("--seed", type=int, default=None,
                        help="base seed; experiments then use seed, seed+1, ... (default: config seeds)")
    common.add_argument("--format", choices=("json", "table", "csv"), default=None)

    p = argparse.ArgumentParser(prog="gonbound", description="Gonality lower bounds and certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    add("gonality", "exact divisorial gonality with a witness").add_argument("graph")
    s = add("rank", "exact rank of a divisor")
    s.add_argument("graph")
    s.add_argument("divisor", help="JSON object {vertex: coefficient}, inline or a file")
    s = add("reduce", "q-reduced representative and firing witness")
    s.add_argument("graph")
    s.add_argument("divisor")
    s.add_argument("--q", required=True, help="base vertex")
    add("treewidth", "exact treewidth with a decomposition").add_argument("graph")
    add("wtw", "exact weak treewidth with a weak decomposition").add_argument("graph")
    add("sbn", "exact strong bramble number with a witness").add_argument("graph")
    s = add("menger", "disjoint X-Y paths and a minimum separator")
    s.add_argument("graph")
    s.add_argument("--x", required=True, help="comma-separated vertices")
    s.add_argument("--y", required=True, help="comma-separated vertices")
    add("spectrum", "discrete Laplacian spectrum").add_argument("graph")
    add("metric-spectrum", "lambda_1 of the metric graph on a mesh").add_argument("graph")
    for name, help_text in (("subdivide", "the disk subdivision"), ("bounds", "stacked lower bounds")):
        s = add(name, help_text)
        s.add_argument("graph")
        s.add_argument("--placement", choices=pipeline.PLACEMENTS, default="separated")
        if name == "subdivide":
            s.add_argument("--rescale", action="store_true", help="rescale to l_min = 1 first")
        else:
            s.add_argument("--with-gonality", action="store_true",
                           help="also compute exact gonality and compare")
    s = add("verify", "validate a certificate")
    s.add_argument("kind", choices=("td", "wtd", "bramble", "cert"))
    s.add_argument("graph")
    s.add_argument("certificate")
    s = add("experiment", "random graph study, CSV output")
    s.add_argument("config", help="JSON config, inline or a file")
    s.add_argument("--no-timing", action="store_true", help="leave the ms column empty")
    return p


def _flatten(obj, prefix=""):
    if isinstance(obj, dict) and set(obj) != {"exact", "decimal"}:
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    else:
        yield prefix[:-1], obj


def render(result, fmt, params) -> str:
    if isinstance(result, str):  # CSV study output
        return result
    body = _jsonable(result)
    if fmt == "json":
        return json.dumps({"params": params, **body}, indent=2) + "\n"
    lines = list(_flatten(body))
    if fmt == "csv":
        head = "# " + json.dumps(params, sort_keys=True) + "\nkey,value\n"
        return head + "".join(f"{k},{json.dumps(v)}\n" for k, v in lines)
    head = "".join(f"# {k} = {v}\n" for k, v in params.items())
    return head + "".join(f"{k:<28} {json.dumps(v)}\n" for k, v in lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("csv" if args.command == "experiment" else "json")
    params = {"h": args.h, "seed": DEFAULT_SEED if args.seed is None else args.seed,
              "cap": args.cap, "backend": kernels.BACKEND}
    code = 0
    try:
        result = COMMANDS[args.command](args)
    except ValidationFailed as exc:
        result, code = exc.payload, 2
        print(f"gonbound: validation failed: {exc.clause}", file=sys.stderr)
    except CapExceeded as exc:
        print(f"gonbound: {exc}", file=sys.stderr)
        return 3
    except (GraphError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"gonbound: invalid input: {exc}", file=sys.stderr)
        return 2
    text = render(result, fmt, params)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
