"""``octalab``: build the group, the octagon and the Gewirtz graph, and check them.

Each command prints one or more reports and exits 0 only if every check
passed.  Reports contain no timings or paths, so identical configurations
produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import family, geometry as geo, gewirtz, graphs, octagon
from .perm import (DEFAULT_BUDGET, DUALITY, FROBENIUS, FORMAT_VERSION, PermGroup, act_on_flag,
                   build_group_G, build_group_L34, flag_key, mul, plane_labels,
                   semilinear_to_perm, sl3_generators)
from . import pg24
from .report import Report

log = logging.getLogger("octalab")

COMMANDS = ("group", "octagon", "suborbits", "quads", "family", "aut", "gewirtz", "all")
FORMATS = ("text", "json", "dot")
INSTANCES = ("octagon", "product", "all")


@dataclass
class RunConfig:
    command: str
    format: str = "text"
    cache_dir: Path | None = None
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    seed: int = 0
    instance: str = "all"

    def __post_init__(self):
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.jobs <= 0:
            raise ValueError("jobs must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.instance not in INSTANCES:
            raise ValueError(f"instance must be one of {INSTANCES}")


# ---------------------------------------------------------------- caching

def _cache_key(generators: list[np.ndarray]) -> str:
    probe = PermGroup(np.array(generators), np.array(generators[:1]), plane_labels())
    return f"v{FORMAT_VERSION}-{probe.content_hash()[:20]}"


def cached_group(name: str, generators: list[np.ndarray], build, cache_dir: Path | None) -> PermGroup:
    """Load an enumerated group from the cache or build and store it.

    A cache file that cannot be read, or whose generators differ, is
    rebuilt with a warning.
    """
    if cache_dir is None:
        return build()
    path = Path(cache_dir) / f"{name}-{_cache_key(generators)}.npz"
    if path.exists():
        try:
            G = PermGroup.load(path)
            if not np.array_equal(G.generators, np.array(generators)) or G.elements.ndim != 2:
                raise ValueError("generator mismatch")
            return G
        except Exception as exc:  # any unreadable cache is rebuilt
            log.warning("cache file %s is unusable (%s); rebuilding", path.name, exc)
    G = build()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    G.save(tmp)
    tmp.replace(path)
    return G


class Context:
    """Lazily built shared objects for one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    @cached_property
    def L34(self) -> PermGroup:
        gens = [semilinear_to_perm(d) for d in sl3_generators()]
        return cached_group("L34", gens, lambda: build_group_L34(self.cfg.budget), self.cfg.cache_dir)

    @cached_property
    def G(self) -> PermGroup:
        gens = [semilinear_to_perm(d) for d in sl3_generators() + [FROBENIUS, DUALITY]]
        return cached_group("G", gens, lambda: build_group_G(self.cfg.budget), self.cfg.cache_dir)

    @cached_property
    def octagon(self) -> octagon.InvolutionGeometry:
        return octagon.build_octagon(self.G)

    @cached_property
    def quads(self) -> octagon.QuadData:
        return octagon.quads_and_spread(self.octagon)

    @cached_property
    def gewirtz(self) -> gewirtz.Gewirtz:
        return gewirtz.build_gewirtz(L=self.L34)


# ---------------------------------------------------------------- suites

def group_reports(ctx: Context) -> list[Report]:
    r = Report("group")
    L, G = ctx.L34, ctx.G
    r.expect("group:L34-order", L.order, 20160)
    r.expect("group:G-order", G.order, 80640)
    r.expect("group:index-4", G.order // L.order, 4)
    normal = all(mul(mul(np.argsort(h), x), h) in L for h in G.generators for x in L.generators)
    r.add("group:L34-normal", normal, "generators of L3(4) conjugate into L3(4)")
    cosets = [semilinear_to_perm(FROBENIUS), semilinear_to_perm(DUALITY)]
    cosets.append(mul(cosets[0], cosets[1]))
    r.add("group:coset-representatives", not any(c in L for c in cosets),
          "Frobenius, duality and their product lie outside L3(4)")
    plane = pg24.enumerate_plane()
    orbit = G.orbit(flag_key(plane.flags[0]), act_on_flag)
    r.expect("group:flag-transitive", len(orbit), 105)

    invs = G.central_involutions()
    r.expect("involutions:count", len(invs), 315)
    r.expect("involutions:one-class", len(G.conjugacy_class(invs[0])), 315)
    cent = sorted({len(G.centralizer(x)) for x in invs})
    r.expect("involutions:centralizer-order", cent, [256])
    r.add("involutions:in-L34", all(x in L for x in invs), "all lie in L3(4)")
    r.data["orders"] = {"L34": L.order, "G": G.order}
    return [r, octagon.verify_elations(ctx.octagon)]


def octagon_reports(ctx: Context) -> list[Report]:
    o = ctx.octagon
    r = octagon.verify_near_octagon(o)
    spread_only = o.with_admissible([min(o.admissible)])
    try:
        geo.check_connected(spread_only.geometry)
        connected = True
    except geo.VerificationError:
        connected = False
    r.add("octagon:smallest-orbit-disconnected", not connected, "lines of the smallest orbit alone")
    bigger = o.with_admissible(o.observed_sizes)
    try:
        geo.verify_near_polygon(bigger.geometry)
        near = True
    except geo.VerificationError:
        near = False
    r.add("octagon:all-triples-not-near-polygon", not near, "adding the largest orbit breaks the axiom")
    return [r]


def suborbit_reports(ctx: Context) -> tuple[list[Report], geo.SuborbitDiagram]:
    d, r = octagon.suborbit_report(ctx.octagon)
    return [r], d


def quad_reports(ctx: Context) -> list[Report]:
    return [octagon.verify_quotient(ctx.octagon, ctx.quads)]


def family_reports(ctx: Context) -> list[Report]:
    out = []
    if ctx.cfg.instance in ("octagon", "all"):
        g, qd = ctx.octagon.geometry, ctx.quads
        r = family.check_family(g, qd.spread, 2, jobs=ctx.cfg.jobs, quads=qd.quads)
        r.title = "spread family: octagon, t'=2"
        out.append(r)
    if ctx.cfg.instance in ("product", "all"):
        h = family.fano_flag_geometry()
        g, S = family.build_product(h, 3)
        r = family.check_family(g, S, 1, jobs=ctx.cfg.jobs)
        r.title = "spread family: product, t'=1"
        r.expect("product:points", g.npoints, 63)
        r.expect("product:order", geo.order_of(g), (2, 2))
        r.expect("product:spread", len(S), 21)
        dec = r.attempt("product:recognized", lambda: family.recognize_product(g, S),
                        lambda d: f"{len(d.fibers)} hexagon copies of {d.hexagon.npoints} points")
        if dec is not None:
            r.expect("product:hexagon-order", geo.order_of(dec.hexagon), (2, 1))
        out.append(r)
    return out


def aut_reports(ctx: Context) -> list[Report]:
    A, r = octagon.verify_automorphisms(ctx.octagon, ctx.cfg.budget)
    rng = np.random.default_rng(ctx.cfg.seed)
    g = ctx.octagon.geometry.collinearity
    perm = rng.permutation(g.n)
    order = graphs.automorphism_search(g.relabel(perm)).order
    r.expect("aut:relabeling-invariant", order, A.order)
    return [r]


def gewirtz_reports(ctx: Context) -> list[Report]:
    gw = ctx.gewirtz
    r = Report("Gewirtz graph")
    r.expect("gewirtz:srg", graphs.srg_params(gw.graph), (56, 10, 0, 2))
    r.expect("gewirtz:drg", str(graphs.drg_params(gw.graph)), "{10,9;1,2}")
    r.expect("gewirtz:hyperoval-orbits", gw.orbit_sizes, [56, 56, 56])
    others = [gewirtz.build_gewirtz(k, ctx.L34).graph for k in (1, 2)]
    r.add("gewirtz:orbit-choice-irrelevant",
          all(graphs.isomorphism(gw.graph, h) is not None for h in others),
          "all three orbits give isomorphic graphs")
    r.data["construction"] = gw.metadata()
    data, r2 = gewirtz.special_eight_sets(gw.graph, budget=ctx.cfg.budget)
    _, r3 = gewirtz.link_suite(ctx.octagon, data)
    return [r, r2, r3]


SUITES = {
    "group": group_reports,
    "octagon": octagon_reports,
    "suborbits": lambda ctx: suborbit_reports(ctx)[0],
    "quads": quad_reports,
    "family": family_reports,
    "aut": aut_reports,
    "gewirtz": gewirtz_reports,
}


# ---------------------------------------------------------------- output

def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def render(reports: list[Report], fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {"command": command, "passed": all(r.passed for r in reports),
               "reports": [r.to_json() for r in reports]}
        return json.dumps(doc, indent=2, sort_keys=True, default=_plain) + "\n"
    total = sum(len(r.checks) for r in reports)
    failed = sum(len(r.failed()) for r in reports)
    body = "".join(r.to_text() for r in reports)
    return body + f"{total - failed}/{total} checks passed\n"


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    ctx = Context(cfg)
    if cfg.format == "dot":
        if cfg.command != "suborbits":
            raise ValueError("dot output is only available for the suborbits command")
        reports, d = suborbit_reports(ctx)
        out.write(d.to_dot())
        return 0 if all(r.passed for r in reports) else 1
    names = [c for c in COMMANDS if c != "all"] if cfg.command == "all" else [cfg.command]
    reports = [r for name in names for r in SUITES[name](ctx)]
    out.write(render(reports, cfg.format, cfg.command))
    return 0 if all(r.passed for r in reports) else 1


def parse_args(argv=None) -> RunConfig:
    p = argparse.ArgumentParser(prog="octalab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--cache-dir", type=Path, default=None,
                   help="directory for enumerated groups (npz); none by default")
    p.add_argument("--jobs", type=int, default=1, help="threads for per-point checks")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="group element budget")
    p.add_argument("--seed", type=int, default=0, help="seed for the relabeling check")
    p.add_argument("--instance", choices=INSTANCES, default="all",
                   help="which geometry the family command checks")
    a = p.parse_args(argv)
    try:
        return RunConfig(a.command, a.format, a.cache_dir, a.budget, a.jobs, a.seed, a.instance)
    except ValueError as exc:
        p.error(str(exc))


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = parse_args(argv)
    try:
        return run(cfg)
    except ValueError as exc:
        print(f"octalab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
