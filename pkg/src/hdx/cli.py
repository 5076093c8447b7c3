"""Command-line front end: generators, analysis, verification, reports.

Exit codes: 0 success, 1 usage or input error, 2 a hard identity assertion
failed.  Result JSON is deterministic for a fixed seed and config; wall
times and input digests go to a sidecar manifest instead.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import io as hio
from .buildings import section_graph, spherical_building
from .cohomology import expansion_report
from .complexes import (
    Complex,
    complete_complex,
    linial_meshulam,
    rp2_six_vertex,
    sphere_boundary,
    vertex_link,
)
from .errors import HdxError, InputFormatError
from .minimization import locally_minimize
from .overlap import (
    arrangement_depth_oracle,
    geometric_overlap,
    pyramid_counts,
    triangle_counts,
    vertex_split_check,
)
from .parallel import chunked_map
from .spectral import one_skeleton, section_graph_to_graph, spectrum
from .complexes import random_cochain
import random

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ASSERTION = 2


def _float12(v: float) -> float:
    """Round-trip float rendering at 12 significant digits (reports only)."""
    return float(f"{v:.12g}")


def _load_config(args) -> dict:
    cfg = {
        "seed": 0,
        "threads": 1,
        "exact_threshold": 26,
        "cap": 200_000,
    }
    path = os.environ.get("HDX_CONFIG")
    if path:
        with open(path) as fh:
            cfg.update(json.load(fh))
    for key in cfg:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            cfg[key] = val
    return cfg


class _Manifest:
    def __init__(self, argv, cfg):
        self.data = {
            "argv": list(argv),
            "config": cfg,
            "version": __version__,
            "inputs": {},
            "wall_time_s": {},
        }
        self._t0 = time.monotonic()

    def add_input(self, path: str):
        self.data["inputs"][path] = hio.file_digest(path)

    def stage(self, name: str):
        now = time.monotonic()
        self.data["wall_time_s"][name] = round(now - self._t0, 6)
        self._t0 = now

    def write(self, result_path: str | None):
        if result_path:
            hio.write_json(self.data, result_path + ".manifest")


def _emit(payload: dict, path: str | None):
    text = hio.dumps_json(payload)
    if path:
        hio.write_json(payload, path)
    else:
        sys.stdout.write(text)


def _witness_cells(x: Complex, value):
    if value.witness is None:
        return None
    return [list(c) for c in x.support(value.witness)]


def cmd_build(args, cfg, manifest) -> int:
    kind = args.kind
    if kind == "complete":
        x = complete_complex(args.n, args.d)
    elif kind == "rp2":
        x = rp2_six_vertex()
    elif kind == "sphere":
        x = sphere_boundary(args.d)
    elif kind == "linial-meshulam":
        x = linial_meshulam(args.n, args.d, args.p, cfg["seed"])
    else:
        raise InputFormatError(f"unknown generator {kind!r}")
    hio.write_complex(x, args.output)
    manifest.stage("build")
    manifest.write(args.output)
    return EXIT_OK


def cmd_spherical(args, cfg, manifest) -> int:
    x = spherical_building(args.r, args.q, vertex_cap=cfg["cap"])
    hio.write_complex(x, args.output)
    hio.write_building_annotations(x, args.output + ".ann")
    manifest.stage("spherical")
    manifest.write(args.output)
    return EXIT_OK


def cmd_analyze(args, cfg, manifest) -> int:
    x = hio.read_complex(args.input)
    manifest.add_input(args.input)
    dims = [int(s) for s in args.dims.split(",")]
    invariants = args.invariants.split(",")
    tasks = [(name, i) for name in invariants for i in dims]

    def run(task):
        name, i = task
        rep = expansion_report(x, [i], [name], mode=args.mode,
                               threshold=cfg["exact_threshold"], seed=cfg["seed"])
        return rep.entries[0]

    entries = chunked_map(tasks, run, cfg["threads"])
    payload = {
        "complex": {"d": x.d, "cells": [x.num_cells(i) for i in range(x.d + 1)]},
        "entries": [
            {
                "dim": e.dim,
                "name": e.name,
                "value": "inf" if e.infinite else hio.rational_json(e.value),
                "exact": e.exact,
                "vacuous": e.vacuous,
                "witness": _witness_cells(x, e),
            }
            for e in entries
        ],
    }
    manifest.stage("analyze")
    _emit(payload, args.json)
    manifest.write(args.json)
    return EXIT_OK


def cmd_minimize(args, cfg, manifest) -> int:
    x = hio.read_complex(args.input)
    manifest.add_input(args.input)
    alpha = hio.read_cochain(x, args.cochain)
    manifest.add_input(args.cochain)
    if alpha.dim != args.dim:
        raise InputFormatError(f"cochain has dim {alpha.dim}, expected {args.dim}")
    minimized, trace = locally_minimize(x, alpha, threshold=cfg["exact_threshold"])
    if args.output:
        hio.write_cochain(x, minimized, args.output)
    payload = {
        "steps": [
            {
                "vertex": s.vertex,
                "eta": [list(c) for c in s.eta_cells],
                "norm_before": hio.rational_json(s.norm_before),
                "norm_after": hio.rational_json(s.norm_after),
            }
            for s in trace.steps
        ],
        "step_count": trace.step_count,
        "step_bound": trace.step_bound,
        "gamma": [list(c) for c in x.support(trace.total_gamma)],
        "gamma_norm_bound": hio.rational_json(trace.gamma_norm_bound),
        "minimized": [list(c) for c in x.support(minimized)],
    }
    manifest.stage("minimize")
    _emit(payload, args.trace)
    manifest.write(args.trace)
    return EXIT_OK


def cmd_spectra(args, cfg, manifest) -> int:
    which = args.graph
    if which in ("z12", "z13"):
        i, j = (1, 2) if which == "z12" else (1, 3)
        if args.q is None:
            raise InputFormatError("--q is required for section graphs")
        g = section_graph_to_graph(section_graph(args.r, args.q, i, j))
    else:
        x = hio.read_complex(args.input)
        manifest.add_input(args.input)
        if which == "skeleton":
            g = one_skeleton(x)
        elif which.startswith("link:"):
            v = int(which.split(":", 1)[1])
            g = one_skeleton(vertex_link(x, v).link_complex)
        else:
            raise InputFormatError(f"unknown graph selector {which!r}")
    rep = spectrum(g)
    payload = {
        "n": g.n,
        "eigenvalues": [_float12(v) for v in rep.eigenvalues],
        "lambda1_laplacian": _float12(rep.lambda1_laplacian),
        "second_adjacency": _float12(rep.second_adjacency),
        "regular": rep.regular,
    }
    manifest.stage("spectra")
    _emit(payload, args.json)
    manifest.write(args.json)
    return EXIT_OK


def cmd_verify(args, cfg, manifest) -> int:
    if args.what != "counting":
        raise InputFormatError(f"unknown verification {args.what!r}")
    x = hio.read_complex(args.input)
    manifest.add_input(args.input)
    seeds = list(range(cfg["seed"], cfg["seed"] + args.samples))

    def run(seed):
        rng = random.Random(seed)
        out = []
        alpha = random_cochain(x, 1, rng)
        for c in triangle_counts(x, alpha).checks:
            out.append(("triangles", c.name, int(c.lhs), int(c.rhs)))
        if x.d == 3:
            beta = random_cochain(x, 2, rng)
            for c in pyramid_counts(x, beta).checks:
                out.append(("pyramids", c.name, int(c.lhs), int(c.rhs)))
            rep = vertex_split_check(x, beta)
            for c in rep.checks:
                out.append(("vertex_split", c.name, int(c.lhs), int(c.rhs)))
        return out

    results = chunked_map(seeds, run, cfg["threads"])
    failures = 0
    samples = []
    for seed, rows in zip(seeds, results):
        entry = []
        for family, name, lhs, rhs in rows:
            ok = lhs == rhs
            failures += not ok
            entry.append({"family": family, "identity": name,
                          "lhs": lhs, "rhs": rhs, "holds": ok})
        samples.append({"seed": seed, "checks": entry})
    payload = {"samples": samples, "failures": failures}
    manifest.stage("verify")
    _emit(payload, args.json)
    manifest.write(args.json)
    return EXIT_OK if failures == 0 else EXIT_ASSERTION


def cmd_overlap(args, cfg, manifest) -> int:
    x = hio.read_complex(args.input)
    manifest.add_input(args.input)
    est = geometric_overlap(x, seed=cfg["seed"], trials=args.trials)
    payload = {
        "covered_fraction": hio.rational_json(est.covered_fraction),
        "depth": est.depth,
        "triangles": x.num_cells(2),
        "method": est.method,
        "best_point": [hio.rational_json(c) for c in est.best_point],
        "trials": [hio.rational_json(f) for f in est.trial_fractions],
    }
    if args.oracle:
        oracle = arrangement_depth_oracle(x, est.placement)
        payload["oracle_fraction"] = hio.rational_json(oracle.covered_fraction)
        if oracle.covered_fraction != est.covered_fraction:
            manifest.stage("overlap")
            _emit(payload, args.json)
            manifest.write(args.json)
            return EXIT_ASSERTION
    manifest.stage("overlap")
    _emit(payload, args.json)
    manifest.write(args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--exact-threshold", dest="exact_threshold", type=int, default=None)
    common.add_argument("--cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="hdx")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    b = add("build", help="write a generated complex")
    b.add_argument("kind", choices=["complete", "rp2", "sphere", "linial-meshulam"])
    b.add_argument("--n", type=int, default=0)
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--p", type=float, default=0.5)
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(fn=cmd_build)

    s = add("spherical", help="write a spherical building")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(fn=cmd_spherical)

    a = add("analyze", help="expansion/systole invariants")
    a.add_argument("--input", required=True)
    a.add_argument("--invariants", default="epsilon,epsilon_tilde,mu,systole")
    a.add_argument("--dims", default="0")
    a.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    a.add_argument("--json", default=None)
    a.set_defaults(fn=cmd_analyze)

    m = add("minimize", help="descend to a locally minimal cochain")
    m.add_argument("--input", required=True)
    m.add_argument("--cochain", required=True)
    m.add_argument("--dim", type=int, required=True)
    m.add_argument("--trace", default=None)
    m.add_argument("-o", "--output", default=None)
    m.set_defaults(fn=cmd_minimize)

    sp = add("spectra", help="graph spectra")
    sp.add_argument("--input", default=None)
    sp.add_argument("--graph", default="skeleton")
    sp.add_argument("--r", type=int, default=4)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--json", default=None)
    sp.set_defaults(fn=cmd_spectra)

    v = add("verify", help="exact counting identities on random cochains")
    v.add_argument("what", choices=["counting"])
    v.add_argument("--input", required=True)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--json", default=None)
    v.set_defaults(fn=cmd_verify)

    o = add("overlap", help="geometric overlap estimate")
    o.add_argument("--input", required=True)
    o.add_argument("--trials", type=int, default=1)
    o.add_argument("--oracle", action="store_true")
    o.add_argument("--json", default=None)
    o.set_defaults(fn=cmd_overlap)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code == 0 else EXIT_USAGE
        cfg = _load_config(args)
        manifest = _Manifest(argv, cfg)
        return args.fn(args, cfg, manifest)
    except InputFormatError as exc:
        print(f"hdx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HdxError as exc:
        print(f"hdx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"hdx: identity violated: {exc}", file=sys.stderr)
        return EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
