"""Command-line front end.

Exit codes: 0 pass, 1 domain failure or violation, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .convalg import verify_algebra_iso
from .cover import BadBasePoint, pi1_generators, section, transversal
from .graphspace import GraphError, MultiGraph, pi1_rank, validate_graph
from .haar import DEFAULT_RADIUS, haar_from_base_measure, verify_group_case
from .measures import MeasureError, uniform_vertex_measure
from .report import dumps
from .suite import (MUTATIONS, MUTATION_ALIASES, canonical_mutation, cycle_length, default_measure,
                    load_measure, run_suite, system_summary)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    measure: str | None = None
    base: int | None = None
    radius: int = DEFAULT_RADIUS
    trials: int = 200
    seed: int = 0
    out: str | None = None
    mutate: str | None = None
    n: int | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise UsageError("--radius must be >= 0")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")

    def to_json(self) -> dict:
        return {"command": self.command, "base": self.base, "radius": self.radius,
                "trials": self.trials, "seed": self.seed, "mutate": self.mutate}


def _emit(config: RunConfig, payload: dict) -> None:
    text = dumps(payload)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(config: RunConfig) -> MultiGraph:
    if not config.graph:
        raise UsageError("--graph is required")
    try:
        return MultiGraph.load(config.graph)
    except (OSError, json.JSONDecodeError, GraphError) as exc:
        raise UsageError(f"cannot read graph {config.graph}: {exc}") from exc


def _load_inputs(config: RunConfig):
    g = _load_graph(config)
    validate_graph(g)
    if config.measure:
        try:
            measure = load_measure(config.measure, g.vertices)
        except (OSError, json.JSONDecodeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, MeasureError):
                raise
            raise UsageError(f"cannot read measure {config.measure}: {exc}") from exc
    else:
        measure = default_measure(g.vertices)
    base = config.base if config.base is not None else (measure.base or 0)
    return g, measure, base


def cmd_validate(config: RunConfig) -> int:
    g = _load_graph(config)
    try:
        validate_graph(g)
    except GraphError as exc:
        _emit(config, {"valid": False, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_FAIL
    _emit(config, {"valid": True, "vertices": g.vertices, "edges": len(g.edges), "pi1_rank": pi1_rank(g)})
    return EXIT_OK


def cmd_haar(config: RunConfig) -> int:
    g, measure, base = _load_inputs(config)
    t = transversal(g, base)
    sec = section(t)
    nu = measure.nu
    h = haar_from_base_measure(nu, t, sec)
    payload = {
        "config": config.to_json(),
        "base": base,
        "nu": {u: nu.weight(u) for u in nu.points},
        "section": {u: sec[u].text() for u in sec},
        "generators": [gen.text() for gen in pi1_generators(t, sec=sec)],
        "system": system_summary(h, config.radius),
    }
    _emit(config, payload)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    g, measure, base = _load_inputs(config)
    report, h = run_suite(g, measure, base, config.radius, config.trials, config.seed, config.mutate)
    payload = {"config": config.to_json(), **report.to_json(), "violations": report.violations,
               "system": system_summary(h, config.radius)}
    _emit(config, payload)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_iso(config: RunConfig) -> int:
    g, measure, base = _load_inputs(config)
    sec = section(transversal(g, base))
    report = verify_algebra_iso(sec, measure.weights, trials=config.trials, radius=min(config.radius, 3),
                                rng=random.Random(config.seed))
    payload = {"config": config.to_json(), **report.to_json(), "violations": report.violations,
               "star_preserving": measure.weights.star_preserving}
    _emit(config, payload)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_group_case(config: RunConfig) -> int:
    if config.n is not None:
        n, nu = config.n, None
        if n < 1:
            raise UsageError("--n must be >= 1")
    else:
        g, measure, _ = _load_inputs(config)
        n = cycle_length(g)
        if n is None:
            raise GraphError("group-case needs a cycle graph (edges i -> i+1 mod n)")
        nu = measure.nu
    report = verify_group_case(n, nu or uniform_vertex_measure(n), config.radius, config.trials,
                               random.Random(config.seed))
    payload = {"config": config.to_json(), "n": n, **report.to_json(), "violations": report.violations}
    _emit(config, payload)
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {"validate": cmd_validate, "haar": cmd_haar, "verify": cmd_verify,
            "iso": cmd_iso, "group-case": cmd_group_case}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haargpd",
                                     description="Haar systems on fundamental groupoids of finite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--graph", help="graph JSON file")
        p.add_argument("--measure", help="measure JSON file (sigma or nu table)")
        p.add_argument("--base", type=int, help="base point (default: file's base_point or 0)")
        p.add_argument("--radius", type=int, default=DEFAULT_RADIUS, help="ball radius L")
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--mutate", choices=sorted(MUTATIONS + tuple(MUTATION_ALIASES)),
                       help="inject a defect (test hook)")
        if name == "group-case":
            p.add_argument("--n", type=int, help="cycle length, instead of --graph")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(**vars(args))
        config.mutate = canonical_mutation(config.mutate)
        return COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, BadBasePoint, MeasureError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
