"""The full verification suite behind ``haargpd verify``."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import edgepath as ep
from .convalg import NuWeights, SigmaWeights, verify_algebra_iso
from .cover import (generators_with_inverses, isotropy_ball, pi1_generators, section, transversal)
from .gpdcore import (EquivalenceBibundle, FundamentalGroupoid, check_axioms, check_kinetic_square,
                      check_quotient, quotient_groupoid)
from .graphspace import MultiGraph, cycle
from .haar import (DEFAULT_RADIUS, HaarSystem, compare_systems, direct_weight_oracle,
                   haar_from_base_measure, haar_from_transversal, mutate_system, transversal_from_haar,
                   verify_group_case, verify_haar, verify_section_independence)
from .measures import (DeckFamilyAction, DiscreteMeasure, MeasureError, MeasureFamily, NotFullySupported,
                       check_equivariance, compose_family, counting_family, cutoff, deck_equivariance_samples,
                       normalize_cutoff, recover_base_measure, uniform_vertex_measure)
from .report import Check, Report

MUTATIONS = ("zero-weight", "double-weight", "skip-reduction", "perturb-family")
MUTATION_ALIASES = {"weight": "double-weight", "zero": "zero-weight", "double": "double-weight",
                    "reduction": "skip-reduction", "family": "perturb-family"}


def canonical_mutation(name: str | None) -> str | None:
    if name is None:
        return None
    name = MUTATION_ALIASES.get(name, name)
    if name not in MUTATIONS:
        raise ValueError(f"unknown mutation {name!r}; choose from {', '.join(MUTATIONS)}")
    return name


@dataclass
class MeasureSpec:
    base: int | None
    weights: SigmaWeights | NuWeights

    @property
    def nu(self) -> DiscreteMeasure:
        return self.weights.nu()


def parse_measure(data: dict, n: int) -> MeasureSpec:
    """``{"base_point": 0, "sigma": {...}}`` or ``{"nu": {...}}``; values are rational strings."""
    if "sigma" in data:
        raw, cls = data["sigma"], SigmaWeights
    elif "nu" in data:
        raw, cls = data["nu"], NuWeights
    else:
        raise MeasureError("measure file needs a 'sigma' or 'nu' table")
    if isinstance(raw, list):
        raw = dict(enumerate(raw))
    values = {int(k): Fraction(str(v)) for k, v in raw.items()}
    missing = sorted(set(range(n)) - set(values))
    if missing:
        raise NotFullySupported(f"no weight for vertices {missing}")
    extra = sorted(set(values) - set(range(n)))
    if extra:
        raise MeasureError(f"weights for unknown vertices {extra}")
    bad = [u for u, v in values.items() if not v > 0]
    if bad:
        raise NotFullySupported(f"weights must be positive; vertices {bad} are not")
    base = data.get("base_point")
    return MeasureSpec(None if base is None else int(base), cls(values))


def load_measure(path: str | Path, n: int) -> MeasureSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_measure(json.load(fh), n)


def default_measure(n: int) -> MeasureSpec:
    return MeasureSpec(None, NuWeights({u: Fraction(1, n) for u in range(n)}))


def cycle_length(g: MultiGraph) -> int | None:
    """``n`` if ``g`` is literally ``cycle(n)``."""
    return g.vertices if g.edges == cycle(g.vertices).edges else None


def mutation_target(t, radius: int) -> ep.Arrow:
    ball = t.ball(min(radius, 1))
    nonunit = [y for y in ball if not y.is_unit]
    return nonunit[0] if nonunit else ball[0]


def perturbed_family(mu: MeasureFamily, target: ep.Arrow) -> MeasureFamily:
    def member(u: int) -> DiscreteMeasure:
        base = mu[u]
        return DiscreteMeasure(lambda y: base.weight(y) * 2 if y == target else base.weight(y), base.ambient)

    return MeasureFamily(mu.index, mu.projection, member, "perturbed")


def system_summary(h: HaarSystem, radius: int) -> dict:
    return {"provenance": h.provenance,
            "ball_weights": [{"arrow": a.text(), "range": a.range, "weight": w}
                             for a, w in h.ball_weights(radius)]}


def run_suite(g: MultiGraph, measure: MeasureSpec, base: int = 0, radius: int = DEFAULT_RADIUS,
              trials: int = 200, seed: int = 0, mutate: str | None = None) -> tuple[Report, HaarSystem]:
    mutate = canonical_mutation(mutate)
    rng = random.Random(seed)
    nu = measure.nu
    t = transversal(g, base)
    sec = section(t)
    gens = pi1_generators(t, sec=sec)
    loops = generators_with_inverses(gens)
    report = Report()

    report.add(check_axioms(FundamentalGroupoid(g, reduced=mutate != "skip-reduction"), min(radius, 2),
                            name="axioms"))

    h = haar_from_base_measure(nu, t, sec)
    if mutate in ("zero-weight", "double-weight"):
        factor = Fraction(0) if mutate == "zero-weight" else Fraction(2)
        h = mutate_system(h, mutation_target(t, radius), factor)
    report.extend(verify_haar(h, radius, trials, rng))

    mu = counting_family(t)
    lam = compose_family(nu, mu)
    from_transversal = haar_from_transversal(lam, sec, radius)
    oracle = direct_weight_oracle(nu, g)
    report.add(compare_systems(h, oracle, radius, "oracle-agreement[base-measure]"))
    report.add(compare_systems(from_transversal, oracle, radius, "oracle-agreement[transversal]"))

    twists = [sec.twisted({w: gen for w in range(g.vertices)}) for gen in gens]
    short_loops = [y for y in isotropy_ball(t, 3) if not y.is_unit]
    if short_loops:
        twists.append(sec.twisted({w: rng.choice(short_loops) for w in range(g.vertices)}))
    else:
        twists.append(sec)
    report.extend(verify_section_independence(nu, t, [sec] + twists, radius))

    recovery = report.add(Check("round-trip-recovery"))
    h_cut = normalize_cutoff(cutoff(sec))
    recovered = recover_base_measure(lam, h_cut)
    for u in range(g.vertices):
        recovery.record(recovered.weight(u) == nu.weight(u), f"recovered nu({u}) = {recovered.weight(u)} != {nu.weight(u)}")
    rebuilt = haar_from_transversal(transversal_from_haar(oracle, base), sec, radius)
    report.add(compare_systems(rebuilt, oracle, radius, "round-trip-transversal"))

    family = perturbed_family(mu, mutation_target(t, radius)) if mutate == "perturb-family" else mu
    report.add(check_equivariance(family, DeckFamilyAction(), deck_equivariance_samples(t, loops, radius),
                                  name="counting-family-equivariance"))

    bundle = EquivalenceBibundle(t, sec)
    small = min(radius, 3)
    report.extend(check_kinetic_square(bundle, small))
    report.extend(check_quotient(quotient_groupoid(bundle), small, orbit_radius=min(radius, 2)))

    report.extend(verify_algebra_iso(sec, measure.weights, trials=min(trials, 100), radius=small, rng=rng))

    n = cycle_length(g)
    if n is not None:
        report.extend(verify_group_case(n, nu, radius, min(trials, 50), rng))
    return report, h
