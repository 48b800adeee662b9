"""One test per acceptance criterion; each asserts exactness and its time budget."""

import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from haargpd.cli import main
from haargpd.convalg import SigmaWeights, verify_algebra_iso
from haargpd.cover import isotropy_ball, pi1_generators, section, transversal
from haargpd.gpdcore import EquivalenceBibundle, check_kinetic_square, check_quotient, quotient_groupoid
from haargpd.graphspace import doubled_edge
from haargpd.haar import (compare_systems, direct_weight_oracle, haar_from_base_measure, haar_from_transversal,
                          verify_group_case, verify_haar, verify_section_independence)
from haargpd.measures import (compose_family, counting_family, cutoff, normalize_cutoff, recover_base_measure,
                              uniform_vertex_measure, vertex_measure)
from haargpd.report import Report
from haargpd.suite import MUTATIONS

from conftest import C3, D2, R1, R2, random_graphs, random_positive_nu

GRAPHS = [R1, R2, D2, C3] + random_graphs(3, seed=2024)


def measures_for(g, rng):
    return [uniform_vertex_measure(g.vertices), vertex_measure(random_positive_nu(rng, g.vertices))]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


def assert_clean(report: Report):
    bad = [(c.name, c.messages[:2]) for c in report.checks if not c.ok]
    assert not bad, bad
    assert all(c.samples > 0 for c in report.checks)


def test_criterion_1_haar_axioms():
    rng = random.Random(1)
    with Budget(5):
        for g in GRAPHS:
            t = transversal(g, 0)
            sec = section(t)
            for nu in measures_for(g, rng):
                h = haar_from_base_measure(nu, t, sec)
                assert_clean(verify_haar(h, radius=4, trials=200, rng=random.Random(0)))


def test_criterion_2_oracle_agreement():
    rng = random.Random(2)
    with Budget(2):
        for g in GRAPHS:
            t = transversal(g, 0)
            sec = section(t)
            for nu in measures_for(g, rng):
                oracle = direct_weight_oracle(nu, g)
                lam = compose_family(nu, counting_family(t))
                report = Report()
                report.add(compare_systems(haar_from_base_measure(nu, t, sec), oracle, 4, "base-measure"))
                report.add(compare_systems(haar_from_transversal(lam, sec, 4), oracle, 4, "transversal"))
                assert_clean(report)


def test_criterion_3_section_independence():
    rng = random.Random(3)
    with Budget(2):
        for g in GRAPHS:
            t = transversal(g, 0)
            sec = section(t)
            nu = vertex_measure(random_positive_nu(rng, g.vertices))
            gens = pi1_generators(t, sec=sec)
            twists = [sec.twisted({w: gen for w in range(g.vertices)}) for gen in gens]
            loops = [y for y in isotropy_ball(t, 3) if not y.is_unit]
            if loops:
                twists.append(sec.twisted({w: rng.choice(loops) for w in range(g.vertices)}))
            if not twists:
                continue  # simply connected: the section is unique
            assert_clean(verify_section_independence(nu, t, [sec] + twists, 4))


def test_criterion_4_round_trip_recovery():
    rng = random.Random(4)
    with Budget(1):
        for g in GRAPHS:
            t = transversal(g, 0)
            h = normalize_cutoff(cutoff(section(t)))
            mu = counting_family(t)
            for _ in range(20):
                nu = vertex_measure(random_positive_nu(rng, g.vertices))
                assert recover_base_measure(compose_family(nu, mu), h).weights() == nu.weights()


def test_criterion_5_kinetic_square_and_quotient():
    with Budget(5):
        for g in GRAPHS:
            t = transversal(g, 0)
            bundle = EquivalenceBibundle(t, section(t))
            assert_clean(check_kinetic_square(bundle, 3))
            assert_clean(check_quotient(quotient_groupoid(bundle), 3))


def test_criterion_6_group_case():
    with Budget(3):
        for n in (1, 2, 3, 6):
            assert_clean(verify_group_case(n, radius=4, trials=50, rng=random.Random(n)))


def test_criterion_7_algebra_isomorphism():
    with Budget(10):
        for g in (D2, C3):
            sec = section(transversal(g, 0))
            for sigma in ((1, 1), (Fraction(1, 2), 3)):
                values = {u: Fraction(sigma[min(u, 1)]) for u in range(g.vertices)}
                report = verify_algebra_iso(sec, SigmaWeights(values), trials=100, radius=3,
                                            rng=random.Random(7), triples=30)
                assert_clean(report)
                assert report["algebra-multiplicative"].samples == 100
                assert report["algebra-associative"].samples == 30


@pytest.fixture
def d2_file(tmp_path):
    path = tmp_path / "d2.json"
    path.write_text(json.dumps(doubled_edge().to_json()))
    return str(path)


def test_criterion_8_mutation_sensitivity(d2_file, tmp_path, capsys):
    with Budget(5):
        assert main(["verify", "--graph", d2_file]) == 0
        for name in MUTATIONS:
            out = tmp_path / f"{name}.json"
            assert main(["verify", "--graph", d2_file, "--mutate", name, "--out", str(out)]) == 1, name
            assert json.loads(out.read_text())["violations"] > 0
    capsys.readouterr()


def test_criterion_9_determinism(tmp_path):
    graph = tmp_path / "c3.json"
    graph.write_text(json.dumps(C3.to_json()))
    measure = tmp_path / "m.json"
    measure.write_text(json.dumps({"sigma": {"0": "1/2", "1": "3", "2": "2/3"}}))
    outputs = []
    for hash_seed in ("1", "2"):
        out = tmp_path / f"run{hash_seed}.json"
        env = dict(os.environ, PYTHONHASHSEED=hash_seed)
        proc = subprocess.run([sys.executable, "-m", "haargpd", "verify", "--graph", str(graph),
                               "--measure", str(measure), "--seed", "5", "--out", str(out)],
                              env=env, capture_output=True)
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
