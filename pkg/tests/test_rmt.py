import csv
import io
import json
import math
from fractions import Fraction as F

import numpy as np
import pytest

from freemix import rmt
from freemix.rmt import DistributionSpec as D, SimulationConfig as Config


class TestDistributionSpec:
    def test_parse_round_trip(self):
        for text in ["rademacher", "gaussian", "gaussian:3/2", "zm:2", "atoms:1@1/2,-1@1/2"]:
            assert str(D.parse(text)) == text

    def test_exact_moments(self):
        assert D.parse("rademacher").even_moments(3).even_moments == (1, 1, 1)
        assert D.parse("gaussian").even_moments(4).even_moments == (1, 3, 15, 105)
        assert D.parse("gaussian:2").even_moments(2).even_moments == (4, 48)
        atoms = D.parse("atoms:2@1/4,-2@1/4,0@1/2")
        assert atoms.even_moments(2).even_moments == (2, 8)
        assert D.parse("zm:1").even_moments(3).even_moments == (1, 2, 5)

    def test_symmetry_flag(self):
        assert D.parse("atoms:2@1/4,-2@1/4,0@1/2").symmetric
        assert not D.parse("atoms:1@1/3,-1@2/3").symmetric
        assert D.parse("gaussian").symmetric

    @pytest.mark.parametrize("text", ["cauchy", "atoms:1@1/2", "atoms:1", "gaussian:-1", "zm:", "rademacher:2"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            D.parse(text)

    def test_sampling_matches_law(self):
        rng = np.random.default_rng(0)
        x = D.parse("atoms:3@1/4,-3@1/4,0@1/2").sample(40000, rng)
        assert set(np.unique(x)) <= {-3.0, 0.0, 3.0}
        assert abs(np.mean(x**2) - 4.5) < 0.15
        with pytest.raises(ValueError):
            D.parse("zm:1").sample(3, rng)


class TestHaar:
    def test_orthogonal(self):
        rng = np.random.default_rng(1)
        for n in (1, 2, 5, 40):
            q = rmt.sample_haar_orthogonal(n, rng)
            assert np.max(np.abs(q.T @ q - np.eye(n))) <= 1e-10

    def test_n1_is_random_sign(self):
        rng = np.random.default_rng(2)
        vals = {float(rmt.sample_haar_orthogonal(1, rng)[0, 0]) for _ in range(64)}
        assert vals == {-1.0, 1.0}

    def test_first_entry_centered(self):
        rng = np.random.default_rng(3)
        n, reps = 3, 10_000
        q11 = np.array([rmt.sample_haar_orthogonal(n, rng)[0, 0] for _ in range(reps)])
        # Var(Q_11) = 1/n under Haar measure
        assert abs(q11.mean()) <= 4 * math.sqrt(1 / n / reps)
        assert abs(np.mean(q11**2) - 1 / n) < 0.02

    def test_permutation_invariance(self):
        n, trials = 60, 32
        perm = np.random.default_rng(99).permutation(n)

        def traces(seed, permute):
            out = []
            for t in range(trials):
                rng = rmt.trial_rng(seed, t)
                d1 = rng.standard_normal(n)
                d2 = rng.standard_normal(n)
                r = rmt.sample_haar_orthogonal(n, rng)
                if permute:
                    r = r[perm]
                m = d1[:, None] * r * d2[None, :]
                out.append(rmt.trace_powers(m, 2, n)[1])
            return np.array(out)

        a, b = traces(10, False), traces(11, True)
        se = math.sqrt(a.var(ddof=1) / trials + b.var(ddof=1) / trials)
        assert abs(a.mean() - b.mean()) <= 3 * se


class TestSamplers:
    def test_trace_powers_against_matrix_power(self):
        rng = np.random.default_rng(4)
        m = rng.standard_normal((7, 7))
        w = m @ m.T
        want = [np.trace(np.linalg.matrix_power(w, k)) / 7 for k in range(1, 6)]
        assert np.allclose(rmt.trace_powers(m, 5, 7), want)

    def test_zm_proxy_first_moment(self):
        rng = np.random.default_rng(5)
        m = rmt.sample_zm_spectrum_proxy(1, 200, rng)
        assert rmt.trace_powers(m, 1, 200)[0] == pytest.approx(1.0)
        with pytest.raises(ValueError):
            rmt.sample_zm_spectrum_proxy(0, 5, rng)

    def test_zm_proxy_catalan(self):
        cfg = Config("matrix-product", n=600, trials=8, k_max=2, seed=3, m=1)
        rep = rmt.run_simulation(cfg)
        v = rep.verdicts(rel_tol=0.0)[1]
        assert abs(v.estimate - 2) <= max(3 * v.se, 0.01)

    def test_graph_matrix_shape_and_entries(self):
        rng = np.random.default_rng(6)
        n = 6
        g = rmt.build_graph_matrix_z2(n, rng)
        assert g.shape == (n * (n - 1), n * (n - 1))
        assert set(np.unique(g * n)) <= {-1.0, 1.0}

    def test_graph_matrix_entry_formula(self):
        n = 5
        rng = np.random.default_rng(7)
        g = rmt.build_graph_matrix_z2(n, rng)
        x = np.random.default_rng(7).choice(np.array([-1.0, 1.0]), size=(n, n))
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for r, (i1, i2) in enumerate(pairs):
            for c, (j1, j2) in enumerate(pairs):
                assert g[r, c] * n == x[i1, j1] * x[i2, j1] * x[i2, j2]

    def test_graph_first_moment_is_deterministic(self):
        n = 10
        rep = rmt.run_simulation(Config("graph-z2", n=n, trials=4, k_max=1, seed=0))
        assert np.allclose(rep.traces, (n - 1) / n)

    def test_graph_guard(self):
        with pytest.raises(ValueError):
            rmt.build_graph_matrix_z2(rmt.GRAPH_Z2_MAX_N + 1, np.random.default_rng(0))
        with pytest.raises(ValueError):
            Config("graph-z2", n=40, trials=1, k_max=1)


class TestCompare:
    def test_zero_variance(self):
        (v,) = rmt.compare([1.0], [0.0], [F(1)], 0.0)
        assert v.passed and v.z == 0.0
        (v,) = rmt.compare([1.02], [0.0], [F(1)], 0.05)
        assert v.passed and v.z is None
        (v,) = rmt.compare([1.02], [0.0], [F(1)], 0.01)
        assert not v.passed

    def test_negative_control(self):
        rep = rmt.run_simulation(Config("drd-chain", n=50, trials=4, k_max=2, seed=1,
                                        head=D.parse("rademacher"), tail=(D.parse("rademacher"),)))
        assert rep.passed
        wrong = rmt.compare(list(rep.estimates), list(rep.standard_errors), [F(1), F(2)], 0.05)
        assert wrong[0].passed and not wrong[1].passed

    def test_misaligned(self):
        with pytest.raises(ValueError):
            rmt.compare([1.0, 2.0], [0.1], [1, 2], 0.1)

    def test_three_se_band(self):
        (v,) = rmt.compare([1.25], [0.1], [1], 0.0)
        assert v.passed and v.z == pytest.approx(2.5)
        (v,) = rmt.compare([1.35], [0.1], [1], 0.0)
        assert not v.passed


class TestScenarios:
    def test_rademacher_pair_unit(self):
        rep = rmt.run_simulation(Config("drd-chain", n=120, trials=4, k_max=4, seed=2,
                                        head=D.parse("rademacher"), tail=(D.parse("rademacher"),)))
        assert np.allclose(rep.traces, 1.0)
        assert rep.passed

    def test_zm_head_catalan(self):
        rep = rmt.run_simulation(Config("drd-chain", n=300, trials=8, k_max=3, seed=4, head=D.parse("zm:1"),
                                        rel_tol=0.05))
        assert [float(x) for x in rep.exact] == [1, 2, 5]
        assert rep.passed

    def test_exact_targets(self):
        cfg = Config("drd-chain", n=10, trials=1, k_max=3, seed=0, head=D.parse("zm:2"),
                     tail=(D.parse("gaussian"), D.parse("rademacher")))
        rep = rmt.run_simulation(cfg)
        assert rep.exact[:2] == (1, 5)

    def test_thread_count_does_not_change_traces(self):
        base = dict(scenario="drd-chain", n=40, trials=6, k_max=3, seed=123,
                    head=D.parse("gaussian"), tail=(D.parse("atoms:2@1/4,-2@1/4,0@1/2"),))
        one = rmt.run_simulation(Config(**base, threads=1))
        three = rmt.run_simulation(Config(**base, threads=3))
        assert np.array_equal(one.traces, three.traces)

    def test_seed_changes_traces(self):
        a = rmt.run_simulation(Config("matrix-product", n=30, trials=3, k_max=2, seed=1, m=2))
        b = rmt.run_simulation(Config("matrix-product", n=30, trials=3, k_max=2, seed=2, m=2))
        assert not np.array_equal(a.traces, b.traces)

    @pytest.mark.parametrize("kwargs", [
        dict(scenario="nope", n=5, trials=1, k_max=1),
        dict(scenario="matrix-product", n=1, trials=1, k_max=1),
        dict(scenario="matrix-product", n=5, trials=0, k_max=1),
        dict(scenario="matrix-product", n=5, trials=1, k_max=1, m=0),
        dict(scenario="drd-chain", n=5, trials=1, k_max=1),
        dict(scenario="drd-chain", n=5, trials=1, k_max=1, head=D.parse("rademacher"),
             tail=(D.parse("atoms:1@1/3,-1@2/3"),)),
        dict(scenario="drd-chain", n=5, trials=1, k_max=1, head=D.parse("rademacher"), tail=(D.parse("zm:1"),)),
        dict(scenario="matrix-product", n=5, trials=1, k_max=1, seed=-1),
    ])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            Config(**kwargs)


class TestReport:
    def make(self):
        return rmt.run_simulation(Config("matrix-product", n=40, trials=5, k_max=2, seed=9, m=1, rel_tol=0.1))

    def test_json(self):
        rep = self.make()
        obj = rep.to_json()
        assert {"config", "rows", "passed", "timestamp", "wall_time_s"} <= set(obj)
        assert list(obj["rows"][0]) == ["k", "estimate", "se", "exact", "rel_err", "z", "verdict"]
        bare = rep.to_json(timestamp=False, include_traces=True)
        assert "timestamp" not in bare and "wall_time_s" not in bare
        assert np.array_equal(np.array(bare["traces"]), rep.traces)
        json.dumps(bare)

    def test_csv(self):
        rows = list(csv.DictReader(io.StringIO(self.make().to_csv())))
        assert [r["k"] for r in rows] == ["1", "2"]
        assert set(rows[0]) == {"k", "estimate", "se", "exact", "rel_err", "z", "verdict"}

    def test_standard_error_definition(self):
        rep = self.make()
        want = rep.traces.std(axis=0, ddof=1) / math.sqrt(rep.traces.shape[0])
        assert np.allclose(rep.standard_errors, want)


def test_default_threads(monkeypatch):
    monkeypatch.delenv("FREEMIX_THREADS", raising=False)
    assert rmt.default_threads() == 1
    monkeypatch.setenv("FREEMIX_THREADS", "3")
    assert rmt.default_threads() == 3
    monkeypatch.setenv("FREEMIX_THREADS", "0")
    with pytest.raises(ValueError):
        rmt.default_threads()
