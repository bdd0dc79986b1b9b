"""Monte Carlo verifier for the exact moment formulas.

Each trial builds one random matrix ``M``, and records the normalized trace
powers ``(1/r) tr((M M^T)^k)`` for ``k = 1..k_max``.  Trials draw from their
own RNG stream keyed by ``(seed, trial)``, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from freemix import freeprob
from freemix.combinat import fuss_catalan
from freemix.freeprob import ChainSpec, MomentSequence, format_rational, parse_rational

__all__ = [
    "SCENARIOS",
    "GRAPH_Z2_MAX_N",
    "DistributionSpec",
    "SimulationConfig",
    "SimulationReport",
    "Verdict",
    "default_threads",
    "trial_rng",
    "sample_haar_orthogonal",
    "sample_zm_spectrum_proxy",
    "build_graph_matrix_z2",
    "trace_powers",
    "estimate_drd_chain",
    "estimate_matrix_product",
    "estimate_graph_z2",
    "run_simulation",
    "compare",
]

SCENARIOS = ("drd-chain", "matrix-product", "graph-z2")
GRAPH_Z2_MAX_N = 32


def default_threads() -> int:
    """``FREEMIX_THREADS`` if set, else 1."""
    raw = os.environ.get("FREEMIX_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise ValueError("FREEMIX_THREADS must be a positive integer")
    return n


# ---------------------------------------------------------------------------
# Distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistributionSpec:
    """A samplable law for diagonal entries, or the matrix-product head ``zm:m``.

    Grammar: ``rademacher``, ``gaussian[:sigma]``, ``atoms:v@p,v@p,...`` and
    ``zm:m``.  Atom values and probabilities are rational literals.
    """

    kind: str
    sigma: Fraction = Fraction(1)
    atoms: tuple[tuple[Fraction, Fraction], ...] = ()
    m: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("rademacher", "gaussian", "atoms", "zm"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "gaussian" and self.sigma <= 0:
            raise ValueError("gaussian sigma must be positive")
        if self.kind == "atoms":
            if not self.atoms:
                raise ValueError("atoms distribution needs at least one atom")
            if any(p < 0 for _, p in self.atoms) or sum(p for _, p in self.atoms) != 1:
                raise ValueError("atom probabilities must be nonnegative and sum to 1")
        if self.kind == "zm" and self.m < 0:
            raise ValueError("zm needs m >= 0")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        text = text.strip()
        head, _, arg = text.partition(":")
        if head == "rademacher" and not arg:
            return cls("rademacher")
        if head == "gaussian":
            sigma = Fraction(arg) if arg else Fraction(1)
            return cls("gaussian", sigma=sigma)
        if head == "zm" and arg:
            return cls("zm", m=int(arg))
        if head == "atoms" and arg:
            atoms = []
            for item in arg.split(","):
                value, sep, prob = item.partition("@")
                if not sep:
                    raise ValueError(f"atom {item!r} must look like value@probability")
                atoms.append((parse_rational(value), parse_rational(prob)))
            return cls("atoms", atoms=tuple(atoms))
        raise ValueError(f"unknown distribution spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "gaussian":
            return "gaussian" if self.sigma == 1 else f"gaussian:{self.sigma}"
        if self.kind == "zm":
            return f"zm:{self.m}"
        if self.kind == "atoms":
            return "atoms:" + ",".join(f"{format_rational(v)}@{format_rational(p)}" for v, p in self.atoms)
        return self.kind

    @property
    def is_matrix(self) -> bool:
        return self.kind == "zm"

    @property
    def symmetric(self) -> bool:
        if self.kind != "atoms":
            return True
        law: dict[Fraction, Fraction] = {}
        for v, p in self.atoms:
            law[v] = law.get(v, Fraction(0)) + p
        return all(law.get(-v, Fraction(0)) == p for v, p in law.items())

    def even_moments(self, k_max: int) -> MomentSequence:
        """Exact ``[E x^2, ..., E x^(2 k_max)]`` (squared singular values for ``zm``)."""
        label = str(self)
        if self.kind == "zm":
            return freeprob.zm_moments(self.m, k_max)
        if self.kind == "rademacher":
            return MomentSequence.constant(k_max, 1, label)
        if self.kind == "gaussian":
            out = []
            dfact = 1
            for i in range(1, k_max + 1):
                dfact *= 2 * i - 1
                out.append(dfact * self.sigma ** (2 * i))
            return MomentSequence(tuple(out), label)
        return MomentSequence(
            tuple(sum(p * v ** (2 * i) for v, p in self.atoms) for i in range(1, k_max + 1)), label
        )

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """``n`` i.i.d. scalars (not defined for ``zm``)."""
        if self.kind == "rademacher":
            return rng.choice(np.array([-1.0, 1.0]), size=n)
        if self.kind == "gaussian":
            return rng.standard_normal(n) * float(self.sigma)
        if self.kind == "atoms":
            values = np.array([float(v) for v, _ in self.atoms])
            probs = np.array([float(p) for _, p in self.atoms])
            return rng.choice(values, size=n, p=probs / probs.sum())
        raise ValueError("zm is a matrix law, not a scalar one")


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def sample_haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar orthogonal matrix via sign-corrected QR of a Gaussian matrix."""
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        g = rng.standard_normal((n, n))
        q, r = np.linalg.qr(g)
        d = np.diag(r)
        if np.all(d != 0):
            return q * np.sign(d)


def sample_zm_spectrum_proxy(
    m: int, n: int, rng: np.random.Generator, entries: str = "rademacher"
) -> np.ndarray:
    """``n^(-m/2) G_1 ... G_m`` with i.i.d. entries; squared singular values tend to Fuss-Catalan ``m``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    out = None
    for _ in range(m):
        if entries == "rademacher":
            g = rng.choice(np.array([-1.0, 1.0]), size=(n, n))
        elif entries == "gaussian":
            g = rng.standard_normal((n, n))
        else:
            raise ValueError(f"unknown entry law {entries!r}")
        g /= math.sqrt(n)
        out = g if out is None else out @ g
    return out


def build_graph_matrix_z2(n: int, rng: np.random.Generator) -> np.ndarray:
    """Z-shape graph matrix on ordered pairs of distinct indices, scaled by ``1/n``.

    Entry ``((i1, i2), (j1, j2))`` is ``x[i1,j1] x[i2,j1] x[i2,j2]`` for a
    single ``n x n`` array ``x`` of i.i.d. signs.
    """
    if n < 2:
        raise ValueError("graph-z2 needs n >= 2")
    if n > GRAPH_Z2_MAX_N:
        raise ValueError(f"graph-z2 is limited to n <= {GRAPH_Z2_MAX_N} (matrix side n(n-1))")
    x = rng.choice(np.array([-1.0, 1.0]), size=(n, n))
    first, second = np.nonzero(~np.eye(n, dtype=bool))
    rows_first = x[first]  # x[i1, :]
    rows_second = x[second]  # x[i2, :]
    m = rows_first[:, first] * rows_second[:, first] * rows_second[:, second]
    return m / n


def trace_powers(m: np.ndarray, k_max: int, scale: float) -> np.ndarray:
    """``[tr((M M^T)^k) / scale for k in 1..k_max]``, using ``tr(W^(i+j)) = sum(W^i * W^j)``."""
    w = m @ m.T
    powers = [np.eye(w.shape[0]), w]
    half = (k_max + 1) // 2
    for _ in range(2, half + 1):
        powers.append(powers[-1] @ w)
    out = np.empty(k_max)
    for k in range(1, k_max + 1):
        i = k // 2
        out[k - 1] = np.sum(powers[i] * powers[k - i]) / scale
    return out


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimulationConfig:
    scenario: str
    n: int
    trials: int
    k_max: int
    seed: int = 0
    head: DistributionSpec | None = None
    tail: tuple[DistributionSpec, ...] = ()
    m: int = 1
    rel_tol: float = 0.05
    threads: int = 1

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        object.__setattr__(self, "tail", tuple(self.tail))
        if self.scenario == "drd-chain":
            if self.head is None:
                raise ValueError("drd-chain needs a head distribution")
            for d in self.tail:
                if d.is_matrix:
                    raise ValueError("tail entries must be scalar laws, not zm")
                if not d.symmetric:
                    raise ValueError(f"tail law {d} is not symmetric")
        if self.scenario == "graph-z2" and self.n > GRAPH_Z2_MAX_N:
            raise ValueError(f"graph-z2 is limited to n <= {GRAPH_Z2_MAX_N}")
        if self.scenario == "matrix-product" and self.m < 1:
            raise ValueError("matrix-product needs m >= 1")

    def to_json(self) -> dict:
        out: dict = {
            "scenario": self.scenario,
            "n": self.n,
            "trials": self.trials,
            "k_max": self.k_max,
            "seed": self.seed,
            "rel_tol": self.rel_tol,
        }
        if self.scenario == "drd-chain":
            out["head"] = str(self.head)
            out["tail"] = [str(d) for d in self.tail]
        if self.scenario == "matrix-product":
            out["m"] = self.m
        return out


@dataclass(frozen=True)
class Verdict:
    k: int
    estimate: float
    se: float
    exact: float
    rel_err: float | None
    z: float | None
    passed: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "estimate": self.estimate,
            "se": self.se,
            "exact": self.exact,
            "rel_err": self.rel_err,
            "z": self.z,
            "verdict": "pass" if self.passed else "fail",
        }


def compare(
    estimates: Sequence[float], ses: Sequence[float], exact: Sequence[Fraction | float], rel_tol: float
) -> list[Verdict]:
    """Pass iff ``|estimate - exact| <= max(3 SE, rel_tol |exact|)``."""
    if not (len(estimates) == len(ses) <= len(exact)):
        raise ValueError("estimates, standard errors and exact values are misaligned")
    out = []
    for k, (est, se, ex) in enumerate(zip(estimates, ses, exact), start=1):
        ex = float(ex)
        diff = abs(est - ex)
        rel = diff / abs(ex) if ex != 0 else None
        if se > 0:
            z: float | None = (est - ex) / se
        else:
            z = 0.0 if diff == 0 else None
        passed = diff <= max(3 * se, rel_tol * abs(ex))
        out.append(Verdict(k, float(est), float(se), ex, rel, z, bool(passed)))
    return out


@dataclass
class SimulationReport:
    """Per-trial normalized traces plus the comparison against exact values."""

    config: SimulationConfig
    traces: np.ndarray  # shape (trials, k_max)
    exact: tuple[Fraction, ...]
    wall_time: float = 0.0
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def estimates(self) -> np.ndarray:
        return self.traces.mean(axis=0)

    @property
    def standard_errors(self) -> np.ndarray:
        t = self.traces.shape[0]
        if t < 2:
            return np.zeros(self.traces.shape[1])
        return self.traces.std(axis=0, ddof=1) / math.sqrt(t)

    def verdicts(self, rel_tol: float | None = None) -> list[Verdict]:
        tol = self.config.rel_tol if rel_tol is None else rel_tol
        return compare(list(self.estimates), list(self.standard_errors), self.exact, tol)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts())

    def to_json(self, timestamp: bool = True, include_traces: bool = False) -> dict:
        out: dict = {
            "config": self.config.to_json(),
            "rows": [v.to_json() for v in self.verdicts()],
            "exact_rational": [format_rational(x) for x in self.exact],
            "passed": self.passed,
        }
        if include_traces:
            out["traces"] = self.traces.tolist()
        if timestamp:
            out["timestamp"] = self.timestamp
            out["wall_time_s"] = round(self.wall_time, 3)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "estimate", "se", "exact", "rel_err", "z", "verdict"])
        for v in self.verdicts():
            row = v.to_json()
            writer.writerow(["" if row[key] is None else row[key] for key in
                             ("k", "estimate", "se", "exact", "rel_err", "z", "verdict")])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


def _run_trials(
    config: SimulationConfig, one_trial: Callable[[np.random.Generator], np.ndarray]
) -> np.ndarray:
    def job(t: int) -> np.ndarray:
        return one_trial(trial_rng(config.seed, t))

    if config.threads == 1:
        rows = [job(t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            rows = list(pool.map(job, range(config.trials)))
    return np.vstack(rows)


def _drd_exact(config: SimulationConfig) -> MomentSequence:
    head = config.head
    tails = tuple(d.even_moments(config.k_max) for d in config.tail)
    if head.kind == "zm":
        return freeprob.chain_moments_inductive(ChainSpec(head.m, tails), config.k_max)
    acc = head.even_moments(config.k_max)
    for t in tails:
        acc = freeprob.op_r(acc, t, config.k_max)
    return acc


def estimate_drd_chain(config: SimulationConfig) -> SimulationReport:
    """``M <- D_i R_i M`` for each tail law, starting from the head (diagonal or ``zm`` proxy)."""
    if config.scenario != "drd-chain":
        raise ValueError("config is not a drd-chain scenario")
    n, head = config.n, config.head

    def one(rng: np.random.Generator) -> np.ndarray:
        if head.is_matrix:
            m = sample_zm_spectrum_proxy(head.m, n, rng) if head.m > 0 else np.eye(n)
        else:
            m = np.diag(head.sample(n, rng))
        for law in config.tail:
            r = sample_haar_orthogonal(n, rng)
            m = law.sample(n, rng)[:, None] * (r @ m)
        return trace_powers(m, config.k_max, n)

    start = time.perf_counter()
    traces = _run_trials(config, one)
    exact = _drd_exact(config).even_moments
    return SimulationReport(config, traces, exact, time.perf_counter() - start)


def estimate_matrix_product(config: SimulationConfig) -> SimulationReport:
    if config.scenario != "matrix-product":
        raise ValueError("config is not a matrix-product scenario")

    def one(rng: np.random.Generator) -> np.ndarray:
        return trace_powers(sample_zm_spectrum_proxy(config.m, config.n, rng), config.k_max, config.n)

    start = time.perf_counter()
    traces = _run_trials(config, one)
    exact = tuple(Fraction(fuss_catalan(k, config.m)) for k in range(1, config.k_max + 1))
    return SimulationReport(config, traces, exact, time.perf_counter() - start)


def estimate_graph_z2(config: SimulationConfig) -> SimulationReport:
    """Graph-matrix moments normalized by the side length ``n(n-1)``; target Fuss-Catalan ``m=2``."""
    if config.scenario != "graph-z2":
        raise ValueError("config is not a graph-z2 scenario")
    side = config.n * (config.n - 1)

    def one(rng: np.random.Generator) -> np.ndarray:
        return trace_powers(build_graph_matrix_z2(config.n, rng), config.k_max, side)

    start = time.perf_counter()
    traces = _run_trials(config, one)
    exact = tuple(Fraction(fuss_catalan(k, 2)) for k in range(1, config.k_max + 1))
    return SimulationReport(config, traces, exact, time.perf_counter() - start)


def run_simulation(config: SimulationConfig) -> SimulationReport:
    return {
        "drd-chain": estimate_drd_chain,
        "matrix-product": estimate_matrix_product,
        "graph-z2": estimate_graph_z2,
    }[config.scenario](config)
