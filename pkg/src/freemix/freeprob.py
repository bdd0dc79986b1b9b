"""Exact moment computations for products of free elements and the orthogonal-mixing operation.

The workhorse is :func:`coefficient`, the weight of the monomial
``Omega^alpha * Omega'^beta`` in the ``2k``-th moment.  Everything else is a
sum over type vectors built on top of it, plus an independent route through
free cumulants and Kreweras complements that never touches the coefficient.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from freemix import combinat, ncp
from freemix.combinat import binomial, catalan, fuss_catalan
from freemix.ncp import PartitionTypeVector, type_vectors

__all__ = [
    "InsufficientMomentsError",
    "parse_rational",
    "format_rational",
    "MomentSequence",
    "GeneralMomentSequence",
    "ChainSpec",
    "sign",
    "coefficient",
    "pair_catalan_sum",
    "pair_catalan_sum_brute",
    "single_catalan_sum",
    "single_catalan_sum_brute",
    "free_product_moments",
    "free_cumulants",
    "cumulant_oracle_product_moments",
    "op_r",
    "zm_moments",
    "zm_convolve_closed",
    "zm_compose",
    "chain_moments_inductive",
    "chain_moments_closed",
    "b_convolution_lhs",
    "b_convolution_rhs",
]

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class InsufficientMomentsError(ValueError):
    pass


def parse_rational(value: str | int) -> Fraction:
    """Parse a decimal integer or a ``p/q`` literal."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational literal: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value):
        raise ValueError(f"not a rational literal: {value!r}")
    return Fraction(value.replace(" ", ""))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GeneralMomentSequence:
    """Moments ``[m_1, m_2, ...]`` of a (not necessarily symmetric) element; ``m_0 = 1``."""

    moments: tuple[Fraction, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "moments", tuple(Fraction(x) for x in self.moments))

    @property
    def max_k(self) -> int:
        return len(self.moments)

    def require(self, k: int) -> None:
        if k > self.max_k:
            raise InsufficientMomentsError(
                f"{self.label or 'sequence'} has {self.max_k} moments, need {k}"
            )

    def __getitem__(self, i: int) -> Fraction:
        """``m_i`` for ``i >= 0``."""
        return Fraction(1) if i == 0 else self.moments[i - 1]

    def to_json(self) -> dict:
        return {"label": self.label, "moments": [format_rational(x) for x in self.moments]}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneralMomentSequence":
        if not isinstance(obj, dict) or not isinstance(obj.get("moments"), list):
            raise ValueError("expected an object with a 'moments' list")
        return cls(tuple(parse_rational(v) for v in obj["moments"]), str(obj.get("label", "")))


@dataclass(frozen=True)
class MomentSequence:
    """Even moments ``[Omega_2, Omega_4, ..., Omega_2K]`` of a symmetric law.

    ``notes`` collects non-fatal warnings, such as a variance other than 1.
    """

    even_moments: tuple[Fraction, ...]
    label: str = field(default="", compare=False)
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "even_moments", tuple(Fraction(x) for x in self.even_moments))

    @property
    def max_k(self) -> int:
        return len(self.even_moments)

    @property
    def unit_variance(self) -> bool:
        return bool(self.even_moments) and self.even_moments[0] == 1

    def require(self, k: int) -> None:
        if k > self.max_k:
            raise InsufficientMomentsError(
                f"{self.label or 'sequence'} has {self.max_k} even moments, need {k}"
            )

    def omega(self, i: int) -> Fraction:
        """``Omega_{2i}`` (``i >= 1``)."""
        return self.even_moments[i - 1]

    def truncate(self, k: int) -> "MomentSequence":
        self.require(k)
        return MomentSequence(self.even_moments[:k], self.label, self.notes)

    def lift(self) -> GeneralMomentSequence:
        """The law of ``x**2``: entry ``i`` is ``Omega_{2i}``."""
        return GeneralMomentSequence(self.even_moments, self.label)

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.even_moments]

    def to_json(self) -> dict:
        out = {"label": self.label, "even_moments": [format_rational(x) for x in self.even_moments]}
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "MomentSequence":
        if not isinstance(obj, dict) or not isinstance(obj.get("even_moments"), list):
            raise ValueError("expected an object with an 'even_moments' list")
        return cls(tuple(parse_rational(v) for v in obj["even_moments"]), str(obj.get("label", "")))

    @classmethod
    def constant(cls, k_max: int, value: Fraction | int = 1, label: str = "rademacher") -> "MomentSequence":
        return cls(tuple(Fraction(value) for _ in range(k_max)), label)


@dataclass(frozen=True)
class ChainSpec:
    """``Omega_Z(m)`` mixed successively with each law in ``tail``."""

    m: int
    tail: tuple[MomentSequence, ...] = ()

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        object.__setattr__(self, "tail", tuple(self.tail))

    @property
    def s(self) -> int:
        return len(self.tail)


# ---------------------------------------------------------------------------
# Coefficients and Catalan sums
# ---------------------------------------------------------------------------


def sign(k: int, a: int, b: int) -> int:
    """``(-1)^(a+b-k-1)``, which is also ``(-1)^(k+a+b-1)``."""
    return -1 if (a + b - k - 1) % 2 else 1


def _same_k(alpha: PartitionTypeVector, beta: PartitionTypeVector) -> int:
    if alpha.k != beta.k:
        raise ValueError(f"type vectors over different k: {alpha.k} vs {beta.k}")
    return alpha.k


def pair_catalan_sum(alpha: PartitionTypeVector, beta: PartitionTypeVector) -> Fraction:
    """``k C(a+b-2, k-1) (a-1)!/prod alpha! (b-1)!/prod beta!``."""
    k = _same_k(alpha, beta)
    a, b = alpha.a, beta.a
    return k * binomial(a + b - 2, k - 1) * alpha.weight() * beta.weight()


def pair_catalan_sum_brute(alpha: PartitionTypeVector, beta: PartitionTypeVector) -> Fraction:
    total = 0
    for pi, sigma in ncp.enumerate_pairs(alpha, beta):
        total += math.prod(catalan(x - 1) for x in ncp.pair_region_sizes(pi, sigma))
    return Fraction(total)


def single_catalan_sum(alpha: PartitionTypeVector) -> Fraction:
    """``C(a+k-2, k-1) (a-1)!/prod alpha!``."""
    return binomial(alpha.a + alpha.k - 2, alpha.k - 1) * alpha.weight()


def single_catalan_sum_brute(alpha: PartitionTypeVector) -> Fraction:
    total = 0
    for p in ncp.enumerate_nc_by_type(alpha):
        total += math.prod(catalan(x - 1) for x in ncp.quotient_cycle_sizes(p))
    return Fraction(total)


def coefficient(alpha: PartitionTypeVector, beta: PartitionTypeVector) -> Fraction:
    """Weight of ``Omega^alpha Omega'^beta`` in the ``2k``-th moment of the mixture.

    Vanishes whenever ``a + b <= k``.
    """
    k = _same_k(alpha, beta)
    return sign(k, alpha.a, beta.a) * pair_catalan_sum(alpha, beta)


def _monomials(values: Sequence[Fraction], k: int) -> dict[PartitionTypeVector, Fraction]:
    return {al: al.monomial(values) for al in type_vectors(k)}


def _mix(x: Sequence[Fraction], y: Sequence[Fraction], k_max: int) -> list[Fraction]:
    """``sum_{alpha, beta in P_k} C(alpha, beta) x^alpha y^beta`` for ``k = 1..k_max``."""
    out = []
    for k in range(1, k_max + 1):
        mx, my = _monomials(x, k), _monomials(y, k)
        total = Fraction(0)
        for al, xv in mx.items():
            if xv == 0:
                continue
            for be, yv in my.items():
                if yv == 0 or al.a + be.a <= k:
                    continue
                total += coefficient(al, be) * xv * yv
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# Free products
# ---------------------------------------------------------------------------


def free_product_moments(
    a: GeneralMomentSequence, b: GeneralMomentSequence, k_max: int
) -> list[Fraction]:
    """``[phi((ab)^1), ..., phi((ab)^k_max)]`` for free ``a`` and ``b``."""
    a.require(k_max)
    b.require(k_max)
    return _mix(a.moments, b.moments, k_max)


def free_cumulants(a: GeneralMomentSequence, k_max: int) -> list[Fraction]:
    """``[kappa_1, ..., kappa_k_max]`` by triangular inversion of the moment-cumulant formula."""
    a.require(k_max)
    kappa: list[Fraction] = [Fraction(0)]  # 1-based
    for n in range(1, k_max + 1):
        rest = Fraction(0)
        for p in ncp.enumerate_nc(n):
            if len(p) == 1:
                continue
            rest += math.prod((kappa[len(bl)] for bl in p.blocks), start=Fraction(1))
        kappa.append(a[n] - rest)
    return kappa[1:]


def cumulant_oracle_product_moments(
    a: GeneralMomentSequence, b: GeneralMomentSequence, k_max: int
) -> list[Fraction]:
    """``phi((ab)^k) = sum_{pi in NC(k)} kappa_pi[a] phi_{K(pi)}[b]``, without :func:`coefficient`."""
    if k_max > 9:
        raise ValueError("the cumulant oracle is limited to k_max <= 9")
    b.require(k_max)
    kappa = [Fraction(0)] + free_cumulants(a, k_max)
    out = []
    for k in range(1, k_max + 1):
        total = Fraction(0)
        for p in ncp.enumerate_nc(k):
            ka = math.prod((kappa[len(bl)] for bl in p.blocks), start=Fraction(1))
            if ka == 0:
                continue
            kp = ncp.kreweras_complement(p)
            total += ka * math.prod((b[len(bl)] for bl in kp.blocks), start=Fraction(1))
        out.append(total)
    return out


# ---------------------------------------------------------------------------
# Orthogonal mixing
# ---------------------------------------------------------------------------


def _variance_notes(*seqs: MomentSequence) -> tuple[str, ...]:
    notes = []
    for s in seqs:
        notes.extend(s.notes)
        if s.max_k and not s.unit_variance:
            notes.append(f"input {s.label or '?'} has Omega_2 = {format_rational(s.omega(1))} != 1")
    return tuple(dict.fromkeys(notes))


def op_r(omega: MomentSequence, omega_prime: MomentSequence, k_max: int | None = None) -> MomentSequence:
    """Even moments of ``Omega o_R Omega'``."""
    if k_max is None:
        k_max = min(omega.max_k, omega_prime.max_k)
    omega.require(k_max)
    omega_prime.require(k_max)
    values = _mix(omega.even_moments, omega_prime.even_moments, k_max)
    label = f"({omega.label} o_R {omega_prime.label})"
    return MomentSequence(tuple(values), label, _variance_notes(omega, omega_prime))


def zm_moments(m: int, k_max: int) -> MomentSequence:
    """``Omega_Z(m)``: entry ``k`` is the Fuss-Catalan number ``C(k, m)``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return MomentSequence(tuple(Fraction(fuss_catalan(k, m)) for k in range(1, k_max + 1)), f"zm:{m}")


def zm_convolve_closed(m: int, omega: MomentSequence, k_max: int | None = None) -> MomentSequence:
    """Single-step closed form ``sum_alpha C(mk, a-1) (a-1)!/prod alpha! Omega^alpha``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    k_max = omega.max_k if k_max is None else k_max
    omega.require(k_max)
    out = []
    for k in range(1, k_max + 1):
        total = Fraction(0)
        for al in type_vectors(k):
            c = binomial(m * k, al.a - 1)
            if c:
                total += c * al.weight() * al.monomial(omega.even_moments)
        out.append(total)
    return MomentSequence(tuple(out), f"(zm:{m} o_R {omega.label})", _variance_notes(omega))


def zm_compose(m: int, m_prime: int, k_max: int) -> MomentSequence:
    """``Omega_Z(m) o_R Omega_Z(m')``; raises if it is not ``Omega_Z(m+m')``."""
    got = zm_convolve_closed(m, zm_moments(m_prime, k_max), k_max)
    want = zm_moments(m + m_prime, k_max)
    for k, (x, y) in enumerate(zip(got.even_moments, want.even_moments), start=1):
        if x != y:
            raise ArithmeticError(f"zm_compose({m}, {m_prime}) differs at k={k}: {x} != {y}")
    return got


# ---------------------------------------------------------------------------
# Chains
# ---------------------------------------------------------------------------


def chain_moments_inductive(chain: ChainSpec, k_max: int) -> MomentSequence:
    """Fold the binary formula over the tail, starting from ``Omega_Z(m)``."""
    acc = zm_moments(chain.m, k_max)
    for omega in chain.tail:
        acc = op_r(acc, omega, k_max)
    return acc


def _grouped_weights(omega: MomentSequence, k: int) -> dict[int, Fraction]:
    """``a -> sum over alpha with a blocks of (a-1)!/prod alpha! * Omega^alpha``."""
    out: dict[int, Fraction] = {}
    for al in type_vectors(k):
        out[al.a] = out.get(al.a, Fraction(0)) + al.weight() * al.monomial(omega.even_moments)
    return out


def _cgon_sum(chain: ChainSpec, k: int, c: int) -> Fraction:
    """``c sum_{alpha_i} C((m-s+1)k, mk - sum a_i + c) k^(s-1) prod (a_i-1)!/prod alpha_i! Omega^alpha_i``."""
    m, s = chain.m, chain.s
    if s > m:
        raise ValueError(f"closed form needs s <= m, got s={s}, m={m}")
    top = (m - s + 1) * k
    scale = c * Fraction(k) ** (s - 1)
    groups = [_grouped_weights(om, k) for om in chain.tail]
    total = Fraction(0)
    for combo in product(*(g.items() for g in groups)):
        a_sum = sum(a for a, _ in combo)
        bin_ = binomial(top, m * k - a_sum + c)
        if bin_:
            total += bin_ * math.prod((w for _, w in combo), start=Fraction(1))
    return scale * total


def chain_moments_closed(chain: ChainSpec, k_max: int) -> MomentSequence:
    """Closed form: entry ``k`` sums ``C_m(alpha_1..alpha_s) prod Omega^(i)^alpha_i`` over ``P_k^s``.

    ``C_m`` is the count of :func:`freemix.ncp.count_np_general`.  ``s = 0``
    is allowed and gives the Fuss-Catalan sequence.
    """
    if chain.s > chain.m:
        raise ValueError(f"closed form needs s <= m, got s={chain.s}, m={chain.m}")
    for om in chain.tail:
        om.require(k_max)
    values = tuple(_cgon_sum(chain, k, 1) for k in range(1, k_max + 1))
    labels = [f"zm:{chain.m}"] + [om.label for om in chain.tail]
    return MomentSequence(values, " o_R ".join(labels), _variance_notes(*chain.tail))


def b_convolution_lhs(chain: ChainSpec, k: int, c: int) -> Fraction:
    """``sum_{k_1+..+k_c = k, k_i >= 1} B(k_1) ... B(k_c)`` with ``B`` the closed-form chain moments."""
    if not 1 <= c <= k:
        raise ValueError(f"need 1 <= c <= k, got c={c}, k={k}")
    b = chain_moments_closed(chain, k).even_moments
    return sum(
        (math.prod((b[ki - 1] for ki in comp), start=Fraction(1)) for comp in combinat.compositions(k, c)),
        start=Fraction(0),
    )


def b_convolution_rhs(chain: ChainSpec, k: int, c: int) -> Fraction:
    if not 1 <= c <= k:
        raise ValueError(f"need 1 <= c <= k, got c={c}, k={k}")
    for om in chain.tail:
        om.require(k)
    return _cgon_sum(chain, k, c)
