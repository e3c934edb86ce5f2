"""Both sides of each explicit inequality, packaged into reports.

Every check produces an InequalityReport carrying the left side, the
named right-side terms, and a verdict.  Proven bounds with explicit
constants assert HOLDS/VIOLATED; statements whose constant is
ineffective stay REPORT_ONLY and only expose normalized ratios, which
regression baselines pin against code drift.  Explicit asymptotic
constants get a declared multiplicative margin: exceeding the bare
constant but staying within margin flags WARN instead of VIOLATED.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import arith, characters, sieve

__all__ = [
    "HOLDS",
    "WARN",
    "VIOLATED",
    "REPORT_ONLY",
    "EXPLICIT_MARGIN",
    "SplitMix64",
    "PrimeCoefficients",
    "IntegerCoefficients",
    "InequalityReport",
    "CensusWitness",
    "CensusRecord",
    "GramTable",
    "prime_profile",
    "integer_profile",
    "classical_large_sieve",
    "elliott_variance",
    "primitive_ls_sum",
    "primitive_ls_report",
    "halasz_bounds",
    "motohashi_report",
    "single_char_bound",
    "missing_value_census",
    "bombieri_check",
    "gram_diagnostic",
    "reweighted_coefficients",
]

HOLDS = "HOLDS"
WARN = "WARN"
VIOLATED = "VIOLATED"
REPORT_ONLY = "REPORT_ONLY"

# margin for explicit constants of asymptotic statements (the 2+o(1) class)
EXPLICIT_MARGIN = 1.5

# guard against float-equality artifacts at inequality boundaries
_REL_GUARD = 1e-12


def _verdict(lhs: float, rhs: float, margin: float = 1.0) -> str:
    slack = _REL_GUARD * max(abs(lhs), abs(rhs), 1.0)
    if lhs <= rhs + slack:
        return HOLDS
    if margin > 1.0 and lhs <= margin * rhs + slack:
        return WARN
    return VIOLATED


@dataclass(frozen=True)
class InequalityReport:
    name: str
    params: Mapping[str, object]
    lhs: float
    rhs_terms: Mapping[str, float]
    rhs_total: float | None
    ratio: float | None
    verdict: str

    def __post_init__(self) -> None:
        if (self.verdict == REPORT_ONLY) != (self.rhs_total is None):
            raise ValueError("REPORT_ONLY exactly when no asserted total exists")
        if self.verdict == HOLDS and self.rhs_total is not None:
            slack = _REL_GUARD * max(abs(self.lhs), abs(self.rhs_total), 1.0)
            if self.lhs > self.rhs_total + slack:
                raise ValueError("HOLDS verdict contradicts lhs > rhs_total")


class SplitMix64:
    """Fixed-increment 64-bit mix generator (public domain constants).

    Chosen over random.Random so that seeded sweeps produce identical
    streams on every platform and Python version.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        self.state = seed & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def next_unit(self) -> complex:
        """Uniform point on the unit circle."""
        angle = 2.0 * math.pi * self.next_float()
        return complex(math.cos(angle), math.sin(angle))

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection; unbiased."""
        if n <= 0:
            raise ValueError("need n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n


@lru_cache(maxsize=64)
def _prime_set(N: int) -> frozenset[int]:
    return frozenset(int(p) for p in arith.prime_array(N))


@dataclass(frozen=True)
class PrimeCoefficients:
    """Complex weights a_p on primes p <= N."""

    N: int
    values: Mapping[int, complex]

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("need N >= 2")
        primes = _prime_set(self.N)
        for p in self.values:
            if p not in primes:
                raise ValueError(f"key {p} is not a prime <= {self.N}")

    @cached_property
    def norm_sq(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.values.values()))

    def recompute_norm_sq(self) -> float:
        """Independent fsum-based recomputation for consistency checks."""
        return math.fsum(abs(v) ** 2 for v in self.values.values())

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ps = np.array(sorted(self.values), dtype=np.int64)
        vals = np.array([self.values[int(p)] for p in ps], dtype=np.complex128)
        return ps, vals

    def class_sums(self, q: int) -> np.ndarray:
        """sum of a_p over p = a (mod q), indexed by residue a in [0, q)."""
        ps, vals = self._arrays
        if ps.size == 0:
            return np.zeros(q, dtype=np.complex128)
        res = ps % q
        re = np.bincount(res, weights=vals.real, minlength=q)
        im = np.bincount(res, weights=vals.imag, minlength=q)
        return re + 1j * im

    def total(self) -> complex:
        _, vals = self._arrays
        return complex(vals.sum())

    def char_sum(self, chi: characters.DirichletCharacter) -> complex:
        """sum of a_p chi(p) over p <= N."""
        vals = characters.char_values(chi)
        return complex(np.dot(vals, self.class_sums(chi.group.modulus)))


@dataclass(frozen=True)
class IntegerCoefficients:
    """Complex weights a_n on 1 <= n <= N."""

    N: int
    values: Mapping[int, complex]

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("need N >= 1")
        for n in self.values:
            if not 1 <= n <= self.N:
                raise ValueError(f"key {n} outside 1..{self.N}")

    @cached_property
    def norm_sq(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.values.values()))

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ns = np.array(sorted(self.values), dtype=np.int64)
        vals = np.array([self.values[int(n)] for n in ns], dtype=np.complex128)
        return ns, vals

    def class_sums(self, q: int) -> np.ndarray:
        ns, vals = self._arrays
        if ns.size == 0:
            return np.zeros(q, dtype=np.complex128)
        res = ns % q
        re = np.bincount(res, weights=vals.real, minlength=q)
        im = np.bincount(res, weights=vals.imag, minlength=q)
        return re + 1j * im

    def total(self) -> complex:
        _, vals = self._arrays
        return complex(vals.sum())


def prime_profile(name: str, N: int, seed: int = 0) -> PrimeCoefficients:
    """Built-in a_p families: 'ones', 'random', 'indicator:a:m'."""
    primes = [int(p) for p in arith.prime_array(N)]
    if name == "ones":
        return PrimeCoefficients(N, {p: 1.0 + 0j for p in primes})
    if name == "random":
        rng = SplitMix64(seed)
        return PrimeCoefficients(N, {p: rng.next_unit() for p in primes})
    if name.startswith("indicator:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise ValueError("indicator profile must be 'indicator:a:m'")
        a, m = int(parts[1]), int(parts[2])
        if m < 1:
            raise ValueError("indicator modulus must be >= 1")
        return PrimeCoefficients(N, {p: 1.0 + 0j for p in primes if p % m == a % m})
    raise ValueError(f"unknown coefficient profile {name!r}")


def integer_profile(name: str, N: int, seed: int = 0) -> IntegerCoefficients:
    """Built-in a_n families over all n <= N; same names as prime_profile."""
    ns = range(1, N + 1)
    if name == "ones":
        return IntegerCoefficients(N, {n: 1.0 + 0j for n in ns})
    if name == "random":
        rng = SplitMix64(seed)
        return IntegerCoefficients(N, {n: rng.next_unit() for n in ns})
    if name.startswith("indicator:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise ValueError("indicator profile must be 'indicator:a:m'")
        a, m = int(parts[1]), int(parts[2])
        if m < 1:
            raise ValueError("indicator modulus must be >= 1")
        return IntegerCoefficients(N, {n: 1.0 + 0j for n in ns if n % m == a % m})
    raise ValueError(f"unknown coefficient profile {name!r}")


def classical_large_sieve(a: IntegerCoefficients, Q: int) -> InequalityReport:
    """Residue-class variance form: sum_q q sum_a |A(q,a) - A/q|^2 < (N+Q^2)||a||^2."""
    if Q < 1:
        raise ValueError("need Q >= 1")
    total = a.total()
    lhs = 0.0
    for q in range(1, Q + 1):
        cls = a.class_sums(q)
        lhs += q * float(np.sum(np.abs(cls - total / q) ** 2))
    rhs = (a.N + Q * Q) * a.norm_sq
    return InequalityReport(
        name="classical_large_sieve",
        params={"N": a.N, "Q": Q},
        lhs=lhs,
        rhs_terms={"dispersion_bound": rhs},
        rhs_total=rhs,
        ratio=lhs / rhs if rhs > 0 else None,
        verdict=_verdict(lhs, rhs),
    )


def elliott_variance(
    a: PrimeCoefficients, Q: int, mean_convention: str = "inverse-phi"
) -> InequalityReport:
    """Variance of a_p over reduced classes: sum_q (q-1) sum_{(a,q)=1} |...|^2.

    The subtracted mean is m_q * sum_{p<=N} a_p with m_q = 1/phi(q)
    ('inverse-phi') or q/phi(q) ('q-over-phi'); both conventions are
    kept, neither is asserted.  REPORT_ONLY: the constant is ineffective.
    """
    if Q < 1:
        raise ValueError("need Q >= 1")
    if mean_convention not in ("inverse-phi", "q-over-phi"):
        raise ValueError("mean_convention must be 'inverse-phi' or 'q-over-phi'")
    total = a.total()
    lhs = 0.0
    for q in range(2, Q + 1):
        group = characters.character_group(q)
        m_q = total / group.phi if mean_convention == "inverse-phi" else total * q / group.phi
        cls = a.class_sums(q)
        units = np.flatnonzero(group.unit_mask)
        lhs += (q - 1) * float(np.sum(np.abs(cls[units] - m_q) ** 2))
    reference = (a.N / math.log(a.N)) * a.norm_sq
    return InequalityReport(
        name="elliott_variance",
        params={"N": a.N, "Q": Q, "mean_convention": mean_convention},
        lhs=lhs,
        rhs_terms={"reference": reference},
        rhs_total=None,
        ratio=lhs / reference if reference > 0 else None,
        verdict=REPORT_ONLY,
    )


def _primitive_mask(group: characters.CharacterGroup) -> np.ndarray:
    return np.array(
        [characters.is_primitive(c) for c in characters.enumerate_characters(group)],
        dtype=bool,
    )


def primitive_ls_sum(a: PrimeCoefficients, Q: int) -> float:
    """sum over q <= Q and primitive chi mod q of |sum_p a_p chi(p)|^2."""
    if Q < 1:
        raise ValueError("need Q >= 1")
    total = 0.0
    for q in range(1, Q + 1):
        group = characters.character_group(q)
        table = characters.value_table(group)
        sums = table @ a.class_sums(q)
        total += float(np.sum(np.abs(sums[_primitive_mask(group)]) ** 2))
    return total


def primitive_ls_report(a: PrimeCoefficients, Q: int) -> InequalityReport:
    lhs = primitive_ls_sum(a, Q)
    reference = (a.N / math.log(a.N)) * a.norm_sq
    return InequalityReport(
        name="primitive_ls",
        params={"N": a.N, "Q": Q},
        lhs=lhs,
        rhs_terms={"reference": reference},
        rhs_total=None,
        ratio=lhs / reference if reference > 0 else None,
        verdict=REPORT_ONLY,
    )


def halasz_bounds(
    a: PrimeCoefficients,
    C: Sequence[characters.DirichletCharacter],
    R: int,
    k: int = 2,
) -> InequalityReport:
    """Character-set bound: lhs <= (N/log R) ||a||^2 + R^2 |C| sqrt(q) log q ||a||^2.

    For characters to mixed moduli <= Q the modulus is replaced by Q^2.
    The Burgess-shaped term is reported alongside without its constant
    and never asserted.
    """
    if R < 2:
        raise ValueError("need R >= 2")
    if a.N <= R * R:
        raise ValueError("need R^2 < N")
    if k < 2:
        raise ValueError("Burgess exponent k must be >= 2")
    moduli = sorted({chi.group.modulus for chi in C})
    if k >= 4 and any(not arith.is_cubefree(q) for q in moduli):
        raise ValueError("k >= 4 requires cubefree moduli")
    if len(moduli) <= 1:
        q_eff = moduli[0] if moduli else 1
        mode = "single"
    else:
        q_eff = max(moduli) ** 2
        mode = "mixed"
    lhs = math.fsum(abs(a.char_sum(chi)) ** 2 for chi in C)
    norm = a.norm_sq
    main = (a.N / math.log(R)) * norm
    pv_term = R * R * len(C) * math.sqrt(q_eff) * math.log(q_eff) * norm if q_eff > 1 else 0.0
    burgess_term = (
        a.N ** (1.0 - 1.0 / k)
        * q_eff ** ((k + 1) / (4.0 * k * k))
        * len(C)
        * R ** (2.0 / k)
        * norm
    )
    rhs_total = main + pv_term
    return InequalityReport(
        name="halasz_bounds",
        params={"N": a.N, "q": q_eff, "moduli": mode, "R": R, "k": k, "set_size": len(C)},
        lhs=lhs,
        rhs_terms={"main": main, "pv_term": pv_term, "burgess_term": burgess_term},
        rhs_total=rhs_total,
        ratio=lhs / rhs_total if rhs_total > 0 else None,
        verdict=_verdict(lhs, rhs_total),
    )


def _primitive_pi_sq_sum(x: int, Q: int) -> float:
    """sum_{q<=Q} sum over primitive chi mod q of |pi(x, chi)|^2."""
    total = 0.0
    for q in range(1, Q + 1):
        group = characters.character_group(q)
        table = characters.value_table(group)
        counts = characters.prime_class_counts(x, q)
        sums = table @ counts
        total += float(np.sum(np.abs(sums[_primitive_mask(group)]) ** 2))
    return total


def motohashi_report(x: int, Q: int, require_explicit: bool = False) -> InequalityReport:
    """Explicit variance bound over primitive characters up to Q.

    Asserts lhs <= 2 x^2 / (log x * log(x/Q^3)) within EXPLICIT_MARGIN
    whenever x > Q^3; below that threshold the report only carries the
    ratio against the generic x^2/log^2 x shape.
    """
    if x < 2:
        raise ValueError("need x >= 2")
    if Q < 1:
        raise ValueError("need Q >= 1")
    lhs = _primitive_pi_sq_sum(x, Q)
    generic = x * x / math.log(x) ** 2
    explicit_ok = x > Q**3
    if not explicit_ok and require_explicit:
        raise ValueError("explicit form needs x > Q^3")
    if explicit_ok:
        explicit = 2.0 * x * x / (math.log(x) * math.log(x / Q**3))
        return InequalityReport(
            name="motohashi",
            params={"x": x, "Q": Q},
            lhs=lhs,
            rhs_terms={"explicit": explicit, "generic": generic},
            rhs_total=explicit,
            ratio=lhs / explicit,
            verdict=_verdict(lhs, explicit, margin=EXPLICIT_MARGIN),
        )
    return InequalityReport(
        name="motohashi",
        params={"x": x, "Q": Q},
        lhs=lhs,
        rhs_terms={"generic": generic},
        rhs_total=None,
        ratio=lhs / generic,
        verdict=REPORT_ONLY,
    )


def single_char_bound(chi: characters.DirichletCharacter, x: int) -> InequalityReport:
    """|pi(x, chi)| against ((1+phi/alpha)/(2-2phi/alpha))^(1/2) x/log x.

    Defined for complex characters only (chi^2 nonprincipal); phi is
    1/4 for cubefree modulus and 1/3 otherwise, alpha = log x / log q.
    """
    if chi.is_principal:
        raise ValueError("need a nonprincipal character")
    if characters.char_order(chi) <= 2:
        raise ValueError("real character: the bound needs chi^2 nonprincipal")
    if x < 2:
        raise ValueError("need x >= 2")
    q = chi.group.modulus
    phi_exp = 0.25 if arith.is_cubefree(q) else 1.0 / 3.0
    alpha = math.log(x) / math.log(q)
    if 2.0 - 2.0 * phi_exp / alpha <= 0:
        raise ValueError("bound undefined: need alpha > phi")
    factor = math.sqrt((1.0 + phi_exp / alpha) / (2.0 - 2.0 * phi_exp / alpha))
    lhs = abs(characters.pi_chi(x, chi))
    rhs_total = factor * x / math.log(x)
    return InequalityReport(
        name="single_char",
        params={"q": q, "x": x, "alpha": alpha, "phi": phi_exp},
        lhs=lhs,
        rhs_terms={"factor": factor, "bound": rhs_total},
        rhs_total=rhs_total,
        ratio=lhs / rhs_total,
        verdict=_verdict(lhs, rhs_total, margin=EXPLICIT_MARGIN),
    )


@dataclass(frozen=True)
class CensusWitness:
    q: int
    exponents: tuple[int, ...]
    order: int
    zeta_numerator: int

    @property
    def zeta_turns(self) -> Fraction:
        return Fraction(self.zeta_numerator, self.order)


@dataclass(frozen=True)
class CensusRecord:
    D: int
    x: int
    Q: int
    count: int
    witnesses: tuple[CensusWitness, ...]


def missing_value_census(D: int, x: int, Q: int) -> CensusRecord:
    """Count moduli q <= Q carrying a primitive character of order in [2, D]
    that misses some value of its order's roots of unity on primes <= x."""
    if D < 2:
        raise ValueError("need D >= 2")
    if x < 2:
        raise ValueError("need x >= 2")
    if Q < 1:
        raise ValueError("need Q >= 1")
    witnesses: list[CensusWitness] = []
    counted: set[int] = set()
    for q in range(2, Q + 1):
        group = characters.character_group(q)
        counts = characters.prime_class_counts(x, q)
        units = [a for a in group.unit_residues() if counts[a] > 0]
        for chi in characters.enumerate_characters(group):
            d = characters.char_order(chi)
            if not 2 <= d <= D or not characters.is_primitive(chi):
                continue
            attained = set()
            for a in units:
                k = characters.scaled_exponent(chi, a)
                attained.add(k * d // group.group_exponent)
            for j in range(d):
                if j not in attained:
                    witnesses.append(CensusWitness(q, chi.exponents, d, j))
                    counted.add(q)
    return CensusRecord(D=D, x=x, Q=Q, count=len(counted), witnesses=tuple(witnesses))


def bombieri_check(
    vectors: Sequence[Sequence[complex]],
    phi: Sequence[complex],
    weights: Sequence[float] | None = None,
) -> InequalityReport:
    """Sum of squared projections against the Schur-type Gram bound."""
    v = np.asarray(vectors, dtype=np.complex128)
    f = np.asarray(phi, dtype=np.complex128)
    if v.ndim != 2 or f.ndim != 1 or v.shape[1] != f.shape[0]:
        raise ValueError("vectors and phi must share one dimension")
    if weights is None:
        w = np.ones(f.shape[0])
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != f.shape:
            raise ValueError("weights must match the vector dimension")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
    proj = (v * w) @ f.conj()
    lhs = float(np.sum(np.abs(proj) ** 2))
    gram = (v * w) @ v.conj().T
    rhs = float(np.real(np.vdot(f * w, f))) * float(np.max(np.sum(np.abs(gram), axis=1)))
    return InequalityReport(
        name="bombieri",
        params={"m": v.shape[0], "dim": v.shape[1]},
        lhs=lhs,
        rhs_terms={"norm_sq_times_row_max": rhs},
        rhs_total=rhs,
        ratio=lhs / rhs if rhs > 0 else None,
        verdict=_verdict(lhs, rhs),
    )


@dataclass(frozen=True)
class GramTable:
    """Pairwise smoothed products of primitive characters to moduli <= Q."""

    Q: int
    N: int
    R: int
    labels: tuple[tuple[int, tuple[int, ...]], ...]
    entries: tuple[tuple[float, ...], ...]
    diagonal_reference: float

    def off_diagonal_max(self) -> float:
        m = len(self.labels)
        return max(
            (self.entries[i][j] for i in range(m) for j in range(m) if i != j),
            default=0.0,
        )


def _primitive_characters_upto(Q: int) -> list[characters.DirichletCharacter]:
    chars = []
    for q in range(1, Q + 1):
        group = characters.character_group(q)
        chars.extend(
            c for c in characters.enumerate_characters(group) if characters.is_primitive(c)
        )
    return chars


def gram_diagnostic(
    Q: int, N: int, R: int, truncation_eps: float = 1e-12
) -> GramTable:
    """Entries |smoothed weighted sum of chi * conj(chi')| over primitive pairs.

    The diagonal carries the smoothed f-sum of the principal product
    character; off-diagonal decay as N grows is the quantity of
    interest, reported against the N/log R reference.
    """
    if R < 2:
        raise ValueError("need R >= 2")
    if N <= R * R:
        raise ValueError("need R^2 < N")
    chars = _primitive_characters_upto(Q)
    w = sieve.selberg_weights(R)
    params = sieve.SmoothingParams(N=N, truncation_eps=truncation_eps)
    m = len(chars)
    entries = [[0.0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            prod = characters.product(chars[i], characters.conjugate(chars[j]))
            val = abs(sieve.smoothed_char_sum(prod, params, w))
            entries[i][j] = entries[j][i] = val
    return GramTable(
        Q=Q,
        N=N,
        R=R,
        labels=tuple((c.group.modulus, c.exponents) for c in chars),
        entries=tuple(tuple(row) for row in entries),
        diagonal_reference=N / math.log(R),
    )


def reweighted_coefficients(a: PrimeCoefficients, scale: int | None = None) -> PrimeCoefficients:
    """Divide out the smoothing at primes: a_p -> a_p exp(+log^2(p/scale)).

    Applying the smoothing weight to the result recovers a_p exactly;
    this is the reweighting the Gram argument relies on.
    """
    N = a.N if scale is None else scale
    values = {p: v * math.exp(math.log(p / N) ** 2) for p, v in a.values.items()}
    return PrimeCoefficients(a.N, values)
