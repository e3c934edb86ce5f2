"""Selberg sieve weights and the character sums they majorize.

Weights live in exact rational arithmetic so the defining constraints
(lambda_1 = 1, |lambda_d| <= 1) are literal assertions rather than
float comparisons.  The squared sieve function f = (1*lambda)^2 is
summed two ways: a divisor loop per n, and the dual order over pairs
(d1, d2) grouped by lcm; both orders are kept and cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import arith, characters

__all__ = [
    "SelbergWeights",
    "SmoothingParams",
    "selberg_weights",
    "selberg_normalizer",
    "coprime_normalizer",
    "one_star_g",
    "f_value",
    "f_sum",
    "f_sum_direct",
    "pair_sum_bound",
    "weighted_char_sum",
    "weighted_char_sum_direct",
    "proof_chain_bound",
    "batched_weighted_char_sums",
    "batched_proof_chain_bounds",
    "smoothing_weight",
    "smoothed_char_sum",
    "smoothed_char_sum_direct",
    "burgess_normalized_ratio",
    "gram_matrix",
    "minimal_quadratic_weights",
]

# phi / mobius tables, rebuilt geometrically as demand grows
_tab_limit = 0
_phi = np.zeros(1, dtype=np.int64)
_mu = np.zeros(1, dtype=np.int8)


def _ensure_tables(limit: int) -> None:
    global _tab_limit, _phi, _mu
    if limit <= _tab_limit:
        return
    limit = max(limit, 2 * _tab_limit, 16)
    phi = np.arange(limit + 1, dtype=np.int64)
    mu = np.ones(limit + 1, dtype=np.int8)
    for p in arith.prime_array(limit):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
        mu[p::p] = -mu[p::p]
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    _phi, _mu, _tab_limit = phi, mu, limit


# prefix lists of exact partial sums; these only ever grow
_G_prefix: list[Fraction] = [Fraction(0)]
_Gd_prefix: dict[int, list[Fraction]] = {}


def selberg_normalizer(x: int) -> Fraction:
    """G(x) = sum of 1/phi(m) over squarefree m <= x."""
    if x < 0:
        raise ValueError("normalizer needs x >= 0")
    _ensure_tables(max(x, 1))
    while len(_G_prefix) <= x:
        m = len(_G_prefix)
        step = Fraction(1, int(_phi[m])) if _mu[m] != 0 else Fraction(0)
        _G_prefix.append(_G_prefix[-1] + step)
    return _G_prefix[x]


def coprime_normalizer(d: int, x: int) -> Fraction:
    """G_d(x): the same sum restricted to m coprime to d."""
    if x < 0:
        raise ValueError("normalizer needs x >= 0")
    if d == 1:
        return selberg_normalizer(x)
    _ensure_tables(max(x, 1))
    lst = _Gd_prefix.setdefault(d, [Fraction(0)])
    while len(lst) <= x:
        m = len(lst)
        keep = _mu[m] != 0 and math.gcd(m, d) == 1
        lst.append(lst[-1] + (Fraction(1, int(_phi[m])) if keep else Fraction(0)))
    return lst[x]


@dataclass(frozen=True)
class SelbergWeights:
    """Classical optimal weights lambda_d for squarefree d <= R.

    entries holds (d, lambda_d) in ascending d; G is the normalizing
    sum the weights were divided by.
    """

    R: int
    entries: tuple[tuple[int, Fraction], ...]
    G: Fraction

    @cached_property
    def lam(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def weight(self, d: int) -> Fraction:
        """lambda_d, zero off the support (non-squarefree or d > R)."""
        if d < 1:
            raise ValueError("weight index must be >= 1")
        return self.lam.get(d, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.entries)

    def l1_norm(self) -> Fraction:
        return sum((abs(l) for _, l in self.entries), Fraction(0))

    @cached_property
    def float_entries(self) -> tuple[tuple[int, float], ...]:
        return tuple((d, float(l)) for d, l in self.entries)


@lru_cache(maxsize=128)
def selberg_weights(R: int) -> SelbergWeights:
    """lambda_d = mu(d) * (d/phi(d)) * G_d(R/d) / G(R), exact."""
    if R < 2:
        raise ValueError("weights need R >= 2")
    G = selberg_normalizer(R)
    entries = []
    for d in range(1, R + 1):
        if _mu[d] == 0:
            continue
        lam = int(_mu[d]) * Fraction(d, int(_phi[d])) * coprime_normalizer(d, R // d) / G
        entries.append((d, lam))
    return SelbergWeights(R=R, entries=tuple(entries), G=G)


def one_star_g(n: int, w: SelbergWeights) -> Fraction:
    """(1 * lambda)(n): sum of lambda_d over divisors d of n."""
    if n < 1:
        raise ValueError("argument must be >= 1")
    total = Fraction(0)
    for d, lam in w.entries:
        if d > n:
            break
        if n % d == 0:
            total += lam
    return total


def f_value(n: int, w: SelbergWeights) -> Fraction:
    """f(n) = ((1 * lambda)(n))^2, the nonnegative sieve majorant."""
    return one_star_g(n, w) ** 2


@lru_cache(maxsize=128)
def _pair_tables(R: int) -> tuple[tuple[tuple[int, Fraction], ...], tuple[tuple[int, int], ...]]:
    """Pairs (d1, d2) grouped by L = lcm: exact sum of lambda*lambda per L,
    and the bare pair count per L (used by the proof-chain bound)."""
    entries = selberg_weights(R).entries
    coeff: dict[int, Fraction] = {}
    count: dict[int, int] = {}
    k = len(entries)
    for i in range(k):
        d1, l1 = entries[i]
        coeff[d1] = coeff.get(d1, Fraction(0)) + l1 * l1
        count[d1] = count.get(d1, 0) + 1
        for j in range(i + 1, k):
            d2, l2 = entries[j]
            L = math.lcm(d1, d2)
            coeff[L] = coeff.get(L, Fraction(0)) + 2 * l1 * l2
            count[L] = count.get(L, 0) + 2
    ls = sorted(coeff)
    return tuple((L, coeff[L]) for L in ls), tuple((L, count[L]) for L in ls)


def pair_sum_bound(N: int, R: int) -> float:
    """The target bound N/log R + R^2."""
    return N / math.log(R) + R * R


def _require_range(N: int, R: int) -> None:
    if N <= R * R:
        raise ValueError("need R^2 < N")


def f_sum(N: int, w: SelbergWeights) -> Fraction:
    """sum_{n<=N} f(n), evaluated in the dual order over lcm classes."""
    _require_range(N, w.R)
    coeff, _ = _pair_tables(w.R)
    return sum((c * (N // L) for L, c in coeff), Fraction(0))


def f_sum_direct(N: int, w: SelbergWeights) -> Fraction:
    """sum_{n<=N} f(n) by accumulating divisor sums per n; oracle order."""
    _require_range(N, w.R)
    acc = [Fraction(0)] * (N + 1)
    for d, lam in w.entries:
        for m in range(d, N + 1, d):
            acc[m] += lam
    return sum((v * v for v in acc[1:]), Fraction(0))


def weighted_char_sum(chi: characters.DirichletCharacter, N: int, w: SelbergWeights) -> complex:
    """S = sum_{n<=N} f(n) chi(n), via lcm classes and periodic partial sums."""
    _require_range(N, w.R)
    coeff, _ = _pair_tables(w.R)
    total = 0j
    for L, c in coeff:
        val = characters.evaluate(chi, L)
        if val.zero:
            continue
        total += float(c) * val.to_complex() * characters.partial_sum(chi, N // L)
    return total


def weighted_char_sum_direct(
    chi: characters.DirichletCharacter, N: int, w: SelbergWeights
) -> complex:
    """Same sum by the per-n order; kept as the cross-check oracle."""
    _require_range(N, w.R)
    acc = np.zeros(N + 1)
    for d, lam in w.float_entries:
        acc[d::d] += lam
    vals = characters.char_values(chi)
    n = np.arange(N + 1)
    return complex(np.dot(acc[1:] ** 2, vals[n[1:] % chi.group.modulus]))


def proof_chain_bound(chi: characters.DirichletCharacter, N: int, w: SelbergWeights) -> float:
    """sum over squarefree pairs d1,d2 <= R of |sum_{n <= N/[d1,d2]} chi(n)|.

    Dominates |weighted_char_sum| since every |lambda| <= 1.
    """
    _require_range(N, w.R)
    _, count = _pair_tables(w.R)
    return sum(m * abs(characters.partial_sum(chi, N // L)) for L, m in count)


def batched_weighted_char_sums(
    group: characters.CharacterGroup, N: int, w: SelbergWeights
) -> np.ndarray:
    """weighted_char_sum for every character mod q at once (table order)."""
    _require_range(N, w.R)
    coeff, _ = _pair_tables(w.R)
    table = characters.value_table(group)
    q = group.modulus
    out = np.zeros(group.phi, dtype=np.complex128)
    for L, c in coeff:
        out += float(c) * table[:, L % q] * characters.partial_sum_table(group, N // L)
    return out


def batched_proof_chain_bounds(
    group: characters.CharacterGroup, N: int, w: SelbergWeights
) -> np.ndarray:
    """proof_chain_bound for every character mod q at once (table order)."""
    _require_range(N, w.R)
    _, count = _pair_tables(w.R)
    out = np.zeros(group.phi)
    for L, m in count:
        out += m * np.abs(characters.partial_sum_table(group, N // L))
    return out


@dataclass(frozen=True)
class SmoothingParams:
    """Gaussian log-scale weight exp(-log^2(n/N)) with a hard truncation.

    The weight drops below truncation_eps exactly past
    N * exp(sqrt(ln(1/eps))), so n_max cuts the tail at size eps.
    """

    N: int
    truncation_eps: float = 1e-12

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("scale must be >= 1")
        if not 0 < self.truncation_eps < 1:
            raise ValueError("truncation_eps must lie in (0, 1)")

    @property
    def n_max(self) -> int:
        return math.ceil(self.N * math.exp(math.sqrt(math.log(1.0 / self.truncation_eps))))


def smoothing_weight(n: int, params: SmoothingParams) -> float:
    """exp(-log^2(n/N)); w(1) is included, however tiny."""
    if n < 1:
        raise ValueError("argument must be >= 1")
    return math.exp(-math.log(n / params.N) ** 2)


_CHUNK = 1 << 20


def _smoothed_inner(vals: np.ndarray, q: int, L: int, N: int, m_max: int) -> complex:
    """sum_{m<=m_max} chi(m) * exp(-log^2(L m / N)) with chi given by period."""
    shift = math.log(L) - math.log(N)
    total = 0j
    for start in range(1, m_max + 1, _CHUNK):
        stop = min(start + _CHUNK, m_max + 1)
        m = np.arange(start, stop)
        weight = np.exp(-((np.log(m) + shift) ** 2))
        total += complex(np.dot(vals[m % q], weight))
    return total


def smoothed_char_sum(
    chi: characters.DirichletCharacter, params: SmoothingParams, w: SelbergWeights
) -> complex:
    """sum_{n<=n_max} f(n) chi(n) exp(-log^2(n/N)), via lcm classes."""
    coeff, _ = _pair_tables(w.R)
    vals = characters.char_values(chi)
    q = chi.group.modulus
    total = 0j
    for L, c in coeff:
        chi_L = vals[L % q]
        if chi_L == 0:
            continue
        m_max = params.n_max // L
        if m_max == 0:
            continue
        total += float(c) * chi_L * _smoothed_inner(vals, q, L, params.N, m_max)
    return total


def smoothed_char_sum_direct(
    chi: characters.DirichletCharacter, params: SmoothingParams, w: SelbergWeights
) -> complex:
    """Same smoothed sum by the per-n order; cross-check oracle."""
    n_max = params.n_max
    acc = np.zeros(n_max + 1)
    for d, lam in w.float_entries:
        acc[d::d] += lam
    vals = characters.char_values(chi)
    q = chi.group.modulus
    total = 0j
    for start in range(1, n_max + 1, _CHUNK):
        stop = min(start + _CHUNK, n_max + 1)
        n = np.arange(start, stop)
        weight = np.exp(-(np.log(n / params.N) ** 2))
        total += complex(np.dot(acc[start:stop] ** 2 * weight, vals[n % q]))
    return total


def burgess_normalized_ratio(chi: characters.DirichletCharacter, x: int, k: int) -> float:
    """|sum_{n<=x} chi(n)| / (x^(1-1/k) q^((k+1)/(4k^2))).

    Diagnostic only: the Burgess constant is ineffective, so no verdict
    is attached.  k >= 4 demands cubefree modulus.
    """
    if chi.is_principal:
        raise ValueError("ratio is defined for nonprincipal characters")
    if x < 1:
        raise ValueError("need x >= 1")
    if k < 2:
        raise ValueError("Burgess exponent k must be >= 2")
    q = chi.group.modulus
    if k >= 4 and not arith.is_cubefree(q):
        raise ValueError("k >= 4 requires a cubefree modulus")
    norm = x ** (1.0 - 1.0 / k) * q ** ((k + 1) / (4.0 * k * k))
    return abs(characters.partial_sum(chi, x)) / norm


def gram_matrix(R: int) -> tuple[tuple[int, ...], list[list[Fraction]]]:
    """Support (d_1, ..., d_m) and the exact form matrix A_ij = 1/lcm(d_i, d_j).

    This is the N -> infinity density of the pair sum: (1/N) sum_{n<=N}
    (sum_{d|n} lambda_d)^2 -> lambda^T A lambda.
    """
    if R < 2:
        raise ValueError("need R >= 2")
    support = selberg_weights(R).support
    a = [
        [Fraction(1, math.lcm(d1, d2)) for d2 in support]
        for d1 in support
    ]
    return support, a


def _solve_fraction_system(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination with row pivoting on nonzero entries."""
    m = len(b)
    aug = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return [aug[r][m] for r in range(m)]


def minimal_quadratic_weights(R: int) -> tuple[dict[int, Fraction], Fraction]:
    """Minimize lambda^T A lambda over lambda_1 = 1 by exact stationarity.

    Returns the minimizing weights and the minimum value; the latter
    equals 1/G(R) for the exact form.
    """
    support, a = gram_matrix(R)
    m = len(support)
    if m == 1:
        return {1: Fraction(1)}, a[0][0]
    sub = [[a[i][j] for j in range(1, m)] for i in range(1, m)]
    rhs = [-a[i][0] for i in range(1, m)]
    tail = _solve_fraction_system(sub, rhs)
    lam = [Fraction(1)] + tail
    value = sum(lam[i] * a[i][j] * lam[j] for i in range(m) for j in range(m))
    return dict(zip(support, lam)), value
