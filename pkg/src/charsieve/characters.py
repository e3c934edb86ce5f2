"""Exact Dirichlet character groups modulo q.

The unit group (Z/qZ)* is split into cyclic components with explicit
generators: one component per odd prime power (via a primitive root),
none for 2, one of order 2 for 4, and two (orders 2 and 2^(e-2), from -1
and 5) for 2^e with e >= 3, all lifted to modulus q by CRT.  A discrete
log table over those generators turns every character evaluation into a
dot product on exponent vectors; values are exact fractions of a full
turn, and floats appear only where sums are accumulated.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import arith

__all__ = [
    "CharacterGroup",
    "DirichletCharacter",
    "UnitRootValue",
    "character_group",
    "enumerate_characters",
    "evaluate",
    "conductor",
    "is_primitive",
    "char_order",
    "product",
    "conjugate",
    "induce",
    "primitive_character",
    "partial_sum",
    "pv_ratio",
    "pi_chi",
    "char_values",
    "value_table",
    "max_abs_partial_sums",
    "partial_sum_table",
    "prime_class_counts",
]


def _primitive_root_mod_odd_prime_power(p: int, e: int) -> int:
    """Smallest primitive root mod p, adjusted so it also generates mod p^e."""
    phi_p = p - 1
    prime_divs = [f for f, _ in arith.factorize(phi_p).factors]
    g = next(
        g for g in range(2, p + 1) if all(pow(g, phi_p // f, p) != 1 for f in prime_divs)
    )
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _crt_pair(a1: int, m1: int, a2: int, m2: int) -> int:
    """x with x = a1 (mod m1), x = a2 (mod m2); moduli coprime."""
    if m1 == 1:
        return a2 % m2 if m2 > 1 else 0
    if m2 == 1:
        return a1 % m1
    inv = pow(m1, -1, m2)
    return (a1 + m1 * ((a2 - a1) * inv % m2)) % (m1 * m2)


def _unit_components(q: int) -> list[tuple[int, int]]:
    """(generator mod q, order) pairs, one per cyclic factor of (Z/qZ)*."""
    comps: list[tuple[int, int]] = []
    for p, e in arith.factorize(q).factors:
        pe = p**e
        rest = q // pe
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                comps.append((_crt_pair(3, pe, 1, rest), 2))
            else:
                comps.append((_crt_pair(pe - 1, pe, 1, rest), 2))
                comps.append((_crt_pair(5, pe, 1, rest), 2 ** (e - 2)))
        else:
            g = _primitive_root_mod_odd_prime_power(p, e)
            comps.append((_crt_pair(g, pe, 1, rest), (p - 1) * p ** (e - 1)))
    return comps


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    """Full dual group of (Z/qZ)* with a precomputed discrete-log table."""

    modulus: int
    components: tuple[tuple[int, int], ...]
    dlog_table: dict[int, tuple[int, ...]]
    group_exponent: int
    phi: int
    # scaled_dlog[i, n] = dlog_i(n) * (group_exponent // order_i) for unit
    # residues n, 0 elsewhere; lets a character value at n be read off as
    # roots[(exponents . scaled_dlog[:, n]) mod group_exponent].
    scaled_dlog: np.ndarray
    unit_mask: np.ndarray
    roots: np.ndarray

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CharacterGroup) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("CharacterGroup", self.modulus))

    def __repr__(self) -> str:
        orders = tuple(o for _, o in self.components)
        return f"CharacterGroup(q={self.modulus}, orders={orders})"

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.components)

    def unit_residues(self) -> list[int]:
        return sorted(self.dlog_table)


@lru_cache(maxsize=512)
def character_group(q: int) -> CharacterGroup:
    """Build the character group mod q with its discrete-log table."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    comps = _unit_components(q)
    orders = [o for _, o in comps]
    phi = math.prod(orders)
    exponent = math.lcm(*orders) if orders else 1

    table: dict[int, tuple[int, ...]] = {1 % q: ()}
    for g, order in comps:
        grown: dict[int, tuple[int, ...]] = {}
        gj = 1
        for j in range(order):
            for r, vec in table.items():
                grown[r * gj % q] = vec + (j,)
            gj = gj * g % q
        table = grown
    if len(table) != phi:
        raise AssertionError(f"discrete log table size {len(table)} != phi({q}) = {phi}")

    k = len(comps)
    scaled = np.zeros((k, q), dtype=np.int64)
    mask = np.zeros(q, dtype=bool)
    for r, vec in table.items():
        mask[r] = True
        for i, (v, o) in enumerate(zip(vec, orders)):
            scaled[i, r] = v * (exponent // o)
    angles = 2.0 * np.pi * np.arange(exponent) / exponent
    re, im = np.cos(angles), np.sin(angles)
    # snap the representable values: quarter-turn roots come out exact,
    # so full-period sums of real and quartic characters cancel to 0.0
    re[np.abs(re) < 1e-15] = 0.0
    im[np.abs(im) < 1e-15] = 0.0
    roots = re + 1j * im
    return CharacterGroup(
        modulus=q,
        components=tuple(comps),
        dlog_table=table,
        group_exponent=exponent,
        phi=phi,
        scaled_dlog=scaled,
        unit_mask=mask,
        roots=roots,
    )


@dataclass(frozen=True)
class UnitRootValue:
    """Exact character value: zero, or e(turns) with turns a reduced fraction."""

    zero: bool
    turns: Fraction

    @classmethod
    def zero_value(cls) -> "UnitRootValue":
        return cls(zero=True, turns=Fraction(0))

    @classmethod
    def from_exponent(cls, num: int, den: int) -> "UnitRootValue":
        return cls(zero=False, turns=Fraction(num % den, den))

    @property
    def numerator(self) -> int:
        return self.turns.numerator

    @property
    def denominator(self) -> int:
        return self.turns.denominator

    _QUARTER_TURNS = {
        Fraction(0): 1 + 0j,
        Fraction(1, 4): 1j,
        Fraction(1, 2): -1 + 0j,
        Fraction(3, 4): -1j,
    }

    def to_complex(self) -> complex:
        if self.zero:
            return 0j
        exact = self._QUARTER_TURNS.get(self.turns)
        if exact is not None:
            return exact
        return cmath.exp(2j * cmath.pi * float(self.turns))

    def __complex__(self) -> complex:
        return self.to_complex()


@dataclass(frozen=True)
class DirichletCharacter:
    """Character as an exponent vector over the group's generators."""

    group: CharacterGroup
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = self.group.orders
        if len(self.exponents) != len(orders):
            raise ValueError("exponent vector length does not match group")
        if any(not 0 <= e < o for e, o in zip(self.exponents, orders)):
            raise ValueError("exponents out of range for component orders")

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"


def enumerate_characters(group: CharacterGroup) -> list[DirichletCharacter]:
    """All phi(q) characters; the principal character comes first."""
    return [
        DirichletCharacter(group, exps)
        for exps in itertools.product(*(range(o) for o in group.orders))
    ]


def char_index(chi: DirichletCharacter) -> int:
    """Position of chi in enumerate_characters order."""
    idx = 0
    for e, o in zip(chi.exponents, chi.group.orders):
        idx = idx * o + e
    return idx


def scaled_exponent(chi: DirichletCharacter, n: int) -> int | None:
    """Exponent k with chi(n) = e(k / group_exponent), or None if chi(n) = 0."""
    if n < 1:
        raise ValueError("character argument must be >= 1")
    g = chi.group
    vec = g.dlog_table.get(n % g.modulus)
    if vec is None:
        return None
    e_tot = g.group_exponent
    k = 0
    for e, v, o in zip(chi.exponents, vec, g.orders):
        k += e * v * (e_tot // o)
    return k % e_tot


def evaluate(chi: DirichletCharacter, n: int) -> UnitRootValue:
    """chi(n) as an exact root of unity (zero when gcd(n, q) > 1)."""
    k = scaled_exponent(chi, n)
    if k is None:
        return UnitRootValue.zero_value()
    return UnitRootValue.from_exponent(k, chi.group.group_exponent)


def char_values(chi: DirichletCharacter) -> np.ndarray:
    """One period of chi as a complex array indexed by residue 0..q-1."""
    g = chi.group
    if not g.components:
        vals = np.zeros(g.modulus, dtype=np.complex128)
        vals[g.unit_mask] = 1.0
        return vals
    exps = np.asarray(chi.exponents, dtype=np.int64)
    k = (exps @ g.scaled_dlog) % g.group_exponent
    vals = g.roots[k].copy()
    vals[~g.unit_mask] = 0.0
    return vals


@lru_cache(maxsize=8)
def value_table(group: CharacterGroup) -> np.ndarray:
    """All characters evaluated over one period: shape (phi(q), q).

    Rows follow enumerate_characters order.  Bounded cache: tables are
    rebuilt cheaply when a sweep revisits a modulus.
    """
    if not group.components:
        table = np.zeros((1, group.modulus), dtype=np.complex128)
        table[0, group.unit_mask] = 1.0
        return table
    combos = np.array(
        list(itertools.product(*(range(o) for o in group.orders))), dtype=np.int64
    )
    k = (combos @ group.scaled_dlog) % group.group_exponent
    table = group.roots[k]
    table[:, ~group.unit_mask] = 0.0
    table.setflags(write=False)
    return table


def conductor(chi: DirichletCharacter) -> int:
    """Least d | q with chi trivial on every unit n = 1 (mod d)."""
    return _conductor_cached(chi)


@lru_cache(maxsize=None)
def _conductor_cached(chi: DirichletCharacter) -> int:
    q = chi.group.modulus
    for d in arith.divisors(q):
        ok = True
        for n in range(1 + d, q + 1, d):
            k = scaled_exponent(chi, n)
            if k is not None and k != 0:
                ok = False
                break
        if ok:
            return d
    raise AssertionError("conductor search fell through")  # d = q always passes


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.group.modulus


def char_order(chi: DirichletCharacter) -> int:
    """Least m >= 1 with chi^m principal."""
    orders = chi.group.orders
    return math.lcm(*(o // math.gcd(e, o) for e, o in zip(chi.exponents, orders))) if orders else 1


def induce(chi: DirichletCharacter, modulus: int) -> DirichletCharacter:
    """Lift chi mod q to the character mod `modulus` agreeing on units."""
    q = chi.group.modulus
    if modulus % q != 0:
        raise ValueError("target modulus must be a multiple of the character modulus")
    if modulus == q:
        return chi
    target = character_group(modulus)
    exps = []
    for g, o in target.components:
        val = evaluate(chi, g)
        if val.zero:
            raise AssertionError("generator of the larger group is not a unit mod q")
        e = val.turns * o
        if e.denominator != 1:
            raise AssertionError("lifted exponent is not integral")
        exps.append(int(e) % o)
    return DirichletCharacter(target, tuple(exps))


def primitive_character(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character (to the conductor) inducing chi."""
    q = chi.group.modulus
    f = conductor(chi)
    if f == q:
        return chi
    target = character_group(f)
    # Residues mod f are represented by units mod q: kill the primes of q
    # that do not divide f via CRT.
    extra = 1
    for p, _ in arith.factorize(q).factors:
        if f % p != 0:
            extra *= p
    exps = []
    for g, o in target.components:
        n = _crt_pair(g, f, 1, extra) if extra > 1 else g
        val = evaluate(chi, n)
        if val.zero:
            raise AssertionError("CRT representative is not a unit mod q")
        e = val.turns * o
        if e.denominator != 1:
            raise AssertionError("descended exponent is not integral")
        exps.append(int(e) % o)
    return DirichletCharacter(target, tuple(exps))


def product(chi1: DirichletCharacter, chi2: DirichletCharacter) -> DirichletCharacter:
    """Pointwise product, lifted to modulus lcm(q1, q2)."""
    m = math.lcm(chi1.group.modulus, chi2.group.modulus)
    a = induce(chi1, m)
    b = induce(chi2, m)
    orders = a.group.orders
    exps = tuple((x + y) % o for x, y, o in zip(a.exponents, b.exponents, orders))
    return DirichletCharacter(a.group, exps)


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    exps = tuple((-e) % o for e, o in zip(chi.exponents, chi.group.orders))
    return DirichletCharacter(chi.group, exps)


@lru_cache(maxsize=512)
def _period_prefix(chi: DirichletCharacter) -> np.ndarray:
    """prefix[j] = sum_{n<=j} chi(n) for 0 <= j <= q."""
    vals = char_values(chi)
    prefix = np.zeros(chi.group.modulus + 1, dtype=np.complex128)
    q = chi.group.modulus
    # Column n of char_values is chi(n mod q); n runs 1..q here, and
    # chi(q) = chi(0 mod q).
    seq = np.concatenate([vals[1:], vals[:1]])
    prefix[1:] = np.cumsum(seq)
    # full-period orthogonality is exact; do not let rounding residue
    # get multiplied by x/q later
    prefix[q] = 0.0 if not chi.is_principal else float(chi.group.phi)
    prefix.setflags(write=False)
    return prefix


def partial_sum(chi: DirichletCharacter, x: int) -> complex:
    """Sum of chi(n) for 1 <= n <= x (x = 0 gives 0)."""
    if x < 0:
        raise ValueError("partial_sum requires x >= 0")
    q = chi.group.modulus
    prefix = _period_prefix(chi)
    full, rem = divmod(x, q)
    return complex(full * prefix[q] + prefix[rem])


def pv_ratio(chi: DirichletCharacter) -> float:
    """max_x |sum_{n<=x} chi(n)| normalized by sqrt(q) log q."""
    if chi.is_principal:
        raise ValueError("ratio is defined for nonprincipal characters only")
    q = chi.group.modulus
    prefix = _period_prefix(chi)
    peak = float(np.max(np.abs(prefix[1:])))
    return peak / (math.sqrt(q) * math.log(q))


def max_abs_partial_sums(group: CharacterGroup) -> np.ndarray:
    """max_{1<=x<=q} |sum_{n<=x} chi(n)| for every character, table order."""
    table = value_table(group)
    q = group.modulus
    if q == 1:
        return np.ones(1)
    seq = np.concatenate([table[:, 1:], table[:, :1]], axis=1)
    return np.max(np.abs(np.cumsum(seq, axis=1)), axis=1)


@lru_cache(maxsize=8)
def _table_prefix(group: CharacterGroup) -> np.ndarray:
    """Row i: partial sums of character i over one period, shape (phi, q+1)."""
    table = value_table(group)
    q = group.modulus
    prefix = np.zeros((group.phi, q + 1), dtype=np.complex128)
    seq = np.concatenate([table[:, 1:], table[:, :1]], axis=1)
    prefix[:, 1:] = np.cumsum(seq, axis=1)
    # exact period totals: phi(q) for the principal row, 0 elsewhere
    prefix[:, q] = 0.0
    prefix[0, q] = float(group.phi)
    prefix.setflags(write=False)
    return prefix


def partial_sum_table(group: CharacterGroup, x: int) -> np.ndarray:
    """sum_{n<=x} chi(n) for every character at once, enumeration order."""
    if x < 0:
        raise ValueError("partial_sum_table requires x >= 0")
    prefix = _table_prefix(group)
    full, rem = divmod(x, group.modulus)
    return full * prefix[:, group.modulus] + prefix[:, rem]


@lru_cache(maxsize=512)
def prime_class_counts(x: int, q: int) -> np.ndarray:
    """Counts of primes p <= x in each residue class mod q."""
    if x < 2:
        raise ValueError("prime cutoff must be >= 2")
    primes = arith.prime_array(x)
    counts = np.bincount(primes % q, minlength=q).astype(np.float64)
    counts.setflags(write=False)
    return counts


def pi_chi(x: int, chi: DirichletCharacter) -> complex:
    """Character-weighted prime count: sum of chi(p) over primes p <= x."""
    if x < 2:
        raise ValueError("prime cutoff must be >= 2")
    counts = prime_class_counts(x, chi.group.modulus)
    return complex(np.dot(char_values(chi), counts))
