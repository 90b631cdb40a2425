"""Free graded-commutative algebras over F_p described by generator lists.

An :class:`AlgebraSpec` is a tensor product of monogenic factors
(polynomial, exterior, divided power, truncated polynomial, Laurent).
Generator families may be infinite; only the indices whose degree fits a
requested window are ever materialised.

Every generator carries a bidegree ``(s, t)``: ``s`` is the spectral-sequence
filtration (Hochschild degree, or the Tate column) and ``t`` the internal
degree.  The total degree ``s + t`` drives Koszul signs.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

DEFAULT_BASIS_CAP = 10**7


class ContractViolation(ValueError):
    """An operation was called outside its documented preconditions."""


class ResourceError(RuntimeError):
    """A computation would exceed the configured size cap."""


def basis_cap() -> int:
    env = os.environ.get("REDSHIFT_MAX_BASIS")
    return int(env) if env else DEFAULT_BASIS_CAP


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Prime(int):
    """An odd prime.  ``Prime(2)`` is rejected."""

    def __new__(cls, p):
        value = int(p)
        if value == 2:
            raise ContractViolation("p = 2 is not supported; odd primes only")
        if not _is_prime(value):
            raise ContractViolation(f"{value} is not a prime")
        return super().__new__(cls, value)


def binom_mod(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return result


class Family(enum.IntEnum):
    """Generator families.  The declaration order is the factor order used in
    canonical monomials."""

    TATE_T = 0
    XI_BAR = 1
    XI_POW = 2  # the p-th power class xi_k^p, used as a generator in closed forms
    TAU_BAR = 3
    TAU_PRIME = 4
    SIGMA_XI_BAR = 5
    SIGMA_TAU_BAR = 6
    NU = 7
    MILNOR_Q = 8
    ADAMS_V = 9
    GENERIC = 10  # index is the degree
    SIGMA_GENERIC = 11  # index is the degree of the unsuspended class

    def degree(self, p: int, k: int) -> int:
        """Topological (total) degree of the k-th generator."""
        if self is Family.TATE_T:
            return -2
        if self is Family.XI_BAR:
            return 2 * (p**k - 1)
        if self is Family.XI_POW:
            return 2 * p * (p**k - 1)
        if self in (Family.TAU_BAR, Family.TAU_PRIME, Family.SIGMA_XI_BAR,
                    Family.MILNOR_Q, Family.ADAMS_V):
            return 2 * p**k - 1
        if self is Family.SIGMA_TAU_BAR:
            return 2 * p**k
        if self is Family.NU:
            return 2 * (p - 1) * (p**k - 1) + 2 * p**k - 1
        if self is Family.GENERIC:
            return k
        return k + 1

    @property
    def stem(self) -> str:
        return _NAMES[self]


_NAMES = {
    Family.TATE_T: "t",
    Family.XI_BAR: "xi",
    Family.XI_POW: "xip",
    Family.TAU_BAR: "tau",
    Family.TAU_PRIME: "tau'",
    Family.SIGMA_XI_BAR: "s_xi",
    Family.SIGMA_TAU_BAR: "s_tau",
    Family.NU: "nu",
    Family.MILNOR_Q: "Q",
    Family.ADAMS_V: "v",
    Family.GENERIC: "x",
    Family.SIGMA_GENERIC: "s_x",
}

SIGMA_OF = {
    Family.XI_BAR: Family.SIGMA_XI_BAR,
    Family.TAU_BAR: Family.SIGMA_TAU_BAR,
    Family.GENERIC: Family.SIGMA_GENERIC,
}
# sigma-images known to vanish: sigma-classes (sigma^2 = 0), t, and the
# E_3 closed-form generators xi^p and xi^{p-1} s_xi.
SIGMA_ZERO = frozenset({Family.SIGMA_XI_BAR, Family.SIGMA_TAU_BAR,
                        Family.SIGMA_GENERIC, Family.TATE_T, Family.XI_POW,
                        Family.NU})


class Generator(NamedTuple):
    family: Family
    index: int
    t: int
    s: int

    @property
    def degree(self) -> int:
        return self.s + self.t

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def name(self) -> str:
        if self.family is Family.TATE_T:
            return "t"
        return f"{self.family.stem}({self.index})"


def make_generator(p: int, family: Family, index: int, s: int | None = None) -> Generator:
    if s is None:
        s = -2 if family is Family.TATE_T else 0
    deg = family.degree(p, index)
    return Generator(family, index, deg - s, s)


class Kind(enum.IntEnum):
    POLYNOMIAL = 0
    EXTERIOR = 1
    DIVIDED = 2
    TRUNCATED = 3
    LAURENT = 4


_KIND_TAGS = {Kind.POLYNOMIAL: "P", Kind.EXTERIOR: "E", Kind.DIVIDED: "Gamma",
              Kind.LAURENT: "L"}


class Factor(NamedTuple):
    generator: Generator
    kind: Kind
    height: int = 0  # only for TRUNCATED

    @property
    def odd(self) -> bool:
        return self.kind is Kind.EXTERIOR

    def check(self) -> "Factor":
        g = self.generator
        if self.kind is Kind.EXTERIOR and not g.odd:
            raise ContractViolation(f"exterior factor on even generator {g.name}")
        if self.kind is not Kind.EXTERIOR and g.odd:
            raise ContractViolation(f"{self.kind.name.lower()} factor on odd generator {g.name}")
        if self.kind is Kind.TRUNCATED and self.height < 2:
            raise ContractViolation("truncation height must be at least 2")
        if self.kind is Kind.LAURENT and g.t != 0:
            raise ContractViolation("Laurent factors need internal degree 0")
        return self


@dataclass(frozen=True)
class FactorFamily:
    """An indexed run of factors ``kind(family_k | start <= k <= stop)``.

    ``stop=None`` means the run is infinite; degrees grow with the index so
    only finitely many fit any bounded window.
    """

    kind: Kind
    family: Family
    start: int
    stop: int | None = None
    s: int | None = None
    height: int = 0

    def factor(self, p: int, k: int) -> Factor:
        g = make_generator(p, self.family, k, self.s)
        return Factor(g, self.kind, self.height).check()

    def covers(self, k: int) -> bool:
        return k >= self.start and (self.stop is None or k <= self.stop)

    def materialize(self, p: int, t_max: int) -> list[Factor]:
        out = []
        k = self.start
        while self.stop is None or k <= self.stop:
            f = self.factor(p, k)
            if f.generator.t > t_max and self.kind is not Kind.LAURENT:
                break
            out.append(f)
            if self.kind is Kind.LAURENT:
                break
            k += 1
        return out

    def describe(self) -> str:
        tag = f"P_{self.height}" if self.kind is Kind.TRUNCATED else _KIND_TAGS[self.kind]
        name = self.family.stem
        if self.family is Family.TATE_T:
            return "L(t)" if self.kind is Kind.LAURENT else f"{tag}(t)"
        if self.stop == self.start:
            rng = f"{self.start}"
        elif self.stop is None:
            rng = f"{self.start}.."
        else:
            rng = f"{self.start}..{self.stop}"
        return f"{tag}({name}({rng}))"


def family_run(kind: Kind, family: Family, start: int, stop: int | None = None,
               s: int | None = None, height: int = 0) -> FactorFamily:
    return FactorFamily(kind, family, start, stop, s, height)


@dataclass(frozen=True)
class AlgebraSpec:
    prime: Prime
    families: tuple[FactorFamily, ...]
    # Registered multiplicative extensions: (s_tau_k)^p = s_tau_{k+1} for
    # k >= extension_base, and their Bockstein images s_xi_{k+1} vanish.
    extension_base: int | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "prime", Prime(self.prime))
        seen: dict[tuple[Family, int | None], FactorFamily] = {}
        for fam in self.families:
            for other in seen.values():
                if other.family is fam.family and _overlap(other, fam):
                    raise ContractViolation(
                        f"generator family {fam.family.stem} listed twice")
            seen[(fam.family, fam.start)] = fam
            # construct one factor to validate kind/parity
            fam.factor(self.prime, fam.start)

    @property
    def p(self) -> int:
        return int(self.prime)

    @property
    def has_laurent(self) -> bool:
        return any(f.kind is Kind.LAURENT for f in self.families)

    def tensor(self, other: "AlgebraSpec", name: str = "") -> "AlgebraSpec":
        if other.prime != self.prime:
            raise ContractViolation("tensor of specs over different primes")
        base = self.extension_base if other.extension_base is None else other.extension_base
        return AlgebraSpec(self.prime, self.families + other.families, base,
                           name or f"{self.label()} (x) {other.label()}")

    def label(self) -> str:
        if self.name:
            return self.name
        return " (x) ".join(f.describe() for f in self.families) or "Fp"

    @lru_cache(maxsize=64)
    def materialize(self, t_max: int) -> tuple[Factor, ...]:
        out = []
        for fam in self.families:
            out.extend(fam.materialize(self.p, t_max))
        return tuple(sorted(out))

    def find(self, family: Family, index: int) -> Factor | None:
        for fam in self.families:
            if fam.family is family and fam.covers(index):
                return fam.factor(self.p, index)
        return None

    # element constructors -------------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {Monomial(): 1})

    def gen(self, family: Family, index: int = 0, power: int = 1) -> "Element":
        f = self.find(family, index)
        if f is None:
            raise ContractViolation(
                f"{make_generator(self.p, family, index).name} is not a generator of {self.label()}")
        return self.monomial({f: power})

    def monomial(self, exponents: Mapping[Factor, int], coeff: int = 1) -> "Element":
        m = Monomial.build(exponents)
        if m is None:
            return self.zero()
        return Element(self, {m: coeff})


def _overlap(a: FactorFamily, b: FactorFamily) -> bool:
    lo = max(a.start, b.start)
    hi_a = float("inf") if a.stop is None else a.stop
    hi_b = float("inf") if b.stop is None else b.stop
    return lo <= min(hi_a, hi_b)


class Monomial(tuple):
    """Canonical monomial: sorted tuple of ``(Factor, exponent)`` pairs with
    nonzero exponents.  For a divided-power factor the exponent is the index
    j of gamma_j."""

    __slots__ = ()

    @staticmethod
    def build(exponents: Mapping[Factor, int]) -> "Monomial | None":
        items = []
        for f, e in sorted(exponents.items()):
            if e == 0:
                continue
            if f.kind is Kind.EXTERIOR and e > 1:
                return None
            if f.kind is Kind.TRUNCATED and e >= f.height:
                return None
            if e < 0 and f.kind is not Kind.LAURENT:
                raise ContractViolation(f"negative exponent on {f.generator.name}")
            items.append((f, e))
        return Monomial(items)

    @property
    def bidegree(self) -> tuple[int, int]:
        s = t = 0
        for f, e in self:
            s += f.generator.s * e
            t += f.generator.t * e
        return s, t

    @property
    def degree(self) -> int:
        s, t = self.bidegree
        return s + t

    def exponent(self, factor: Factor) -> int:
        for f, e in self:
            if f == factor:
                return e
        return 0

    def label(self) -> str:
        if not self:
            return "1"
        parts = []
        for f, e in self:
            name = f.generator.name
            if f.generator.family is Family.XI_POW:
                name = f"{Family.XI_BAR.stem}({f.generator.index})^p"
            if f.kind is Kind.DIVIDED:
                parts.append(name if e == 1 else f"g({e},{name})")
            elif e == 1:
                parts.append(name)
            else:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Monomial({self.label()})"


def monomial_product(a: Monomial, b: Monomial, p: int) -> tuple[int, Monomial] | None:
    """Product of canonical monomials: ``(coefficient, monomial)`` or None when
    the product vanishes.  The coefficient carries the Koszul sign and any
    divided-power binomial."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    la, lb = len(a), len(b)
    i = j = 0
    odd_left = sum(1 for f, _ in a if f.kind is Kind.EXTERIOR)
    sign = 0
    coeff = 1
    out = []
    while i < la and j < lb:
        fa, ea = a[i]
        fb, eb = b[j]
        if fa < fb:
            out.append(a[i])
            if fa.kind is Kind.EXTERIOR:
                odd_left -= 1
            i += 1
        elif fb < fa:
            if fb.kind is Kind.EXTERIOR:
                sign += odd_left
            out.append(b[j])
            j += 1
        else:
            kind = fa.kind
            if kind is Kind.EXTERIOR:
                return None
            e = ea + eb
            if kind is Kind.TRUNCATED and e >= fa.height:
                return None
            if kind is Kind.DIVIDED:
                coeff = coeff * binom_mod(e, ea, p) % p
                if coeff == 0:
                    return None
            if e != 0:
                out.append((fa, e))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    if sign % 2:
        coeff = -coeff
    return coeff % p, Monomial(out)


class Element:
    """An F_p-linear combination of monomials of one AlgebraSpec."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebraSpec, terms: Mapping[Monomial, int]):
        p = spec.p
        self.spec = spec
        self.terms = {m: c % p for m, c in terms.items() if c % p}

    @property
    def p(self) -> int:
        return self.spec.p

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Element"):
        if self.spec != other.spec:
            raise ContractViolation("elements of different algebra specs")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(self.spec, terms)

    def __neg__(self) -> "Element":
        return Element(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: int) -> "Element":
        return Element(self.spec, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "Element":
        if e < 0:
            raise ContractViolation("negative power of an element")
        out = self.spec.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Element):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: (kv[0].degree, kv[0]))

    def homogeneous_bidegree(self) -> tuple[int, int] | None:
        degs = {m.bidegree for m in self.terms}
        if len(degs) > 1:
            raise ContractViolation(f"inhomogeneous element {self}")
        return degs.pop() if degs else None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            lab = m.label()
            if c == 1:
                parts.append(lab)
            elif lab == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{lab}")
        return " + ".join(parts)

    __repr__ = __str__


def multiply(a: Element, b: Element) -> Element:
    a._check(b)
    p = a.p
    terms: dict[Monomial, int] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            prod = monomial_product(ma, mb, p)
            if prod is None:
                continue
            c, m = prod
            terms[m] = (terms.get(m, 0) + c * ca * cb) % p
    return Element(a.spec, terms)


def map_generators(x: Element, image: Callable[[Factor], Element], target: AlgebraSpec) -> Element:
    """Apply the algebra map determined by ``image`` on generators.

    Divided-power factors are only carried across unchanged (``image`` must
    return the same factor in ``target``)."""
    out = target.zero()
    for m, c in x.terms.items():
        term = target.one().scale(c)
        for f, e in m:
            img = image(f)
            if f.kind is Kind.DIVIDED:
                (mono, _), = img.terms.items()
                (g, _), = mono
                term = term * target.monomial({g: e})
            elif e < 0:
                raise ContractViolation("cannot map negative Laurent powers")
            else:
                term = term * img**e
        out = out + term
    return out


# enumeration ---------------------------------------------------------------


def _exponent_range(f: Factor, budget_t: int) -> range:
    t = f.generator.t
    if f.kind is Kind.EXTERIOR:
        return range(0, 2 if t <= budget_t else 1)
    top = budget_t // t
    if f.kind is Kind.TRUNCATED:
        top = min(top, f.height - 1)
    return range(0, top + 1)


def _enumerate_free(factors: tuple[Factor, ...], t_max: int, cap: int,
                    total_max: int | None = None) -> list[tuple[tuple[int, int], Monomial]]:
    """All monomials in the non-Laurent factors with internal degree <= t_max."""
    out: list[tuple[tuple[int, int], Monomial]] = []
    n = len(factors)
    items: list[tuple[Factor, int]] = []

    def rec(i: int, t_left: int, s_acc: int, t_acc: int):
        if i == n:
            if total_max is not None and s_acc + t_acc > total_max:
                return
            out.append(((s_acc, t_acc), Monomial(items)))
            if len(out) > cap:
                raise ResourceError(f"basis exceeds the cap of {cap} monomials")
            return
        f = factors[i]
        g = f.generator
        for e in _exponent_range(f, t_left):
            if total_max is not None and s_acc + t_acc + e * g.degree > total_max:
                break
            if e:
                items.append((f, e))
            rec(i + 1, t_left - e * g.t, s_acc + e * g.s, t_acc + e * g.t)
            if e:
                items.pop()

    rec(0, t_max, 0, 0)
    return out


@dataclass(frozen=True)
class Window:
    """A finite region of bidegrees ``(s, t)``.

    Bidegrees outside the window with ``s < s_floor`` or ``t < t_floor`` are
    known to be empty; anything else outside is unknown.
    """

    s_min: int
    s_max: int
    t_min: int
    t_max: int
    total_max: int | None = None
    s_floor: int | None = 0
    t_floor: int | None = 0

    def contains(self, s: int, t: int) -> bool:
        return (self.s_min <= s <= self.s_max and self.t_min <= t <= self.t_max
                and (self.total_max is None or s + t <= self.total_max))

    def known_empty(self, s: int, t: int) -> bool:
        return ((self.s_floor is not None and s < self.s_floor)
                or (self.t_floor is not None and t < self.t_floor))

    def determined(self, s: int, t: int) -> bool:
        return self.contains(s, t) or self.known_empty(s, t)

    @property
    def empty(self) -> bool:
        return (self.s_min > self.s_max or self.t_min > self.t_max
                or (self.total_max is not None and self.total_max < self.s_min + self.t_min))

    @staticmethod
    def first_quadrant(total_max: int) -> "Window":
        return Window(0, max(total_max, -1), 0, max(total_max, -1), total_max)


def enumerate_bigraded(spec: AlgebraSpec, window: Window, cap: int | None = None
                       ) -> dict[tuple[int, int], list[Monomial]]:
    """Monomial basis of every bidegree of ``window``, each list sorted."""
    cap = basis_cap() if cap is None else cap
    if window.empty:
        return {}
    factors = spec.materialize(window.t_max)
    laurent = [f for f in factors if f.kind is Kind.LAURENT]
    free = tuple(f for f in factors if f.kind is not Kind.LAURENT)
    if len(laurent) > 1:
        raise ContractViolation("at most one Laurent factor is supported")
    total_cap = None if laurent else window.total_max
    rest = _enumerate_free(free, window.t_max, cap, total_cap)
    out: dict[tuple[int, int], list[Monomial]] = {}
    count = 0
    if not laurent:
        for (s, t), m in rest:
            if window.contains(s, t):
                out.setdefault((s, t), []).append(m)
    else:
        lf = laurent[0]
        step = lf.generator.s
        if step >= 0:
            raise ContractViolation("Laurent generator must have negative filtration")
        rest_s = [bd[0] for bd, _ in rest]
        lo_rest, hi_rest = min(rest_s), max(rest_s)
        # s = step * i + s_rest must land in [s_min, s_max]
        i_lo = -((window.s_max - lo_rest) // (-step))
        i_hi = (hi_rest - window.s_min) // (-step)
        for i in range(i_lo, i_hi + 1):
            for (s, t), m in rest:
                s2 = s + step * i
                if not window.contains(s2, t):
                    continue
                if i:
                    m = monomial_product(Monomial([(lf, i)]), m, spec.p)[1]
                out.setdefault((s2, t), []).append(m)
                count += 1
                if count > cap:
                    raise ResourceError(f"basis exceeds the cap of {cap} monomials")
    for key in out:
        out[key].sort()
    return dict(sorted(out.items()))


def enumerate_basis(spec: AlgebraSpec, lo: int, hi: int, cap: int | None = None
                    ) -> dict[int, list[Monomial]]:
    """Monomial basis of each total degree ``lo..hi``, deterministic order."""
    if hi is None or lo is None or hi == float("inf") or lo == float("-inf"):
        raise ContractViolation("degree window must be finite")
    if spec.has_laurent:
        raise ContractViolation("Laurent specs need a bigraded window; use enumerate_bigraded")
    if lo < 0:
        raise ContractViolation("degree window must start at 0 or above")
    out: dict[int, list[Monomial]] = {d: [] for d in range(lo, hi + 1)}
    if hi < lo:
        return {}
    cap = basis_cap() if cap is None else cap
    factors = spec.materialize(hi)
    for (s, t), m in _enumerate_free(factors, hi, cap, total_max=hi):
        if lo <= s + t <= hi:
            out[s + t].append(m)
    for d in out:
        out[d].sort()
    return out


@dataclass(frozen=True)
class SeriesProfile:
    """Coefficients ``c_d`` of a Hilbert series for ``start <= d``."""

    coeffs: tuple[int, ...]
    start: int = 0

    def __getitem__(self, d: int) -> int:
        i = d - self.start
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def stop(self) -> int:
        return self.start + len(self.coeffs) - 1

    def convolve(self, other: "SeriesProfile", up_to: int | None = None) -> "SeriesProfile":
        start = self.start + other.start
        stop = self.stop + other.stop if up_to is None else up_to
        out = [0] * max(stop - start + 1, 0)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= len(out):
                    break
                out[k] += a * b
        return SeriesProfile(tuple(out), start)

    def truncate(self, up_to: int) -> "SeriesProfile":
        return SeriesProfile(tuple(self[d] for d in range(self.start, up_to + 1)), self.start)

    def first_mismatch(self, other: "SeriesProfile", lo: int, hi: int) -> int | None:
        for d in range(lo, hi + 1):
            if self[d] != other[d]:
                return d
        return None

    @staticmethod
    def monomial(degree: int, up_to: int) -> "SeriesProfile":
        return SeriesProfile(tuple(1 if d == degree else 0 for d in range(up_to + 1)))


def hilbert_series(spec: AlgebraSpec, up_to: int, lo: int = 0,
                   laurent_range: tuple[int, int] | None = None) -> SeriesProfile:
    """Degreewise basis dimensions.  Laurent specs count ``t^i x`` only for
    ``i`` in ``laurent_range`` over the two-sided degree window ``lo..up_to``."""
    if not spec.has_laurent:
        basis = enumerate_basis(spec, lo, up_to)
        return SeriesProfile(tuple(len(basis[d]) for d in range(lo, up_to + 1)), lo)
    if laurent_range is None:
        raise ContractViolation("Laurent specs need an explicit laurent_range")
    i_lo, i_hi = laurent_range
    lf = next(f for f in spec.materialize(0) if f.kind is Kind.LAURENT)
    step = lf.generator.degree
    free = AlgebraSpec(spec.prime, tuple(f for f in spec.families if f.kind is not Kind.LAURENT))
    top = max(up_to - step * i_lo, up_to - step * i_hi)
    base = hilbert_series(free, top)
    out = [0] * (up_to - lo + 1)
    for i in range(i_lo, i_hi + 1):
        for d in range(lo, up_to + 1):
            out[d - lo] += base[d - step * i]
    return SeriesProfile(tuple(out), lo)


def basis_index(monomials: Iterable[Monomial]) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials)}


def iter_atoms(m: Monomial) -> Iterator[tuple[Factor, int]]:
    yield from m


# suspension ------------------------------------------------------------------


def sigma_image(spec: AlgebraSpec, factor: Factor) -> Element:
    """sigma of a single generator inside ``spec``."""
    g = factor.generator
    if factor.kind is Kind.DIVIDED or g.family in SIGMA_ZERO:
        return spec.zero()
    fam = SIGMA_OF.get(g.family)
    if fam is None:
        raise ContractViolation(f"no sigma-image declared for {g.name}")
    target = spec.find(fam, g.index)
    if target is not None:
        return spec.monomial({target: 1})
    base = spec.extension_base
    if base is not None and g.index > base:
        if fam is Family.SIGMA_XI_BAR:
            # Bockstein image of a p-th power
            return spec.zero()
        if fam is Family.SIGMA_TAU_BAR:
            root = spec.find(Family.SIGMA_TAU_BAR, base)
            if root is not None:
                return spec.monomial({root: spec.p ** (g.index - base)})
    raise ContractViolation(
        f"sigma({g.name}) = {Family(fam).stem}({g.index}) is not available in {spec.label()}")


def leibniz(x: Element, block_image: Callable[[Factor, int], Element]) -> Element:
    """Extend an odd derivation from factor powers to ``x``.

    ``block_image(f, e)`` gives the image of the block ``f^e`` (or of gamma_e
    for divided-power factors).  Signs follow d(ab) = d(a) b + (-1)^{|a|} a d(b).
    """
    spec = x.spec
    p = spec.p
    out: dict[Monomial, int] = {}
    for m, c in x.terms.items():
        deg_prefix = 0
        for i, (f, e) in enumerate(m):
            img = block_image(f, e)
            if img.terms:
                prefix = Monomial(m[:i])
                suffix = Monomial(m[i + 1:])
                sign = -1 if deg_prefix % 2 else 1
                for mi, ci in img.terms.items():
                    left = monomial_product(prefix, mi, p)
                    if left is None:
                        continue
                    right = monomial_product(left[1], suffix, p)
                    if right is None:
                        continue
                    coef = sign * c * ci * left[0] * right[0]
                    out[right[1]] = (out.get(right[1], 0) + coef) % p
            deg_prefix += f.generator.degree * e
    return Element(spec, out)


def power_rule(spec: AlgebraSpec, f: Factor, e: int, image: Element) -> Element:
    """Image of f^e under a derivation sending f to ``image``."""
    if image.is_zero() or e == 0:
        return spec.zero()
    if f.kind is Kind.EXTERIOR:
        return image
    rest = spec.monomial({f: e - 1}) if e - 1 else spec.one()
    return (rest * image).scale(e)


def derivation_sigma(x: Element) -> Element:
    """The suspension derivation sigma on ``x``."""
    spec = x.spec

    def block(f: Factor, e: int) -> Element:
        if f.kind is Kind.DIVIDED:
            return spec.zero()
        return power_rule(spec, f, e, sigma_image(spec, f))

    return leibniz(x, block)


@dataclass(frozen=True)
class BigradedProfile:
    """Dimensions per bidegree; absent bidegrees have dimension 0."""

    dims: tuple[tuple[tuple[int, int], int], ...]

    @staticmethod
    def of(mapping: Mapping[tuple[int, int], int]) -> "BigradedProfile":
        return BigradedProfile(tuple(sorted((k, v) for k, v in mapping.items() if v)))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.dims)

    def __getitem__(self, bidegree: tuple[int, int]) -> int:
        return self.as_dict().get(bidegree, 0)

    def total(self, lo: int, hi: int) -> SeriesProfile:
        out = [0] * (hi - lo + 1)
        for (s, t), v in self.dims:
            if lo <= s + t <= hi:
                out[s + t - lo] += v
        return SeriesProfile(tuple(out), lo)

    def restrict(self, keep: Callable[[int, int], bool]) -> "BigradedProfile":
        return BigradedProfile(tuple((k, v) for k, v in self.dims if keep(*k)))


def bigraded_profile(spec: AlgebraSpec, window: Window, cap: int | None = None) -> BigradedProfile:
    """Basis dimensions of ``spec`` in every bidegree of ``window``.

    A Laurent factor is handled by shifting the profile of the remaining
    factors, so wide column ranges cost no more than one column."""
    if not spec.has_laurent:
        basis = enumerate_bigraded(spec, window, cap)
        return BigradedProfile.of({k: len(v) for k, v in basis.items()})
    lf = next(f for f in spec.materialize(0) if f.kind is Kind.LAURENT)
    step = lf.generator.s
    free = AlgebraSpec(spec.prime, tuple(f for f in spec.families if f.kind is not Kind.LAURENT))
    wide = Window(-10**9, 10**9, window.t_min, window.t_max)
    rest = bigraded_profile(free, wide, cap).dims
    out: dict[tuple[int, int], int] = {}
    s_vals = [s for (s, _), _ in rest]
    i_lo = -((window.s_max - min(s_vals)) // (-step))
    i_hi = (max(s_vals) - window.s_min) // (-step)
    for i in range(i_lo, i_hi + 1):
        for (s, t), v in rest:
            if window.contains(s + step * i, t):
                out[(s + step * i, t)] = out.get((s + step * i, t), 0) + v
    return BigradedProfile.of(out)
