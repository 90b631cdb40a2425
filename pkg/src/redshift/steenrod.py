"""Named algebras built from Milnor generators, and the degree-checked rule
table (Dyer-Lashof, Bockstein, multiplicative extension)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (AlgebraSpec, ContractViolation, Element, Factor, Family,
                      Kind, Prime, family_run, make_generator, map_generators)

MAX_HEIGHT = 4

P, E = Kind.POLYNOMIAL, Kind.EXTERIOR


class DegreeError(AssertionError):
    """A rule instance is not degree-homogeneous."""


def check_height(n: int, lowest: int = -1, max_height: int = MAX_HEIGHT) -> int:
    n = int(n)
    if n < lowest:
        raise ContractViolation(f"height n = {n} below {lowest}")
    if n > max_height:
        raise ContractViolation(f"height n = {n} above the configured maximum {max_height}")
    return n


def dual_steenrod(p: int) -> AlgebraSpec:
    """P(xi_k | k >= 1) (x) E(tau_k | k >= 0)."""
    return AlgebraSpec(Prime(p), (family_run(P, Family.XI_BAR, 1),
                                  family_run(E, Family.TAU_BAR, 0)), name="A*")


def homology_BPn(p: int, n: int) -> AlgebraSpec:
    """H_*(BP<n>) = P(xi_k | k >= 1) (x) E(tau_k | k >= n+1); n = -1 gives A*."""
    n = check_height(n)
    if n == -1:
        return dual_steenrod(p)
    return AlgebraSpec(Prime(p), (family_run(P, Family.XI_BAR, 1),
                                  family_run(E, Family.TAU_BAR, n + 1)), name=f"BP<{n}>")


def exterior_tau_low(p: int, n: int) -> AlgebraSpec:
    """E(tau_0, ..., tau_n), the complement of H_*(BP<n>) in A*."""
    fams = (family_run(E, Family.TAU_BAR, 0, n),) if n >= 0 else ()
    return AlgebraSpec(Prime(p), fams, name=f"E(tau(0..{n}))")


def thh_abutment(p: int, n: int) -> AlgebraSpec:
    """H_*(THH(BP<n>)) = H_*(BP<n>) (x) E(s_xi_1..s_xi_{n+1}) (x) P(s_tau_{n+1}),
    with the extensions (s_tau_k)^p = s_tau_{k+1} registered for k >= n+1."""
    n = check_height(n, lowest=0)
    base = homology_BPn(p, n)
    fams = base.families + (family_run(E, Family.SIGMA_XI_BAR, 1, n + 1),
                            family_run(P, Family.SIGMA_TAU_BAR, n + 1, n + 1))
    return AlgebraSpec(Prime(p), fams, extension_base=n + 1, name=f"THH(BP<{n}>)")


def free_sigma_algebra(p: int, n: int) -> AlgebraSpec:
    """H_*(BP<n>) (x) E(s_xi_k | k >= 1) (x) P(s_tau_k | k >= n+1) with no
    relations among the suspension classes."""
    n = check_height(n, lowest=0)
    base = homology_BPn(p, n)
    fams = base.families + (family_run(E, Family.SIGMA_XI_BAR, 1),
                            family_run(P, Family.SIGMA_TAU_BAR, n + 1))
    return AlgebraSpec(Prime(p), fams, name=f"free-sigma(BP<{n}>)")


def impose_extensions(x: Element, target: AlgebraSpec) -> Element:
    """Push ``x`` into ``target`` using the registered extensions:
    s_tau_k -> (s_tau_base)^(p^(k-base)) and s_xi_k -> 0 for k > base."""
    base = target.extension_base
    if base is None:
        raise ContractViolation(f"{target.label()} has no registered extensions")
    p = target.p

    def image(f: Factor) -> Element:
        g = f.generator
        direct = target.find(g.family, g.index)
        if direct is not None:
            return target.monomial({direct: 1})
        if g.family is Family.SIGMA_TAU_BAR and g.index > base:
            return target.gen(Family.SIGMA_TAU_BAR, base, p ** (g.index - base))
        if g.family is Family.SIGMA_XI_BAR and g.index > base:
            return target.zero()
        raise ContractViolation(f"{g.name} has no image in {target.label()}")

    return map_generators(x, image, target)


def sigma_tau_power(spec: AlgebraSpec, k: int, power: int) -> Element:
    """(s_tau_k)^power in ``spec``, rewriting through the extensions if s_tau_k
    is not itself a generator."""
    direct = spec.find(Family.SIGMA_TAU_BAR, k)
    if direct is not None:
        return spec.monomial({direct: power})
    base = spec.extension_base
    if base is None or k < base:
        raise ContractViolation(f"s_tau({k}) not available in {spec.label()}")
    return spec.gen(Family.SIGMA_TAU_BAR, base, power * spec.p ** (k - base))


def tau_prime(spec: AlgebraSpec, k: int) -> Element:
    """tau'_k = tau_k - tau_{k-1} (s_tau_{k-1})^(p-1)."""
    p = spec.p
    return (spec.gen(Family.TAU_BAR, k)
            - spec.gen(Family.TAU_BAR, k - 1) * sigma_tau_power(spec, k - 1, p - 1))


# rule table ----------------------------------------------------------------


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    source: str
    target: str
    source_degree: int
    target_degree: int
    expected_shift: int

    @property
    def ok(self) -> bool:
        return self.target_degree - self.source_degree == self.expected_shift

    def __str__(self) -> str:
        status = "ok" if self.ok else "VIOLATION"
        return (f"{self.rule}: {self.source} ({self.source_degree}) -> {self.target} "
                f"({self.target_degree}), shift {self.expected_shift:+d} {status}")


@dataclass(frozen=True)
class RuleTable:
    """Q^{p^k}(tau_k) = tau_{k+1}; beta(s_tau_{k+1}) = s_xi_{k+1};
    (s_tau_k)^p = s_tau_{k+1} for k >= n+1."""

    dyer_lashof: bool = True
    bockstein: bool = True
    mult_extension: bool = True

    def instances(self, p: int, n: int, max_degree: int) -> list[RuleInstance]:
        p = Prime(p)
        deg = lambda fam, k: make_generator(p, fam, k).degree  # noqa: E731
        out = []
        k = 0
        while deg(Family.TAU_BAR, k + 1) <= max_degree:
            if self.dyer_lashof:
                out.append(RuleInstance(
                    "dyer-lashof", f"Q^{p**k}(tau({k}))", f"tau({k + 1})",
                    deg(Family.TAU_BAR, k), deg(Family.TAU_BAR, k + 1),
                    2 * p**k * (p - 1)))
            k += 1
        k = n + 1
        while deg(Family.SIGMA_TAU_BAR, k + 1) <= max_degree:
            if self.bockstein:
                out.append(RuleInstance(
                    "bockstein", f"beta(s_tau({k + 1}))", f"s_xi({k + 1})",
                    deg(Family.SIGMA_TAU_BAR, k + 1), deg(Family.SIGMA_XI_BAR, k + 1), -1))
            if self.mult_extension:
                src = deg(Family.SIGMA_TAU_BAR, k)
                out.append(RuleInstance(
                    "mult-extension", f"s_tau({k})^{p}", f"s_tau({k + 1})",
                    src, deg(Family.SIGMA_TAU_BAR, k + 1), (p - 1) * src))
            k += 1
        return out


@dataclass
class RuleReport:
    instances: list[RuleInstance] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.ok for i in self.instances)

    def lines(self) -> list[str]:
        return [str(i) for i in self.instances]


def check_rule_degrees(table: RuleTable, p: int, n: int, max_degree: int) -> RuleReport:
    report = RuleReport(table.instances(p, n, max_degree))
    for inst in report.instances:
        if not inst.ok:
            raise DegreeError(f"rule {inst.rule} is not degree-homogeneous: {inst}")
    return report
