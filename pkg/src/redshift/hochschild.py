"""Hochschild homology of free graded-commutative algebras.

``hh_closed_form`` is the Hochschild-Kostant-Rosenberg answer used as the
Boekstedt E^2-term.  ``hh_bar_oracle`` recomputes bigraded dimensions from
the cyclic bar complex by brute force, as an independent check.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import (SIGMA_OF, AlgebraSpec, BigradedProfile, ContractViolation,
                      Family, Kind, Monomial, ResourceError, Window, basis_cap,
                      bigraded_profile, make_generator,
                      enumerate_basis, family_run, monomial_product)


def hh_closed_form(spec: AlgebraSpec) -> AlgebraSpec:
    """P(x) -> P(x) (x) E(sx), E(y) -> E(y) (x) Gamma(sy), with the
    suspension classes in Hochschild degree 1."""
    fams = []
    sigmas = []
    for fam in spec.families:
        if fam.kind not in (Kind.POLYNOMIAL, Kind.EXTERIOR):
            raise ContractViolation(
                f"hh_closed_form only handles polynomial and exterior factors, got {fam.describe()}")
        if (fam.s or 0) != 0:
            raise ContractViolation("input generators must sit in filtration 0")
        sfam = SIGMA_OF.get(fam.family)
        if sfam is None:
            raise ContractViolation(f"no suspension family for {fam.family.stem}")
        fams.append(fam)
        kind = Kind.EXTERIOR if fam.kind is Kind.POLYNOMIAL else Kind.DIVIDED
        sigmas.append(family_run(kind, sfam, fam.start, fam.stop, s=1))
    name = f"HH({spec.label()})" if spec.families else "Fp"
    return AlgebraSpec(spec.prime, tuple(fams + sigmas), name=name)


def _tuples(by_degree: dict[int, list[Monomial]], length: int, t: int):
    """All length-``length`` tuples of basis monomials with degree sum ``t``."""
    degs = [d for d in sorted(by_degree) if by_degree[d]]

    def rec(k: int, left: int):
        if k == 1:
            for m in by_degree.get(left, ()):
                yield (m,)
            return
        for d in degs:
            if d > left:
                break
            for m in by_degree[d]:
                for rest in rec(k - 1, left - d):
                    yield (m,) + rest

    yield from rec(length, t)


def _bar_basis(by_degree, s: int, t: int, cap: int) -> list[tuple[Monomial, ...]]:
    out = list(_tuples(by_degree, s + 1, t))
    if len(out) > cap:
        raise ResourceError(f"bar complex C_{s} in degree {t} has {len(out)} > {cap} terms")
    return out


def bar_differential(source: list[tuple[Monomial, ...]], target: list[tuple[Monomial, ...]],
                     p: int) -> np.ndarray:
    """Matrix of b: A^{(s+1)} -> A^{(s)}.

    b = sum_{i<s} (-1)^i d_i + (-1)^s d_s, where d_i multiplies a_i a_{i+1}
    and d_s moves a_s to the front with its Koszul sign.
    """
    index = {x: i for i, x in enumerate(target)}
    mat = np.zeros((len(target), len(source)), dtype=np.int64)
    for col, chain in enumerate(source):
        s = len(chain) - 1
        for i in range(s):
            prod = monomial_product(chain[i], chain[i + 1], p)
            if prod is None:
                continue
            c, m = prod
            face = chain[:i] + (m,) + chain[i + 2:]
            sign = -1 if i % 2 else 1
            mat[index[face], col] += sign * c
        last = chain[-1]
        prod = monomial_product(last, chain[0], p)
        if prod is not None:
            c, m = prod
            moved = sum(x.degree for x in chain[:-1])
            sign = -1 if (s + last.degree * moved) % 2 else 1
            face = (m,) + chain[1:-1]
            mat[index[face], col] += sign * c
    return mat % p


def hh_bar_oracle(spec: AlgebraSpec, s_max: int = 4, t_max: int = 40,
                  total_max: int | None = None, cap: int | None = None,
                  check_square: bool = True) -> BigradedProfile:
    """Bigraded dimensions of HH_{s,t}(spec) for s <= s_max, t <= t_max.

    The chains in internal degree t only involve basis elements of degree
    <= t, so the finite basis of ``spec`` through ``t_max`` gives the exact
    answer for every bidegree computed.
    """
    cap = basis_cap() if cap is None else cap
    if spec.has_laurent:
        raise ContractViolation("bar oracle needs a connective spec")
    p = spec.p
    by_degree = enumerate_basis(spec, 0, t_max)
    dims: dict[tuple[int, int], int] = {}
    for t in range(0, t_max + 1):
        s_top = s_max if total_max is None else min(s_max, total_max - t)
        if s_top < 0:
            continue
        bases = [_bar_basis(by_degree, s, t, cap) for s in range(0, s_top + 2)]
        ranks = [0]
        prev = None
        for s in range(1, s_top + 2):
            mat = bar_differential(bases[s], bases[s - 1], p)
            if check_square and prev is not None and mat.size and prev.size:
                if np.any((prev @ mat) % p):
                    raise AssertionError(f"b o b != 0 in bar complex at ({s}, {t})")
            ranks.append(linalg.rank(mat, p) if mat.size else 0)
            prev = mat
        for s in range(0, s_top + 1):
            d = len(bases[s]) - ranks[s] - ranks[s + 1]
            if d:
                dims[(s, t)] = d
    return BigradedProfile.of(dims)


def closed_form_profile(spec: AlgebraSpec, s_max: int = 4, t_max: int = 40,
                        total_max: int | None = None) -> BigradedProfile:
    hh = hh_closed_form(spec)
    return bigraded_profile(hh, Window(0, s_max, 0, t_max, total_max))


def monogenic_factors(p: int, max_degree: int = 40) -> list[AlgebraSpec]:
    """Every monogenic factor P(xi_k), E(tau_k) of A* with degree <= max_degree."""
    out = []
    k = 1
    while make_generator(p, Family.XI_BAR, k).degree <= max_degree:
        out.append(AlgebraSpec(p, (family_run(Kind.POLYNOMIAL, Family.XI_BAR, k, k),)))
        k += 1
    k = 0
    while make_generator(p, Family.TAU_BAR, k).degree <= max_degree:
        out.append(AlgebraSpec(p, (family_run(Kind.EXTERIOR, Family.TAU_BAR, k, k),)))
        k += 1
    return out
