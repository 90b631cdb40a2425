"""Ext over exterior algebras E(Q_0, ..., Q_n) by minimal free resolution.

The resolution of the ground field is built one internal degree at a time;
new generators of F_s in degree t span a complement of im(d_s) inside
ker(d_{s-1}), so Ext^{s,t} is the number of generators of F_s in degree t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import linalg
from .algebra import ContractViolation, Prime, ResourceError, basis_cap
from .steenrod import check_height

Bidegree = tuple[int, int]


def q_degree(p: int, i: int) -> int:
    return 2 * p ** i - 1


def vn_wavelength(p: int, n: int) -> int:
    """Stem of v_n: 2p^n - 2."""
    if n < 0:
        raise ContractViolation("n must be >= 0")
    return 2 * p ** n - 2


class ExteriorAlgebra:
    """E(x_0, ..., x_m) on odd generators; basis elements are sorted index tuples."""

    def __init__(self, degrees: list[int], p: int):
        if any(d % 2 == 0 for d in degrees):
            raise ContractViolation("exterior generators must have odd degree")
        self.p = p
        self.degrees = tuple(degrees)
        self.basis = [c for k in range(len(degrees) + 1)
                      for c in combinations(range(len(degrees)), k)]
        self.deg = {S: sum(self.degrees[i] for i in S) for S in self.basis}

    def product(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
        """x_a x_b = sign x_{a u b}, or None when a and b meet."""
        if set(a) & set(b):
            return None
        inversions = sum(1 for i in a for j in b if i > j)
        return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@dataclass
class ExtTable:
    p: int
    degrees: tuple[int, ...]
    s_max: int
    t_max: int
    dims: dict[Bidegree, int] = field(default_factory=dict)

    def __getitem__(self, bd: Bidegree) -> int:
        return self.dims.get(bd, 0)

    def records(self) -> list[dict]:
        return [{"s": s, "t": t, "stem": t - s, "dim": d} for (s, t), d in sorted(self.dims.items())]

    def to_json(self, n: int | None = None) -> dict:
        return {"schema": "redshift/ext-chart/1", "prime": self.p, "height": n,
                "generator_degrees": list(self.degrees), "s_max": self.s_max,
                "t_max": self.t_max, "classes": self.records()}


class _Module:
    """A free E-module: generator degrees and the basis in each degree."""

    def __init__(self, alg: ExteriorAlgebra):
        self.alg = alg
        self.gen_degrees: list[int] = []
        self._basis: dict[int, list[tuple[tuple[int, ...], int]]] = {}

    def add_generator(self, degree: int) -> int:
        self.gen_degrees.append(degree)
        self._basis.clear()
        return len(self.gen_degrees) - 1

    def basis(self, t: int) -> list[tuple[tuple[int, ...], int]]:
        if t not in self._basis:
            self._basis[t] = [(S, g) for g, dg in enumerate(self.gen_degrees)
                              for S in self.alg.basis if self.alg.deg[S] + dg == t]
        return self._basis[t]


def _act(alg: ExteriorAlgebra, S, vec: dict, p: int) -> dict:
    """x_S * vec for vec a dict {(T, g): coef}."""
    out: dict = {}
    for (T, g), c in vec.items():
        prod = alg.product(S, T)
        if prod is None:
            continue
        sign, U = prod
        key = (U, g)
        out[key] = (out.get(key, 0) + sign * c) % p
    return {k: v for k, v in out.items() if v}


def ext_exterior(degrees: list[int], p: int, s_max: int, t_max: int,
                 cap: int | None = None) -> ExtTable:
    """Ext^{s,t}_{E(x_i)}(F_p, F_p) for s <= s_max, t <= t_max."""
    p = Prime(p)
    cap = basis_cap() if cap is None else cap
    alg = ExteriorAlgebra(list(degrees), p)
    table = ExtTable(p, tuple(degrees), s_max, t_max)
    if s_max < 0 or t_max < 0:
        return table
    mods = [_Module(alg) for _ in range(s_max + 1)]
    images: list[list[dict]] = [[] for _ in range(s_max + 1)]  # d(generator) in F_{s-1}
    mods[0].add_generator(0)
    images[0].append({})
    table.dims[(0, 0)] = 1

    def matrix(s: int, t: int) -> np.ndarray:
        """d_s : (F_s)_t -> (F_{s-1})_t; for s = 0 the augmentation."""
        src = mods[s].basis(t)
        if s == 0:
            mat = np.zeros((1 if t == 0 else 0, len(src)), dtype=np.int64)
            if t == 0:
                for j, (S, g) in enumerate(src):
                    if not S:
                        mat[0, j] = 1
            return mat
        tgt = mods[s - 1].basis(t)
        if len(src) * max(len(tgt), 1) > cap:
            raise ResourceError(f"resolution matrix at ({s}, {t}) exceeds the cap")
        index = {b: i for i, b in enumerate(tgt)}
        mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, (S, g) in enumerate(src):
            for key, c in _act(alg, S, images[s][g], p).items():
                mat[index[key], j] = c
        return mat

    for t in range(0, t_max + 1):
        for s in range(1, s_max + 1):
            prev = matrix(s - 1, t)
            kernel = linalg.nullspace(prev, p) if prev.shape[1] else np.zeros((0, 0), dtype=np.int64)
            if len(kernel) == 0:
                continue
            cur = matrix(s, t)
            image = cur.T.copy() if cur.size else np.zeros((0, kernel.shape[1]), dtype=np.int64)
            new = linalg.complement(image, kernel, p)
            tgt = mods[s - 1].basis(t)
            for vec in new:
                mods[s].add_generator(t)
                images[s].append({tgt[i]: int(v) for i, v in enumerate(vec) if v})
            if len(new):
                table.dims[(s, t)] = len(new)
    return table


def ext_minimal_resolution(p: int, n: int, s_max: int, t_max: int,
                           cap: int | None = None) -> ExtTable:
    """Ext over E(Q_0..Q_n), |Q_i| = 2p^i - 1."""
    n = check_height(n, lowest=0)
    return ext_exterior([q_degree(p, i) for i in range(n + 1)], p, s_max, t_max, cap)


def polynomial_counts(degrees: list[int], s_max: int, t_max: int) -> dict[Bidegree, int]:
    """Monomials of P(v_i) with v_i at (1, degrees[i]), by enumeration of exponent vectors."""
    out: dict[Bidegree, int] = {}

    def rec(i: int, s: int, t: int):
        if i == len(degrees):
            out[(s, t)] = out.get((s, t), 0) + 1
            return
        e = 0
        while s + e <= s_max and t + e * degrees[i] <= t_max:
            rec(i + 1, s + e, t + e * degrees[i])
            e += 1

    rec(0, 0, 0)
    return out


def adams_e2_oracle(p: int, n: int, s_max: int, t_max: int) -> dict[Bidegree, int]:
    """P(v_0, ..., v_n) with v_i at (1, 2p^i - 1)."""
    return polynomial_counts([q_degree(p, i) for i in range(n + 1)], s_max, t_max)


def convolve_tables(a: dict[Bidegree, int], b: dict[Bidegree, int], s_max: int,
                    t_max: int) -> dict[Bidegree, int]:
    out: dict[Bidegree, int] = {}
    for (s1, t1), d1 in a.items():
        for (s2, t2), d2 in b.items():
            s, t = s1 + s2, t1 + t2
            if s <= s_max and t <= t_max:
                out[(s, t)] = out.get((s, t), 0) + d1 * d2
    return out


def compare_tables(got: dict[Bidegree, int], want: dict[Bidegree, int],
                   keep=lambda s, t: True) -> Bidegree | None:
    for k in sorted(set(got) | set(want)):
        if keep(*k) and got.get(k, 0) != want.get(k, 0):
            return k
    return None
