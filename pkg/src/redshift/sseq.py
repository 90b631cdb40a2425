"""Bigraded multiplicative spectral sequences over F_p.

Pages hold an ordered basis of labelled classes per bidegree ``(s, t)``
(homological indexing, d^r : (s, t) -> (s - r, t + r - 1)).  Differentials
are dense F_p matrices, one per source bidegree.  Bidegrees whose in- or
outgoing differential leaves the window are flagged edge-indeterminate and
excluded from every comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .algebra import (AlgebraSpec, BigradedProfile, ContractViolation, Element,
                      Factor, Kind, Monomial, SeriesProfile, Window,
                      bigraded_profile, enumerate_bigraded, leibniz, power_rule)
from .reports import Report

Bidegree = tuple[int, int]


class DifferentialSquareError(AssertionError):
    """d^r o d^r is nonzero on a page."""


class DegreeError(AssertionError):
    """A differential assignment is not bidegree-homogeneous."""


@dataclass(frozen=True)
class PageClass:
    label: str
    element: Element
    provenance: tuple[str, ...] = ()


@dataclass(frozen=True)
class BigradedPage:
    r: int
    spec: AlgebraSpec
    window: Window
    classes: Mapping[Bidegree, tuple[PageClass, ...]]
    diff: Mapping[Bidegree, np.ndarray] = field(default_factory=dict)
    edge: frozenset = frozenset()
    name: str = ""

    @property
    def p(self) -> int:
        return self.spec.p

    def dim(self, s: int, t: int) -> int:
        return len(self.classes.get((s, t), ()))

    def target(self, s: int, t: int) -> Bidegree:
        return s - self.r, t + self.r - 1

    def source(self, s: int, t: int) -> Bidegree:
        return s + self.r, t - self.r + 1

    def is_interior(self, s: int, t: int) -> bool:
        return self.window.contains(s, t) and (s, t) not in self.edge

    def profile(self, interior_only: bool = True) -> BigradedProfile:
        return BigradedProfile.of({
            bd: len(cl) for bd, cl in self.classes.items()
            if not interior_only or bd not in self.edge})

    def labels(self, s: int, t: int) -> list[str]:
        return [c.label for c in self.classes.get((s, t), ())]

    def find(self, label: str) -> tuple[Bidegree, int] | None:
        for bd, cl in self.classes.items():
            for i, c in enumerate(cl):
                if c.label == label:
                    return bd, i
        return None


def page_from_spec(spec: AlgebraSpec, window: Window, r: int, name: str = "",
                   cap: int | None = None) -> BigradedPage:
    """Page whose classes are the monomial basis of ``spec`` in ``window``."""
    basis = enumerate_bigraded(spec, window, cap)
    classes = {
        bd: tuple(PageClass(m.label(), Element(spec, {m: 1})) for m in ms)
        for bd, ms in basis.items()}
    return BigradedPage(r, spec, window, classes, name=name or spec.label())


@dataclass(frozen=True)
class DifferentialRule:
    """Generator-level d^r: images of blocks, extended by Leibniz.

    ``assignments`` maps ``(factor, 1)`` to the image of the generator, or
    ``(factor, j)`` to the image of gamma_j for a divided-power factor.
    Factors in ``cycles`` are d^r-cycles in every power.
    """

    r: int
    assignments: Mapping[tuple[Factor, int], Element]
    cycles: frozenset = frozenset()
    name: str = ""

    def block(self, f: Factor, e: int, spec: AlgebraSpec) -> Element:
        if f in self.cycles:
            return spec.zero()
        if f.kind is Kind.DIVIDED:
            img = self.assignments.get((f, e))
            if img is None:
                raise ContractViolation(f"{self.name}: gamma_{e}({f.generator.name}) not covered")
            return img
        img = self.assignments.get((f, 1))
        if img is None:
            raise ContractViolation(f"{self.name}: {f.generator.name} not covered")
        return power_rule(spec, f, e, img)

    def apply(self, x: Element) -> Element:
        return leibniz(x, lambda f, e: self.block(f, e, x.spec))


def extend_leibniz(rule: DifferentialRule, page: BigradedPage) -> BigradedPage:
    """Populate d^r on every bidegree of ``page`` from ``rule``."""
    if rule.r != page.r:
        raise ContractViolation(f"rule is a d^{rule.r} but the page is E^{page.r}")
    p = page.p
    window = page.window
    diff: dict[Bidegree, np.ndarray] = {}
    edge = set(page.edge)
    index = {bd: {next(iter(c.element.terms)): i for i, c in enumerate(cl)}
             for bd, cl in page.classes.items()}
    for bd, cl in page.classes.items():
        tgt = page.target(*bd)
        src = page.source(*bd)
        if not window.determined(*src) or src in page.edge:
            edge.add(bd)
        if not window.determined(*tgt) or tgt in page.edge:
            edge.add(bd)
            continue
        tindex = index.get(tgt, {})
        mat = np.zeros((len(tindex), len(cl)), dtype=np.int64)
        for j, c in enumerate(cl):
            if len(c.element.terms) != 1:
                raise ContractViolation(f"class {c.label} is not a monomial")
            try:
                img = rule.apply(c.element)
            except ContractViolation as exc:
                raise ContractViolation(f"class {c.label} at {bd}: {exc}") from None
            for m, coef in img.terms.items():
                row = tindex.get(m)
                if row is None:
                    raise ContractViolation(
                        f"d^{page.r}({c.label}) has term {m.label()} outside the basis at {tgt}")
                mat[row, j] = coef
        diff[bd] = mat % p
    return replace(page, diff=diff, edge=frozenset(edge))


def check_square_zero(page: BigradedPage) -> int:
    """Assert d o d = 0 wherever two composable matrices exist; returns the
    number of composites checked."""
    p = page.p
    checked = 0
    for bd, mat in page.diff.items():
        mid = page.target(*bd)
        nxt = page.diff.get(mid)
        if nxt is None or mat.size == 0 or nxt.size == 0:
            continue
        comp = (nxt @ mat) % p
        checked += 1
        bad = np.nonzero(comp.any(axis=0))[0]
        if bad.size:
            label = page.classes[bd][int(bad[0])].label
            raise DifferentialSquareError(
                f"d^{page.r} o d^{page.r} != 0 on E^{page.r}: witness {label} at {bd}")
    return checked


def _combination(classes: tuple[PageClass, ...], vec: np.ndarray, spec: AlgebraSpec) -> PageClass:
    nz = [int(i) for i in np.nonzero(vec)[0]]
    if len(nz) == 1 and vec[nz[0]] == 1:
        c = classes[nz[0]]
        return PageClass(c.label, c.element, (c.label,))
    terms: dict[Monomial, int] = {}
    parts = []
    for i in nz:
        coef = int(vec[i])
        c = classes[i]
        parts.append(c.label if coef == 1 else f"{coef}*{c.label}")
        for m, v in c.element.terms.items():
            terms[m] = terms.get(m, 0) + coef * v
    return PageClass("[" + " + ".join(parts) + "]", Element(spec, terms),
                     tuple(classes[i].label for i in nz))


def homology_vectors(page: BigradedPage, bd: Bidegree) -> tuple[np.ndarray, np.ndarray]:
    """(kernel basis, image rows) at ``bd`` as row vectors over the classes."""
    n = page.dim(*bd)
    out = page.diff.get(bd)
    if out is None or out.shape[0] == 0:
        kernel = np.eye(n, dtype=np.int64)
    else:
        kernel = linalg.nullspace(out, page.p)
    inc = page.diff.get(page.source(*bd))
    if inc is None or inc.size == 0:
        image = np.zeros((0, n), dtype=np.int64)
    else:
        image = inc.T.copy()
    return kernel, image


def turn_page(page: BigradedPage, representatives: bool = True) -> BigradedPage:
    """E^{r+1} = ker d^r / im d^r per bidegree."""
    check_square_zero(page)
    p = page.p
    classes: dict[Bidegree, tuple[PageClass, ...]] = {}
    for bd, cl in page.classes.items():
        if bd in page.edge:
            classes[bd] = cl
            continue
        kernel, image = homology_vectors(page, bd)
        reps = linalg.complement(image, kernel, p)
        if len(reps) == 0:
            continue
        if representatives:
            classes[bd] = tuple(_combination(cl, v, page.spec) for v in reps)
        else:
            classes[bd] = tuple(PageClass(f"({bd[0]},{bd[1]})#{i}", page.spec.zero())
                                for i in range(len(reps)))
    return BigradedPage(page.r + 1, page.spec, page.window, classes, {},
                        page.edge, page.name)


def represents_nonzero(page: BigradedPage, bd: Bidegree, x: Element) -> bool:
    """True when ``x`` is a d^r-cycle at ``bd`` not in the image of d^r."""
    cl = page.classes.get(bd, ())
    index = {next(iter(c.element.terms)): i for i, c in enumerate(cl)}
    vec = np.zeros(len(cl), dtype=np.int64)
    for m, c in x.terms.items():
        if m not in index:
            raise ContractViolation(f"{m.label()} is not a class at {bd}")
        vec[index[m]] = c
    out = page.diff.get(bd)
    if out is not None and out.size and np.any((out @ vec) % page.p):
        return False
    _, image = homology_vectors(page, bd)
    return not linalg.in_span(image, vec, page.p)


def check_degree_homogeneity(rule: DifferentialRule) -> Report:
    """Every assignment must move bidegree by (-r, r-1)."""
    report = Report(f"degree homogeneity of {rule.name or f'd^{rule.r}'}")
    for (f, j), img in sorted(rule.assignments.items(), key=lambda kv: kv[0]):
        g = f.generator
        src = (g.s * j, g.t * j)
        want = (src[0] - rule.r, src[1] + rule.r - 1)
        for m in img.terms:
            if m.bidegree != want:
                raise DegreeError(
                    f"{rule.name}: image term {m.label()} of {g.name}"
                    f"{'' if j == 1 else f'[{j}]'} sits at {m.bidegree}, expected {want}")
        if img.terms:
            name = g.name if f.kind is not Kind.DIVIDED else f"g({j},{g.name})"
            report.add(f"{name} {src} -> {img} {want}", True,
                       f"total {sum(src)} -> {sum(want)}")
    return report


@dataclass
class ProfileComparison:
    matched: bool
    compared: int
    first_mismatch: tuple | None = None
    computed: int | None = None
    expected: int | None = None
    unit: str = "degrees"

    def detail(self) -> str:
        if self.matched:
            return f"{self.compared} {self.unit} compared"
        return (f"first mismatch at {self.first_mismatch}: computed {self.computed}, "
                f"expected {self.expected}")


def compare_profiles(page: BigradedPage, expected, window: Window | None = None,
                     degrees: Iterable[int] | None = None) -> ProfileComparison:
    """Compare the interior of ``page`` with a spec, bigraded profile, or (for
    a SeriesProfile) total-degree counts over ``degrees``."""
    window = window or page.window
    if isinstance(expected, SeriesProfile):
        got = page.profile().total(expected.start, expected.stop)
        degs = list(degrees) if degrees is not None else range(expected.start, expected.stop + 1)
        n = 0
        for d in degs:
            n += 1
            if got[d] != expected[d]:
                return ProfileComparison(False, n, (d,), got[d], expected[d])
        return ProfileComparison(True, n)
    if isinstance(expected, AlgebraSpec):
        expected = bigraded_profile(expected, window)
    want = expected.as_dict()
    got = page.profile().as_dict()
    keys = sorted({k for k in set(want) | set(got)
                   if window.contains(*k) and page.is_interior(*k)})
    for k in keys:
        if got.get(k, 0) != want.get(k, 0):
            return ProfileComparison(False, len(keys), k, got.get(k, 0), want.get(k, 0),
                                     "bidegrees")
    return ProfileComparison(True, len(keys), unit="bidegrees")


def reachability(dims: Mapping[Bidegree, int], r_values: Iterable[int],
                 interior=lambda s, t: True) -> list[tuple[int, Bidegree, Bidegree]]:
    """All (r, source, target) with nonzero source and target dimensions."""
    out = []
    for r in r_values:
        for (s, t), d in sorted(dims.items()):
            if not d or not interior(s, t):
                continue
            tgt = (s - r, t + r - 1)
            if dims.get(tgt, 0) and interior(*tgt):
                out.append((r, (s, t), tgt))
    return out


def euler_lines(page: BigradedPage, r: int) -> dict[int, int]:
    """Alternating sums sum (-1)^(s+t) dim E_{s,t} along each line
    (r-1)s + rt = const that lies entirely in the determined interior.

    d^r maps each such line to itself and lowers total degree by one, so
    these sums are invariant under turning the page."""
    w = page.window
    out: dict[int, int] = {}
    if w.s_floor is None or w.t_floor is None:
        return out
    phis = {(r - 1) * s + r * t for (s, t) in page.classes}
    for phi in sorted(phis):
        total = 0
        closed = True
        # points with s >= s_floor and t >= t_floor lie between these s bounds
        s_hi = (phi - r * w.t_floor) // (r - 1) if r > 1 else w.s_max
        for s in range(w.s_floor, s_hi + 1):
            num = phi - (r - 1) * s
            if num % r:
                continue
            t = num // r
            if t < w.t_floor:
                continue
            if not page.is_interior(s, t):
                closed = False
                break
            total += (-1) ** (s + t) * page.dim(s, t)
        if closed:
            out[phi] = total
    return out


def page_records(page: BigradedPage) -> dict:
    """Machine-readable dump: class and differential records."""
    classes = []
    for (s, t), cl in sorted(page.classes.items()):
        for c in cl:
            classes.append({"s": s, "t": t, "label": c.label,
                            "provenance": list(c.provenance),
                            "edge": (s, t) in page.edge})
    diffs = []
    for (s, t), mat in sorted(page.diff.items()):
        tgt = page.target(s, t)
        src_cl = page.classes[(s, t)]
        tgt_cl = page.classes.get(tgt, ())
        rows, cols = np.nonzero(mat)
        for i, j in sorted(zip(rows.tolist(), cols.tolist()), key=lambda rc: (rc[1], rc[0])):
            diffs.append({"r": page.r, "source": src_cl[j].label, "source_bidegree": [s, t],
                          "target": tgt_cl[i].label, "target_bidegree": list(tgt),
                          "coefficient": int(mat[i, j])})
    return {"schema": "redshift/page-dump/1", "name": page.name, "page": page.r,
            "prime": page.p, "classes": classes, "differentials": diffs}
