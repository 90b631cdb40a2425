"""The Boekstedt spectral sequence HH_*(H_*(BP<n>)) => H_*(THH(BP<n>))."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (AlgebraSpec, Element, Family, Kind, Monomial, Prime,
                      Window, enumerate_basis, enumerate_bigraded, family_run,
                      hilbert_series)
from .hochschild import hh_closed_form
from .reports import Report
from .sseq import (BigradedPage, DifferentialRule, check_degree_homogeneity,
                   check_square_zero, compare_profiles, euler_lines,
                   extend_leibniz, page_from_spec, reachability,
                   represents_nonzero, turn_page)
from .steenrod import check_height, homology_BPn, thh_abutment


def default_max_degree(p: int, n: int) -> int:
    return 2 * p ** (n + 2)


def e2_spec(p: int, n: int) -> AlgebraSpec:
    spec = hh_closed_form(homology_BPn(p, n))
    return AlgebraSpec(spec.prime, spec.families, name=f"E2(BP<{n}>)")


def ep_spec(p: int, n: int) -> AlgebraSpec:
    """H_*(BP<n>) (x) E(s_xi_1..s_xi_{n+1}) (x) P_p(s_tau_k | k >= n+1), with the
    suspension classes in filtration 1."""
    base = homology_BPn(p, n)
    fams = base.families + (
        family_run(Kind.EXTERIOR, Family.SIGMA_XI_BAR, 1, n + 1, s=1),
        family_run(Kind.TRUNCATED, Family.SIGMA_TAU_BAR, n + 1, s=1, height=p))
    return AlgebraSpec(Prime(p), fams, name=f"Ep(BP<{n}>)")


def bokstedt_window(max_degree: int, s_max: int | None = None, t_max: int | None = None) -> Window:
    top = max(max_degree, -1)
    return Window(0, top if s_max is None else s_max, 0, top if t_max is None else t_max,
                  total_max=max_degree)


def bokstedt_rule(spec: AlgebraSpec, window: Window) -> DifferentialRule:
    """d^{p-1}(gamma_j s_tau_k) = s_xi_{k+1} gamma_{j-p} s_tau_k for j >= p (unit 1);
    every other generator is a d^{p-1}-cycle."""
    p = spec.p
    assignments: dict = {}
    cycles = set()
    for f in spec.materialize(window.t_max):
        if f.kind is not Kind.DIVIDED:
            cycles.add(f)
            continue
        g = f.generator
        k = g.index
        target = spec.find(Family.SIGMA_XI_BAR, k + 1)
        j = 1
        while j * g.t <= window.t_max and (window.total_max is None
                                            or j * g.degree <= window.total_max):
            if j < p:
                assignments[(f, j)] = spec.zero()
            else:
                img = {target: 1}
                if j > p:
                    img[f] = j - p
                assignments[(f, j)] = spec.monomial(img)
            j += 1
    return DifferentialRule(p - 1, assignments, frozenset(cycles), name=f"d^{p - 1}")


@dataclass
class BokstedtResult:
    p: int
    n: int
    window: Window
    e2: BigradedPage
    ep: BigradedPage
    report: Report


def complete_degrees(page: BigradedPage) -> list[int]:
    """Total degrees d such that every first-quadrant bidegree (s, d - s) is
    in the window and interior."""
    w = page.window
    top = w.total_max if w.total_max is not None else w.s_max + w.t_max
    return [d for d in range(0, top + 1)
            if all(page.is_interior(s, d - s) for s in range(0, d + 1))]


def bokstedt_run(p: int, n: int, max_degree: int | None = None, s_max: int | None = None,
                 t_max: int | None = None, r_max: int | None = None) -> BokstedtResult:
    p = Prime(p)
    n = check_height(n, lowest=0)
    D = default_max_degree(p, n) if max_degree is None else max_degree
    window = bokstedt_window(D, s_max, t_max)
    report = Report(f"Boekstedt spectral sequence for BP<{n}> at p={p}, total degree <= {D}")
    spec = e2_spec(p, n)
    e2 = page_from_spec(spec, window, r=p - 1, name=f"E{p - 1}(BP<{n}>)")
    rule = bokstedt_rule(spec, window)
    homog = check_degree_homogeneity(rule)
    report.add("d^(p-1) rule is bidegree-homogeneous", homog.passed,
               f"{len(homog.checks)} nonzero generator images checked")
    e2d = extend_leibniz(rule, e2)
    composites = check_square_zero(e2d)
    report.add("d o d = 0 on E^(p-1)", True, f"{composites} composites checked")
    ep = turn_page(e2d)
    ep = BigradedPage(ep.r, ep.spec, ep.window, ep.classes, {}, ep.edge, f"E{p}(BP<{n}>)")

    cmp_ = compare_profiles(ep, ep_spec(p, n))
    report.add("E^p matches H_*(BP<n>) (x) E(s_xi_1..s_xi_{n+1}) (x) P_p(s_tau_k | k>=n+1)",
               cmp_.matched, cmp_.detail())

    lines_before = euler_lines(e2d, p - 1)
    lines_after = euler_lines(BigradedPage(p - 1, ep.spec, ep.window, ep.classes, {}, ep.edge), p - 1)
    shared = sorted(set(lines_before) & set(lines_after))
    bad = [phi for phi in shared if lines_before[phi] != lines_after[phi]]
    report.add("Euler characteristic along d^(p-1) lines preserved", not bad,
               f"{len(shared)} closed lines" + (f", first mismatch on line {bad[0]}" if bad else ""))

    # Later differentials: every multiplicative generator of E^p sits in
    # filtration <= 1, so each d^r (r >= p) on a generator lands in s < 0.
    r_top = max(D, p) if r_max is None else r_max
    generator_hits = []
    for f in ep_spec(p, n).materialize(window.t_max):
        g = f.generator
        for r in range(p, r_top + 1):
            tgt = (g.s - r, g.t + r - 1)
            if not window.known_empty(*tgt) and ep.dim(*tgt):
                generator_hits.append((g.name, r, tgt))
    report.add("E^p = E^infinity: no generator supports a bidegree-possible d^r, r>=p",
               not generator_hits,
               f"generators scanned for p <= r <= {r_top}" if not generator_hits
               else f"first: {generator_hits[0]}")
    class_hits = reachability(ep.profile().as_dict(), range(p, r_top + 1), ep.is_interior)
    report.info("class-level bidegree pairs for d^r, r>=p (zero on products by Leibniz)",
                f"{len(class_hits)} pairs", count=len(class_hits))

    # Bockstein images s_xi_{k+1} (k >= n+1) are hit by gamma_p(s_tau_k).
    survivors = []
    checked = 0
    k = n + 1
    while True:
        f = spec.find(Family.SIGMA_XI_BAR, k + 1)
        bd = (f.generator.s, f.generator.t)
        if not window.contains(*bd):
            break
        if e2d.is_interior(*bd):
            checked += 1
            if represents_nonzero(e2d, bd, spec.monomial({f: 1})):
                survivors.append(f.generator.name)
        k += 1
    report.add("Bockstein images s_xi_(k+1), k>=n+1, do not survive to E^p", not survivors,
               f"{checked} classes checked" if not survivors else f"survivor {survivors[0]}")

    result = BokstedtResult(p, n, window, e2d, ep, report)
    report.extend(assemble_abutment(ep, p, n, window))
    return result


def rebraid(m: Monomial, abut: AlgebraSpec, n: int) -> Monomial:
    """(s_tau_{n+1})^{e_0} (s_tau_{n+2})^{e_1} ... -> (s_tau_{n+1})^{sum e_i p^i};
    other factors are carried across by family and index."""
    p = abut.p
    power = 0
    exps = {}
    for f, e in m:
        g = f.generator
        if g.family is Family.SIGMA_TAU_BAR:
            power += e * p ** (g.index - (n + 1))
        else:
            exps[abut.find(g.family, g.index)] = e
    if power:
        exps[abut.find(Family.SIGMA_TAU_BAR, n + 1)] = power
    return Monomial.build(exps)


def assemble_abutment(ep: BigradedPage, p: int, n: int, window: Window) -> Report:
    report = Report("abutment assembly")
    abut = thh_abutment(p, n)
    degrees = complete_degrees(ep)
    if not degrees:
        report.add("total-degree profile of E^p equals H_*(THH(BP<n>))", True, "empty window")
        return report
    top = max(degrees)
    expected = hilbert_series(abut, top)
    cmp_ = compare_profiles(ep, expected, degrees=degrees)
    report.add("total-degree profile of E^p equals H_*(THH(BP<n>))", cmp_.matched,
               cmp_.detail())

    basis = enumerate_bigraded(ep_spec(p, n), window)
    by_total: dict[int, list[Monomial]] = {}
    for (s, t), ms in basis.items():
        if s + t in degrees:
            by_total.setdefault(s + t, []).extend(ms)
    target = enumerate_basis(abut, 0, top)
    bad = None
    for d in degrees:
        images = [rebraid(m, abut, n) for m in by_total.get(d, [])]
        if any(im.degree != d for im in images) or sorted(images) != sorted(target[d]):
            bad = d
            break
    report.add("rebraiding P_p(s_tau_k | k>=n+1) -> P(s_tau_{n+1}) is a degreewise bijection",
               bad is None, f"{len(degrees)} degrees" if bad is None else f"fails in degree {bad}")
    return report


def example_differential(p: int, n: int, j: int) -> tuple[Element, Element]:
    """(gamma_j s_tau_{n+1}, its d^{p-1}-image) on the E^2-page."""
    spec = e2_spec(p, n)
    f = spec.find(Family.SIGMA_TAU_BAR, n + 1)
    x = spec.monomial({f: j})
    window = bokstedt_window(f.generator.degree * j + 1)
    return x, bokstedt_rule(spec, window).apply(x)
