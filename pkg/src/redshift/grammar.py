"""Text syntax for algebra specs and elements.

Specs::

    Fp | A* | BP<n> | THH(BP<n>) | HH(spec)
    P(xi(1..), x(4)) * E(tau(2..3)) * Gamma(s_tau(2)) * P_3(s_tau(1)) * L(t)

joined by ``*``, ``(x)`` or the tensor sign.  Index ranges are ``k``,
``a..b`` or ``a..`` (unbounded).

Elements, inside a given spec::

    2*xi(1)^2*s_xi(1) - tau'(3) + g(3, s_tau(2)) + t^-1*tau(2) + sigma(xi(1)^3)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import (AlgebraSpec, ContractViolation, Element, Family, Kind,
                      Prime, derivation_sigma, family_run)
from .hochschild import hh_closed_form
from .steenrod import dual_steenrod, homology_BPn, tau_prime, thh_abutment


class ParseError(ContractViolation):
    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message}\n  {text}\n  {' ' * pos}^")


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<tensor>\(x\)|⊗)
  | (?P<range>\.\.)
  | (?P<int>\d+)
  | (?P<name>tau'|[A-Za-z_][A-Za-z_0-9]*|A\*)
  | (?P<op>[-+*^(),<>])
""", re.VERBOSE)

GENERATOR_NAMES = {
    "xi": Family.XI_BAR, "xip": Family.XI_POW, "tau": Family.TAU_BAR,
    "tau'": Family.TAU_PRIME, "s_xi": Family.SIGMA_XI_BAR,
    "s_tau": Family.SIGMA_TAU_BAR, "nu": Family.NU, "Q": Family.MILNOR_Q,
    "v": Family.ADAMS_V, "x": Family.GENERIC, "s_x": Family.SIGMA_GENERIC,
}
KINDS = {"P": Kind.POLYNOMIAL, "E": Kind.EXTERIOR, "Gamma": Kind.DIVIDED, "L": Kind.LAURENT}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        if text.startswith("A*", pos):
            out.append(Token("name", "A*", pos))
            pos += 2
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token("op" if kind == "tensor" else kind,
                             "*" if kind == "tensor" else m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        raise ParseError(message, self.text, (tok or self.tok).pos)

    def accept(self, value: str) -> bool:
        if self.tok.value == value and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> Token:
        tok = self.tok
        if not self.accept(value):
            self.error(f"expected {value!r}" + (f", got {tok.value!r}" if tok.value else ""))
        return tok

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            self.error("expected an integer")
        self.i += 1
        return int(tok.value)

    def finish(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}")


class _SpecParser(_Parser):
    def __init__(self, text: str, p: int):
        super().__init__(text)
        self.p = Prime(p)

    def spec(self) -> AlgebraSpec:
        out = self.term()
        while self.accept("*"):
            tok = self.tok
            nxt = self.term()
            try:
                out = out.tensor(nxt)
            except ContractViolation as exc:
                self.error(str(exc), tok)
        return out

    def height(self) -> int:
        self.expect("<")
        n = self.integer()
        self.expect(">")
        return n

    def term(self) -> AlgebraSpec:
        tok = self.tok
        if tok.kind != "name":
            self.error("expected an algebra")
        self.i += 1
        name = tok.value
        try:
            if name == "Fp":
                return AlgebraSpec(self.p, (), name="Fp")
            if name == "A*":
                return dual_steenrod(self.p)
            if name == "BP":
                return homology_BPn(self.p, self.height())
            if name == "THH":
                self.expect("(")
                inner = self.tok
                if inner.value != "BP":
                    self.error("THH(...) takes BP<n>")
                self.i += 1
                n = self.height()
                self.expect(")")
                return thh_abutment(self.p, n)
            if name == "HH":
                self.expect("(")
                inner = self.spec()
                self.expect(")")
                return hh_closed_form(inner)
        except ParseError:
            raise
        except ContractViolation as exc:
            self.error(str(exc), tok)
        kind, height = self.kind_name(name, tok)
        self.expect("(")
        fams = [self.generator_range(kind, height)]
        while self.accept(","):
            fams.append(self.generator_range(kind, height))
        self.expect(")")
        try:
            return AlgebraSpec(self.p, tuple(fams))
        except ContractViolation as exc:
            self.error(str(exc), tok)

    def kind_name(self, name: str, tok: Token) -> tuple[Kind, int]:
        if name in KINDS:
            return KINDS[name], 0
        m = re.fullmatch(r"P_(\d+)", name)
        if m and int(m.group(1)) >= 2:
            return Kind.TRUNCATED, int(m.group(1))
        self.error(f"unknown algebra {name!r}", tok)

    def generator_range(self, kind: Kind, height: int):
        tok = self.tok
        if tok.value == "t":
            self.i += 1
            return family_run(kind, Family.TATE_T, 0, 0, height=height)
        if tok.kind != "name" or tok.value not in GENERATOR_NAMES:
            self.error("expected a generator such as xi(1) or tau(2..)")
        self.i += 1
        fam = GENERATOR_NAMES[tok.value]
        self.expect("(")
        start = self.integer()
        stop: int | None = start
        if self.accept(".."):
            stop = self.integer() if self.tok.kind == "int" else None
        self.expect(")")
        if stop is not None and stop < start:
            self.error("empty index range", tok)
        try:
            fr = family_run(kind, fam, start, stop, height=height)
            fr.factor(self.p, start)
        except ContractViolation as exc:
            self.error(str(exc), tok)
        return fr


def parse_spec(text: str, p: int = 3) -> AlgebraSpec:
    parser = _SpecParser(text, p)
    if parser.tok.kind == "end":
        parser.error("empty expression")
    spec = parser.spec()
    parser.finish()
    return spec


class _ElementParser(_Parser):
    def __init__(self, text: str, spec: AlgebraSpec):
        super().__init__(text)
        self.spec = spec

    def expr(self) -> Element:
        neg = self.accept("-")
        out = self.product()
        if neg:
            out = -out
        while self.tok.value in "+-" and self.tok.kind == "op":
            op = self.tok.value
            self.i += 1
            rhs = self.product()
            out = out + rhs if op == "+" else out - rhs
        return out

    def product(self) -> Element:
        out = self.power()
        while self.accept("*"):
            out = out * self.power()
        return out

    def power(self) -> Element:
        tok = self.tok
        base = self.atom()
        if not self.accept("^"):
            return base
        neg = self.accept("-")
        e = self.integer()
        if neg:
            return self.laurent_power(base, -e, tok)
        return base ** e

    def laurent_power(self, base: Element, e: int, tok: Token) -> Element:
        if len(base.terms) == 1:
            (m, c), = base.terms.items()
            if c == 1 and len(m) == 1 and m[0][1] == 1 and m[0][0].kind is Kind.LAURENT:
                return self.spec.monomial({m[0][0]: e})
        self.error("negative powers only apply to a Laurent generator", tok)

    def generator(self, name_tok: Token) -> Element:
        fam = GENERATOR_NAMES[name_tok.value]
        self.expect("(")
        k = self.integer()
        self.expect(")")
        f = self.spec.find(fam, k)
        if f is not None:
            return self.spec.monomial({f: 1})
        if fam is Family.TAU_PRIME:
            try:
                return tau_prime(self.spec, k)
            except ContractViolation as exc:
                self.error(str(exc), name_tok)
        self.error(f"{name_tok.value}({k}) is not a generator of {self.spec.label()}", name_tok)

    def atom(self) -> Element:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return self.spec.one().scale(int(tok.value))
        if self.accept("("):
            out = self.expr()
            self.expect(")")
            return out
        if tok.kind != "name":
            self.error("expected a term")
        self.i += 1
        if tok.value == "t":
            f = self.spec.find(Family.TATE_T, 0)
            if f is None:
                self.error(f"t is not a generator of {self.spec.label()}", tok)
            return self.spec.monomial({f: 1})
        if tok.value == "sigma":
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            try:
                return derivation_sigma(inner)
            except ContractViolation as exc:
                self.error(str(exc), tok)
        if tok.value == "g":
            self.expect("(")
            j = self.integer()
            self.expect(",")
            gtok = self.tok
            if gtok.value not in GENERATOR_NAMES:
                self.error("expected a generator", gtok)
            self.i += 1
            inner = self.generator(gtok)
            self.expect(")")
            (m, _), = inner.terms.items()
            f = m[0][0]
            if f.kind is not Kind.DIVIDED:
                self.error(f"{f.generator.name} is not a divided-power generator", gtok)
            return self.spec.monomial({f: j}) if j else self.spec.one()
        if tok.value in GENERATOR_NAMES:
            return self.generator(tok)
        self.error(f"unknown name {tok.value!r}", tok)


def parse_element(text: str, spec: AlgebraSpec) -> Element:
    parser = _ElementParser(text, spec)
    if parser.tok.kind == "end":
        parser.error("empty expression")
    out = parser.expr()
    parser.finish()
    return out
