"""Text syntax for functionals and preferences.

Grammar::

    expr    := term {("+" | "-") term}
    term    := unary {("*" | "/") unary}
    unary   := "-" unary | factor
    factor  := number | "mean" | "var" | "esssup" | "essinf"
             | "quantile(" number ")" | "stoploss(" number ")" | "expmom(" number ")"
             | "eu(" pw ")" | "dual(" pw ")" | "abs(" expr ")"
             | "pow(" expr "," number ")" | "(" expr ")"
    pw      := poly {";" "@" number ":" poly}
    poly    := polynomial in x (or t), e.g. "2*t", "1 - x^2", "-3*x + 1/2"
    pref    := "total(" expr "," ("higher" | "lower") ")"
             | "pareto([" "(" expr "," dir ")" {"," ...} "])"

Number literals are integers, decimals, or rationals written without
spaces ("1/4"). A "-" directly in front of a digit where an operand is
expected is part of the literal. Division between operands is printed with
spaces ("1 / 4") so that ``parse(to_text(spec)) == spec`` for every spec.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from . import ast as A

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+/\d+|\d+\.\d+|\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[-+*/(),;:@\[\]^]))"
)
_OPERAND_END = {"num", "ident", ")", "]"}


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<here>{text[pos:]}")
        self.pos = pos


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out: List[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        start = m.start(m.lastindex)
        if m.group("num"):
            out.append(("num", m.group("num"), start))
        elif m.group("ident"):
            out.append(("ident", m.group("ident"), start))
        else:
            sym = m.group("sym")
            prev = out[-1][0] if out else None
            follow = text[m.end()] if m.end() < len(text) else ""
            if sym == "-" and prev not in _OPERAND_END and follow.isdigit():
                n = _TOKEN.match(text, m.end())
                out.append(("num", "-" + n.group("num"), start))
                pos = n.end()
                continue
            out.append((sym, sym, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # -- helpers ---------------------------------------------------------------

    @property
    def kind(self) -> str:
        return self.toks[self.i][0]

    @property
    def value(self) -> str:
        return self.toks[self.i][1]

    def fail(self, message: str):
        raise ParseError(message, self.text, self.toks[self.i][2])

    def take(self, kind: str, value: Optional[str] = None) -> str:
        if self.kind != kind or (value is not None and self.value != value):
            self.fail(f"expected {value or kind!r}, found {self.value or 'end of input'!r}")
        v = self.value
        self.i += 1
        return v

    def accept(self, kind: str, value: Optional[str] = None) -> bool:
        if self.kind == kind and (value is None or self.value == value):
            self.i += 1
            return True
        return False

    def number(self) -> Fraction:
        return Fraction(self.take("num"))

    def done(self):
        if self.kind != "end":
            self.fail(f"unexpected {self.value!r}")

    # -- expressions -------------------------------------------------------------

    def expr(self) -> A.Node:
        node = self.term()
        while self.kind in ("+", "-"):
            op = self.take(self.kind)
            rhs = self.term()
            node = A.Sum(node, rhs if op == "+" else A.Neg(rhs))
        return node

    def term(self) -> A.Node:
        node = self.unary()
        while self.kind in ("*", "/"):
            op = self.take(self.kind)
            rhs = self.unary()
            node = A.Product(node, rhs) if op == "*" else A.Quotient(node, rhs)
        return node

    def unary(self) -> A.Node:
        if self.accept("-"):
            return A.Neg(self.unary())
        return self.factor()

    def factor(self) -> A.Node:
        if self.kind == "num":
            return A.Const(self.number())
        if self.accept("("):
            node = self.expr()
            self.take(")")
            return node
        if self.kind != "ident":
            self.fail(f"expected an operand, found {self.value or 'end of input'!r}")
        name = self.take("ident").lower()
        simple = {"mean": A.Mean, "var": A.Var, "esssup": A.EssSup, "essinf": A.EssInf}
        if name in simple:
            return simple[name]()
        numeric = {"quantile": A.Quantile, "stoploss": A.StopLoss, "expmom": A.ExpMoment}
        if name not in numeric and name not in ("eu", "dual", "abs", "pow"):
            self.i -= 1
            self.fail(f"unknown function or keyword {name!r}")
        self.take("(")
        if name in numeric:
            arg = self.number()
            self.take(")")
            try:
                return numeric[name](arg)
            except ValueError as exc:
                self.fail(str(exc))
        if name in ("eu", "dual"):
            pw = self.piecewise()
            self.take(")")
            return A.EU(pw) if name == "eu" else A.Dual(pw)
        if name == "abs":
            node = self.expr()
            self.take(")")
            return A.Abs(node)
        if name == "pow":
            base = self.expr()
            self.take(",")
            exponent = self.number()
            self.take(")")
            return A.Pow(base, exponent)

    # -- piecewise polynomials ----------------------------------------------------

    def piecewise(self) -> A.PiecewisePoly:
        pieces = [(None, self.poly())]
        while self.accept(";"):
            self.take("@")
            start = self.number()
            self.take(":")
            pieces.append((start, self.poly()))
        try:
            return A.PiecewisePoly.build(pieces)
        except ValueError as exc:
            self.fail(str(exc))

    def poly(self) -> Tuple[Fraction, ...]:
        coeffs: dict = {}
        sign = -1 if self.accept("-") else 1
        while True:
            c, k = self.poly_term()
            coeffs[k] = coeffs.get(k, 0) + sign * c
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        deg = max(coeffs)
        return tuple(Fraction(coeffs.get(k, 0)) for k in range(deg + 1))

    def poly_term(self) -> Tuple[Fraction, int]:
        if self.kind == "num":
            c = self.number()
            if not self.accept("*"):
                return c, 0
        else:
            c = Fraction(1)
        var = self.take("ident")
        if var not in ("x", "t"):
            self.i -= 1
            self.fail(f"polynomial variable must be x or t, found {var!r}")
        k = 1
        if self.accept("^"):
            raw = self.take("num")
            if not raw.isdigit():
                self.i -= 1
                self.fail(f"exponent must be a nonnegative integer, found {raw!r}")
            k = int(raw)
        return c, k

    # -- preferences ---------------------------------------------------------------

    def direction(self) -> str:
        d = self.take("ident").lower()
        if d not in ("higher", "lower"):
            self.i -= 1
            self.fail(f"direction must be 'higher' or 'lower', found {d!r}")
        return d

    def preference(self):
        from .preference import Preference

        kind = self.take("ident").lower()
        self.take("(")
        if kind == "total":
            spec = self.expr()
            self.take(",")
            d = self.direction()
            self.take(")")
            return Preference.total(spec, d)
        if kind == "pareto":
            self.take("[")
            items = []
            while True:
                self.take("(")
                spec = self.expr()
                self.take(",")
                items.append((spec, self.direction()))
                self.take(")")
                if not self.accept(","):
                    break
            self.take("]")
            self.take(")")
            return Preference.pareto(items)
        self.i -= 2
        self.fail(f"preference must be total(...) or pareto(...), found {kind!r}")


def parse(text: str) -> A.Node:
    p = _Parser(text)
    node = p.expr()
    p.done()
    return node


def parse_preference(text: str):
    p = _Parser(text)
    pref = p.preference()
    p.done()
    return pref


# -- printing --------------------------------------------------------------------


def _num(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _prec(node: A.Node) -> int:
    if isinstance(node, A.Sum):
        return 1
    if isinstance(node, (A.Product, A.Quotient)):
        return 2
    return 3


def _wrap(node: A.Node, tight: bool, level: int) -> str:
    s = to_text(node)
    p = _prec(node)
    return f"({s})" if (p <= level if tight else p < level) else s


def poly_text(coeffs, var: str = "x") -> str:
    terms = [(k, c) for k, c in enumerate(coeffs) if c != 0]
    if not terms:
        return "0"
    out = []
    for n, (k, c) in enumerate(terms):
        mag = c if n == 0 else abs(c)
        body = _num(mag) if k == 0 else f"{_num(mag)}*{var}" + (f"^{k}" if k > 1 else "")
        out.append(body if n == 0 else (" - " if c < 0 else " + ") + body)
    return "".join(out)


def pw_text(pw: A.PiecewisePoly, var: str = "x") -> str:
    parts = []
    for start, coeffs in pw.pieces:
        body = poly_text(coeffs, var)
        parts.append(body if start is None else f"@{_num(start)}: {body}")
    return "; ".join(parts)


def to_text(node: A.Node) -> str:
    if isinstance(node, A.Mean):
        return "mean"
    if isinstance(node, A.Var):
        return "var"
    if isinstance(node, A.EssSup):
        return "esssup"
    if isinstance(node, A.EssInf):
        return "essinf"
    if isinstance(node, A.Quantile):
        return f"quantile({_num(node.t)})"
    if isinstance(node, A.StopLoss):
        return f"stoploss({_num(node.k)})"
    if isinstance(node, A.ExpMoment):
        return f"expmom({_num(node.a)})"
    if isinstance(node, A.EU):
        return f"eu({pw_text(node.utility, 'x')})"
    if isinstance(node, A.Dual):
        return f"dual({pw_text(node.weight, 't')})"
    if isinstance(node, A.Const):
        return _num(node.value)
    if isinstance(node, A.Neg):
        return f"-({to_text(node.arg)})"
    if isinstance(node, A.Abs):
        return f"abs({to_text(node.arg)})"
    if isinstance(node, A.Pow):
        return f"pow({to_text(node.base)}, {_num(node.exponent)})"
    if isinstance(node, A.Sum):
        left = _wrap(node.left, False, 1)
        if isinstance(node.right, A.Neg):
            return f"{left} - {_wrap(node.right.arg, True, 1)}"
        return f"{left} + {_wrap(node.right, True, 1)}"
    if isinstance(node, (A.Product, A.Quotient)):
        op = " * " if isinstance(node, A.Product) else " / "
        return f"{_wrap(node.left, False, 2)}{op}{_wrap(node.right, True, 2)}"
    raise TypeError(f"not a functional spec: {node!r}")
