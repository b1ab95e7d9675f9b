"""Expression language shared by the four algebra pictures.

Grammar (left-associative, tightest first)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "·" | "/") unary | unary)*       # juxtaposition multiplies
    unary   := ("-" | "+") unary | postfix
    postfix := primary ("^" ["-"] INT | "^*" | "*")*          # bare "*" is the adjoint
    primary := INT | "(" expr ")" | z(n,l)
             | t[i,...] | R[i,...] | cyl{c:b,...} | s | F[n,l] | u | J | E[n,l]

A ``*`` is a product when the next token can start an operand (a number, a
name or "("), and the adjoint otherwise; so ``J* - J`` is J* minus J and
``J*J`` is J squared.  Division is by scalar expressions only.  Negative
powers are allowed for scalars and for s, u, J.

Every atom belongs to a set of pictures (``s`` to both lamplighter pictures,
numbers to all); an expression's pictures are the intersection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExpressionSyntaxError, MixedPicture, Unsupported
from .scalar import Cyclo, root_of_unity

__all__ = ["PICTURES", "Expression", "parse", "parse_scalar", "evaluate", "parse_element"]

PICTURES = ("wreath", "bernoulli", "odometer", "periodic")
ALL = frozenset(PICTURES)

_ATOM_PICTURES = {
    "t": frozenset({"wreath"}),
    "s": frozenset({"wreath", "bernoulli"}),
    "R": frozenset({"bernoulli"}),
    "cyl": frozenset({"bernoulli"}),
    "F": frozenset({"odometer"}),
    "u": frozenset({"odometer"}),
    "E": frozenset({"periodic"}),
    "J": frozenset({"periodic"}),
}
_SHIFTS = {"s", "u", "J"}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\^\*)|([-+*/^()\[\]{},:·]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(_Tok("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(_Tok("name", m.group(2), start))
        elif m.group(3) is not None:
            out.append(_Tok("op", "^*", start))
        else:
            out.append(_Tok("op", m.group(4), start))
        pos = m.end()
    out.append(_Tok("end", None, n))
    return out


# AST nodes are tuples: (tag, ...).  Tags: num, zeta, atom, neg, add, sub, mul,
# div, pow, adj.


@dataclass(frozen=True)
class Expression:
    text: str
    tree: tuple
    pictures: frozenset
    has_atoms: bool

    def picture(self, requested: str | None = None) -> str | None:
        """The picture to evaluate in; None for a pure scalar expression."""
        if requested is not None:
            if requested not in ALL:
                raise ValueError(f"unknown picture {requested!r}")
            if requested not in self.pictures:
                raise MixedPicture(f"expression has no meaning in the {requested} picture")
            return requested
        if not self.has_atoms:
            return None
        return next(p for p in PICTURES if p in self.pictures)

    def evaluate(self, picture: str | None = None):
        pic = self.picture(picture)
        return _Evaluator(pic, self.text).run(self.tree)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.pictures = ALL
        self.has_atoms = False

    # -- helpers ----------------------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ExpressionSyntaxError(msg, tok.pos, self.text)

    def expect(self, op: str) -> _Tok:
        if self.tok.kind != "op" or self.tok.value != op:
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.value)
            raise self.error(f"expected {op!r}, found {found}")
        return self.advance()

    def expect_int(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.tok.kind == "op" and self.tok.value == "-":
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        return sign * self.advance().value

    @staticmethod
    def starts_operand(tok: _Tok) -> bool:
        return tok.kind in ("int", "name") or (tok.kind == "op" and tok.value == "(")

    def restrict(self, name: str, tok: _Tok):
        allowed = _ATOM_PICTURES[name]
        self.has_atoms = True
        new = self.pictures & allowed
        if not new:
            raise MixedPicture(
                f"atom {name!r} at position {tok.pos} cannot be combined with the preceding atoms"
            )
        self.pictures = new

    # -- grammar ----------------------------------------------------------------
    def parse(self) -> Expression:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        tree = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.value!r}")
        return Expression(self.text, tree, self.pictures, self.has_atoms)

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.value in ("+", "-"):
            op = self.advance().value
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.value in ("*", "·") and self.starts_operand(self.peek()):
                self.advance()
                node = ("mul", node, self.unary())
            elif t.kind == "op" and t.value == "/":
                self.advance()
                node = ("div", node, self.unary(), t.pos)
            elif self.starts_operand(t):
                node = ("mul", node, self.unary())
            else:
                return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.value in ("-", "+"):
            op = self.advance().value
            inner = self.unary()
            return ("neg", inner) if op == "-" else inner
        return self.postfix()

    def postfix(self):
        node = self.primary()
        while self.tok.kind == "op":
            v = self.tok.value
            if v == "^":
                at = self.advance()
                if self.tok.kind == "op" and self.tok.value == "*":
                    self.advance()
                    node = ("adj", node)
                    continue
                node = ("pow", node, self.expect_int(signed=True), at.pos)
            elif v == "^*" or (v == "*" and not self.starts_operand(self.peek())):
                self.advance()
                node = ("adj", node)
            else:
                break
        return node

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return ("num", Fraction(t.value))
        if t.kind == "op" and t.value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            return self.atom()
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.value!r}")

    def int_list(self, close: str) -> list[int]:
        vals = [self.expect_int(signed=True)]
        while self.tok.kind == "op" and self.tok.value == ",":
            self.advance()
            vals.append(self.expect_int(signed=True))
        self.expect(close)
        return vals

    def atom(self):
        t = self.advance()
        name = t.value
        if name == "z":
            self.expect("(")
            args = self.int_list(")")
            if len(args) != 2 or args[0] < 0:
                raise self.error("z takes (level, exponent) with level >= 0", t)
            return ("num", root_of_unity(*args))
        if name not in _ATOM_PICTURES:
            raise self.error(f"unknown name {name!r}", t)
        self.restrict(name, t)
        if name in ("t", "R"):
            self.expect("[")
            return ("atom", name, tuple(self.int_list("]")))
        if name in ("F", "E"):
            self.expect("[")
            args = self.int_list("]")
            if len(args) != 2 or args[0] < 0:
                raise self.error(f"{name} takes [level, index] with level >= 0", t)
            return ("atom", name, tuple(args))
        if name == "cyl":
            self.expect("{")
            pairs = {}
            if not (self.tok.kind == "op" and self.tok.value == "}"):
                while True:
                    c = self.expect_int(signed=True)
                    self.expect(":")
                    b = self.expect_int()
                    if b not in (0, 1):
                        raise self.error("cylinder values are 0 or 1")
                    pairs[c] = b
                    if self.tok.kind == "op" and self.tok.value == ",":
                        self.advance()
                        continue
                    break
            self.expect("}")
            return ("atom", name, tuple(sorted(pairs.items())))
        return ("atom", name, ())


def parse(text: str) -> Expression:
    return _Parser(text).parse()


class _Evaluator:
    def __init__(self, picture, text):
        self.picture = picture
        self.text = text
        self.cls = _element_class(picture) if picture else None

    def run(self, node):
        tag = node[0]
        if tag == "num":
            return Cyclo(node[1])
        if tag == "atom":
            return self.atom(node[1], node[2], 1)
        if tag == "neg":
            return -self.run(node[1])
        if tag == "add":
            return self.lift(self.run(node[1])) + self.lift(self.run(node[2]))
        if tag == "sub":
            return self.lift(self.run(node[1])) - self.lift(self.run(node[2]))
        if tag == "mul":
            a, b = self.run(node[1]), self.run(node[2])
            if isinstance(a, Cyclo) and not isinstance(b, Cyclo):
                return b.scale(a) if hasattr(b, "scale") else b * a
            return a * b
        if tag == "div":
            a, b = self.run(node[1]), self.run(node[2])
            if not isinstance(b, Cyclo):
                raise Unsupported(f"division by a non-scalar at position {node[3]}")
            return a / b
        if tag == "pow":
            base, e = node[1], node[2]
            if base[0] == "atom" and base[1] in _SHIFTS:
                return self.atom(base[1], base[2], e)
            val = self.run(base)
            if isinstance(val, Cyclo):
                return val**e
            if e < 0:
                raise Unsupported(f"negative power of a general element at position {node[3]}")
            return val**e
        if tag == "adj":
            val = self.run(node[1])
            if isinstance(val, Cyclo):
                return val.conj()
            return val.adjoint() if hasattr(val, "adjoint") else val.star()
        raise AssertionError(tag)  # pragma: no cover

    def lift(self, v):
        if isinstance(v, Cyclo) and self.cls is not None:
            return self.cls.scalar(v)
        return v

    def atom(self, name, args, power):
        if name == "t":
            return self.cls.t(*args)
        if name == "R":
            return self.cls.R(*args)
        if name == "s":
            return self.cls.shift(power)
        if name == "cyl":
            from .bernoulli import CylinderAssignment, cylinder_indicator

            return cylinder_indicator(CylinderAssignment(dict(args)))
        if name == "F":
            return self.cls.F(*args)
        if name == "u":
            return self.cls.shift(power)
        if name == "E":
            from .periodic import prufer_E

            return prufer_E(*args)
        if name == "J":
            from .periodic import shift_J

            return shift_J(power)
        raise AssertionError(name)  # pragma: no cover


def _element_class(picture):
    if picture == "wreath":
        from .wreath import WreathElement

        return WreathElement
    if picture == "bernoulli":
        from .bernoulli import BernoulliElement

        return BernoulliElement
    if picture == "odometer":
        from .odometer import OdometerElement

        return OdometerElement
    from .periodic import PeriodicOperator

    return PeriodicOperator


def evaluate(text_or_expr, picture: str | None = None):
    """Parse if needed and evaluate; pure scalars come back as :class:`Cyclo`."""
    expr = parse(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return expr.evaluate(picture)


def parse_element(text: str, picture: str | None = None):
    """Like :func:`evaluate` but scalars are promoted into the picture."""
    expr = parse(text)
    pic = expr.picture(picture)
    val = expr.evaluate(pic)
    if pic is None:
        pic = picture or PICTURES[0]
    if isinstance(val, Cyclo):
        val = _element_class(pic).scalar(val)
    return val


def parse_scalar(text: str) -> Cyclo:
    expr = parse(text)
    if expr.has_atoms:
        raise ExpressionSyntaxError("expected a scalar expression", 0, text)
    return expr.evaluate()
