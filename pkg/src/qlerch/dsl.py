"""A small expression language over the library's builders.

Grammar (precedence low to high, binaries left-associative except ^):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          -- right-associative
    atom   := NUMBER | 'q' | NAME | NAME '(' args ')' | '(' expr ')'

Calls use ',' between ordinary arguments and ';' before a modulus or mode
slot, mirroring the j(x; q^m) notation: j(expr; expr), m(x, qexpr, z),
J(a,m), Jb(a,m), Jm(m), poch(expr, n|inf), kron1(x,y), kron2(x,y),
hecke14(x,y), hick_same(x,y), hick_diff(x,y), triple(x,y,z; mode),
F(variant; x,y,z), G(variant; x,y,z).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EvalError, LexError, ParseError, UnboundVariable, QLerchError
from .qfunctions import J_shorthand, appell_lerch_m, jacobi_theta, pochhammer_finite, pochhammer_inf
from .heckesums import (
    DoubleSumSpec,
    F_kernel,
    G_kernel,
    TripleSumSpec,
    double_sum,
    kronecker_unilateral,
    triple_sum,
)
from .series import MonomialSpec, Series
from . import numeric

_SYMBOLS = {
    "+": "plus", "-": "minus", "*": "star", "/": "slash", "^": "caret",
    "(": "lparen", ")": "rparen", ",": "comma", ";": "semicolon",
}


@dataclass
class Token:
    kind: str
    lexeme: str
    offset: int


def tokenize(text: str) -> list[Token]:
    """Full tokenization; unknown bytes raise LexError with their offset."""
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("number", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            out.append(Token("q" if word == "q" else "name", word, i))
            i = j
            continue
        kind = _SYMBOLS.get(ch)
        if kind is None:
            raise LexError(i, f"unexpected character {ch!r}")
        out.append(Token(kind, ch, i))
        i += 1
    return out


# AST nodes

@dataclass
class Num:
    value: int
    span: tuple


@dataclass
class Q:
    span: tuple


@dataclass
class Var:
    name: str
    span: tuple


@dataclass
class Unary:
    op: str
    operand: object
    span: tuple


@dataclass
class Bin:
    op: str
    left: object
    right: object
    span: tuple


@dataclass
class Call:
    name: str
    args: list
    seps: list          # separator kinds between consecutive arguments
    span: tuple


# arity table: (total argument count, index of the ';'-separated tail or None)
_CALLS = {
    "j": (2, 1),
    "m": (3, None),
    "J": (2, None),
    "Jb": (2, None),
    "Jm": (1, None),
    "poch": (2, None),
    "kron1": (2, None),
    "kron2": (2, None),
    "hecke14": (2, None),
    "hick_same": (2, None),
    "hick_diff": (2, None),
    "triple": (4, 3),
    "F": (4, 1),
    "G": (4, 1),
}


class _Parser:
    def __init__(self, tokens: list[Token], length: int):
        self.toks = tokens
        self.pos = 0
        self.length = length

    def peek(self) -> Optional[Token]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> Optional[Token]:
        t = self.peek()
        if t is not None:
            self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError(self.length, {kind}, f"expected {kind}, found end of input")
        if t.kind != kind:
            raise ParseError(t.offset, {kind}, f"expected {kind}, found {t.kind}")
        return self.next()

    def parse_expr(self):
        node = self.parse_term()
        while (t := self.peek()) and t.kind in ("plus", "minus"):
            self.next()
            rhs = self.parse_term()
            node = Bin(t.lexeme, node, rhs, (node.span[0], rhs.span[1]))
        return node

    def parse_term(self):
        node = self.parse_unary()
        while (t := self.peek()) and t.kind in ("star", "slash"):
            self.next()
            rhs = self.parse_unary()
            node = Bin(t.lexeme, node, rhs, (node.span[0], rhs.span[1]))
        return node

    def parse_unary(self):
        t = self.peek()
        if t and t.kind == "minus":
            self.next()
            operand = self.parse_unary()
            return Unary("-", operand, (t.offset, operand.span[1]))
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        t = self.peek()
        if t and t.kind == "caret":
            self.next()
            expo = self.parse_unary()          # right-associative
            return Bin("^", base, expo, (base.span[0], expo.span[1]))
        return base

    def parse_atom(self):
        t = self.peek()
        if t is None:
            raise ParseError(
                self.length, {"number", "name", "q", "lparen"},
                "unexpected end of input",
            )
        if t.kind == "number":
            self.next()
            return Num(int(t.lexeme), (t.offset, t.offset + len(t.lexeme)))
        if t.kind == "q":
            self.next()
            return Q((t.offset, t.offset + 1))
        if t.kind == "lparen":
            self.next()
            node = self.parse_expr()
            self.expect("rparen")
            return node
        if t.kind == "name":
            self.next()
            nxt = self.peek()
            if nxt and nxt.kind == "lparen":
                return self.parse_call(t)
            return Var(t.lexeme, (t.offset, t.offset + len(t.lexeme)))
        raise ParseError(
            t.offset, {"number", "name", "q", "lparen"},
            f"unexpected {t.kind}",
        )

    def parse_call(self, name_tok: Token):
        name = name_tok.lexeme
        if name not in _CALLS:
            raise ParseError(
                name_tok.offset, set(_CALLS),
                f"unknown function {name!r}",
            )
        arity, semi_at = _CALLS[name]
        self.expect("lparen")
        args = []
        seps = []
        while True:
            args.append(self.parse_expr())
            t = self.peek()
            if t is None:
                raise ParseError(self.length, {"comma", "semicolon", "rparen"},
                                 "unterminated call")
            if t.kind in ("comma", "semicolon"):
                self.next()
                seps.append(t.kind)
                continue
            closing = self.expect("rparen")
            break
        if len(args) != arity:
            raise ParseError(
                name_tok.offset, {f"{arity} arguments"},
                f"{name} requires {arity} arguments, got {len(args)}",
            )
        if semi_at is not None:
            want = ["comma"] * (arity - 1)
            want[semi_at - 1] = "semicolon"
            if seps != want:
                raise ParseError(
                    name_tok.offset, {"semicolon"},
                    f"{name} separates its modulus/mode slot with ';'",
                )
        return Call(name, args, seps, (name_tok.offset, closing.offset + 1))


def parse(text_or_tokens) -> object:
    if isinstance(text_or_tokens, str):
        tokens = tokenize(text_or_tokens)
        length = len(text_or_tokens)
    else:
        tokens = text_or_tokens
        length = tokens[-1].offset + len(tokens[-1].lexeme) if tokens else 0
    p = _Parser(tokens, length)
    node = p.parse_expr()
    t = p.peek()
    if t is not None:
        raise ParseError(t.offset, {"end of input"}, f"trailing {t.kind}")
    return node


def pretty(node) -> str:
    """Print an AST back to parseable text (used by the round-trip check)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Q):
        return "q"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"(-{pretty(node.operand)})"
    if isinstance(node, Bin):
        return f"({pretty(node.left)} {node.op} {pretty(node.right)})"
    if isinstance(node, Call):
        parts = []
        for i, arg in enumerate(node.args):
            parts.append(pretty(arg))
            if i < len(node.seps):
                parts.append("; " if node.seps[i] == "semicolon" else ", ")
        return f"{node.name}({''.join(parts)})"
    raise TypeError(f"not an AST node: {node!r}")


def _strip(node):
    """Structural key of an AST, ignoring spans."""
    if isinstance(node, Num):
        return ("num", node.value)
    if isinstance(node, Q):
        return ("q",)
    if isinstance(node, Var):
        return ("var", node.name)
    if isinstance(node, Unary):
        return ("neg", _strip(node.operand))
    if isinstance(node, Bin):
        return ("bin", node.op, _strip(node.left), _strip(node.right))
    if isinstance(node, Call):
        return ("call", node.name, tuple(node.seps), tuple(_strip(a) for a in node.args))
    raise TypeError


def ast_equal(a, b) -> bool:
    return _strip(a) == _strip(b)


# evaluation

class _Rational(Exception):
    pass


def _as_rational(node, env) -> Fraction:
    """Evaluate a subexpression that must reduce to an exact rational."""
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, Unary):
        return -_as_rational(node.operand, env)
    if isinstance(node, Bin):
        if node.op == "+":
            return _as_rational(node.left, env) + _as_rational(node.right, env)
        if node.op == "-":
            return _as_rational(node.left, env) - _as_rational(node.right, env)
        if node.op == "*":
            return _as_rational(node.left, env) * _as_rational(node.right, env)
        if node.op == "/":
            return _as_rational(node.left, env) / _as_rational(node.right, env)
        if node.op == "^":
            e = _as_rational(node.right, env)
            if e.denominator != 1:
                raise _Rational
            return _as_rational(node.left, env) ** int(e)
    raise _Rational


def as_monomial(node, env: dict) -> MonomialSpec:
    """Evaluate a subexpression to c*q^e; raises EvalError otherwise."""
    if isinstance(node, Q):
        return MonomialSpec(1, 1)
    if isinstance(node, Var):
        val = env.get(node.name)
        if val is None:
            raise UnboundVariable(f"unbound variable {node.name!r}")
        if isinstance(val, MonomialSpec):
            return val
        return MonomialSpec(val, 0)
    if isinstance(node, Num):
        return MonomialSpec(node.value, 0)
    if isinstance(node, Unary):
        return -as_monomial(node.operand, env)
    if isinstance(node, Bin):
        if node.op == "*":
            return as_monomial(node.left, env) * as_monomial(node.right, env)
        if node.op == "/":
            return as_monomial(node.left, env) / as_monomial(node.right, env)
        if node.op == "^":
            try:
                e = _as_rational(node.right, env)
            except _Rational:
                raise EvalError(node.span, "exponent must be rational")
            if isinstance(node.left, Q):
                return MonomialSpec(1, e)
            if e.denominator != 1:
                raise EvalError(
                    node.span, "fractional exponents are allowed only on q"
                )
            return as_monomial(node.left, env) ** int(e)
        try:
            return MonomialSpec(_as_rational(node, env), 0)
        except _Rational:
            raise EvalError(
                node.span, f"'{node.op}' does not preserve monomials"
            )
    raise EvalError(node.span, "argument must reduce to a monomial c*q^e")


def _modulus(node, env) -> int:
    mono = as_monomial(node, env)
    if mono.c != 1 or mono.e.denominator != 1 or mono.e <= 0:
        raise EvalError(
            node.span, "modulus slot must reduce to q^m with m a positive integer"
        )
    return int(mono.e)


_TRIPLE_MODES = {"all": "all", "same": "same", "diff": "diff"}
_VARIANTS = {
    "thm1": "thm1",
    "same": "same_parity",
    "same_parity": "same_parity",
    "diff": "diff_parity",
    "diff_parity": "diff_parity",
}


def _mode_name(node, table, what) -> str:
    if isinstance(node, Var) and node.name in table:
        return table[node.name]
    raise EvalError(node.span, f"expected a {what} name, one of {sorted(table)}")


def eval_formal(node, env: dict, order) -> Series:
    """Evaluate an AST to a Series exact through ``order``."""
    order = Fraction(order)

    def ev(n) -> Series:
        if isinstance(n, Num):
            return Series.const(n.value, order)
        if isinstance(n, Q):
            return Series.monomial(1, 1, order)
        if isinstance(n, Var):
            val = env.get(n.name)
            if val is None:
                raise UnboundVariable(f"unbound variable {n.name!r}")
            if isinstance(val, MonomialSpec):
                return Series.of_monomial(val, order)
            return Series.const(val, order)
        if isinstance(n, Unary):
            return -ev(n.operand)
        if isinstance(n, Bin):
            if n.op == "^":
                try:
                    e = _as_rational(n.right, env)
                except _Rational:
                    raise EvalError(n.span, "exponent must be rational")
                if isinstance(n.left, Q):
                    return Series.monomial(1, e, order)
                if e.denominator != 1:
                    raise EvalError(
                        n.span, "fractional exponents are allowed only on q"
                    )
                return ev(n.left) ** int(e)
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            return _div(a, b, n)
        if isinstance(n, Call):
            return call(n)
        raise TypeError(f"not an AST node: {n!r}")

    def _div(a, b, n):
        try:
            out = a / b
        except QLerchError as exc:
            raise EvalError(n.span, str(exc))
        return out

    def call(n: Call) -> Series:
        try:
            if n.name == "j":
                return jacobi_theta(
                    as_monomial(n.args[0], env), _modulus(n.args[1], env), order
                )
            if n.name == "m":
                return appell_lerch_m(
                    as_monomial(n.args[0], env),
                    _modulus(n.args[1], env),
                    as_monomial(n.args[2], env),
                    order,
                )
            if n.name in ("J", "Jb"):
                a = _as_rational(n.args[0], env)
                mm = _as_rational(n.args[1], env)
                if a.denominator != 1 or mm.denominator != 1 or mm <= 0:
                    raise EvalError(n.span, "J/Jb take integer a and positive m")
                return J_shorthand(
                    int(a), int(mm), "bar" if n.name == "Jb" else "plain", order
                )
            if n.name == "Jm":
                mm = _as_rational(n.args[0], env)
                if mm.denominator != 1 or mm <= 0:
                    raise EvalError(n.span, "Jm takes a positive integer")
                return J_shorthand(0, int(mm), "eta", order)
            if n.name == "poch":
                x = as_monomial(n.args[0], env)
                tail = n.args[1]
                if isinstance(tail, Var) and tail.name == "inf":
                    return pochhammer_inf(x, order)
                cnt = _as_rational(tail, env)
                if cnt.denominator != 1 or cnt < 0:
                    raise EvalError(n.span, "poch count must be 'inf' or n >= 0")
                return pochhammer_finite(x, int(cnt), order)
            if n.name == "kron1":
                return kronecker_unilateral(
                    as_monomial(n.args[0], env), as_monomial(n.args[1], env), order
                )
            if n.name == "kron2":
                return double_sum(
                    DoubleSumSpec(
                        0, 0, 1, False, None,
                        as_monomial(n.args[0], env), as_monomial(n.args[1], env),
                    ),
                    order,
                )
            if n.name == "hecke14":
                return double_sum(
                    DoubleSumSpec(
                        1, 1, 2, True, None,
                        as_monomial(n.args[0], env), as_monomial(n.args[1], env),
                    ),
                    order,
                )
            if n.name in ("hick_same", "hick_diff"):
                parity = "same" if n.name == "hick_same" else "diff"
                return double_sum(
                    DoubleSumSpec(
                        0, 0, 1, False, parity,
                        as_monomial(n.args[0], env), as_monomial(n.args[1], env),
                    ),
                    order,
                )
            if n.name == "triple":
                mode = _mode_name(n.args[3], _TRIPLE_MODES, "mode")
                return triple_sum(
                    TripleSumSpec(
                        mode,
                        as_monomial(n.args[0], env),
                        as_monomial(n.args[1], env),
                        as_monomial(n.args[2], env),
                    ),
                    order,
                )
            if n.name in ("F", "G"):
                variant = _mode_name(n.args[0], _VARIANTS, "variant")
                fn = F_kernel if n.name == "F" else G_kernel
                return fn(
                    variant,
                    as_monomial(n.args[1], env),
                    as_monomial(n.args[2], env),
                    as_monomial(n.args[3], env),
                    order,
                )
        except (EvalError, UnboundVariable):
            raise
        except QLerchError as exc:
            raise EvalError(n.span, str(exc))
        raise EvalError(n.span, f"unknown function {n.name!r}")

    out = ev(node)
    return out.truncate(order) if out.order > order else out


def eval_numeric(node, env: dict, q: Fraction, eps: Fraction) -> numeric.Ball:
    """Evaluate an AST to a certified rational Ball at rational bindings."""
    q = Fraction(q)
    eps = Fraction(eps)

    def value(n) -> Fraction:
        mono = as_monomial(n, env)
        return mono.c * q**mono.e if mono.e.denominator == 1 else _frac_pow(mono, n)

    def _frac_pow(mono, n):
        raise EvalError(
            n.span, "numeric mode needs integer q-exponents in arguments"
        )

    def ev(n) -> numeric.Ball:
        if isinstance(n, Num):
            return numeric.Ball(n.value)
        if isinstance(n, Q):
            return numeric.Ball(q)
        if isinstance(n, Var):
            val = env.get(n.name)
            if val is None:
                raise UnboundVariable(f"unbound variable {n.name!r}")
            if isinstance(val, MonomialSpec):
                return numeric.Ball(value(n))
            return numeric.Ball(val)
        if isinstance(n, Unary):
            return -ev(n.operand)
        if isinstance(n, Bin):
            if n.op == "^":
                try:
                    e = _as_rational(n.right, env)
                except _Rational:
                    raise EvalError(n.span, "exponent must be rational")
                if e.denominator != 1:
                    raise EvalError(n.span, "numeric mode needs integer exponents")
                return ev(n.left) ** int(e)
            a, b = ev(n.left), ev(n.right)
            try:
                if n.op == "+":
                    return a + b
                if n.op == "-":
                    return a - b
                if n.op == "*":
                    return a * b
                return a / b
            except QLerchError as exc:
                raise EvalError(n.span, str(exc))
        if isinstance(n, Call):
            return call(n)
        raise TypeError(f"not an AST node: {n!r}")

    def call(n: Call) -> numeric.Ball:
        try:
            if n.name == "j":
                return numeric.jacobi_theta_num(
                    value(n.args[0]), _modulus(n.args[1], env), q, eps
                )
            if n.name == "m":
                return numeric.appell_lerch_m_num(
                    value(n.args[0]), _modulus(n.args[1], env), value(n.args[2]),
                    q, eps,
                )
            if n.name == "Jm":
                mm = _as_rational(n.args[0], env)
                return numeric.euler_num(int(mm), q, eps)
            if n.name in ("J", "Jb"):
                a = int(_as_rational(n.args[0], env))
                mm = int(_as_rational(n.args[1], env))
                w = q**a if n.name == "J" else -(q**a)
                return numeric.jacobi_theta_num(w, mm, q, eps)
            if n.name == "poch":
                x = value(n.args[0])
                tail = n.args[1]
                if isinstance(tail, Var) and tail.name == "inf":
                    return numeric.pochhammer_inf_num(x, q, eps)
                cnt = int(_as_rational(tail, env))
                out = numeric.Ball(1)
                for i in range(cnt):
                    out = out * numeric.Ball(1 - q**i * x)
                return out
            if n.name == "kron1":
                return numeric.kronecker_unilateral_num(
                    value(n.args[0]), value(n.args[1]), q, eps
                )
            if n.name == "kron2":
                return numeric.hecke_double_sum_num(
                    0, 0, 1, False, None, value(n.args[0]), value(n.args[1]), q, eps
                )
            if n.name == "hecke14":
                return numeric.hecke_double_sum_num(
                    1, 1, 2, True, None, value(n.args[0]), value(n.args[1]), q, eps
                )
            if n.name in ("hick_same", "hick_diff"):
                parity = "same" if n.name == "hick_same" else "diff"
                return numeric.hecke_double_sum_num(
                    0, 0, 1, False, parity, value(n.args[0]), value(n.args[1]), q, eps
                )
            if n.name == "triple":
                mode = _mode_name(n.args[3], _TRIPLE_MODES, "mode")
                return numeric.triple_sum_num(
                    mode, value(n.args[0]), value(n.args[1]), value(n.args[2]),
                    q, eps,
                )
            if n.name == "F":
                variant = _mode_name(n.args[0], _VARIANTS, "variant")
                return numeric.F_kernel_num(
                    variant, value(n.args[1]), value(n.args[2]), value(n.args[3]),
                    q, eps,
                )
            if n.name == "G":
                variant = _mode_name(n.args[0], _VARIANTS, "variant")
                return numeric.G_kernel_num(
                    variant, value(n.args[1]), value(n.args[2]), value(n.args[3]),
                    q, eps,
                )
        except (EvalError, UnboundVariable):
            raise
        except QLerchError as exc:
            raise EvalError(n.span, str(exc))
        raise EvalError(n.span, f"unknown function {n.name!r}")

    return ev(node)


def eval_ast(node, bindings: dict, mode: str, order=None, q=None, eps=None):
    """Front end used by the CLI: formal -> Series, numeric -> Ball."""
    if mode == "formal":
        return eval_formal(node, bindings, order)
    if mode == "numeric":
        return eval_numeric(node, bindings, q, eps)
    raise ValueError("mode must be 'formal' or 'numeric'")


def parse_monomial(text: str) -> MonomialSpec:
    """Parse a binding value of the shape c*q^(p/r)."""
    node = parse(text)
    return as_monomial(node, {})


def parse_rational(text: str) -> Fraction:
    node = parse(text)
    try:
        return _as_rational(node, {})
    except _Rational:
        raise EvalError((0, len(text)), "expected an exact rational")
