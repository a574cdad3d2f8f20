"""First-order formulas over the graph language with root constants.

Grammar (see ``parse_formula``)::

    formula := 'true' | 'false' | 'adj' '(' term ',' term ')' | term '=' term
             | '!' formula | '(' formula ')'
             | formula '&' formula | formula '|' formula | formula '->' formula
             | ('exists'|'forall') var '.' formula
    term    := 'x' positive-integer | 'r' positive-integer

Precedence: ``!`` > ``&`` > ``|`` > ``->``; quantifier scope extends
maximally to the right; ``->`` is right-associative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator


class FormulaError(Exception):
    """Invalid formula construction (rebinding, bad index, arity)."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    index: int  # x_i, i >= 1

    def __post_init__(self):
        if self.index < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Root:
    index: int  # r_j, j >= 1

    def __post_init__(self):
        if self.index < 1:
            raise FormulaError(f"root index must be >= 1, got {self.index}")


Term = Var | Root


@dataclass(frozen=True)
class Adj:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise FormulaError("'&' needs at least 2 operands")


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise FormulaError("'|' needs at least 2 operands")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"

    def __post_init__(self):
        if self.var < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.var}")


@dataclass(frozen=True)
class Forall:
    var: int
    body: "Formula"

    def __post_init__(self):
        if self.var < 1:
            raise FormulaError(f"variable index must be >= 1, got {self.var}")


Formula = Adj | Eq | TrueF | FalseF | Not | And | Or | Implies | Exists | Forall

TRUE = TrueF()
FALSE = FalseF()


# ---------------------------------------------------------------------------
# Analyses


def quantifier_depth(f: Formula) -> int:
    """Maximal nesting count of exists/forall."""
    match f:
        case Adj() | Eq() | TrueF() | FalseF():
            return 0
        case Not(child):
            return quantifier_depth(child)
        case And(children) | Or(children):
            return max(quantifier_depth(c) for c in children)
        case Implies(left, right):
            return max(quantifier_depth(left), quantifier_depth(right))
        case Exists(_, body) | Forall(_, body):
            return 1 + quantifier_depth(body)
    raise TypeError(f"not a formula: {f!r}")


def free_variables(f: Formula) -> frozenset[int]:
    """Variable indices with an unbound occurrence."""

    def walk(f: Formula, bound: frozenset[int]) -> frozenset[int]:
        match f:
            case Adj(l, r) | Eq(l, r):
                out = frozenset()
                for t in (l, r):
                    if isinstance(t, Var) and t.index not in bound:
                        out |= {t.index}
                return out
            case TrueF() | FalseF():
                return frozenset()
            case Not(child):
                return walk(child, bound)
            case And(children) | Or(children):
                out = frozenset()
                for c in children:
                    out |= walk(c, bound)
                return out
            case Implies(left, right):
                return walk(left, bound) | walk(right, bound)
            case Exists(v, body) | Forall(v, body):
                return walk(body, bound | {v})
        raise TypeError(f"not a formula: {f!r}")

    return walk(f, frozenset())


def root_indices(f: Formula) -> frozenset[int]:
    """Root constant indices occurring in f."""
    match f:
        case Adj(l, r) | Eq(l, r):
            return frozenset(t.index for t in (l, r) if isinstance(t, Root))
        case TrueF() | FalseF():
            return frozenset()
        case Not(child):
            return root_indices(child)
        case And(children) | Or(children):
            out = frozenset()
            for c in children:
                out |= root_indices(c)
            return out
        case Implies(left, right):
            return root_indices(left) | root_indices(right)
        case Exists(_, body) | Forall(_, body):
            return root_indices(body)
    raise TypeError(f"not a formula: {f!r}")


def bound_variables(f: Formula) -> frozenset[int]:
    match f:
        case Adj() | Eq() | TrueF() | FalseF():
            return frozenset()
        case Not(child):
            return bound_variables(child)
        case And(children) | Or(children):
            out = frozenset()
            for c in children:
                out |= bound_variables(c)
            return out
        case Implies(left, right):
            return bound_variables(left) | bound_variables(right)
        case Exists(v, body) | Forall(v, body):
            return bound_variables(body) | {v}
    raise TypeError(f"not a formula: {f!r}")


def check_no_rebinding(f: Formula) -> None:
    """Reject formulas binding the same variable twice on one path."""

    def walk(f: Formula, bound: frozenset[int]) -> None:
        match f:
            case Adj() | Eq() | TrueF() | FalseF():
                return
            case Not(child):
                walk(child, bound)
            case And(children) | Or(children):
                for c in children:
                    walk(c, bound)
            case Implies(left, right):
                walk(left, bound)
                walk(right, bound)
            case Exists(v, body) | Forall(v, body):
                if v in bound:
                    raise FormulaError(f"variable x{v} bound twice on one path")
                walk(body, bound | {v})

    walk(f, frozenset())


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<sym>[()!,.&|=])"
    r"|(?P<word>[A-Za-z]+[0-9]*))"
)

_KEYWORDS = {"true", "false", "adj", "exists", "forall"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise FormulaSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup == "arrow":
            tokens.append(("arrow", "->", m.start("arrow")))
        elif m.lastgroup == "sym":
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        else:
            word = m.group("word")
            start = m.start("word")
            if word in _KEYWORDS:
                tokens.append(("kw", word, start))
            elif re.fullmatch(r"[xr][0-9]+", word):
                tokens.append(("term", word, start))
            else:
                raise FormulaSyntaxError(f"unknown token {word!r}", start)
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.next()
        if val != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Formula:
        f = self.implies()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {val!r}", pos)
        return f

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.next()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek()[1] == "|":
            self.next()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.negation()]
        while self.peek()[1] == "&":
            self.next()
            parts.append(self.negation())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def negation(self) -> Formula:
        if self.peek()[1] == "!":
            self.next()
            return Not(self.negation())
        return self.atom()

    def term(self) -> Term:
        kind, val, pos = self.next()
        if kind != "term":
            raise FormulaSyntaxError(f"expected a term, found {val or 'end of input'!r}", pos)
        index = int(val[1:])
        if index == 0:
            raise FormulaSyntaxError("index 0 is not allowed", pos)
        return Var(index) if val[0] == "x" else Root(index)

    def atom(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "(":
            self.next()
            f = self.implies()
            self.expect(")")
            return f
        if val == "true":
            self.next()
            return TRUE
        if val == "false":
            self.next()
            return FALSE
        if val == "adj":
            self.next()
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Adj(a, b)
        if val in ("exists", "forall"):
            self.next()
            kind2, val2, pos2 = self.next()
            if kind2 != "term" or val2[0] != "x":
                raise FormulaSyntaxError("quantifier needs a variable", pos2)
            index = int(val2[1:])
            if index == 0:
                raise FormulaSyntaxError("index 0 is not allowed", pos2)
            self.expect(".")
            body = self.implies()
            return Exists(index, body) if val == "exists" else Forall(index, body)
        if kind == "term":
            a = self.term()
            self.expect("=")
            b = self.term()
            return Eq(a, b)
        raise FormulaSyntaxError(f"expected a formula, found {val or 'end of input'!r}", pos)


def parse_formula(text: str) -> Formula:
    """Parse formula source text into an AST.

    Raises FormulaSyntaxError on malformed input and FormulaError when a
    variable is bound twice on one path.
    """
    f = _Parser(text).parse()
    check_no_rebinding(f)
    return f


# ---------------------------------------------------------------------------
# Formatting

_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def _prec(f: Formula) -> int:
    if isinstance(f, (Exists, Forall)):
        return 0
    return _PREC.get(type(f), 5)


def _fmt_term(t: Term) -> str:
    return f"x{t.index}" if isinstance(t, Var) else f"r{t.index}"


def format_formula(f: Formula) -> str:
    """Render a formula; parse_formula(format_formula(f)) == f."""

    def wrap(child: Formula, minimum: int) -> str:
        s = format_formula(child)
        return f"({s})" if _prec(child) < minimum else s

    match f:
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Adj(l, r):
            return f"adj({_fmt_term(l)},{_fmt_term(r)})"
        case Eq(l, r):
            return f"{_fmt_term(l)} = {_fmt_term(r)}"
        case Not(child):
            return "!" + wrap(child, 4)
        case And(children):
            return " & ".join(wrap(c, 4) for c in children)
        case Or(children):
            return " | ".join(wrap(c, 3) for c in children)
        case Implies(left, right):
            return f"{wrap(left, 2)} -> {wrap(right, 1)}"
        case Exists(v, body):
            return f"exists x{v}. {format_formula(body)}"
        case Forall(v, body):
            return f"forall x{v}. {format_formula(body)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Constructions


def _rename(f: Formula, var_map: dict[int, int], root_map: dict[int, int] | None = None) -> Formula:
    """Rename variables (and optionally replace roots by variables)."""

    def sub_term(t: Term) -> Term:
        if isinstance(t, Var):
            return Var(var_map.get(t.index, t.index))
        if root_map is not None and t.index in root_map:
            return Var(root_map[t.index])
        return t

    match f:
        case Adj(l, r):
            return Adj(sub_term(l), sub_term(r))
        case Eq(l, r):
            return Eq(sub_term(l), sub_term(r))
        case TrueF() | FalseF():
            return f
        case Not(child):
            return Not(_rename(child, var_map, root_map))
        case And(children):
            return And(tuple(_rename(c, var_map, root_map) for c in children))
        case Or(children):
            return Or(tuple(_rename(c, var_map, root_map) for c in children))
        case Implies(left, right):
            return Implies(_rename(left, var_map, root_map), _rename(right, var_map, root_map))
        case Exists(v, body):
            return Exists(var_map.get(v, v), _rename(body, var_map, root_map))
        case Forall(v, body):
            return Forall(var_map.get(v, v), _rename(body, var_map, root_map))
    raise TypeError(f"not a formula: {f!r}")


def unroot(psi: Formula) -> Formula:
    """Replace each root constant r_j by a fresh free variable.

    With k = max free-variable index of psi (0 if none), root j becomes
    variable k + j. Bound variables colliding with the new range are
    renamed to fresh indices above k + m.
    """
    roots = root_indices(psi)
    if not roots:
        return psi
    m = max(roots)
    fv = free_variables(psi)
    k = max(fv) if fv else 0
    new_range = set(range(k + 1, k + m + 1))
    colliding = sorted(bound_variables(psi) & new_range)
    var_map = {old: k + m + 1 + i for i, old in enumerate(colliding)}
    root_map = {j: k + j for j in range(1, m + 1)}
    return _rename(psi, var_map, root_map)


def threshold_bounds(n: int, a, b) -> tuple[int, int]:
    """Count interval [ceil(a*n - n^(2/3)), floor(b*n + n^(2/3))] clamped to [0, n].

    n^(2/3) is exact when n is a perfect cube, floating point otherwise.
    """
    r = round(n ** (1 / 3))
    if r**3 == n:
        slack = Fraction(r**2)
    else:
        slack = Fraction(n ** (2 / 3))
    lo = math.ceil(Fraction(a) * n - slack)
    hi = math.floor(Fraction(b) * n + slack)
    return max(0, lo), min(n, hi)


def build_threshold_formula(
    psi: Formula, n: int, a, b, cap: int = 10**6
) -> Formula:
    """Build the count-threshold formula over n disjoint groups of psi's
    free variables: true iff the number of groups satisfying psi lies in
    the clamped interval from ``threshold_bounds``.

    The result has n*k free variables x_1..x_{nk}, grouped consecutively.
    Raises FormulaError when a > b or when the disjunct count exceeds cap
    (callers fall back to the sampled evaluation).
    """
    if a > b:
        raise FormulaError(f"empty interval: a={a} > b={b}")
    if n < 1:
        raise FormulaError(f"group count must be >= 1, got {n}")
    if root_indices(psi):
        raise FormulaError("threshold construction needs a root-free formula")
    fv = free_variables(psi)
    if not fv:
        raise FormulaError("threshold construction needs free variables")
    k = max(fv)
    if fv != frozenset(range(1, k + 1)):
        raise FormulaError(f"free variables must be contiguous x1..xk, got {sorted(fv)}")

    lo, hi = threshold_bounds(n, a, b)
    if lo > hi:
        return FALSE
    count = sum(math.comb(n, i) for i in range(lo, hi + 1))
    if count > cap:
        raise FormulaError(f"disjunct count {count} exceeds cap {cap}")

    # group j (1-based) uses variables (j-1)k+1 .. jk; bound variables of
    # psi are renamed to fresh indices above n*k, one block per group
    bound = sorted(bound_variables(psi))
    copies = []
    next_fresh = n * k + 1
    for j in range(n):
        var_map = {i: j * k + i for i in range(1, k + 1)}
        for bv in bound:
            var_map[bv] = next_fresh
            next_fresh += 1
        copies.append(_rename(psi, var_map))

    disjuncts = []
    for i in range(lo, hi + 1):
        for subset in combinations(range(n), i):
            chosen = set(subset)
            parts = tuple(
                copies[j] if j in chosen else Not(copies[j]) for j in range(n)
            )
            disjuncts.append(parts[0] if len(parts) == 1 else And(parts))
    if not disjuncts:
        return FALSE
    if len(disjuncts) == 1:
        return disjuncts[0]
    return Or(tuple(disjuncts))


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class FormulaFamily:
    """Ordered list of formulas sharing a root-constant count m."""

    formulas: tuple[Formula, ...]
    m: int

    def __post_init__(self):
        if not self.formulas:
            raise FormulaError("formula family must be nonempty")
        for f in self.formulas:
            ri = root_indices(f)
            if ri and max(ri) > self.m:
                raise FormulaError(
                    f"formula uses root r{max(ri)} but family has m={self.m}"
                )

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    @property
    def free_counts(self) -> tuple[int, ...]:
        return tuple(len(free_variables(f)) for f in self.formulas)


def family_from_lines(lines, m: int | None = None) -> FormulaFamily:
    """Parse a formula family: one formula per line, '#' starts a comment."""
    formulas = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        formulas.append(parse_formula(line))
    if m is None:
        m = max((max(root_indices(f), default=0) for f in formulas), default=0)
    return FormulaFamily(tuple(formulas), m)
