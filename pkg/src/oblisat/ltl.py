"""LTL formulas: raw syntax, parsing, negation normal form, tagging.

Two representations live here.  ``Syntax`` is the raw tree produced by the
parser (and by the benchmark generators); it may contain negations over
compound formulas, implications and the F/G sugar.  ``Formula`` is the
canonical NNF tree every decision procedure works on.  Formulas are interned,
so structurally equal formulas are the same object and compare by identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

TRUE_K = "true"
FALSE_K = "false"
LIT = "lit"
AND = "and"
OR = "or"
NEXT = "X"
UNTIL = "U"
RELEASE = "R"

TEMPORAL = (NEXT, UNTIL, RELEASE)


class Lit(NamedTuple):
    """A literal.  ``tags`` holds the ids of the untils whose right operand
    contains this occurrence; tags never change the literal's meaning."""

    atom: str
    neg: bool = False
    tags: frozenset = frozenset()

    def erased(self) -> "Lit":
        return self if not self.tags else Lit(self.atom, self.neg)

    def complement(self) -> "Lit":
        return Lit(self.atom, not self.neg, self.tags)

    def key(self) -> str:
        s = ("!" if self.neg else "") + self.atom
        if self.tags:
            s += "{" + ",".join(str(t) for t in sorted(self.tags)) + "}"
        return s

    def __str__(self) -> str:
        return self.key()


# Obligation sets need a marker for ff; "false" is a keyword, never an atom.
FF_LIT = Lit("false")


def consistent(lits: Iterable[Lit]) -> bool:
    """True when no atom occurs with both polarities (tags ignored) and ff is absent."""
    seen: dict[str, bool] = {}
    for l in lits:
        if l.atom == FF_LIT.atom:
            return False
        prev = seen.setdefault(l.atom, l.neg)
        if prev != l.neg:
            return False
    return True


class Formula:
    __slots__ = ("kind", "lit", "args", "key", "_hash", "__weakref__")

    kind: str
    lit: Lit | None
    args: tuple
    key: str

    def __new__(cls, *a, **kw):
        raise TypeError("use the constructor functions in oblisat.ltl")

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Formula") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Formula({format_formula(self, tags=True)!r})"

    def __str__(self) -> str:
        return format_formula(self)

    def __reduce__(self):
        return (_rebuild, (self.kind, self.lit, self.args))

    @property
    def left(self) -> "Formula":
        return self.args[0]

    @property
    def right(self) -> "Formula":
        return self.args[-1]

    def is_propositional(self) -> bool:
        return _propositional(self)


_table: dict[str, Formula] = {}
_prop_cache: dict[Formula, bool] = {}


def _make(kind: str, lit: Lit | None, args: tuple, key: str) -> Formula:
    f = _table.get(key)
    if f is None:
        f = object.__new__(Formula)
        f.kind = kind
        f.lit = lit
        f.args = args
        f.key = key
        f._hash = hash(key)
        _table[key] = f
    return f


def _rebuild(kind, lit, args):
    if kind == TRUE_K:
        return TRUE
    if kind == FALSE_K:
        return FALSE
    if kind == LIT:
        return literal(lit)
    if kind == AND:
        return conj(*args)
    if kind == OR:
        return disj(*args)
    if kind == NEXT:
        return nxt(args[0])
    if kind == UNTIL:
        return until(*args)
    return release(*args)


TRUE = _make(TRUE_K, None, (), "true")
FALSE = _make(FALSE_K, None, (), "false")


def literal(l: Lit) -> Formula:
    return _make(LIT, l, (), l.key())


def atom(name: str, neg: bool = False, tags: Iterable[int] = ()) -> Formula:
    return literal(Lit(name, neg, frozenset(tags)))


def _nary(kind: str, items: Iterable[Formula]) -> Formula:
    unit, zero = (TRUE, FALSE) if kind == AND else (FALSE, TRUE)
    flat: dict[str, Formula] = {}
    for x in items:
        if x is zero:
            return zero
        if x is unit:
            continue
        for y in x.args if x.kind == kind else (x,):
            flat[y.key] = y
    if kind == AND:
        # complementary literals collapse regardless of tags
        pol: dict[str, bool] = {}
        for y in flat.values():
            if y.kind == LIT:
                if pol.setdefault(y.lit.atom, y.lit.neg) != y.lit.neg:
                    return FALSE
    if not flat:
        return unit
    if len(flat) == 1:
        return next(iter(flat.values()))
    keys = sorted(flat)
    args = tuple(flat[k] for k in keys)
    sym = "&" if kind == AND else "|"
    return _make(kind, None, args, "(" + sym.join(keys) + ")")


def conj(*items: Formula) -> Formula:
    return _nary(AND, items)


def disj(*items: Formula) -> Formula:
    return _nary(OR, items)


def nxt(f: Formula) -> Formula:
    return _make(NEXT, None, (f,), "X" + f.key)


def until(a: Formula, b: Formula) -> Formula:
    return _make(UNTIL, None, (a, b), "(" + a.key + "U" + b.key + ")")


def release(a: Formula, b: Formula) -> Formula:
    return _make(RELEASE, None, (a, b), "(" + a.key + "R" + b.key + ")")


def eventually(f: Formula) -> Formula:
    return until(TRUE, f)


def globally(f: Formula) -> Formula:
    return release(FALSE, f)


def _propositional(f: Formula) -> bool:
    r = _prop_cache.get(f)
    if r is None:
        if f.kind in TEMPORAL:
            r = False
        else:
            r = all(_propositional(a) for a in f.args)
        _prop_cache[f] = r
    return r


def negate(f: Formula) -> Formula:
    """NNF of the negation of an NNF formula."""
    k = f.kind
    if k == TRUE_K:
        return FALSE
    if k == FALSE_K:
        return TRUE
    if k == LIT:
        return literal(f.lit.complement())
    if k == AND:
        return disj(*(negate(a) for a in f.args))
    if k == OR:
        return conj(*(negate(a) for a in f.args))
    if k == NEXT:
        return nxt(negate(f.args[0]))
    if k == UNTIL:
        return release(negate(f.left), negate(f.right))
    return until(negate(f.left), negate(f.right))


def disjuncts(f: Formula) -> list[Formula]:
    return list(f.args) if f.kind == OR else [f]


def conjuncts(f: Formula) -> list[Formula]:
    return list(f.args) if f.kind == AND else [f]


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, each yielded once, children before parents."""
    seen: set[Formula] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, done = stack.pop()
        if done:
            yield g
            continue
        if g in seen:
            continue
        seen.add(g)
        stack.append((g, True))
        for a in reversed(g.args):
            if a not in seen:
                stack.append((a, False))


def closure(f: Formula) -> set[Formula]:
    return set(subformulas(f))


def size(f: Formula) -> int:
    """Node count of the tree (an n-ary and/or counts as n-1 binary nodes)."""
    if not f.args:
        return 1
    extra = len(f.args) - 2 if f.kind in (AND, OR) else 0
    return 1 + extra + sum(size(a) for a in f.args)


def atoms(f: Formula) -> set[str]:
    return {g.lit.atom for g in subformulas(f) if g.kind == LIT}


def literals(f: Formula) -> set[Lit]:
    return {g.lit for g in subformulas(f) if g.kind == LIT}


# ---------------------------------------------------------------- tagging


def until_ids(f: Formula) -> dict[Formula, int]:
    """Number the distinct until subformulas of ``f`` in canonical order, from 1."""
    us = sorted({g for g in subformulas(f) if g.kind == UNTIL}, key=lambda g: g.key)
    return {u: i for i, u in enumerate(us, 1)}


def tag(f: Formula) -> Formula:
    """Tag every literal occurrence with the untils whose right operand contains it."""
    ids = until_ids(f)
    memo: dict[tuple[Formula, frozenset], Formula] = {}

    def go(g: Formula, ctx: frozenset) -> Formula:
        hit = memo.get((g, ctx))
        if hit is not None:
            return hit
        k = g.kind
        if k == LIT:
            r = literal(Lit(g.lit.atom, g.lit.neg, ctx))
        elif k in (TRUE_K, FALSE_K):
            r = g
        elif k == AND:
            r = conj(*(go(a, ctx) for a in g.args))
        elif k == OR:
            r = disj(*(go(a, ctx) for a in g.args))
        elif k == NEXT:
            r = nxt(go(g.args[0], ctx))
        elif k == UNTIL:
            r = until(go(g.left, ctx), go(g.right, ctx | {ids[g]}))
        else:
            r = release(go(g.left, ctx), go(g.right, ctx))
        memo[(g, ctx)] = r
        return r

    return go(f, frozenset())


def erase_tags(f: Formula) -> Formula:
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is None:
            if g.kind == LIT:
                r = literal(g.lit.erased())
            elif not g.args:
                r = g
            else:
                r = _rebuild(g.kind, None, tuple(go(a) for a in g.args))
            memo[g] = r
        return r

    return go(f)


# ---------------------------------------------------------------- printing


def format_formula(f: Formula, tags: bool = False) -> str:
    """Infix text that :func:`parse` reads back to the same formula (tags aside)."""
    k = f.kind
    if k == TRUE_K:
        return "true"
    if k == FALSE_K:
        return "false"
    if k == LIT:
        return f.lit.key() if tags else ("!" if f.lit.neg else "") + f.lit.atom
    if k in (AND, OR):
        sym = " & " if k == AND else " | "
        return sym.join(_wrap(a, tags) for a in f.args)
    if k == NEXT:
        return "X " + _wrap(f.args[0], tags)
    if k == UNTIL and f.left is TRUE:
        return "F " + _wrap(f.right, tags)
    if k == RELEASE and f.left is FALSE:
        return "G " + _wrap(f.right, tags)
    return _wrap(f.left, tags, True) + f" {k} " + _wrap(f.right, tags, True)


def _wrap(f: Formula, tags: bool, tight: bool = False) -> str:
    s = format_formula(f, tags)
    # U/R bind tighter than negation, so !a needs parentheses there
    if f.args or (tight and f.kind == LIT and f.lit.neg):
        return "(" + s + ")"
    return s


# ---------------------------------------------------------------- raw syntax


@dataclass(frozen=True)
class Syntax:
    """Raw formula as written: ops are the grammar's operator tokens,
    plus ``"atom"``, ``"true"`` and ``"false"``."""

    op: str
    args: tuple = ()
    name: str | None = None

    def __str__(self) -> str:
        return format_syntax(self)


BINARY_OPS = ("<->", "->", "|", "&", "U", "R")
UNARY_OPS = ("!", "X", "F", "G")


def syntax_size(s: Syntax) -> int:
    return 1 + sum(syntax_size(a) for a in s.args)


def syntax_atoms(s: Syntax) -> set[str]:
    if s.op == "atom":
        return {s.name}
    out: set[str] = set()
    for a in s.args:
        out |= syntax_atoms(a)
    return out


def format_syntax(s: Syntax) -> str:
    if s.op == "atom":
        return s.name
    if s.op in ("true", "false"):
        return s.op
    if s.op in UNARY_OPS:
        sub = format_syntax(s.args[0])
        if s.args[0].op in BINARY_OPS:
            sub = "(" + sub + ")"
        return s.op + (" " if s.op != "!" else "") + sub
    parts = []
    for a in s.args:
        t = format_syntax(a)
        parts.append("(" + t + ")" if a.args else t)
    return f" {s.op} ".join(parts)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_KEYWORDS = {"X", "F", "G", "U", "R", "true", "false"}


def _tokens(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(3) is not None:
            line, col = _linecol(text, m.start(3))
            raise ParseError(f"unknown operator {m.group(3)!r}", line, col)
        tok = m.group(1) or m.group(2)
        start = m.start(1) if m.group(1) else m.start(2)
        out.append((tok, start))
        pos = m.end()
    return out


def _linecol(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    # precedence, low to high: <->, ->, |, &, unary, U/R
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def fail(self, msg: str) -> ParseError:
        off = self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)
        return ParseError(msg, *_linecol(self.text, off))

    def take(self) -> str:
        t = self.toks[self.i][0]
        self.i += 1
        return t

    def parse(self) -> Syntax:
        if not self.toks:
            raise self.fail("empty formula")
        s = self.iff()
        if self.peek() is not None:
            raise self.fail(f"unexpected {self.peek()!r}")
        return s

    def iff(self) -> Syntax:
        s = self.imp()
        while self.peek() == "<->":
            self.take()
            s = Syntax("<->", (s, self.imp()))
        return s

    def imp(self) -> Syntax:
        s = self.orr()
        if self.peek() == "->":
            self.take()
            return Syntax("->", (s, self.imp()))
        return s

    def orr(self) -> Syntax:
        s = self.andd()
        while self.peek() == "|":
            self.take()
            s = Syntax("|", (s, self.andd()))
        return s

    def andd(self) -> Syntax:
        s = self.unary()
        while self.peek() == "&":
            self.take()
            s = Syntax("&", (s, self.unary()))
        return s

    def unary(self) -> Syntax:
        t = self.peek()
        if t in UNARY_OPS:
            self.take()
            return Syntax(t, (self.unary(),))
        return self.temporal()

    def temporal(self) -> Syntax:
        s = self.primary()
        t = self.peek()
        if t in ("U", "R"):
            self.take()
            return Syntax(t, (s, self.temporal_rhs()))
        return s

    def temporal_rhs(self) -> Syntax:
        # a U !b is accepted: unary operators may start a right operand
        if self.peek() in UNARY_OPS:
            t = self.take()
            return Syntax(t, (self.temporal_rhs(),))
        return self.temporal()

    def primary(self) -> Syntax:
        t = self.peek()
        if t is None:
            raise self.fail("unexpected end of input")
        if t == "(":
            self.take()
            s = self.iff()
            if self.peek() != ")":
                raise self.fail("expected ')'")
            self.take()
            return s
        if t in ("true", "false"):
            self.take()
            return Syntax(t)
        if t in _KEYWORDS or not (t[0].isalpha() or t[0] == "_"):
            raise self.fail(f"unexpected {t!r}")
        self.take()
        return Syntax("atom", name=t)


def parse_syntax(text: str) -> Syntax:
    return _Parser(text).parse()


def parse(text: str) -> Formula:
    """Parse, desugar and normalize ``text`` into a canonical NNF formula."""
    return to_nnf(parse_syntax(text))


def to_nnf(s: Syntax, positive: bool = True) -> Formula:
    op, a = s.op, s.args
    if op == "atom":
        return atom(s.name, neg=not positive)
    if op == "true":
        return TRUE if positive else FALSE
    if op == "false":
        return FALSE if positive else TRUE
    if op == "!":
        return to_nnf(a[0], not positive)
    if op == "&":
        parts = (to_nnf(a[0], positive), to_nnf(a[1], positive))
        return conj(*parts) if positive else disj(*parts)
    if op == "|":
        parts = (to_nnf(a[0], positive), to_nnf(a[1], positive))
        return disj(*parts) if positive else conj(*parts)
    if op == "->":
        if positive:
            return disj(to_nnf(a[0], False), to_nnf(a[1], True))
        return conj(to_nnf(a[0], True), to_nnf(a[1], False))
    if op == "<->":
        p, q = to_nnf(a[0], True), to_nnf(a[1], True)
        np, nq = negate(p), negate(q)
        if positive:
            return disj(conj(p, q), conj(np, nq))
        return disj(conj(p, nq), conj(np, q))
    if op == "X":
        return nxt(to_nnf(a[0], positive))
    if op == "F":
        body = to_nnf(a[0], positive)
        return eventually(body) if positive else globally(body)
    if op == "G":
        body = to_nnf(a[0], positive)
        return globally(body) if positive else eventually(body)
    if op == "U":
        l, r = to_nnf(a[0], positive), to_nnf(a[1], positive)
        return until(l, r) if positive else release(l, r)
    if op == "R":
        l, r = to_nnf(a[0], positive), to_nnf(a[1], positive)
        return release(l, r) if positive else until(l, r)
    raise ValueError(f"unknown operator {op!r}")


def to_syntax(f: Formula) -> Syntax:
    """Raw tree for a canonical formula (n-ary and/or become left-nested binaries)."""
    k = f.kind
    if k in (TRUE_K, FALSE_K):
        return Syntax(k)
    if k == LIT:
        s = Syntax("atom", name=f.lit.atom)
        return Syntax("!", (s,)) if f.lit.neg else s
    if k in (AND, OR):
        sym = "&" if k == AND else "|"
        args = [to_syntax(x) for x in f.args]
        s = args[0]
        for x in args[1:]:
            s = Syntax(sym, (s, x))
        return s
    if k == NEXT:
        return Syntax("X", (to_syntax(f.args[0]),))
    return Syntax(k, (to_syntax(f.left), to_syntax(f.right)))
