"""Negation-free propositional formulas over literal leaves.

``BoolFormula`` is used both for obligation formulas (leaves are ``Lit``)
and for positional obligation formulas (leaves are ``PosLiteral``).  The
constructors only flatten, deduplicate and sort; they never simplify, so the
DNF of a formula mirrors its construction exactly.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable

from oblisat.ltl import FF_LIT, Lit

B_TRUE = "true"
B_FALSE = "false"
B_LEAF = "leaf"
B_AND = "and"
B_OR = "or"


class BoolFormula:
    __slots__ = ("kind", "leaf", "args", "key", "_hash")

    def __init__(self, kind: str, leaf: Hashable = None, args: tuple = (), key: str = ""):
        self.kind = kind
        self.leaf = leaf
        self.args = args
        self.key = key
        self._hash = hash(key)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoolFormula) and self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"BoolFormula({self.key!r})"

    def __str__(self) -> str:
        return self.key

    def __and__(self, other: "BoolFormula") -> "BoolFormula":
        return band(self, other)

    def __or__(self, other: "BoolFormula") -> "BoolFormula":
        return bor(self, other)

    def leaves(self) -> set:
        out: set = set()
        stack = [self]
        while stack:
            f = stack.pop()
            if f.kind == B_LEAF:
                out.add(f.leaf)
            else:
                stack.extend(f.args)
        return out


TRUE = BoolFormula(B_TRUE, key="true")
FALSE = BoolFormula(B_FALSE, key="false")


def leaf(x: Hashable) -> BoolFormula:
    return BoolFormula(B_LEAF, x, (), str(x))


def blit(atom: str, neg: bool = False) -> BoolFormula:
    return leaf(Lit(atom, neg))


def _nary(kind: str, items: Iterable[BoolFormula]) -> BoolFormula:
    """Flatten and sort.  Disjunctions drop repeated operands; conjunctions
    keep them, because the distributed DNF of ``x & x`` contains the cross
    terms of ``x`` with itself and differs from that of ``x``."""
    flat: list[BoolFormula] = []
    for x in items:
        flat.extend(x.args if x.kind == kind else (x,))
    if kind == B_OR:
        flat = list({y.key: y for y in flat}.values())
    if not flat:
        return TRUE if kind == B_AND else FALSE
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda y: y.key)
    sym = " & " if kind == B_AND else " | "
    return BoolFormula(kind, None, tuple(flat), "(" + sym.join(y.key for y in flat) + ")")


def band(*items: BoolFormula) -> BoolFormula:
    return _nary(B_AND, items)


def bor(*items: BoolFormula) -> BoolFormula:
    return _nary(B_OR, items)


def map_leaves(f: BoolFormula, fn: Callable[[Hashable], BoolFormula]) -> BoolFormula:
    """Replace each leaf by ``fn(leaf)``, folding constants on the way up."""
    if f.kind == B_LEAF:
        return fn(f.leaf)
    if f.kind in (B_TRUE, B_FALSE):
        return f
    parts = [map_leaves(a, fn) for a in f.args]
    return simplify(band(*parts) if f.kind == B_AND else bor(*parts))


def simplify(f: BoolFormula) -> BoolFormula:
    """Propagate the constants tt/ff (no other rewriting)."""
    if f.kind not in (B_AND, B_OR):
        return f
    parts = [simplify(a) for a in f.args]
    unit, zero = (TRUE, FALSE) if f.kind == B_AND else (FALSE, TRUE)
    if any(p.kind == zero.kind for p in parts):
        return zero
    parts = [p for p in parts if p.kind != unit.kind]
    return band(*parts) if f.kind == B_AND else bor(*parts)


def evaluate(f: BoolFormula, model: dict[str, bool]) -> bool:
    k = f.kind
    if k == B_TRUE:
        return True
    if k == B_FALSE:
        return False
    if k == B_LEAF:
        l = f.leaf
        return model.get(l.atom, False) != l.neg
    if k == B_AND:
        return all(evaluate(a, model) for a in f.args)
    return any(evaluate(a, model) for a in f.args)


def atoms(f: BoolFormula) -> set[str]:
    return {l.atom for l in f.leaves() if l != FF_LIT}


def weak_sat(s: Iterable[Lit], f: BoolFormula, exact_tags: bool = False) -> bool:
    """Syntactic satisfaction of ``f`` by the literal set ``s``.

    A leaf holds iff its literal belongs to ``s``; tags are ignored unless
    ``exact_tags``.  ``s`` may be inconsistent.  tt always holds, ff never.
    """
    members = set(s) if exact_tags else {l.erased() for l in s}

    def go(g: BoolFormula) -> bool:
        k = g.kind
        if k == B_LEAF:
            return (g.leaf if exact_tags else g.leaf.erased()) in members
        if k == B_AND:
            return all(go(a) for a in g.args)
        if k == B_OR:
            return any(go(a) for a in g.args)
        return k == B_TRUE

    return go(f)


class WeakSatTable:
    """Weak satisfaction of a formula by every subset of a literal universe.

    Calling the table on ``f`` gives a bitmask over subsets: bit ``m`` is set
    iff the subset encoded by ``m`` (bit ``i`` of ``m`` selects
    ``universe[i]``) weakly satisfies ``f``.  Tags are ignored.  Results are
    memoized per node, so one table can serve many formulas.
    """

    def __init__(self, universe: list[Lit]):
        n = len(universe)
        self.full = (1 << (1 << n)) - 1
        self.index = {l.erased(): i for i, l in enumerate(universe)}
        self.masks = []
        for i in range(n):
            m = 0
            for s in range(1 << n):
                if s >> i & 1:
                    m |= 1 << s
            self.masks.append(m)
        self.memo: dict[BoolFormula, int] = {}

    def __call__(self, g: BoolFormula) -> int:
        hit = self.memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == B_TRUE:
            r = self.full
        elif k == B_FALSE:
            r = 0
        elif k == B_LEAF:
            i = self.index.get(g.leaf.erased())
            r = 0 if i is None else self.masks[i]
        elif k == B_AND:
            r = self.full
            for a in g.args:
                r &= self(a)
        else:
            r = 0
            for a in g.args:
                r |= self(a)
        self.memo[g] = r
        return r


def weak_sat_table(f: BoolFormula, universe: list[Lit]) -> int:
    """One-off use of ``WeakSatTable``."""
    return WeakSatTable(universe)(f)


# ---------------------------------------------------------------- CNF


class Cnf:
    """Clauses over DIMACS variables; ``atoms`` maps atom names to variables."""

    def __init__(self, clauses: list[list[int]], atoms: dict[str, int], nvars: int):
        self.clauses = clauses
        self.atoms = atoms
        self.nvars = nvars

    def __repr__(self) -> str:
        return f"Cnf(nvars={self.nvars}, clauses={self.clauses!r})"


def to_cnf(f: BoolFormula) -> Cnf:
    """Tseitin encoding with one selector variable per inner and/or node.

    Atoms get variables 1..k in sorted order; tags are erased.  Nodes that
    must hold at the top level are encoded directly, without a selector.
    """
    f = simplify(f)
    names = sorted(atoms(f))
    amap = {a: i for i, a in enumerate(names, 1)}
    clauses: list[list[int]] = []
    nvars = len(names)
    memo: dict[str, int] = {}

    if f.kind == B_TRUE:
        return Cnf([], amap, nvars)
    if f.kind == B_FALSE:
        return Cnf([[]], amap, nvars)

    def lit_of(g: BoolFormula) -> int:
        nonlocal nvars
        if g.kind == B_LEAF:
            v = amap[g.leaf.atom]
            return -v if g.leaf.neg else v
        hit = memo.get(g.key)
        if hit is not None:
            return hit
        kids = [lit_of(a) for a in g.args]
        nvars += 1
        sel = nvars
        if g.kind == B_AND:
            clauses.append([-k for k in kids] + [sel])
            for k in kids:
                clauses.append([-sel, k])
        else:
            clauses.append(kids + [-sel])
            for k in kids:
                clauses.append([-k, sel])
        memo[g.key] = sel
        return sel

    def required(g: BoolFormula) -> None:
        if g.kind == B_AND:
            for a in g.args:
                required(a)
        elif g.kind == B_OR:
            clauses.append([lit_of(a) for a in g.args])
        else:
            clauses.append([lit_of(g)])

    required(f)
    return Cnf(clauses, amap, nvars)


# ---------------------------------------------------------------- DIMACS


class DimacsError(ValueError):
    pass


def write_dimacs(clauses: list[list[int]], nvars: int | None = None) -> bytes:
    if nvars is None:
        nvars = max((abs(x) for c in clauses for x in c), default=0)
    lines = [f"p cnf {nvars} {len(clauses)}"]
    for c in clauses:
        lines.append(" ".join([str(x) for x in c] + ["0"]))
    return ("\n".join(lines) + "\n").encode()


def read_dimacs(data: bytes) -> tuple[list[list[int]], int]:
    clauses: list[list[int]] = []
    cur: list[int] = []
    nvars = None
    for raw in data.decode().splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad header {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(x)
    if cur:
        raise DimacsError("last clause is not terminated by 0")
    if nvars is None:
        raise DimacsError("missing 'p cnf' header")
    return clauses, nvars


def read_dimacs_result(data: bytes) -> dict[int, bool] | None:
    """Parse a solver result: ``SAT``/``UNSAT`` on the first line, then the
    model as signed integers ending in 0.  Competition style ``s``/``v``
    lines are accepted too.  Returns the model, or None for UNSAT."""
    lines = [l.strip() for l in data.decode().splitlines() if l.strip() and not l.startswith("c ")]
    if not lines:
        raise DimacsError("empty result")
    head = lines[0].removeprefix("s ").strip()
    if head in ("UNSAT", "UNSATISFIABLE"):
        return None
    if head not in ("SAT", "SATISFIABLE"):
        raise DimacsError(f"unrecognised result line {lines[0]!r}")
    model: dict[int, bool] = {}
    for line in lines[1:]:
        for tok in line.removeprefix("v ").split():
            try:
                x = int(tok)
            except ValueError:
                raise DimacsError(f"bad model token {tok!r}") from None
            if x:
                model[abs(x)] = x > 0
    return model
