"""Obligation formulas with position, projections and the unsat heuristic."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

from oblisat import boolean as B
from oblisat import ltl
from oblisat.boolean import BoolFormula
from oblisat.ltl import Formula, Lit
from oblisat.sat import solve


class Duration(Enum):
    CUR = "cur"
    INF = "inf"
    GEQ = "geq"


class PosLiteral(NamedTuple):
    prop: Lit
    start: int | None  # None: start position undetermined
    duration: Duration

    def __str__(self) -> str:
        start = "_" if self.start is None else str(self.start)
        return f"<{self.prop},{start},{self.duration.value}>"


def pos_apply(l: PosLiteral, op: str) -> PosLiteral:
    """One cell of the Pos rule table; ``op`` is one of X, U, R, G."""
    p, i, d = l
    if op == "X":
        return l if i is None else PosLiteral(p, i + 1, d)
    if op == "U":
        return PosLiteral(p, None, d)
    if op == "R":
        return l
    if op == "G":
        if d is Duration.CUR:
            return PosLiteral(p, i, Duration.INF if i is None else Duration.GEQ)
        return l
    raise ValueError(f"unknown operator {op!r}")


def _lift(t: BoolFormula, fn: Callable[[PosLiteral], PosLiteral]) -> BoolFormula:
    if t.kind == B.B_LEAF:
        return B.leaf(fn(t.leaf))
    if t.kind in (B.B_AND, B.B_OR):
        parts = [_lift(a, fn) for a in t.args]
        return B.band(*parts) if t.kind == B.B_AND else B.bor(*parts)
    return t


def _weaken(l: PosLiteral) -> PosLiteral:
    return PosLiteral(l.prop, None, Duration.CUR)


def ofp(f: Formula) -> BoolFormula:
    """Obligation formula with position; leaves are ``PosLiteral``."""
    memo: dict[Formula, BoolFormula] = {}

    def go(g: Formula) -> BoolFormula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ltl.TRUE_K:
            r = B.TRUE
        elif k == ltl.FALSE_K:
            r = B.FALSE
        elif k == ltl.LIT:
            r = B.leaf(PosLiteral(g.lit, 0, Duration.CUR))
        elif k == ltl.AND:
            r = B.band(*(go(a) for a in g.args))
        elif k == ltl.OR:
            parts = [go(a) for a in g.args]
            starts = {l.start for p in parts for l in p.leaves()}
            if len(starts) > 1:
                parts = [_lift(p, _weaken) for p in parts]
            r = B.bor(*parts)
        elif k == ltl.NEXT:
            r = _lift(go(g.args[0]), lambda l: pos_apply(l, "X"))
        elif k == ltl.UNTIL:
            r = _lift(go(g.right), lambda l: pos_apply(l, "U"))
        elif g.left is ltl.FALSE:  # ff R x is G x
            r = _lift(go(g.right), lambda l: pos_apply(l, "G"))
        else:
            r = _lift(go(g.right), lambda l: pos_apply(l, "R"))
        memo[g] = r
        return r

    return go(f)


def _relevant_at(l: PosLiteral, i: int) -> bool:
    if l.start is None:
        return False
    return l.start == i or (l.start < i and l.duration is Duration.GEQ)


def project_at(t: BoolFormula, i: int) -> BoolFormula:
    """Keep leaves that constrain position ``i``; every other leaf becomes tt."""
    return B.map_leaves(t, lambda l: B.leaf(l.prop) if _relevant_at(l, i) else B.TRUE)


def project_abstract(t: BoolFormula, s: set[PosLiteral] | frozenset[PosLiteral]) -> BoolFormula:
    """Keep leaves in ``s``; every other leaf becomes tt."""
    return B.map_leaves(t, lambda l: B.leaf(l.prop) if l in s else B.TRUE)


@dataclass(frozen=True)
class UnsatProof:
    condition: int
    evidence: BoolFormula
    position: int | None = None
    leaf: PosLiteral | None = None

    def describe(self) -> str:
        where = ""
        if self.position is not None:
            where = f" at position {self.position}"
        elif self.leaf is not None:
            where = f" with {self.leaf}"
        return f"condition {self.condition}{where}: {self.evidence} is unsatisfiable"


def unsat_heuristic(
    f: Formula,
    should_stop: Callable[[], bool] | None = None,
    on_solve: Callable[[], None] | None = None,
    external: bool = False,
) -> UnsatProof | None:
    """Try the four positional-projection conditions (in the order 2, 1, 3, 4).

    Returns the first one whose projected formula is unsatisfiable, or None.
    """
    t = ofp(f)
    leaves = sorted(t.leaves(), key=str)

    def unsat(p: BoolFormula) -> bool:
        if on_solve is not None:
            on_solve()
        return solve(p, should_stop, external) is None

    # condition 2 goes first: one solver call that covers every always-leaf
    geq = frozenset(l for l in leaves if l.duration is Duration.GEQ)
    if geq:
        p = project_abstract(t, geq)
        if unsat(p):
            return UnsatProof(2, p)
    for i in sorted({l.start for l in leaves if l.start is not None}):
        p = project_at(t, i)
        if unsat(p):
            return UnsatProof(1, p, position=i)
    at_zero = frozenset(l for l in geq if l.start == 0)
    for l in leaves:
        # inf leaves are left to condition 4, which is strictly stronger for them
        if l.start is None and l.duration is not Duration.INF:
            p = project_abstract(t, at_zero | {l})
            if unsat(p):
                return UnsatProof(3, p, leaf=l)
    for l in leaves:
        if l.duration is Duration.INF:
            p = project_abstract(t, geq | {l})
            if unsat(p):
                return UnsatProof(4, p, leaf=l)
    return None
