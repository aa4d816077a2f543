"""Obligation sets and obligation formulas.

``olg`` enumerates the obligation set explicitly and is exponential; it is
kept as a reference for testing.  The decision procedure only ever uses the
linear-size obligation formula ``of``.
"""

from __future__ import annotations

from functools import lru_cache

from oblisat import boolean as B
from oblisat import ltl
from oblisat.boolean import BoolFormula
from oblisat.ltl import FF_LIT, Formula, Lit

Obligation = frozenset  # of Lit
ObligationSet = frozenset  # of Obligation


class ResourceLimit(RuntimeError):
    """A configured size cap was exceeded."""


def olg(f: Formula, cap: int = 4096, memo: dict | None = None) -> frozenset[frozenset[Lit]]:
    """The obligation set of ``f``.

    ``memo`` may be shared between calls (with the same cap) to reuse the
    sets of common subformulas.
    """
    memo = {} if memo is None else memo

    def go(g: Formula) -> frozenset:
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ltl.TRUE_K:
            r = frozenset([frozenset()])
        elif k == ltl.FALSE_K:
            r = frozenset([frozenset([FF_LIT])])
        elif k == ltl.LIT:
            r = frozenset([frozenset([g.lit])])
        elif k == ltl.NEXT:
            r = go(g.args[0])
        elif k in (ltl.UNTIL, ltl.RELEASE):
            r = go(g.right)
        elif k == ltl.OR:
            acc: set = set()
            for a in g.args:
                acc |= go(a)
                if len(acc) > cap:
                    raise ResourceLimit(f"obligation set exceeds {cap} members")
            r = frozenset(acc)
        else:
            r = frozenset([frozenset()])
            for a in g.args:
                sub = go(a)
                prod: set = set()
                for o1 in r:
                    for o2 in sub:
                        prod.add(o1 | o2)
                    if len(prod) > cap:
                        raise ResourceLimit(f"obligation set exceeds {cap} members")
                r = frozenset(prod)
        memo[g] = r
        return r

    return go(f)


@lru_cache(maxsize=1 << 16)
def of(f: Formula) -> BoolFormula:
    """The obligation formula: X is dropped, U/R keep their right operand."""
    k = f.kind
    if k == ltl.TRUE_K:
        return B.TRUE
    if k == ltl.FALSE_K:
        return B.FALSE
    if k == ltl.LIT:
        return B.leaf(f.lit)
    if k == ltl.NEXT:
        return of(f.args[0])
    if k in (ltl.UNTIL, ltl.RELEASE):
        return of(f.right)
    parts = [of(a) for a in f.args]
    return B.band(*parts) if k == ltl.AND else B.bor(*parts)


def dnf(f: BoolFormula, cap: int = 4096, memo: dict | None = None) -> frozenset[frozenset[Lit]]:
    """Clauses of the distributed DNF of ``f``; only duplicates are removed.

    ``memo`` may be shared between calls (with the same cap).
    """
    memo = {} if memo is None else memo

    def go(g: BoolFormula) -> frozenset:
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == B.B_TRUE:
            r = frozenset([frozenset()])
        elif k == B.B_FALSE:
            r = frozenset([frozenset([FF_LIT])])
        elif k == B.B_LEAF:
            r = frozenset([frozenset([g.leaf])])
        elif k == B.B_OR:
            acc: set = set()
            for a in g.args:
                acc |= go(a)
            r = frozenset(acc)
        else:
            r = frozenset([frozenset()])
            for a in g.args:
                sub = go(a)
                r = frozenset(c1 | c2 for c1 in r for c2 in sub)
                if len(r) > cap:
                    break
        if len(r) > cap:
            raise ResourceLimit(f"DNF exceeds {cap} clauses")
        memo[g] = r
        return r

    return go(f)


def is_consistent(o: frozenset[Lit]) -> bool:
    return ltl.consistent(o)


def minimal(obligations: frozenset[frozenset[Lit]]) -> frozenset[frozenset[Lit]]:
    """Drop every member that strictly contains another member."""
    items = sorted(obligations, key=len)
    kept: list[frozenset] = []
    for o in items:
        if not any(k < o for k in kept):
            kept.append(o)
    return frozenset(kept)


def obligation_from_model(f: BoolFormula, model: dict[str, bool]) -> frozenset[Lit]:
    """A clause of the DNF of ``f`` whose literals all hold in ``model``.

    Or-nodes follow their first true child, so the result is consistent.
    """
    out: set[Lit] = set()

    def go(g: BoolFormula) -> None:
        if g.kind == B.B_LEAF:
            out.add(g.leaf)
        elif g.kind == B.B_AND:
            for a in g.args:
                go(a)
        elif g.kind == B.B_OR:
            for a in g.args:
                if B.evaluate(a, model):
                    go(a)
                    return
            raise ValueError("model does not satisfy the formula")
        elif g.kind == B.B_FALSE:
            raise ValueError("model does not satisfy the formula")

    go(f)
    return frozenset(out)
