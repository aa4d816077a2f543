"""Ultimately periodic words and exact LTL evaluation on them."""

from __future__ import annotations

from dataclasses import dataclass

from oblisat import ltl
from oblisat.ltl import Formula, Lit

Letter = frozenset  # of Lit; an atom is true iff its positive literal is present


@dataclass(frozen=True)
class Lasso:
    """The infinite word ``stem . loop . loop ...``."""

    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")
        for letter in self.stem + self.loop:
            if not ltl.consistent(letter):
                raise ValueError(f"inconsistent letter {sorted(map(str, letter))}")

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def letter(self, i: int) -> Letter:
        n = len(self.stem)
        if i < n:
            return self.stem[i]
        return self.loop[(i - n) % len(self.loop)]

    def __str__(self) -> str:
        return f"stem: {_fmt(self.stem)} ; loop: {_fmt(self.loop)}"


def _fmt(letters) -> str:
    parts = []
    for letter in letters:
        lits = sorted(letter, key=lambda l: (l.atom, l.neg))
        parts.append("{" + ", ".join(("!" if l.neg else "") + l.atom for l in lits) + "}")
    return " ".join(parts) if parts else "[]"


def letter_of(true_atoms, all_atoms=()) -> Letter:
    """Full valuation letter: listed atoms true, the rest of ``all_atoms`` false."""
    true_atoms = set(true_atoms)
    lits = {Lit(a) for a in true_atoms}
    lits |= {Lit(a, True) for a in all_atoms if a not in true_atoms}
    return frozenset(lits)


def lasso_check(w: Lasso, f: Formula) -> bool:
    """Does ``w`` satisfy ``f``?  Tags on ``f`` are ignored.

    Positions 0..n-1 cover stem and one loop copy; position n-1 steps back to
    the first loop position.  Until is the least and release the greatest
    fixpoint of its one-step unfolding over these positions.
    """
    n = len(w)
    s = len(w.stem)
    succ = list(range(1, n)) + [s]
    trues = [frozenset(l.atom for l in w.letter(i) if not l.neg) for i in range(n)]
    memo: dict[Formula, list[bool]] = {}

    def ev(g: Formula) -> list[bool]:
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ltl.TRUE_K:
            r = [True] * n
        elif k == ltl.FALSE_K:
            r = [False] * n
        elif k == ltl.LIT:
            a, neg = g.lit.atom, g.lit.neg
            r = [(a in t) != neg for t in trues]
        elif k == ltl.AND:
            parts = [ev(a) for a in g.args]
            r = [all(p[i] for p in parts) for i in range(n)]
        elif k == ltl.OR:
            parts = [ev(a) for a in g.args]
            r = [any(p[i] for p in parts) for i in range(n)]
        elif k == ltl.NEXT:
            v = ev(g.args[0])
            r = [v[succ[i]] for i in range(n)]
        else:
            lv, rv = ev(g.left), ev(g.right)
            until = k == ltl.UNTIL
            r = [not until] * n
            changed = True
            while changed:
                changed = False
                for i in range(n - 1, -1, -1):
                    if until:
                        v = rv[i] or (lv[i] and r[succ[i]])
                    else:
                        v = rv[i] and (lv[i] or r[succ[i]])
                    if v != r[i]:
                        r[i] = v
                        changed = True
        memo[g] = r
        return r

    return ev(f)[0]
