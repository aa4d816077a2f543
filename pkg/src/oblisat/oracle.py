"""Reference decision procedures used to test the checker.

``oracle_decide`` answers "does some lasso with |stem|+|loop| <= bound
satisfy the formula?".  Short lassos are enumerated exhaustively and
evaluated with numpy, one array row per word.  When the bound is beyond what
enumeration can reach, the answer is completed by a classical tableau over
Hintikka atoms (``tableau_decide``): if the tableau finds no model at all,
no lasso exists; if it finds one within the bound, that lasso is the answer.
Neither route shares code with the obligation-based checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import networkx as nx
import numpy as np

from oblisat import ltl
from oblisat.lasso import Lasso, lasso_check, letter_of
from oblisat.ltl import Formula
from oblisat.obligation import ResourceLimit


@dataclass(frozen=True)
class OracleResult:
    sat: bool
    lasso: Lasso | None
    bound: int
    method: str  # "enumeration" or "tableau"


def _eval_words(f: Formula, bits: dict[str, np.ndarray], succ: np.ndarray, n: int) -> np.ndarray:
    """Truth of ``f`` at position 0 for every word; ``bits[a]`` is (words, n)."""
    memo: dict[Formula, np.ndarray] = {}
    shape = next(iter(bits.values())).shape if bits else (1, n)

    def ev(g: Formula) -> np.ndarray:
        hit = memo.get(g)
        if hit is not None:
            return hit
        k = g.kind
        if k == ltl.TRUE_K:
            r = np.ones(shape, dtype=bool)
        elif k == ltl.FALSE_K:
            r = np.zeros(shape, dtype=bool)
        elif k == ltl.LIT:
            r = ~bits[g.lit.atom] if g.lit.neg else bits[g.lit.atom]
        elif k == ltl.AND:
            r = np.logical_and.reduce([ev(a) for a in g.args])
        elif k == ltl.OR:
            r = np.logical_or.reduce([ev(a) for a in g.args])
        elif k == ltl.NEXT:
            r = ev(g.args[0])[:, succ]
        else:
            lv, rv = ev(g.left), ev(g.right)
            if k == ltl.UNTIL:
                r = rv.copy()
                for _ in range(n):
                    r = rv | (lv & r[:, succ])
            else:
                r = rv.copy()
                for _ in range(n):
                    r = rv & (lv | r[:, succ])
        memo[g] = r
        return r

    return ev(f)[:, 0]


def enumerate_lassos(f: Formula, max_len: int, atoms: list[str] | None = None) -> Lasso | None:
    """Shortest satisfying lasso with |stem|+|loop| <= max_len, by brute force."""
    f = ltl.erase_tags(f)
    names = sorted(ltl.atoms(f)) if atoms is None else list(atoms)
    k = len(names)
    letters = 1 << k
    for n in range(1, max_len + 1):
        codes = np.arange(letters**n, dtype=np.int64)
        word = np.stack([(codes // letters**p) % letters for p in range(n)], axis=1)
        bits = {a: ((word >> j) & 1).astype(bool) for j, a in enumerate(names)}
        for s in range(n):
            succ = np.array(list(range(1, n)) + [s])
            hits = np.flatnonzero(_eval_words(f, bits, succ, n))
            if hits.size:
                row = word[hits[0]]
                seq = [letter_of({a for j, a in enumerate(names) if int(row[p]) >> j & 1}, names) for p in range(n)]
                return Lasso(tuple(seq[:s]), tuple(seq[s:]))
    return None


def tableau_decide(f: Formula, cap: int = 1 << 18) -> Lasso | None:
    """Complete decision over Hintikka atoms; returns a model lasso or None.

    An atom fixes the atoms' values and, for every X/U/R subformula, whether
    its obligation holds at the next position.  A model is a path from an
    atom containing ``f`` into a nontrivial SCC that fulfils every until.
    """
    f = ltl.erase_tags(f)
    names = sorted(ltl.atoms(f))
    cl = list(ltl.subformulas(f))
    flagged = [g for g in cl if g.kind in ltl.TEMPORAL]
    k, m = len(names), len(flagged)
    total = 1 << (k + m)
    if total > cap:
        raise ResourceLimit(f"tableau needs {total} atoms (cap {cap})")
    codes = np.arange(total, dtype=np.int64)
    vbit = {a: ((codes >> j) & 1).astype(bool) for j, a in enumerate(names)}
    fbit = {g: ((codes >> (k + j)) & 1).astype(bool) for j, g in enumerate(flagged)}
    truth: dict[Formula, np.ndarray] = {}
    for g in cl:
        kd = g.kind
        if kd == ltl.TRUE_K:
            truth[g] = np.ones(total, dtype=bool)
        elif kd == ltl.FALSE_K:
            truth[g] = np.zeros(total, dtype=bool)
        elif kd == ltl.LIT:
            truth[g] = ~vbit[g.lit.atom] if g.lit.neg else vbit[g.lit.atom]
        elif kd == ltl.AND:
            truth[g] = np.logical_and.reduce([truth[a] for a in g.args])
        elif kd == ltl.OR:
            truth[g] = np.logical_or.reduce([truth[a] for a in g.args])
        elif kd == ltl.NEXT:
            truth[g] = fbit[g]
        elif kd == ltl.UNTIL:
            truth[g] = truth[g.right] | (truth[g.left] & fbit[g])
        else:
            truth[g] = truth[g.right] & (truth[g.left] | fbit[g])

    # a successor must make true exactly the obligations flagged for next
    flags = np.zeros(total, dtype=np.int64)
    demand = np.zeros(total, dtype=np.int64)
    for j, g in enumerate(flagged):
        target = g.args[0] if g.kind == ltl.NEXT else g
        flags |= fbit[g].astype(np.int64) << j
        demand |= truth[target].astype(np.int64) << j
    buckets: dict[int, list[int]] = {}
    for c in np.flatnonzero(np.ones(total, dtype=bool)):
        buckets.setdefault(int(demand[c]), []).append(int(c))

    graph = nx.DiGraph()
    starts = [int(c) for c in np.flatnonzero(truth[f])]
    graph.add_nodes_from(starts)
    frontier = list(starts)
    seen = set(starts)
    while frontier:
        a = frontier.pop()
        for b in buckets.get(int(flags[a]), ()):
            graph.add_edge(a, b)
            if b not in seen:
                seen.add(b)
                frontier.append(b)

    untils = [g for g in cl if g.kind == ltl.UNTIL]
    for comp in nx.strongly_connected_components(graph):
        nodes = sorted(comp)
        if len(nodes) == 1 and not graph.has_edge(nodes[0], nodes[0]):
            continue
        idx = np.array(nodes)
        if not all(np.any(~truth[u][idx] | truth[u.right][idx]) for u in untils):
            continue
        return _tableau_lasso(graph, starts, comp, names, vbit)
    return None


def _tableau_lasso(graph, starts, comp, names, vbit) -> Lasso:
    src = nx.DiGraph(graph)
    src.add_node("init")
    for s in starts:
        src.add_edge("init", s)
    target = min(comp)
    stem = nx.shortest_path(src, "init", target)[1:-1]
    sub = graph.subgraph(comp)
    cycle = [target]
    cur = target
    for node in sorted(comp):
        if node == cur:
            continue
        cycle += nx.shortest_path(sub, cur, node)[1:]
        cur = node
    if cur != target or len(cycle) == 1:
        back = nx.shortest_path(sub, cur, target) if cur != target else None
        if back is None:
            # single node with a self-loop
            cycle.append(target)
        else:
            cycle += back[1:]
    loop = cycle[:-1]

    def letter(c: int):
        return letter_of({a for a in names if vbit[a][c]}, names)

    return Lasso(tuple(letter(c) for c in stem), tuple(letter(c) for c in loop))


def closure_bound(f: Formula) -> int:
    return 2 ** len(ltl.closure(ltl.erase_tags(f)))


def oracle_decide(
    f: Formula,
    atom_bound: int = 3,
    len_bound: int | None = None,
    word_budget: int = 1 << 8,
    tableau_cap: int = 1 << 18,
) -> OracleResult:
    """Is there a lasso of total length <= ``len_bound`` satisfying ``f``?

    ``len_bound`` defaults to 2^|cl(f)|.  Raises ResourceLimit when neither
    enumeration nor the tableau can settle the question within budget.
    """
    f = ltl.erase_tags(f)
    names = sorted(ltl.atoms(f))
    if len(names) > atom_bound:
        raise ValueError(f"{len(names)} atoms exceeds the bound {atom_bound}")
    if len_bound is None:
        len_bound = closure_bound(f)
    letters = 1 << len(names)
    reach = 1
    while reach < len_bound and letters ** (reach + 1) <= word_budget:
        reach += 1
    reach = min(reach, len_bound)
    w = enumerate_lassos(f, reach, names)
    if w is not None:
        return OracleResult(True, w, len_bound, "enumeration")
    if reach >= len_bound:
        return OracleResult(False, None, len_bound, "enumeration")
    w = tableau_decide(f, tableau_cap)
    if w is None:
        return OracleResult(False, None, len_bound, "tableau")
    if not lasso_check(w, f):
        raise AssertionError(f"tableau model rejected for {f}")
    if len(w) <= len_bound:
        return OracleResult(True, w, len_bound, "tableau")
    raise ResourceLimit(f"shortest model not settled within bound {len_bound}")


def all_words(names: list[str], n: int):
    """Every full-valuation word of length ``n`` over ``names``."""
    for combo in product(range(1 << len(names)), repeat=n):
        yield [letter_of({a for j, a in enumerate(names) if c >> j & 1}, names) for c in combo]


def enumerate_formulas(max_size: int, names: list[str]):
    """Every canonical NNF formula of size <= ``max_size`` over ``names``,
    as ``(size, formula)`` pairs.

    Formulas are built bottom-up from the grammar (tt, ff, literals, X, and,
    or, U, R) and yielded once each, at the smallest size that produces
    them.  Formulas of the largest size are not retained, which keeps memory
    proportional to the smaller layers.
    """
    leaves = [ltl.TRUE, ltl.FALSE] + [ltl.atom(a, neg) for a in names for neg in (False, True)]
    layers: list[list[Formula]] = [[], []]
    seen: set = set()
    for f in leaves:
        if f.key not in seen:
            seen.add(f.key)
            layers[1].append(f)
            yield 1, f
    makers = (ltl.conj, ltl.disj, ltl.until, ltl.release)
    for size in range(2, max_size + 1):
        keep = size < max_size
        layer: list[Formula] = []

        def fresh(f: Formula) -> bool:
            if f.key in seen:
                return False
            seen.add(f.key)
            if keep:
                layer.append(f)
            return True

        for g in layers[size - 1]:
            f = ltl.nxt(g)
            if fresh(f):
                yield size, f
        for k in range(1, size - 1):
            for a in layers[k]:
                for b in layers[size - 1 - k]:
                    for make in makers:
                        f = make(a, b)
                        if fresh(f):
                            yield size, f
        layers.append(layer)
