"""Normal-form expansion and the on-the-fly LTL transition system.

States are canonical (tagged) formulas; an edge ``u --label--> v`` exists
for every ``label & X v`` in the normal form of ``u``.  Acceptance of a
strongly connected component compares the literals on its edges with the
obligation formula of one of its states.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

from oblisat import ltl
from oblisat.boolean import weak_sat
from oblisat.lasso import Lasso, letter_of
from oblisat.ltl import Formula
from oblisat.obligation import ResourceLimit, of
from oblisat.sat import Cancelled


class SoundnessError(AssertionError):
    """An internal invariant that guards soundness was violated."""


class NormalFormEntry(NamedTuple):
    label: frozenset  # of Lit
    next: Formula


def _label_key(label: frozenset) -> tuple:
    return tuple(sorted(l.key() for l in label))


class Expander:
    """Memoizing normal-form expander with a cap on intermediate products.

    Internally each entry also carries two atom bitmasks (atoms occurring
    positively and negatively in its label) so that the consistency test in
    conjunction products is a single integer operation.
    """

    def __init__(self, product_cap: int = 100_000):
        self.product_cap = product_cap
        self.memo: dict[Formula, list[NormalFormEntry]] = {}
        self.raw: dict[Formula, list[tuple]] = {}
        self.conj_memo: dict[tuple[Formula, Formula], Formula] = {}
        self.bits: dict[str, int] = {}

    def __call__(self, f: Formula) -> list[NormalFormEntry]:
        hit = self.memo.get(f)
        if hit is None:
            entries = [NormalFormEntry(label, nx) for label, _, _, nx in self._raw(f)]
            hit = sorted(entries, key=lambda e: (len(e.next.key), e.next.key, _label_key(e.label)))
            self.memo[f] = hit
        return hit

    def _bit(self, atom: str) -> int:
        b = self.bits.get(atom)
        if b is None:
            b = self.bits[atom] = 1 << len(self.bits)
        return b

    def _raw(self, f: Formula) -> list[tuple]:
        hit = self.raw.get(f)
        if hit is None:
            hit = self.raw[f] = self._expand(f)
        return hit

    def _expand(self, f: Formula) -> list[tuple]:
        k = f.kind
        if k == ltl.FALSE_K:
            return []
        if k == ltl.TRUE_K:
            return [(frozenset(), 0, 0, ltl.TRUE)]
        if k == ltl.LIT:
            b = self._bit(f.lit.atom)
            return [(frozenset([f.lit]), 0 if f.lit.neg else b, b if f.lit.neg else 0, ltl.TRUE)]
        if k == ltl.NEXT:
            return [(frozenset(), 0, 0, d) for d in ltl.disjuncts(f.args[0])]
        if k == ltl.UNTIL:
            return _union(self._raw(f.right), self._raw(ltl.conj(f.left, ltl.nxt(f))))
        if k == ltl.RELEASE:
            return _union(self._raw(ltl.conj(f.left, f.right)), self._raw(ltl.conj(f.right, ltl.nxt(f))))
        if k == ltl.OR:
            return _union(*(self._raw(a) for a in f.args))
        conj_memo = self.conj_memo
        acc = [(frozenset(), 0, 0, ltl.TRUE)]
        for a in f.args:
            sub = self._raw(a)
            out: dict[tuple, tuple] = {}
            for l1, p1, n1, x1 in acc:
                for l2, p2, n2, x2 in sub:
                    pos, neg = p1 | p2, n1 | n2
                    if pos & neg:
                        continue
                    nx = conj_memo.get((x1, x2))
                    if nx is None:
                        nx = conj_memo[(x1, x2)] = ltl.conj(x1, x2)
                    if nx is ltl.FALSE:
                        continue
                    label = l1 | l2
                    out[(label, nx)] = (label, pos, neg, nx)
                if len(out) > self.product_cap:
                    raise ResourceLimit(f"normal form exceeds {self.product_cap} entries")
            acc = list(out.values())
        return acc


def _union(*parts: list[tuple]) -> list[tuple]:
    seen: dict[tuple, tuple] = {}
    for p in parts:
        for e in p:
            seen.setdefault((e[0], e[3]), e)
    return list(seen.values())


def expand(f: Formula, product_cap: int = 100_000) -> list[NormalFormEntry]:
    return Expander(product_cap)(f)


class Edge(NamedTuple):
    src: int
    label: frozenset
    dst: int


class TransitionSystem:
    """Reachable part of the transition system, materialized on demand."""

    def __init__(
        self,
        root: Formula,
        state_cap: int = 100_000,
        product_cap: int = 100_000,
        should_stop: Callable[[], bool] | None = None,
        on_new_state: Callable[[int], None] | None = None,
    ):
        self.state_cap = state_cap
        self.should_stop = should_stop
        self.on_new_state = on_new_state
        self._fresh: list[int] = []
        self.expander = Expander(product_cap)
        self.states: list[Formula] = []
        self.index: dict[Formula, int] = {}
        self.out: dict[int, list[Edge]] = {}
        self.initial = self._state(root)

    def _state(self, f: Formula) -> int:
        sid = self.index.get(f)
        if sid is None:
            if len(self.states) >= self.state_cap:
                raise ResourceLimit(f"more than {self.state_cap} states")
            sid = len(self.states)
            self.states.append(f)
            self.index[f] = sid
            self._fresh.append(sid)
        return sid

    def successors(self, sid: int) -> list[Edge]:
        edges = self.out.get(sid)
        if edges is None:
            if self.should_stop is not None and self.should_stop():
                raise Cancelled
            edges = [Edge(sid, e.label, self._state(e.next)) for e in self.expander(self.states[sid])]
            self.out[sid] = edges
            fresh, self._fresh = self._fresh, []
            if self.on_new_state is not None:
                # called once the edges are recorded, so every fresh state is reachable
                for f in fresh:
                    self.on_new_state(f)
        return edges

    def edges(self) -> Iterator[Edge]:
        for sid in sorted(self.out):
            yield from self.out[sid]

    @property
    def expanded(self) -> int:
        return len(self.out)

    def explore_all(self) -> "TransitionSystem":
        stack = [self.initial]
        seen = {self.initial}
        while stack:
            for e in self.successors(stack.pop()):
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return self

    def to_dot(self) -> str:
        lines = ["digraph ts {", "  rankdir=LR;"]
        for sid, f in enumerate(self.states):
            shape = "doublecircle" if sid == self.initial else "circle"
            text = ltl.format_formula(f, tags=True).replace('"', '\\"')
            lines.append(f'  s{sid} [shape={shape}, label="{text}"];')
        for e in self.edges():
            lab = ", ".join(_label_key(e.label)) or "true"
            lines.append(f'  s{e.src} -> s{e.dst} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore(f: Formula, state_cap: int = 100_000, product_cap: int = 100_000) -> TransitionSystem:
    return TransitionSystem(f, state_cap, product_cap).explore_all()


@dataclass(frozen=True)
class SccInfo:
    members: tuple[int, ...]  # discovery order
    edges: tuple[Edge, ...]
    literals: frozenset  # L(scc): union of internal edge labels
    order: int = 0  # depth-first discovery index of the component's root


def iter_sccs(ts: TransitionSystem) -> Iterator[SccInfo]:
    """Tarjan's algorithm, iterative, expanding states as it reaches them.

    Yields each maximal SCC with at least one internal edge as soon as it is
    complete, so components come out in completion order.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    work: list[tuple[int, int]] = [(ts.initial, 0)]
    while work:
        v, i = work[-1]
        if i == 0:
            index[v] = low[v] = counter
            counter += 1
            stack.append(v)
            on_stack.add(v)
        succ = ts.successors(v)
        pushed = False
        while i < len(succ):
            w = succ[i].dst
            i += 1
            if w not in index:
                work[-1] = (v, i)
                work.append((w, 0))
                pushed = True
                break
            if w in on_stack:
                low[v] = min(low[v], index[w])
        if pushed:
            continue
        work.pop()
        if work:
            u = work[-1][0]
            low[u] = min(low[u], low[v])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            members = set(comp)
            internal = tuple(e for m in sorted(comp, key=index.get) for e in ts.successors(m) if e.dst in members)
            if internal:
                lits = frozenset(l for e in internal for l in e.label)
                yield SccInfo(tuple(sorted(comp, key=index.get)), internal, lits, index[v])


def find_sccs(ts: TransitionSystem) -> list[SccInfo]:
    """All nontrivial maximal SCCs, in depth-first discovery order."""
    return sorted(iter_sccs(ts), key=lambda c: c.order)


def scc_accepts(scc: SccInfo, ts: TransitionSystem) -> int | None:
    """First member state whose obligation formula is weakly satisfied by L(scc).

    Literals are matched with their tags: a literal on an edge only counts
    for the untils it was tagged with.
    """
    for m in scc.members:
        if weak_sat(scc.literals, of(ts.states[m]), exact_tags=True):
            return m
    return None


def _bfs_path(ts: TransitionSystem, src: int, goal: Callable[[int], bool], allowed=None) -> list[Edge] | None:
    if goal(src):
        return []
    parent: dict[int, Edge] = {}
    seen = {src}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for e in ts.out.get(v, ()):
            if e.dst in seen or (allowed is not None and e.dst not in allowed):
                continue
            seen.add(e.dst)
            parent[e.dst] = e
            if goal(e.dst):
                path = []
                x = e.dst
                while x != src:
                    path.append(parent[x])
                    x = parent[x].src
                return path[::-1]
            queue.append(e.dst)
    return None


def path_to(ts: TransitionSystem, sid: int) -> list[Edge]:
    """Shortest path of expanded edges from the initial state to ``sid``."""
    path = _bfs_path(ts, ts.initial, lambda s: s == sid)
    if path is None:
        raise SoundnessError("state is unreachable")
    return path


def label_letter(label: frozenset, atoms=()):
    """Full valuation extending an edge label; unconstrained atoms are false."""
    erased = frozenset(l.erased() for l in label)
    if not ltl.consistent(erased):
        raise SoundnessError(f"inconsistent edge label {_label_key(label)}")
    trues = {l.atom for l in erased if not l.neg}
    return letter_of(trues, set(atoms) | {l.atom for l in erased})


def extract_witness(ts: TransitionSystem, scc: SccInfo, psi: int, atoms=()) -> Lasso:
    """Lasso reaching ``psi`` by a shortest path, then looping through every
    internal edge of ``scc``.  Labels become full valuations over ``atoms``
    (unconstrained atoms false)."""
    stem = path_to(ts, psi)
    members = set(scc.members)
    todo = set(scc.edges)
    loop: list[Edge] = []
    cur = psi
    while todo:
        path = _bfs_path(ts, cur, lambda s: any(e in todo for e in ts.out[s]), members)
        if path is None:
            raise SoundnessError("component is not strongly connected")
        here = path[-1].dst if path else cur
        e = next(e for e in ts.out[here] if e in todo)
        for step in path + [e]:
            todo.discard(step)
            loop.append(step)
        cur = e.dst
    back = _bfs_path(ts, cur, lambda s: s == psi, members)
    loop.extend(back)
    for step in back:
        todo.discard(step)

    return Lasso(
        tuple(label_letter(e.label, atoms) for e in stem),
        tuple(label_letter(e.label, atoms) for e in loop),
    )
