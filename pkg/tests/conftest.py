"""Shared helpers: strategies for random formulas and a reference evaluator."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from oblisat import ltl
from oblisat.lasso import Lasso, letter_of
from oblisat.ltl import Syntax

ATOMS2 = ["a", "b"]


def syntax_atom(name: str) -> Syntax:
    return Syntax("atom", (), name)


def syntax_strategy(names=ATOMS2, max_leaves: int = 6, full: bool = True):
    """Raw formulas; ``full`` adds negation and the derived operators."""
    leaves = st.sampled_from([syntax_atom(a) for a in names] + [Syntax("true"), Syntax("false")])
    unary = ["X", "!", "F", "G"] if full else ["X"]
    binary = ["&", "|", "U", "R", "->", "<->"] if full else ["&", "|", "U", "R"]

    def extend(children):
        return st.one_of(
            st.builds(lambda op, c: Syntax(op, (c,)), st.sampled_from(unary), children),
            st.builds(lambda op, l, r: Syntax(op, (l, r)), st.sampled_from(binary), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def nnf_strategy(names=ATOMS2, max_leaves: int = 6):
    """Formulas already in NNF (literals, tt/ff, X, and, or, U, R)."""
    leaves = st.sampled_from(
        [ltl.TRUE, ltl.FALSE] + [ltl.atom(a, neg) for a in names for neg in (False, True)]
    )

    def extend(children):
        return st.one_of(
            st.builds(ltl.nxt, children),
            st.builds(ltl.conj, children, children),
            st.builds(ltl.disj, children, children),
            st.builds(ltl.until, children, children),
            st.builds(ltl.release, children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def lasso_strategy(names=ATOMS2, max_stem: int = 3, max_loop: int = 3):
    letter = st.sets(st.sampled_from(names)).map(lambda t: letter_of(t, names))
    return st.builds(
        lambda s, l: Lasso(tuple(s), tuple(l)),
        st.lists(letter, max_size=max_stem),
        st.lists(letter, min_size=1, max_size=max_loop),
    )


def all_lassos(names, max_len: int):
    """Every lasso over full valuations with |stem| + |loop| <= max_len."""
    letters = [letter_of(t, names) for r in range(len(names) + 1) for t in itertools.combinations(names, r)]
    for n in range(1, max_len + 1):
        for word in itertools.product(letters, repeat=n):
            for s in range(n):
                yield Lasso(word[:s], word[s:])


def eval_syntax(s: Syntax, w: Lasso) -> bool:
    """Reference semantics of a raw formula on a lasso.

    Works on truth vectors over the positions of stem plus one loop copy;
    until and release are computed as least and greatest fixpoints, and the
    other operators (including negation) pointwise.
    """
    n = len(w)
    succ = list(range(1, n)) + [len(w.stem)]
    trues = [{l.atom for l in w.letter(i) if not l.neg} for i in range(n)]

    def ev(t: Syntax) -> list[bool]:
        op = t.op
        if op == "atom":
            return [t.name in x for x in trues]
        if op in ("true", "false"):
            return [op == "true"] * n
        if op == "!":
            return [not v for v in ev(t.args[0])]
        if op == "X":
            v = ev(t.args[0])
            return [v[succ[i]] for i in range(n)]
        if op == "F":
            return ev(Syntax("U", (Syntax("true"), t.args[0])))
        if op == "G":
            return ev(Syntax("R", (Syntax("false"), t.args[0])))
        l, r = ev(t.args[0]), ev(t.args[1])
        if op == "&":
            return [x and y for x, y in zip(l, r)]
        if op == "|":
            return [x or y for x, y in zip(l, r)]
        if op == "->":
            return [(not x) or y for x, y in zip(l, r)]
        if op == "<->":
            return [x == y for x, y in zip(l, r)]
        until = op == "U"
        out = [not until] * n
        for _ in range(n + 1):
            out = [
                (r[i] or (l[i] and out[succ[i]])) if until else (r[i] and (l[i] or out[succ[i]]))
                for i in range(n)
            ]
        return out

    return ev(s)[0]


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, ok: bool, text: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
