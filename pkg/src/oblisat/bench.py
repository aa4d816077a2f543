"""Benchmark formula generators and the corpus runner (CSV output)."""

from __future__ import annotations

import csv
import random
import time
from collections import Counter
from dataclasses import astuple, dataclass, fields
from typing import IO, Iterable, Iterator

from oblisat.ltl import Syntax, parse_syntax
from oblisat.pipeline import CheckConfig, decide

RANDOM_OPS = ("lit", "X", "&", "|", "U", "R")


def _atom(name: str) -> Syntax:
    return Syntax("atom", (), name)


def _not(s: Syntax) -> Syntax:
    return Syntax("!", (s,))


def node_count(s: Syntax) -> int:
    """Number of NNF nodes; a negated atom is a single literal node."""
    if s.op == "!" and s.args[0].op == "atom":
        return 1
    return 1 + sum(node_count(a) for a in s.args)


def gen_random(length: int, num_atoms: int, seed: int) -> Syntax:
    """Random NNF formula with exactly ``length`` nodes over a1..a<num_atoms>.

    Top-down: a node of budget n picks uniformly among the operators that can
    still be completed (a literal only when n == 1, X when n >= 2, binary
    operators when n >= 3); a binary node splits its remaining budget
    uniformly.  Literals pick atom and polarity uniformly.
    """
    if length < 1 or num_atoms < 1:
        raise ValueError("length and num_atoms must be >= 1")
    rng = random.Random(seed)
    names = [f"a{i}" for i in range(1, num_atoms + 1)]

    def go(n: int) -> Syntax:
        if n == 1:
            a = _atom(rng.choice(names))
            return _not(a) if rng.random() < 0.5 else a
        op = "X" if n == 2 else rng.choice(RANDOM_OPS[1:])
        if op == "X":
            return Syntax("X", (go(n - 1),))
        k = rng.randint(1, n - 2)
        return Syntax(op, (go(k), go(n - 1 - k)))

    out = go(length)
    assert node_count(out) == length
    return out


# Specification-pattern templates; p, q are placeholders renamed to fresh atoms.
PATTERNS: dict[str, str] = {
    "absence": "G !p",
    "existence": "F p",
    "universality": "G p",
    "response": "G (p -> F q)",
    "precedence": "(!q) U p",
}


def _instantiate(template: str, mapping: dict[str, str]) -> Syntax:
    def rename(s: Syntax) -> Syntax:
        if s.op == "atom":
            return _atom(mapping[s.name])
        return Syntax(s.op, tuple(rename(a) for a in s.args), s.name)

    return rename(parse_syntax(template))


def _conj(parts: list[Syntax]) -> Syntax:
    out = parts[0]
    for p in parts[1:]:
        out = Syntax("&", (out, p))
    return out


def gen_conjunction(n: int, seed: int) -> Syntax:
    """Conjunction of ``n`` pattern instances, each over fresh atoms."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    names = sorted(PATTERNS)
    parts = []
    for i in range(1, n + 1):
        kind = rng.choice(names)
        parts.append(_instantiate(PATTERNS[kind], {"p": f"p{i}", "q": f"q{i}"}))
    return _conj(parts)


def gen_c(n: int) -> Syntax:
    """(G a1 | F b1) & ... & (G an | F bn)."""
    return _conj([parse_syntax(f"G a{i} | F b{i}") for i in range(1, n + 1)])


def gen_e(n: int) -> Syntax:
    """F a1 & ... & F an."""
    return _conj([parse_syntax(f"F a{i}") for i in range(1, n + 1)])


def gen_u(n: int) -> Syntax:
    """(...(a1 U a2) U ...) U an."""
    out = _atom("a1")
    for i in range(2, n + 1):
        out = Syntax("U", (out, _atom(f"a{i}")))
    return out


@dataclass(frozen=True)
class BenchRecord:
    formula_id: str
    family: str
    length: int
    atom_count: int
    verdict: str
    method: str
    wall_ms: float
    solver_calls: int

    @classmethod
    def from_row(cls, row: list[str]) -> "BenchRecord":
        return cls(row[0], row[1], int(row[2]), int(row[3]), row[4], row[5], float(row[6]), int(row[7]))


CSV_HEADER = [f.name for f in fields(BenchRecord)]


@dataclass(frozen=True)
class BenchItem:
    formula_id: str
    family: str
    formula: Syntax | None
    error: str | None = None


def family_items(spec: str, seed: int = 0) -> list[BenchItem]:
    """Expand ``family:params`` into benchmark items.

    Families: ``random:COUNT,LENGTH[,ATOMS]``, ``patterns:COUNT,N``,
    ``C:N``, ``E:N``, ``U:N`` (each of the last three also accepts
    ``LO-HI`` for a range of sizes).
    """
    family, _, params = spec.partition(":")
    args = [p for p in params.split(",") if p]
    try:
        if family == "random":
            count, length = int(args[0]), int(args[1])
            atoms = int(args[2]) if len(args) > 2 else 3
            return [
                BenchItem(f"random-{length}-{i}", "random", gen_random(length, atoms, seed + i))
                for i in range(count)
            ]
        if family == "patterns":
            count, n = int(args[0]), int(args[1])
            return [BenchItem(f"patterns-{n}-{i}", "patterns", gen_conjunction(n, seed + i)) for i in range(count)]
        gens = {"C": gen_c, "E": gen_e, "U": gen_u}
        if family in gens:
            lo, _, hi = args[0].partition("-")
            sizes = range(int(lo), int(hi or lo) + 1)
            return [BenchItem(f"{family}-{n}", family, gens[family](n)) for n in sizes]
    except (IndexError, ValueError) as e:
        raise ValueError(f"bad benchmark parameters {spec!r}: {e}") from None
    raise ValueError(f"unknown benchmark family {family!r}")


def file_items(paths: Iterable[str]) -> Iterator[BenchItem]:
    """One item per file; unreadable or unparsable files become error items."""
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                yield BenchItem(path, "file", parse_syntax(fh.read()))
        except (OSError, ValueError) as e:
            yield BenchItem(path, "file", None, str(e))


def run_one(item: BenchItem, cfg: CheckConfig) -> BenchRecord:
    from oblisat.ltl import syntax_atoms

    if item.formula is None:
        return BenchRecord(item.formula_id, item.family, 0, 0, "unknown", f"error: {item.error}", 0.0, 0)
    t0 = time.perf_counter()
    v = decide(item.formula, cfg)
    ms = (time.perf_counter() - t0) * 1000
    return BenchRecord(
        item.formula_id,
        item.family,
        node_count(item.formula),
        len(syntax_atoms(item.formula)),
        v.status,
        v.method,
        round(ms, 3),
        v.stats.solver_calls,
    )


def run_corpus(items: Iterable[BenchItem], cfg: CheckConfig, out: IO[str] | None = None) -> tuple[list[BenchRecord], Counter]:
    """Decide every item; rows are written to ``out`` and flushed one by one.

    Returns the records and the per-verdict totals.
    """
    writer = csv.writer(out, lineterminator="\n") if out is not None else None
    if writer is not None:
        writer.writerow(CSV_HEADER)
        out.flush()
    records = []
    for item in items:
        rec = run_one(item, cfg)
        records.append(rec)
        if writer is not None:
            writer.writerow(astuple(rec))
            out.flush()
    totals = Counter(r.verdict for r in records)
    return records, totals


def summary_line(totals: Counter) -> str:
    total = sum(totals.values())
    return f"total={total} sat={totals['sat']} unsat={totals['unsat']} unknown={totals['unknown']}"


def read_csv(fh: IO[str]) -> list[BenchRecord]:
    rows = list(csv.reader(fh))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("missing or unexpected CSV header")
    return [BenchRecord.from_row(r) for r in rows[1:]]
