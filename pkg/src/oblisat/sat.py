"""A small complete SAT procedure: DPLL with two watched literals.

Decisions take the lowest-numbered unassigned variable, true first, and
backtracking is chronological, so results are deterministic.  An external
solver can be used instead through DIMACS files (see ``OBLI_SAT_CMD``).
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from typing import Callable

from oblisat.boolean import BoolFormula, Cnf, read_dimacs_result, to_cnf, write_dimacs


class Cancelled(Exception):
    """Raised when a cooperative stop check fires during a search."""


class DPLL:
    def __init__(self, nvars: int, clauses: list[list[int]], should_stop: Callable[[], bool] | None = None):
        self.nvars = nvars
        self.clauses = [list(dict.fromkeys(c)) for c in clauses]
        self.should_stop = should_stop
        self.value: list[bool | None] = [None] * (nvars + 1)
        self.watches: dict[int, list[int]] = {}
        self.trail: list[tuple[int, bool]] = []  # (literal, flippable decision)
        self.decisions = 0

    def _true(self, lit: int) -> bool:
        return self.value[abs(lit)] == (lit > 0)

    def _false(self, lit: int) -> bool:
        return self.value[abs(lit)] == (lit < 0)

    def _assign(self, lit: int, decision: bool) -> None:
        self.value[abs(lit)] = lit > 0
        self.trail.append((lit, decision))

    def solve(self) -> dict[int, bool] | None:
        units = []
        for i, c in enumerate(self.clauses):
            if not c:
                return None
            if any(-x in c for x in c):
                continue  # tautology
            if len(c) == 1:
                units.append(c[0])
            else:
                self.watches.setdefault(c[0], []).append(i)
                self.watches.setdefault(c[1], []).append(i)
        for u in units:
            if self._false(u):
                return None
            if not self._true(u):
                self._assign(u, False)
        head = 0
        while True:
            head, ok = self._propagate(head)
            if not ok:
                head = self._backtrack()
                if head < 0:
                    return None
                continue
            var = next((v for v in range(1, self.nvars + 1) if self.value[v] is None), None)
            if var is None:
                return {v: bool(self.value[v]) for v in range(1, self.nvars + 1)}
            self.decisions += 1
            if self.should_stop is not None and self.decisions % 128 == 0 and self.should_stop():
                raise Cancelled
            self._assign(var, True)

    def _propagate(self, head: int) -> tuple[int, bool]:
        while head < len(self.trail):
            lit = self.trail[head][0]
            head += 1
            falsified = -lit
            watching = self.watches.get(falsified)
            if not watching:
                continue
            keep = []
            conflict = False
            for n, ci in enumerate(watching):
                c = self.clauses[ci]
                if c[0] == falsified:
                    c[0], c[1] = c[1], c[0]
                if self._true(c[0]):
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if not self._false(c[k]):
                        c[1], c[k] = c[k], c[1]
                        self.watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if self._false(c[0]):
                        keep.extend(watching[n + 1:])
                        conflict = True
                        break
                    self._assign(c[0], False)
            self.watches[falsified] = keep
            if conflict:
                return head, False
        return head, True

    def _backtrack(self) -> int:
        while self.trail:
            lit, flippable = self.trail.pop()
            self.value[abs(lit)] = None
            if flippable:
                self._assign(-lit, False)
                return len(self.trail) - 1
        return -1


def solve_cnf(cnf: Cnf, should_stop: Callable[[], bool] | None = None) -> dict[int, bool] | None:
    return DPLL(cnf.nvars, cnf.clauses, should_stop).solve()


def solve_external(cnf: Cnf, command: str, timeout: float | None = None) -> dict[int, bool] | None:
    """Run ``command <cnf-path>`` and parse its DIMACS result from stdout."""
    with tempfile.NamedTemporaryFile("wb", suffix=".cnf", delete=False) as fh:
        fh.write(write_dimacs(cnf.clauses, cnf.nvars))
        path = fh.name
    try:
        proc = subprocess.run(shlex.split(command) + [path], capture_output=True, timeout=timeout)
    finally:
        os.unlink(path)
    return read_dimacs_result(proc.stdout)


def solve(
    f: BoolFormula,
    should_stop: Callable[[], bool] | None = None,
    external: bool = False,
) -> dict[str, bool] | None:
    """Decide ``f`` (tags erased).  Returns a model over the atoms of ``f``, or None.

    With ``external`` set and ``OBLI_SAT_CMD`` defined, the CNF is handed to
    that command instead of the built-in solver.
    """
    cnf = to_cnf(f)
    cmd = os.environ.get("OBLI_SAT_CMD") if external else None
    if cmd:
        model = solve_external(cnf, cmd)
    else:
        model = solve_cnf(cnf, should_stop)
    if model is None:
        return None
    return {a: model.get(v, False) for a, v in cnf.atoms.items()}
