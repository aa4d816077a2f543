"""Top-level satisfiability decision.

In ``auto`` mode the checker tries, in order: satisfiability of the
obligation formula (a cheap sufficient condition for sat), the positional
unsat heuristic (a cheap sufficient condition for unsat), and finally the
complete search for an accepting SCC in the transition system.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from oblisat import ltl
from oblisat.explorer import (
    SoundnessError,
    TransitionSystem,
    extract_witness,
    iter_sccs,
    label_letter,
    path_to,
    scc_accepts,
)
from oblisat.lasso import Lasso, lasso_check, letter_of
from oblisat.ltl import Formula, Syntax
from oblisat.obligation import ResourceLimit, obligation_from_model, of
from oblisat.positional import UnsatProof, unsat_heuristic
from oblisat.sat import Cancelled, solve

MODES = ("auto", "of-only", "unsat-only", "full-only")
SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


@dataclass(frozen=True)
class CheckConfig:
    timeout: float = 0.0  # seconds, 0 means no limit
    state_cap: int = 100_000
    olg_cap: int = 4096
    product_cap: int = 100_000
    mode: str = "auto"
    external_sat: bool = False
    validate: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.timeout < 0:
            raise ValueError("timeout must be >= 0")
        for name in ("state_cap", "olg_cap", "product_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class CheckStats:
    solver_calls: int = 0
    states: int = 0  # states expanded
    sccs: int = 0  # nontrivial SCCs examined
    phase_times: dict[str, float] = field(default_factory=dict)  # seconds

    @property
    def total_time(self) -> float:
        return sum(self.phase_times.values())

    def summary(self) -> str:
        phases = " ".join(f"{k}={v * 1000:.1f}ms" for k, v in self.phase_times.items())
        return f"solver_calls={self.solver_calls} states={self.states} sccs={self.sccs} {phases}".rstrip()


@dataclass
class Verdict:
    """``method`` names the step that settled the answer; for unknown it is the cause."""

    status: str
    method: str
    witness: Lasso | None = None
    evidence: UnsatProof | str | None = None
    stats: CheckStats = field(default_factory=CheckStats)
    ts: TransitionSystem | None = field(default=None, repr=False)

    @property
    def is_sat(self) -> bool:
        return self.status == SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT

    def __str__(self) -> str:
        return self.status


def to_formula(raw: str | Syntax | Formula) -> Formula:
    """Untagged NNF formula for any accepted input form."""
    if isinstance(raw, str):
        return ltl.parse(raw)
    if isinstance(raw, Syntax):
        return ltl.to_nnf(raw)
    return ltl.erase_tags(raw)


class _Run:
    def __init__(self, cfg: CheckConfig):
        self.cfg = cfg
        self.stats = CheckStats()
        self.deadline = time.monotonic() + cfg.timeout if cfg.timeout > 0 else None

    def should_stop(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def count_solve(self) -> None:
        self.stats.solver_calls += 1

    def timed(self, phase: str, fn: Callable):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            self.stats.phase_times[phase] = self.stats.phase_times.get(phase, 0.0) + time.perf_counter() - t0


def _validate(w: Lasso, original: Formula, step: str) -> None:
    if not lasso_check(w, original):
        raise SoundnessError(f"{step} produced a witness that does not satisfy {original}: {w}")


def _obligation_letter(run: _Run, f: Formula, atoms: set[str]):
    """A letter L with L^omega satisfying ``f``, when of(f) is satisfiable."""
    run.count_solve()
    phi = of(f)
    model = solve(phi, run.should_stop, run.cfg.external_sat)
    if model is None:
        return None
    ob = obligation_from_model(phi, model)
    return letter_of({l.atom for l in ob if not l.neg}, atoms)


def _of_step(run: _Run, tagged: Formula, atoms: set[str]) -> Lasso | None:
    letter = _obligation_letter(run, tagged, atoms)
    return None if letter is None else Lasso((), (letter,))


class _Shortcut(Exception):
    def __init__(self, witness: Lasso):
        self.witness = witness


def _scc_step(run: _Run, tagged: Formula, atoms: set[str], probe: bool) -> tuple[Lasso | None, str, TransitionSystem]:
    """Search for an accepting SCC.

    With ``probe`` set, every newly reached state also gets the obligation
    check: a path to a state whose obligation formula is satisfiable, followed
    by that obligation forever, is already a model.
    """
    ts: TransitionSystem

    def check(sid: int) -> None:
        if sid == ts.initial:
            return
        letter = _obligation_letter(run, ts.states[sid], atoms)
        if letter is not None:
            stem = tuple(label_letter(e.label, atoms) for e in path_to(ts, sid))
            raise _Shortcut(Lasso(stem, (letter,)))

    ts = TransitionSystem(tagged, run.cfg.state_cap, run.cfg.product_cap, run.should_stop, check if probe else None)
    try:
        for scc in iter_sccs(ts):
            run.stats.sccs += 1
            psi = scc_accepts(scc, ts)
            if psi is not None:
                return extract_witness(ts, scc, psi, atoms), "scc", ts
        return None, "scc", ts
    except _Shortcut as hit:
        return hit.witness, "state-of", ts
    finally:
        run.stats.states = ts.expanded


def decide(raw: str | Syntax | Formula, cfg: CheckConfig | None = None) -> Verdict:
    """Decide satisfiability of ``raw``.

    Raises ``SoundnessError`` if witness validation is on and a witness fails
    it; resource exhaustion gives an ``unknown`` verdict instead.
    """
    cfg = cfg or CheckConfig()
    run = _Run(cfg)
    original = run.timed("parse", lambda: to_formula(raw))
    tagged = run.timed("tag", lambda: ltl.tag(original))
    atoms = ltl.atoms(original)
    mode = cfg.mode
    ts = None

    def done(status, method, witness=None, evidence=None):
        if witness is not None and cfg.validate:
            run.timed("validate", lambda: _validate(witness, original, method))
        return Verdict(status, method, witness, evidence, run.stats, ts)

    try:
        if mode in ("auto", "of-only"):
            w = run.timed("of", lambda: _of_step(run, tagged, atoms))
            if w is not None:
                return done(SAT, "of", w)
            if mode == "of-only":
                return done(UNKNOWN, "of unsatisfiable")
        if mode in ("auto", "unsat-only"):
            proof = run.timed("heuristic", lambda: unsat_heuristic(tagged, run.should_stop, run.count_solve, cfg.external_sat))
            if proof is not None:
                return done(UNSAT, f"condition-{proof.condition}", evidence=proof)
            if mode == "unsat-only":
                return done(UNKNOWN, "no condition applies")
        if run.should_stop():
            raise Cancelled
        w, how, ts = run.timed("scc", lambda: _scc_step(run, tagged, atoms, probe=mode == "auto"))
        if w is not None:
            return done(SAT, how, w)
        return done(UNSAT, "scc", evidence=f"{run.stats.states} states and {run.stats.sccs} SCCs without an accepting one")
    except Cancelled:
        return done(UNKNOWN, "timeout")
    except ResourceLimit as e:
        return done(UNKNOWN, f"resource limit: {e}")
