"""The eight acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (collected again in the terminal
summary) before asserting.  Sat verdicts seen in criteria 1 to 5 are kept for
the witness check of criterion 6, so the file is meant to run in order.
"""

import gc
import random
import time
from contextlib import contextmanager

from oblisat import ltl
from oblisat.bench import gen_c, gen_random
from oblisat.boolean import WeakSatTable
from oblisat.lasso import lasso_check
from oblisat.ltl import Lit
from oblisat.obligation import ResourceLimit, dnf, of, olg
from oblisat.oracle import enumerate_formulas, oracle_decide
from oblisat.pipeline import CheckConfig, decide

from conftest import report

SAT_VERDICTS: list = []  # (original formula, verdict) for criterion 6


@contextmanager
def no_cyclic_gc():
    """The exhaustive loops allocate millions of acyclic objects; pause the cycle collector."""
    gc.disable()
    try:
        yield
    finally:
        gc.enable()


def keep(f, v):
    if v.is_sat:
        SAT_VERDICTS.append((f, v))
    return v


def test_criterion_1_worked_examples():
    cases = [
        ("a U b & c U d", "sat", None),
        ("F a & G !a", "unsat", None),
        ("G a & X !a", "unsat", "condition-1"),
        ("a & (b R !a)", "unsat", "condition-1"),
        ("G a & G (!a & b)", "unsat", "condition-2"),
        ("F a & G !a", "unsat", "condition-3"),
        ("G a & G F !a", "unsat", "condition-4"),
        ("(a | b) U (G a)", "sat", None),
    ]
    t0 = time.perf_counter()
    good = 0
    for text, status, method in cases:
        v = keep(ltl.parse(text), decide(text))
        ok = v.status == status and (method is None or v.method == method)
        if status == "sat":
            ok = ok and lasso_check(v.witness, ltl.parse(text))
        good += ok
    family_ok = True
    for n in range(1, 11):
        f = gen_c(n)
        v = keep(ltl.to_nnf(f), decide(f))
        family_ok &= v.status == "sat" and v.method == "of"
    good += family_ok
    elapsed = time.perf_counter() - t0
    ok = good == 9 and elapsed < 1.0
    report(1, ok, f"{good}/9 worked verdicts correct (pattern family n=1..10 counted once) in {elapsed:.3f} s (limit 1 s)")
    assert ok


def test_criterion_2_obligation_formula_dnf_equals_obligation_set():
    t0 = time.perf_counter()
    count = mismatches = 0
    om, dm = {}, {}
    with no_cyclic_gc():
        for size, f in enumerate_formulas(8, ["a", "b", "c"]):
            count += 1
            phi = of(f)
            if dnf(phi, memo=dm) != olg(f, memo=om):
                mismatches += 1
            if size == 8:  # top layer is never a subformula of a later one
                om.pop(f, None)
                dm.pop(phi, None)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and count >= 10_000 and elapsed < 60
    report(2, ok, f"{count} formulas (size <= 8, 3 atoms), {mismatches} mismatches, {elapsed:.1f} s (limit 60 s)")
    assert ok


def test_criterion_3_weak_satisfaction_matches_obligation_containment():
    universe = [Lit(x, n) for x in "abc" for n in (False, True)]
    index = {l: i for i, l in enumerate(universe)}
    table = WeakSatTable(universe)
    supersets: dict = {}

    def covered(o) -> int:
        m = supersets.get(o)
        if m is None:
            if any(l.atom == "false" for l in o):
                m = 0  # ff is never a member of S
            else:
                bits = sum(1 << index[l] for l in o)
                m = sum(1 << s for s in range(1 << len(universe)) if s & bits == bits)
            supersets[o] = m
        return m

    t0 = time.perf_counter()
    count = mismatches = 0
    om = {}
    with no_cyclic_gc():
        for size, f in enumerate_formulas(8, ["a", "b", "c"]):
            count += 1
            expected = 0
            for o in olg(f, memo=om):
                expected |= covered(o)
            phi = of(f)
            if table(phi) != expected:
                mismatches += 1
            if size == 8:
                om.pop(f, None)
                table.memo.pop(phi, None)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0
    report(3, ok, f"{count} formulas x 64 literal sets, {mismatches} mismatches, {elapsed:.1f} s")
    assert ok


def test_criterion_4_end_to_end_agreement_with_oracle():
    t0 = time.perf_counter()
    count = disagreements = 0
    for _, f in enumerate_formulas(6, ["a", "b"]):
        count += 1
        v = keep(f, decide(f))
        r = oracle_decide(f, 2)  # bound 2^|cl(f)|
        if v.status == "unknown" or v.is_sat != r.sat:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 300
    report(4, ok, f"{count} formulas (size <= 6, 2 atoms), {disagreements} disagreements, {elapsed:.1f} s (limit 300 s)")
    assert ok


def test_criterion_5_fast_paths_are_sound_in_isolation():
    t0 = time.perf_counter()
    of_bad = unsat_bad = oracle_sat = oracle_unsat = 0
    for seed in range(1000):
        length = random.Random(seed).randint(1, 30)
        f = ltl.to_nnf(gen_random(length, 3, seed))
        sat = oracle_decide(f, 3).sat
        oracle_sat += sat
        oracle_unsat += not sat
        a = keep(f, decide(f, CheckConfig(mode="of-only")))
        b = decide(f, CheckConfig(mode="unsat-only"))
        of_bad += (not sat) and a.is_sat
        unsat_bad += sat and b.is_unsat
    elapsed = time.perf_counter() - t0
    ok = of_bad == 0 and unsat_bad == 0
    report(
        5,
        ok,
        f"1000 random formulas (length <= 30, 3 atoms; oracle {oracle_sat} sat / {oracle_unsat} unsat): "
        f"of-only sat on unsat {of_bad}, unsat-only unsat on sat {unsat_bad}, {elapsed:.1f} s",
    )
    assert ok


def test_criterion_6_every_sat_verdict_has_a_valid_witness():
    total = len(SAT_VERDICTS)
    valid = sum(1 for f, v in SAT_VERDICTS if v.witness is not None and lasso_check(v.witness, ltl.erase_tags(f)))
    ok = total > 0 and valid == total
    report(6, ok, f"{valid}/{total} sat verdicts from criteria 1-5 carry witnesses accepted by lasso_check")
    assert ok


def test_criterion_7_obligation_formula_avoids_dnf_blowup():
    f = gen_c(20)
    t0 = time.perf_counter()
    v = decide(f)
    elapsed = time.perf_counter() - t0
    try:
        olg(ltl.to_nnf(f), cap=4096)
        capped = False
    except ResourceLimit:
        capped = True
    ok = v.status == "sat" and v.method == "of" and elapsed < 1.0 and capped
    report(7, ok, f"n=20 pattern conjunction decided {v.status} via {v.method} in {elapsed * 1000:.1f} ms; olg exceeds 4096 cap: {capped}")
    assert ok


def test_criterion_8_desk_scale_random_corpus():
    cfg = CheckConfig(timeout=60)
    t0 = time.perf_counter()
    counts = {"sat": 0, "unsat": 0, "unknown": 0}
    slowest = 0.0
    for seed in range(500):
        s = time.perf_counter()
        v = decide(gen_random(100, 3, seed), cfg)
        slowest = max(slowest, time.perf_counter() - s)
        counts[v.status] += 1
    elapsed = time.perf_counter() - t0
    decided = counts["sat"] + counts["unsat"]
    ok = decided >= 0.95 * 500
    report(
        8,
        ok,
        f"500 random formulas (length 100, 3 atoms, 60 s timeout): {counts['sat']} sat, {counts['unsat']} unsat, "
        f"{counts['unknown']} unknown ({100 * decided / 500:.1f}% decided, need 95%); slowest {slowest:.1f} s, total {elapsed:.0f} s",
    )
    assert ok
