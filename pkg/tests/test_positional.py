from hypothesis import given, settings

from oblisat import boolean as B
from oblisat import ltl
from oblisat.lasso import lasso_check
from oblisat.ltl import Lit
from oblisat.oracle import enumerate_formulas, oracle_decide
from oblisat.positional import (
    Duration,
    PosLiteral,
    UnsatProof,
    ofp,
    pos_apply,
    project_abstract,
    project_at,
    unsat_heuristic,
)
from oblisat.sat import solve

from conftest import lasso_strategy, nnf_strategy

CUR, INF, GEQ = Duration.CUR, Duration.INF, Duration.GEQ
A, NA, B_, C = Lit("a"), Lit("a", True), Lit("b"), Lit("c")


def P(prop, start, dur):
    return PosLiteral(prop, start, dur)


def untagged(t):
    return B.map_leaves(t, lambda l: B.leaf(P(l.prop.erased(), l.start, l.duration)))


# The six shapes of the rule table and their expected rows (X, U, R, G).
TABLE = {
    P(A, 2, CUR): (P(A, 3, CUR), P(A, None, CUR), P(A, 2, CUR), P(A, 2, GEQ)),
    P(A, None, CUR): (P(A, None, CUR), P(A, None, CUR), P(A, None, CUR), P(A, None, INF)),
    P(A, 2, GEQ): (P(A, 3, GEQ), P(A, None, GEQ), P(A, 2, GEQ), P(A, 2, GEQ)),
    P(A, None, GEQ): (P(A, None, GEQ), P(A, None, GEQ), P(A, None, GEQ), P(A, None, GEQ)),
    P(A, 2, INF): (P(A, 3, INF), P(A, None, INF), P(A, 2, INF), P(A, 2, INF)),
    P(A, None, INF): (P(A, None, INF), P(A, None, INF), P(A, None, INF), P(A, None, INF)),
}


def test_rule_table_cells():
    for shape, row in TABLE.items():
        assert tuple(pos_apply(shape, op) for op in "XURG") == row, shape


def test_rule_table_examples():
    assert pos_apply(P(A, 0, CUR), "X") == P(A, 1, CUR)
    assert pos_apply(P(A, 0, CUR), "G") == P(A, 0, GEQ)
    assert pos_apply(P(A, None, CUR), "G") == P(A, None, INF)


def test_rule_table_is_total_and_closed():
    shapes = {(s.start is None, s.duration) for s in TABLE}
    for shape in TABLE:
        for op in "XURG":
            out = pos_apply(shape, op)
            assert (out.start is None, out.duration) in shapes


# ---------------------------------------------------------------- ofp


def test_ofp_and_with_release():
    t = untagged(ofp(ltl.tag(ltl.parse("a & (b R !a)"))))
    assert t == B.band(B.leaf(P(A, 0, CUR)), B.leaf(P(NA, 0, CUR)))


def test_ofp_two_always():
    t = untagged(ofp(ltl.tag(ltl.parse("G a & G (!a & b)"))))
    assert t == B.band(B.leaf(P(A, 0, GEQ)), B.leaf(P(NA, 0, GEQ)), B.leaf(P(B_, 0, GEQ)))


def test_ofp_always_next_follows_table():
    t = untagged(ofp(ltl.tag(ltl.parse("G X (a & b U c)"))))
    assert t == B.band(B.leaf(P(A, 1, GEQ)), B.leaf(P(C, None, INF)))


def test_ofp_or_with_differing_starts_weakens_both_sides():
    t = untagged(ofp(ltl.parse("a | X b")))
    assert t == B.bor(B.leaf(P(A, None, CUR)), B.leaf(P(B_, None, CUR)))
    same = untagged(ofp(ltl.parse("X a | X b")))
    assert same == B.bor(B.leaf(P(A, 1, CUR)), B.leaf(P(B_, 1, CUR)))


def test_ofp_constants():
    assert ofp(ltl.TRUE) == B.TRUE
    assert ofp(ltl.FALSE) == B.FALSE


# ---------------------------------------------------------------- projections


def test_project_at_examples():
    t = ofp(ltl.parse("a & (b R !a)"))
    assert project_at(t, 0) == B.band(B.leaf(A), B.leaf(NA))
    g = ofp(ltl.parse("G X (a & b U c)"))
    assert project_at(g, 0) == B.TRUE
    assert project_at(g, 1) == B.leaf(A)


def test_project_at_later_positions_of_always_leaf():
    t = B.leaf(P(A, 1, GEQ))
    assert project_at(t, 5) == B.leaf(A)
    assert project_at(t, 0) == B.TRUE


def test_project_abstract_examples():
    t = ofp(ltl.parse("G a & G (!a & b)"))
    assert project_abstract(t, t.leaves()) == B.band(B.leaf(A), B.leaf(NA), B.leaf(B_))
    assert solve(project_abstract(t, set())) is not None
    u = ofp(ltl.parse("F a & G !a"))
    assert untagged(u) == B.band(B.leaf(P(A, None, CUR)), B.leaf(P(NA, 0, GEQ)))
    assert project_abstract(u, u.leaves()) == B.band(B.leaf(A), B.leaf(NA))


def test_projection_of_undetermined_leaves_is_trivial():
    t = B.band(B.leaf(P(A, None, CUR)), B.bor(B.leaf(P(NA, None, INF)), B.leaf(P(B_, None, GEQ))))
    for i in range(4):
        assert project_at(t, i) == B.TRUE


# ---------------------------------------------------------------- heuristic


def proof(text) -> UnsatProof | None:
    return unsat_heuristic(ltl.tag(ltl.parse(text)))


def test_condition_one_at_zero():
    p = proof("a & (b R !a)")
    assert (p.condition, p.position) == (1, 0)


def test_condition_one_at_one():
    p = proof("G a & X !a")
    assert (p.condition, p.position) == (1, 1)


def test_condition_two():
    assert proof("G a & G (!a & b)").condition == 2


def test_condition_three():
    p = proof("F a & G !a")
    assert p.condition == 3 and p.leaf.start is None


def test_condition_four():
    p = proof("G a & G F !a")
    assert p.condition == 4 and p.leaf.duration is INF


def test_inconclusive_on_satisfiable_formulas():
    for text in ["a U b", "G F a & G F !a", "(a | b) U (G a)", "G (a -> X !a)"]:
        assert proof(text) is None


def test_proof_description_mentions_condition():
    assert proof("G a & X !a").describe().startswith("condition 1 at position 1")


# ---------------------------------------------------------------- properties on small families


def test_heuristic_sound_exhaustive():
    for _, f in enumerate_formulas(5, ["a", "b"]):
        if unsat_heuristic(ltl.tag(f)) is not None:
            assert not oracle_decide(f, 2).sat, str(f)


def test_models_satisfy_every_positional_projection():
    checked = 0
    for _, f in enumerate_formulas(5, ["a", "b"]):
        r = oracle_decide(f, 2, len_bound=3)
        if not r.sat:
            continue
        w = r.lasso
        assert lasso_check(w, f)
        t = ofp(ltl.tag(f))
        for i in range(len(w.stem) + 2 * len(w.loop) + 1):
            model = {l.atom: not l.neg for l in w.letter(i)}
            assert B.evaluate(project_at(t, i), model), (str(f), str(w), i)
        checked += 1
    assert checked > 1000


def test_heuristic_condition_order_on_combined_formula():
    # conditions 1 and 2 both apply; the cheaper whole-formula check wins
    assert proof("G a & G !a & X !a").condition == 2


@settings(max_examples=300, deadline=None)
@given(nnf_strategy(max_leaves=8), lasso_strategy())
def test_satisfying_words_satisfy_projections(f, w):
    if not lasso_check(w, f):
        return
    t = ofp(ltl.tag(f))
    for i in range(len(w.stem) + 2 * len(w.loop) + 1):
        model = {l.atom: not l.neg for l in w.letter(i)}
        assert B.evaluate(project_at(t, i), model), (str(f), str(w), i)
