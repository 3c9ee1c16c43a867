import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from masseylift.errors import DimensionMismatch, FoldTooLarge, GeneratorIndexError, WordSyntaxError
from masseylift.magnus import canonical_decompose, compose_canonical, magnus_image
from masseylift.massey import (
    DOES_NOT_VANISH,
    NOT_DEFINED,
    VANISHES,
    Character,
    cup_trace,
    massey_check,
    obstruction_scan,
    parse_character,
    report_json,
    trace_of_value,
)
from masseylift.unipotent import (
    RepAssignment,
    UnipotentMatrix,
    corner_commutator_pair,
    enumerate_defining_reps,
    evaluate_word,
    triple_commutator_matrices,
)
from masseylift.words import FreeWord, PresentationSpec, load_presentation, parse_word
from oracles import brute_vanishes
from strategies import characters, s2_words, small_specs, words

PRES = "presentations/"


def dual(i, d):
    return tuple(int(g == i) for g in range(1, d + 1))


def spec_of(p, d, *relators):
    return PresentationSpec(p, d, tuple(parse_word(r, d) for r in relators))


def shifted(w, offset, d):
    return FreeWord(tuple((g + offset, e) for g, e in w.letters), d)


def test_five_generator_triple_does_not_vanish():
    spec = load_presentation(PRES + "ex1.pres")
    report = massey_check(spec, [dual(1, 5), dual(2, 5), dual(3, 5)])
    assert report.verdict == DOES_NOT_VANISH
    assert report.defining == 1024
    assert (report.relator, report.corner) == (0, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_free_group_vanishes(p):
    spec = PresentationSpec(p, 2, ())
    for chars in itertools.product([(1, 0), (0, 1), (1, 1)], repeat=3):
        assert massey_check(spec, chars).verdict == VANISHES
    assert massey_check(spec, [(1, 0), (0, 1), (1, 1), (1, 0)]).verdict == VANISHES


@pytest.mark.parametrize("p", [3, 5])
def test_cyclic_does_not_vanish(p):
    spec = load_presentation(f"{PRES}cyclic{p}.pres")
    report = massey_check(spec, [(1,)] * p)
    assert report.verdict == DOES_NOT_VANISH
    assert report.defining == p ** (p * (p + 1) // 2 - p - 1)


def test_cyclic_defined_below_p():
    spec = load_presentation(PRES + "cyclic5.pres")
    assert massey_check(spec, [(1,)] * 3).verdict == VANISHES
    assert massey_check(spec, [(1,)] * 4).verdict == VANISHES


# frozen brute-force results: the 36 dual triples that are defined, all of which vanish
DEMUSHKIN_DEFINED = {
    (1, 1, 1), (1, 1, 3), (1, 1, 4), (1, 3, 1), (1, 3, 2), (1, 3, 3), (1, 4, 1), (1, 4, 2),
    (1, 4, 4), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 1), (2, 3, 2), (2, 3, 3), (2, 4, 1),
    (2, 4, 2), (2, 4, 4), (3, 1, 1), (3, 1, 3), (3, 1, 4), (3, 2, 2), (3, 2, 3), (3, 2, 4),
    (3, 3, 1), (3, 3, 2), (3, 3, 3), (4, 1, 1), (4, 1, 3), (4, 1, 4), (4, 2, 2), (4, 2, 3),
    (4, 2, 4), (4, 4, 1), (4, 4, 2), (4, 4, 4),
}


def test_demushkin_dual_triples():
    spec = load_presentation(PRES + "demushkin4.pres")
    seen = {}
    for idx in itertools.product(range(1, 5), repeat=3):
        seen[idx] = massey_check(spec, [dual(i, 4) for i in idx]).verdict
    assert {k for k, v in seen.items() if v == VANISHES} == DEMUSHKIN_DEFINED
    assert {v for k, v in seen.items() if k not in DEMUSHKIN_DEFINED} == {NOT_DEFINED}


def test_not_defined_when_cup_obstructs():
    for p in (2, 3):
        spec = spec_of(p, 2, "[x1,x2]")
        report = massey_check(spec, [(1, 0), (0, 1), (0, 1)])
        assert report.verdict == NOT_DEFINED and report.defining == 0


def test_character_shape_checked():
    with pytest.raises(DimensionMismatch):
        massey_check(PresentationSpec(2, 3, ()), [(1, 0)] * 3)
    with pytest.raises(FoldTooLarge):
        massey_check(load_presentation(PRES + "ex1.pres"), [dual(1, 5)] * 3, budget=10)


def test_vanishes_witness_is_a_lift():
    spec = spec_of(3, 3, "[[x1,x2],x3]*x1^3")
    chars = [dual(1, 3), dual(3, 3), dual(2, 3)]
    report = massey_check(spec, chars, threads=2)
    assert report.verdict == VANISHES
    for r in spec.relators:
        assert evaluate_word(report.lift, r).is_identity()
    for g, m in enumerate(report.lift.images):
        assert [m.entry(i, i + 1) for i in (1, 2, 3)] == [(-c[g]) % 3 for c in chars]


@settings(max_examples=30)
@given(spec=small_specs(max_d=2), data=st.data())
def test_verdict_matches_brute_force(spec, data):
    chars = data.draw(characters(spec.p, spec.d, 3))
    expected = brute_vanishes(spec.d, 3, chars, [r.letters for r in spec.relators], spec.p)
    assert massey_check(spec, chars).verdict == expected


def test_trace_on_triple_commutator_fixture():
    spec = load_presentation(PRES + "ex1.pres")
    a, b, c = triple_commutator_matrices(2)
    one = UnipotentMatrix.identity(3, 2)
    rep = RepAssignment((a, b, c, one, one)).masked()
    assert trace_of_value(spec, rep, 0) == canonical_decompose(spec.relators[0], 2).c[(2, 3, 1)] == 1


@pytest.mark.parametrize("p, power, expected", [(2, 1, 1), (3, 1, 1), (3, 2, 2), (5, 3, 3)])
def test_trace_on_corner_pair(p, power, expected):
    spec = spec_of(p, 2, f"[[x1,x2],x1]^{power}")
    u, v = corner_commutator_pair(p)
    rep = RepAssignment((u, v)).masked()
    assert trace_of_value(spec, rep, 0) == expected
    assert canonical_decompose(spec.relators[0], p).c[(1, 2, 1)] == expected


def test_trace_of_trivial_relator():
    spec = PresentationSpec(3, 2, (parse_word("", 2),))
    rep = next(enumerate_defining_reps(spec, 3, [(1, 0), (0, 1), (1, 1)]))
    assert trace_of_value(spec, rep, 0) == 0


def test_cup_trace_examples():
    assert cup_trace(spec_of(3, 2, "[x1,x2]"), 0, 1, 2) == 1
    ex1 = load_presentation(PRES + "ex1.pres")
    assert cup_trace(ex1, 0, 2, 3) == 0
    assert cup_trace(ex1, 0, 4, 5) == 1
    assert cup_trace(spec_of(2, 1, "x1^2"), 0, 1, 1) == 1
    assert cup_trace(spec_of(3, 1, "x1^3"), 0, 1, 1) == 0
    with pytest.raises(GeneratorIndexError):
        cup_trace(ex1, 0, 1, 6)


@settings(max_examples=40)
@given(p=st.sampled_from([2, 3, 5]), data=st.data())
def test_cup_trace_is_degree_two_coefficient(p, data):
    d = 3
    w = data.draw(s2_words(p, d))
    spec = PresentationSpec(p, d, (w,))
    c2 = magnus_image(w, p).c2
    for i, j in itertools.product(range(1, d + 1), repeat=2):
        if i < j or (i == j and p == 2):
            assert cup_trace(spec, 0, i, j) == c2[i - 1, j - 1] % p


@settings(max_examples=30)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_not_defined_iff_cup_trace(p, data):
    d = 3
    spec = PresentationSpec(p, d, (data.draw(s2_words(p, d)),))
    for idx in itertools.product(range(1, d + 1), repeat=3):
        i, j, k = idx
        obstructed = cup_trace(spec, 0, i, j) != 0 or cup_trace(spec, 0, j, k) != 0
        verdict = massey_check(spec, [dual(g, d) for g in idx]).verdict
        assert (verdict == NOT_DEFINED) == obstructed


def test_obstruction_examples():
    (w,) = obstruction_scan(load_presentation(PRES + "ex1.pres"))
    assert (w.pattern, w.indices, w.relator, w.not_realizable) == ("Ob1", (2, 3, 1), 0, True)
    assert [str(c) for c in w.triple] == ["x1", "x2", "x3"]
    (w7,) = obstruction_scan(load_presentation(PRES + "ex1_extra_relator.pres"))
    assert (w7.pattern, w7.indices) == ("Ob1", (2, 3, 1))
    assert obstruction_scan(load_presentation(PRES + "change_of_basis.pres")) == []
    assert obstruction_scan(load_presentation(PRES + "demushkin4.pres")) == []


def test_obstruction_patterns_two():
    (w,) = obstruction_scan(spec_of(3, 2, "[[x1,x2],x1]"))
    assert (w.pattern, w.indices, w.not_realizable) == ("Ob2a", (1, 2), False)
    assert [str(c) for c in w.triple] == ["2*x2", "2*x1", "2*x1"]
    (w,) = obstruction_scan(spec_of(2, 2, "[[x1,x2],x2]"))
    assert (w.pattern, w.not_realizable) == ("Ob2b", True)
    (w,) = obstruction_scan(spec_of(3, 3, "[[x2,x3],x3]"))
    assert (w.pattern, w.coefficient, w.trace) == ("Ob2b", 1, 2)
    # the other relator's power term blocks Ob2a at p = 2
    assert obstruction_scan(spec_of(2, 2, "[[x1,x2],x1]", "x1^2")) == []
    assert obstruction_scan(spec_of(3, 2, "[[x1,x2],x1]", "x1^3")) != []
    # a nonzero u_ij elsewhere breaks the hypothesis
    assert obstruction_scan(spec_of(2, 3, "[[x2,x3],x1]", "[x1,x2]")) == []


def test_obstruction_json():
    (w,) = obstruction_scan(load_presentation(PRES + "ex1.pres"))
    body = w.to_json()
    assert body == {"relator": 0, "pattern": "Ob1", "indices": [2, 3, 1],
                    "triple": ["x1", "x2", "x3"], "coefficient": 1, "trace": 1,
                    "not_realizable": True}
    assert "not realizable as G_F(2)" in w.describe()


@st.composite
def witness_relators(draw, p, d):
    """A relator whose decomposition has random exponents on a few terms."""
    from masseylift.magnus import pair_indices, triple_indices
    a = {i: draw(st.integers(0, p - 1)) for i in range(1, d + 1) if draw(st.booleans())}
    b = {ij: draw(st.integers(0, p - 1)) for ij in pair_indices(d) if draw(st.integers(0, 3)) == 0}
    c = {ijk: draw(st.integers(0, p - 1)) for ijk in triple_indices(d) if draw(st.booleans())}
    return compose_canonical(p, d, a, b, c)


@settings(max_examples=40)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_witness_traces_are_constant(p, data):
    d = 3
    spec = PresentationSpec(p, d, (data.draw(witness_relators(p, d)),))
    for w in obstruction_scan(spec):
        chars = [c.values for c in w.triple]
        traces = {trace_of_value(spec, rep, 0) for rep in enumerate_defining_reps(spec, 3, chars)}
        assert traces == {w.trace} != {0}
        assert massey_check(spec, chars).verdict == DOES_NOT_VANISH


def _all_dual_vanish(spec):
    out = True
    for idx in itertools.product(range(1, spec.d + 1), repeat=3):
        verdict = massey_check(spec, [dual(g, spec.d) for g in idx]).verdict
        out = out and verdict != DOES_NOT_VANISH
    return out


@pytest.mark.parametrize("left, right", [
    ((2, 3, ["[[x2,x3],x1]"]), (2, 2, ["[x1,x2]"])),
    ((2, 2, ["[x1,x2]"]), (2, 2, ["x1^2*[x1,x2]"])),
    ((3, 1, ["x1^3"]), (3, 2, ["[x1,x2]"])),
])
def test_free_product_pairs(left, right):
    (p, d1, r1), (_, d2, r2) = left, right
    g1, g2 = spec_of(p, d1, *r1), spec_of(p, d2, *r2)
    d = d1 + d2
    union = PresentationSpec(p, d, tuple(shifted(r, 0, d) for r in g1.relators)
                             + tuple(shifted(r, d1, d) for r in g2.relators))
    assert _all_dual_vanish(union) == (_all_dual_vanish(g1) and _all_dual_vanish(g2))


@settings(max_examples=25)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_verdicts_depend_on_relator_class_only(p, data):
    d = 3
    r = data.draw(s2_words(p, d))
    conj = data.draw(words(d, 3))
    deep = parse_word(data.draw(st.sampled_from(
        ["[[[x1,x2],x3],x1]", f"[x2^{p * p},x3]", "[[x1,x2],[x1,x3]]", ""])), d)
    variants = [r, ~r, ~conj * r * conj, r * deep]
    chars = data.draw(characters(p, d, 3))
    verdicts = {massey_check(PresentationSpec(p, d, (v,)), chars).verdict for v in variants}
    assert len(verdicts) == 1


def test_character_parsing():
    assert parse_character("x1+x3", 3, 2).values == (1, 0, 1)
    assert parse_character("2*x1 - x3", 3, 5).values == (2, 0, 4)
    assert parse_character("0", 2, 3).values == (0, 0)
    assert str(Character(3, (2, 0, 1))) == "2*x1+x3"
    assert str(-Character.dual(2, 3, 3)) == "2*x2"
    for bad in ("", "x1x2", "y1", "x1+"):
        with pytest.raises(WordSyntaxError):
            parse_character(bad, 3, 2)
    with pytest.raises(GeneratorIndexError):
        parse_character("x4", 3, 2)


def test_report_json_schema():
    spec = load_presentation(PRES + "ex1.pres")
    report = massey_check(spec, [dual(1, 5), dual(2, 5), dual(3, 5)])
    body = json.loads(json.dumps(report_json(report, obstruction_scan(spec))))
    assert set(body) == {"verdict", "triple", "witness", "obstructions"}
    assert body["verdict"] == DOES_NOT_VANISH
    assert body["triple"] == ["x1", "x2", "x3"]
    assert body["witness"]["defining_reps"] == 1024
    assert len(body["obstructions"]) == 1
    vanish = massey_check(PresentationSpec(2, 2, ()), [(1, 0)] * 3).to_json()
    assert set(vanish["witness"]["lift"]) == {"x1", "x2"}


def test_verdicts_agree_across_backends(backend):
    ex1 = load_presentation(PRES + "ex1.pres")
    assert massey_check(ex1, [dual(1, 5), dual(2, 5), dual(3, 5)]).defining == 1024
    assert massey_check(load_presentation(PRES + "cyclic3.pres"), [(1,)] * 3).verdict == DOES_NOT_VANISH
    assert massey_check(ex1, [dual(1, 5), dual(4, 5), dual(1, 5)]).verdict == VANISHES
