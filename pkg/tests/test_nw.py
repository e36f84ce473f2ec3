import json
import random

import pytest

from oracles import brute_member, chain, congruence_by_characters, e8, representations, star
from splicecheck.builder import build_cover_graph
from splicecheck.curve import TOPOLOGICAL, PairSystem
from splicecheck.graph import splice_extract
from splicecheck.nw import (
    FAIL_CONGRUENCE,
    FAIL_SEMIGROUP,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    NOT_QHS,
    PASS,
    SKIPPED,
    TRIVIAL,
    UNCHECKED,
    VERDICT_INCONCLUSIVE,
    check_all,
    check_diagram,
    congruence_condition,
    default_cap,
    emit_splice_equations,
    enumerate_representations,
    semigroup_condition,
    semigroup_member,
)
from splicecheck.sweep import pair_systems

EX = PairSystem(TOPOLOGICAL, ((2, 3), (2, 15)))
REMARK = PairSystem(TOPOLOGICAL, ((2, 3), (3, 20)))


def test_semigroup_member_examples():
    assert semigroup_member(7, [3, 5])[0] == FAILS
    status, coeffs = semigroup_member(3, [3, 2])
    assert status == HOLDS and coeffs == [1, 0]
    assert semigroup_member(0, [4])[0] == HOLDS
    assert semigroup_member(5, [])[0] == FAILS
    assert semigroup_member(9, [4, 6])[0] == FAILS
    with pytest.raises(ValueError):
        semigroup_member(3, [0, 2])


def test_semigroup_member_matches_brute_force():
    rng = random.Random(5)
    for _ in range(2000):
        gens = [rng.randint(1, 30) for _ in range(rng.randint(1, 4))]
        target = rng.randint(0, 200)
        status, coeffs = semigroup_member(target, gens)
        assert (status == HOLDS) == brute_member(target, gens)
        if status == HOLDS:
            assert sum(c * g for c, g in zip(coeffs, gens)) == target and min(coeffs) >= 0


def test_semigroup_member_large_target_uses_frobenius():
    status, coeffs = semigroup_member(10**12 + 1, [1000003, 999983])
    assert status == HOLDS
    assert coeffs[0] * 1000003 + coeffs[1] * 999983 == 10**12 + 1


def test_semigroup_member_cap():
    assert semigroup_member(10**7 + 3, [10**6 + 7, 10**6 + 9, 2 * 10**6 + 3], cap=10)[0] == INCONCLUSIVE


def test_enumerate_representations_examples():
    assert enumerate_representations(4, [2]) == ([(2,)], False)
    reps, truncated = enumerate_representations(80, [16] * 5)
    assert (1, 1, 1, 1, 1) in reps and not truncated
    assert enumerate_representations(5, [2, 3]) == ([(1, 1)], False)
    reps, truncated = enumerate_representations(100, [1, 2, 3], cap=5)
    assert truncated and len(reps) <= 5


def test_enumerate_representations_matches_oracle():
    rng = random.Random(9)
    for _ in range(300):
        gens = [rng.randint(1, 12) for _ in range(rng.randint(1, 4))]
        target = rng.randint(0, 40)
        reps, truncated = enumerate_representations(target, gens)
        assert not truncated
        assert sorted(reps) == sorted(representations(target, gens))


def test_default_cap_env(monkeypatch):
    monkeypatch.delenv("SPLICECHECK_CAP", raising=False)
    assert default_cap() == 10**6
    monkeypatch.setenv("SPLICECHECK_CAP", "1234")
    assert default_cap() == 1234


def _edge(report, node, toward_weight):
    return next(e for e in report.edges if e.node == node and e.weight == toward_weight)


def test_example_n5_conditions():
    b = build_cover_graph(EX, 5)
    d = b.diagram
    report = check_all(b)
    assert report.verdict == PASS and report.det == 16
    leaf_edges = [e for e in report.edges if e.semigroup == TRIVIAL]
    assert len(leaf_edges) == 7 and all(e.congruence == SKIPPED for e in leaf_edges)
    (inner,) = [e for e in report.edges if e.semigroup != TRIVIAL and e.weight == 3]
    assert sorted(inner.generators) == [2, 3]
    assert [inner.witness[w] * g for w, g in zip(inner.leaves, inner.generators) if inner.witness[w]] == [3]
    (outer,) = [e for e in report.edges if e.weight == 80]
    assert outer.generators == (16,) * 5
    assert sorted(outer.monomial.values()) == [1] * 5
    assert outer.congruence == HOLDS


def test_remark_fails_congruence():
    report = check_all(build_cover_graph(REMARK, 2))
    assert report.verdict == FAIL_CONGRUENCE
    assert all(e.semigroup in (HOLDS, TRIVIAL) for e in report.edges)
    bad = report.failures()
    assert bad and all(e.congruence == FAILS for e in bad)


def test_semigroup_failure_marks_congruence_unchecked():
    report = check_all(build_cover_graph(EX, 4))
    assert report.verdict == FAIL_SEMIGROUP
    assert any(e.semigroup == FAILS for e in report.edges)
    assert all(e.congruence in (UNCHECKED, SKIPPED) for e in report.edges)


def test_zhs_congruence_vacuous():
    b = build_cover_graph(EX, 7)
    report = check_all(b)
    assert report.det == 1 and report.verdict == PASS
    for e in report.edges:
        if e.semigroup == HOLDS:
            assert e.congruence == HOLDS and e.monomial == e.witness


def test_not_qhs_and_raw_inputs():
    assert check_all(build_cover_graph(EX, 10)).verdict == NOT_QHS
    assert check_all((EX, 5)).verdict == PASS
    assert check_all(e8()).verdict == PASS
    assert check_all(chain([-2, -3])).verdict == PASS and check_all(chain([-2, -3])).edges == []


def test_congruence_cap_gives_inconclusive():
    b = build_cover_graph(REMARK, 2)
    report = check_diagram(b.diagram, cap=1)
    assert report.verdict in (VERDICT_INCONCLUSIVE, FAIL_CONGRUENCE)
    assert check_diagram(build_cover_graph(EX, 4).diagram, cap=1).verdict in (VERDICT_INCONCLUSIVE, FAIL_SEMIGROUP)


def test_congruence_search_orders_agree():
    for n in (2, 5, 25):
        d = build_cover_graph(EX, n).diagram
        for e in check_diagram(d).edges:
            if e.semigroup != HOLDS:
                continue
            flipped = semigroup_condition(d, e.node, e.first)
            assert congruence_condition(d, flipped, reverse=True).congruence == e.congruence


def test_congruence_matches_character_oracle():
    """Checker versus discriminant-group characters from the inverse matrix."""
    cases = [(ps, n) for ps in pair_systems((2,), (2, 3), 2) for n in range(2, 13)]
    cases.append((REMARK, 2))
    checked = 0
    for ps, n in cases:
        b = build_cover_graph(ps, n)
        if b.diagram is None or len(b.minimal) > 40:
            continue
        d = b.diagram
        for e in check_diagram(d).edges:
            if e.semigroup != HOLDS or len(representations(e.weight, e.generators)) > 2000:
                continue
            want = congruence_by_characters(d.graph, e.node, e.leaves, e.generators, e.weight)
            if e.congruence == UNCHECKED:
                e = congruence_condition(d, e)
            assert (e.congruence == HOLDS) == want, (ps.text(), n, e.node, e.first)
            checked += 1
    assert checked > 50


def test_report_json_round_trip():
    report = check_all(build_cover_graph(EX, 5))
    obj = report.to_dict()
    assert obj["schema"] == "splicecheck.report/1"
    again = json.loads(json.dumps(obj, sort_keys=True))
    assert again == json.loads(json.dumps(obj))
    keys = {"node", "first", "toward", "weight", "leaves", "generators", "semigroup", "witness",
            "congruence", "monomial", "explored"}
    assert all(set(e) == keys for e in again["edges"])
    assert json.dumps(obj, sort_keys=True) == json.dumps(check_all(build_cover_graph(EX, 5)).to_dict(), sort_keys=True)


def test_equations_n5():
    b = build_cover_graph(EX, 5)
    eqs = emit_splice_equations(b.diagram, check_all(b))
    assert len(eqs) == 5 and len(eqs.variables) == 7
    assert len(eqs.homogeneous) == 2 and all(eqs.homogeneous.values())
    lines = eqs.render()
    assert sum(1 for line in lines if "Z1*Z2*Z3*Z4*Z5" in line or "^2" in line) == 5


def test_equations_e8_brieskorn():
    d = splice_extract(e8())
    eqs = emit_splice_equations(d, check_diagram(d))
    (line,) = eqs.render()
    assert sorted(line.replace(" = 0", "").split(" + ")) == ["c0_1_1*Z1^2", "c0_1_2*Z2^3", "c0_1_3*Z3^5"]
    assert eqs.homogeneous == {0: True} and eqs.node_weight == {0: 30}


def test_equations_degenerate_and_refusal():
    d = splice_extract(chain([-2, -2]))
    assert len(emit_splice_equations(d, check_diagram(d))) == 0
    b = build_cover_graph(EX, 4)
    with pytest.raises(ValueError):
        emit_splice_equations(b.diagram, check_all(b))


def test_equations_d4_star():
    d = splice_extract(star(-2, [[-2], [-2], [-2]]))
    eqs = emit_splice_equations(d, check_diagram(d))
    assert len(eqs) == 1 and all(eqs.homogeneous.values())
