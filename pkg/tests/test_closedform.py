import pytest

from splicecheck.builder import build_cover_graph
from splicecheck.closedform import (
    NO,
    NOT_QHS,
    WEIGHTED_HOMOGENEOUS,
    YES_CASE_I,
    YES_CASE_II,
    YES_PATHOLOGICAL,
    edote_closed_form,
    linking_closed_form,
    main_theorem_classify,
    reduced_minus_condition,
    weights_closed_form,
)
from splicecheck.curve import NEWTON, TOPOLOGICAL, PairSystem, cover_invariants
from splicecheck.graph import linking
from splicecheck.nw import HOLDS, check_all
from splicecheck.sweep import leaf_type, pair_systems

EX = PairSystem(TOPOLOGICAL, ((2, 3), (2, 15)))


def test_weights_example():
    w = weights_closed_form(EX, 5)
    assert w.D_vbar[2] == 2 and w.D_minus[2] == 3 and w.D_A[1] == 80 and w.det == 16
    assert w.D_minus[1] == w.D_vbar[0]


def test_weights_zhs_collapse():
    ps = PairSystem(TOPOLOGICAL, ((2, 3), (3, 19), (2, 115)))
    w = weights_closed_form(ps, 7)
    assert w.det == 1
    for k, (p, a) in enumerate(ps.pairs, start=1):
        assert w.D_minus[k] == a and w.D_vbar[k] == p


def test_A_values():
    w = weights_closed_form(EX, 7)
    assert w.A[1] == 15
    assert weights_closed_form(EX, 2).A_tilde[1] == 9


def test_linking_examples():
    assert linking_closed_form(EX, 5, 2, 0) == 2
    assert linking_closed_form(EX, 5, 2, 1) == 3
    ps = PairSystem(TOPOLOGICAL, ((2, 3), (3, 19), (2, 115)))
    assert linking_closed_form(ps, 7, 3, 0) == 2 * 3
    assert linking_closed_form(ps, 7, 3, 1) == 3 * 3
    assert linking_closed_form(ps, 7, 3, 2) == 19
    with pytest.raises(IndexError):
        linking_closed_form(EX, 5, 1, 0)


def test_edote_examples():
    assert edote_closed_form(EX, 5, 2).is_zero()
    assert edote_closed_form(EX, 7, 2).is_zero()
    assert edote_closed_form(EX, 7, 1).is_zero()
    with pytest.raises(ValueError):
        edote_closed_form(EX, 14, 2)  # p'_2 = 1
    with pytest.raises(ValueError):
        edote_closed_form(EX, 10, 1)  # not QHS


def test_linking_matches_built_diagrams():
    checked = 0
    for ps in pair_systems((2, 3), (2, 3), 2):
        for n in range(2, 13):
            b = build_cover_graph(ps, n)
            d = b.diagram
            if d is None or b.pathological:
                continue
            for v in d.nodes:
                label = d.graph.vertices[v].label
                if label[0] != "v" or label[1] < 2:
                    continue
                k = label[1]
                for w in d.leaves:
                    kind = leaf_type(d.graph.vertices[w].label)
                    if kind[0] != "vbar" or kind[1] >= k:
                        continue
                    path = d.graph.path(v, w)[1:]
                    labels = [d.graph.vertices[x].label for x in path]
                    if any(lab[0] == "v" and lab[1] >= k for lab in labels):
                        continue  # behind another node of the same or higher level
                    assert linking(d, v, w, "reduced") == linking_closed_form(ps, n, k, kind[1])
                    checked += 1
    assert checked > 200


def test_reduced_minus_condition_matches_checker():
    checked = 0
    for ps in pair_systems((3,), (2, 3), 2):
        for n in range(2, 21):
            b = build_cover_graph(ps, n)
            if b.diagram is None or b.pathological:
                continue
            inv = cover_invariants(ps, n)
            d = b.diagram
            report = check_all(b)
            for e in report.edges:
                label = d.graph.vertices[e.node].label
                if label[0] != "v" or label[1] < 2 or e.semigroup == "trivial":
                    continue
                k = label[1]
                below = leaf_type(d.graph.vertices[e.leaves[0]].label)
                if below[0] == "vbar" and below[1] < k and all(
                    leaf_type(d.graph.vertices[w].label)[1] < k for w in e.leaves
                ):
                    assert (e.semigroup == HOLDS) == reduced_minus_condition(ps, n, k), (ps.text(), n, k)
                    checked += 1
    assert checked > 20


@pytest.mark.parametrize(
    "n, kind",
    [(5, YES_CASE_I), (14, YES_CASE_II), (2, YES_PATHOLOGICAL), (3, NO), (10, NOT_QHS), (7, YES_CASE_I)],
)
def test_classify_example(n, kind):
    assert main_theorem_classify(EX, n).kind == kind


def test_classify_witness_and_other_inputs():
    v = main_theorem_classify(EX, 5)
    assert v.is_yes and dict(v.witness) == {3: 1, 2: 0}
    assert main_theorem_classify(PairSystem(TOPOLOGICAL, ((2, 3), (3, 20))), 2).kind == NO
    assert main_theorem_classify(PairSystem(NEWTON, ((2, 3), (2, 3))), 5).kind == YES_CASE_I
    assert main_theorem_classify(PairSystem(TOPOLOGICAL, ((2, 3),)), 4).kind == WEIGHTED_HOMOGENEOUS
    s3 = PairSystem(TOPOLOGICAL, ((2, 3), (2, 13), (2, 53)))
    assert main_theorem_classify(s3, 2).kind == NO
