import pytest

from pencilcount import (
    Bidegree,
    ContractViolation,
    FloorDiagram,
    InputError,
    LabelLayout,
    Marking,
    SignConvention,
    automorphism_count,
    complex_multiplicity,
    count_complex_markings,
    enumerate_diagrams,
    real_contribution,
    real_multiplicity,
)
from pencilcount.markings import (
    DEFAULT_CONVENTION,
    iter_labeled_markings,
    labeled_complex_marking_count,
    pair_valid,
)

from oracles import diagram_pred_masks, linear_extension_count

CHAIN_A = FloorDiagram(3, ((0, 1, 1), (1, 2, 1)), (0, 0), (0, 2))
CHAIN_C = FloorDiagram(3, ((0, 1, 2), (1, 2, 2)), (0, 0), (2, 2))
CHAIN_E = FloorDiagram(3, ((0, 1, 1), (1, 2, 2)), (0, 1), (2, 2))
STAR_G = FloorDiagram(3, ((0, 2, 1), (1, 2, 1)), (0, 1), (2, 2))
STAR_BOTTOM = FloorDiagram(3, ((0, 1, 1), (0, 2, 1)), (0, 0), (1, 2))


def test_layout_validation():
    layout = LabelLayout.default(9, 2)
    assert layout.pair_starts == (6, 8)
    assert layout.r == 5
    with pytest.raises(InputError):
        LabelLayout(9, (6, 7))  # overlapping blocks
    with pytest.raises(InputError):
        LabelLayout(9, (9,))  # block sticks out
    with pytest.raises(InputError):
        LabelLayout.default(9, 5)


def test_complex_marking_counts():
    assert count_complex_markings(enumerate_diagrams(Bidegree(1, 2))[0]) == 1
    counts = sorted(count_complex_markings(d) for d in enumerate_diagrams(Bidegree(2, 2)))
    assert counts == [1, 4, 4]
    assert count_complex_markings(STAR_BOTTOM) == 10


def test_complex_multiplicities():
    assert complex_multiplicity(CHAIN_A) == 1
    assert complex_multiplicity(CHAIN_C) == 16
    assert complex_multiplicity(CHAIN_E) == 4
    (w2_diagram,) = [d for d in enumerate_diagrams(Bidegree(2, 2))
                     if any(w == 2 for (_, _, w) in d.elevators)]
    assert complex_multiplicity(w2_diagram) == 4
    assert count_complex_markings(w2_diagram) == 1


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4)])
def test_orbit_counts_against_linear_extension_oracle(a, b):
    for d in enumerate_diagrams(Bidegree(a, b)):
        labeled = labeled_complex_marking_count(d)
        aut = automorphism_count(d)
        assert labeled == linear_extension_count(tuple(diagram_pred_masks(d)))
        assert labeled % aut == 0  # free action
        assert count_complex_markings(d) == labeled // aut


def test_real_multiplicity_weight2_vertex_cover():
    # covering the weight-2 elevator with its target floor gives -2
    n = CHAIN_E.element_count
    layout = LabelLayout.default(n, 2)
    found = []
    for assignment in iter_labeled_markings(CHAIN_E, layout, DEFAULT_CONVENTION):
        m = Marking(assignment)
        found.append(real_multiplicity(CHAIN_E, m, layout, DEFAULT_CONVENTION))
    assert found and all(v == -2 for v in found)
    assert sum(found) // automorphism_count(CHAIN_E) == -8


def test_real_multiplicity_two_covered_weight2():
    layout = LabelLayout.default(9, 3)
    values = [real_multiplicity(CHAIN_C, Marking(m), layout, DEFAULT_CONVENTION)
              for m in iter_labeled_markings(CHAIN_C, layout, DEFAULT_CONVENTION)]
    assert values and all(v == 4 for v in values)  # (-2) * (-2)


def test_real_multiplicity_contract_errors():
    layout = LabelLayout.default(9, 1)
    good = next(iter_labeled_markings(CHAIN_A, layout, DEFAULT_CONVENTION))
    assert real_multiplicity(CHAIN_A, Marking(good), layout) == 1
    with pytest.raises(ContractViolation):
        real_multiplicity(CHAIN_A, Marking(good), LabelLayout.default(7, 1))
    bad_order = tuple(reversed(good))
    with pytest.raises(ContractViolation):
        real_multiplicity(CHAIN_A, Marking(bad_order), layout)
    with pytest.raises(ContractViolation):
        real_multiplicity(CHAIN_A, Marking((0,) * 9), layout)


def test_real_contributions_per_diagram():
    assert real_contribution(CHAIN_A, 1) == 4
    for s, expected in ((1, 10), (2, 10), (3, 4), (4, 2)):
        assert real_contribution(STAR_G, s) == expected
    with pytest.raises(InputError):
        real_contribution(CHAIN_A, 5)  # no single position left


def test_micro_oracle_totals_2_3():
    diagrams = enumerate_diagrams(Bidegree(2, 3))
    contribs = sorted(complex_multiplicity(d) * count_complex_markings(d)
                      for d in diagrams)
    assert contribs == [6, 6, 10, 10, 16, 16, 16, 16]
    assert sum(contribs) == 96
    totals = [sum(real_contribution(d, s) for d in diagrams) for s in range(5)]
    assert totals == [48, 32, 20, 12, 8]


def test_purely_real_specialization():
    # with no pair blocks: orbit count when all weights are odd, zero otherwise
    for d in enumerate_diagrams(Bidegree(2, 3)):
        expected = 0 if any(w % 2 == 0 for (_, _, w) in d.elevators) \
            else count_complex_markings(d)
        assert real_contribution(d, 0) == expected


def test_real_bounded_by_complex():
    for d in enumerate_diagrams(Bidegree(2, 3)):
        mu = complex_multiplicity(d)
        n = d.element_count
        for s in (0, 1, 2):
            layout = LabelLayout.default(n, s)
            for assignment in iter_labeled_markings(d, layout, DEFAULT_CONVENTION):
                value = real_multiplicity(d, Marking(assignment), layout)
                assert abs(value) <= mu


def test_pair_scope_monotonicity():
    origin_only = SignConvention("ALT", "ORIGIN_ONLY", "BAL", "BAL")
    for d in enumerate_diagrams(Bidegree(2, 3)):
        n = d.element_count
        for s in (1, 2):
            layout = LabelLayout.default(n, s)
            narrow = set(iter_labeled_markings(d, layout, origin_only))
            wide = set(iter_labeled_markings(d, layout, DEFAULT_CONVENTION))
            assert narrow <= wide


def test_pair_validity_rules():
    elems = STAR_G.elements()
    floors = [e for e in elems if e.kind == "floor"]
    tops = [e for e in elems if e.kind == "top"]
    elevators = [e for e in elems if e.kind == "elevator"]
    bottoms = [e for e in elems if e.kind == "bottom"]
    conv = DEFAULT_CONVENTION
    assert not pair_valid(STAR_G, floors[0], floors[1], conv)
    assert pair_valid(STAR_G, tops[0], tops[1], conv)  # common origin floor
    assert pair_valid(STAR_G, floors[2], tops[0], conv)
    assert pair_valid(STAR_G, elevators[0], elevators[1], conv)  # common target
    origin_only = SignConvention("ALT", "ORIGIN_ONLY")
    assert not pair_valid(STAR_G, elevators[0], elevators[1], origin_only)
    assert not pair_valid(STAR_G, bottoms[0], bottoms[1], conv)  # different targets
