from __future__ import annotations

import json
from dataclasses import replace
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vbsfloer.complex import (
    CHECK_IDS,
    CoverError,
    DanglingReferenceError,
    DuplicateIdError,
    ParseError,
    branch_loops,
    cyclic_cover,
    holonomy_order,
    parse_complex,
    serialize,
    to_document,
    validate,
)
from vbsfloer.datasets import bundled_datasets, load_dataset


def fig8_doc():
    return to_document(load_dataset("fig8"))


@st.composite
def fig8_covers(draw):
    """Cyclic covers of fig8; sectors lift iff edges 0,1 and edges 2,3 carry equal weights."""
    n = draw(st.integers(2, 3))
    a = draw(st.integers(0, n - 1))
    b = draw(st.integers(0, n - 1))
    return n, {0: a, 1: a, 2: b, 3: b}


def test_fig8_shape(fig8):
    assert len(fig8.sectors) == 2
    assert len(fig8.vertices) == 2
    assert validate(fig8).ok


def test_every_check_reported(fig8):
    assert [c.check for c in validate(fig8).checks] == list(CHECK_IDS)


def test_round_trip_is_identity(instance):
    text = serialize(instance)
    again = parse_complex(text)
    assert again == instance
    assert serialize(again) == text


def test_serialize_is_deterministic(fig8):
    assert serialize(fig8) == serialize(load_dataset("fig8"))


def test_relabelled_copy_serializes_differently(fig8):
    doc = fig8_doc()
    swap = {0: 1, 1: 0}
    for v in doc["vertices"]:
        v["id"] = swap[v["id"]]
    for e in doc["edges"]:
        e["from"], e["to"] = swap[e["from"]], swap[e["to"]]
    for sm in doc["smoothings"]:
        sm["vertex"] = swap[sm["vertex"]]
    for s in doc["sectors"]:
        s["bottom"], s["top"] = swap[s["bottom"]], swap[s["top"]]
    relabelled = parse_complex(doc)
    assert validate(relabelled).ok
    assert serialize(relabelled) != serialize(fig8)


def test_missing_vertex_is_dangling():
    doc = fig8_doc()
    doc["edges"][0]["to"] = 7
    with pytest.raises(DanglingReferenceError):
        parse_complex(doc)


def test_duplicate_id():
    doc = fig8_doc()
    doc["edges"][1]["id"] = 0
    with pytest.raises(DuplicateIdError):
        parse_complex(doc)


def test_syntax_error_has_location():
    with pytest.raises(ParseError) as info:
        parse_complex('{"name": "x",\n "vertices": [}')
    assert info.value.line == 2


def test_wrong_field_type_names_the_field():
    doc = fig8_doc()
    doc["sectors"][1]["left_top"] = "oops"
    with pytest.raises(ParseError) as info:
        parse_complex(json.dumps(doc))
    assert info.value.path == "sectors[1].left_top"


@pytest.mark.parametrize("vertex", [0, 1])
def test_recolouring_breaks_chain_rule(fig8, vertex):
    colors = dict(fig8.vertices)
    colors[vertex] = "red" if colors[vertex] == "blue" else "blue"
    report = validate(replace(fig8, vertices=colors))
    assert not report["top-chain-rule"].passed
    # brute force over every top chain: some chain has a sector of the wrong kind
    c = replace(fig8, vertices=colors)
    owner = {e: s for s, sec in c.sectors.items() for e in (sec.left_bottom, sec.right_bottom)}
    offending = False
    for sec in c.sectors.values():
        for chain in (sec.left_top, sec.right_top):
            kinds = [(c.is_toggle(owner[e]), c.sector_color(owner[e])) for e in chain]
            col = c.sector_color(sec.id)
            if len(chain) == 1:
                ok = kinds[0] == (False, col)
            else:
                ok = kinds[0][0] and kinds[-1][0] and all(not t and k != col for t, k in kinds[1:-1])
            offending |= not ok
    assert offending


def test_three_valent_vertex_fails_valence():
    doc = fig8_doc()
    doc["edges"][0]["to"] = 1
    report = validate(parse_complex(doc))
    assert not report["valence"].passed
    assert set(report["valence"].offenders) == {0, 1}


def test_failures_carry_messages():
    doc = fig8_doc()
    doc["sectors"][0]["left_top"] = [2, 0]
    report = validate(parse_complex(doc))
    assert not report.ok
    for failure in report.failures:
        assert failure.offenders and failure.message != "ok"


def test_fig8_branch_loops(fig8):
    loops = branch_loops(fig8)
    assert len(loops) == 2
    assert sorted(e for loop in loops for e in loop) == sorted(fig8.edges)


def test_each_vertex_met_by_two_passes(instance):
    passes = {}
    for loop in branch_loops(instance):
        for e in loop:
            passes[instance.tail(e)] = passes.get(instance.tail(e), 0) + 1
    assert passes == {v: 2 for v in instance.vertices}


def _follow_lifted(cover, start):
    nxt = cover.smooth_successor()
    loop = [start]
    while nxt[loop[-1]] != start:
        loop.append(nxt[loop[-1]])
    return loop


def test_cover_branch_loops_lift_with_holonomy(fig8, cover2):
    w = fig8.fiber_cocycle
    base_loops = branch_loops(fig8)
    lifted = branch_loops(cover2)
    expected = []
    for loop in base_loops:
        order = holonomy_order(2, sum(w[e] for e in loop))
        expected += [order * len(loop)] * (2 // order)
    assert sorted(len(l) for l in lifted) == sorted(expected)
    # independent walk along lifted smoothings
    for loop in lifted:
        assert len(_follow_lifted(cover2, loop[0])) == len(loop)


def test_cover2_is_valid_and_connected(cover2):
    assert len(cover2.sectors) == 4
    assert validate(cover2).ok


def test_zero_weight_cover_is_disconnected(fig8):
    cover = cyclic_cover(fig8, 2, {e: 0 for e in fig8.edges})
    report = validate(cover)
    assert [f.check for f in report.failures] == ["connected"]


def test_cover_rejects_non_lifting_weights(fig8):
    with pytest.raises(CoverError):
        cyclic_cover(fig8, 2, {0: 1, 1: 0, 2: 0, 3: 0})


def test_bundled_list_is_stable():
    assert bundled_datasets() == ["fig8", "fig8-cover2"]
    assert bundled_datasets() == bundled_datasets()


@given(fig8_covers())
@settings(max_examples=30, deadline=None)
def test_covers_pass_every_local_check(params):
    n, w = params
    base = load_dataset("fig8")
    cover = cyclic_cover(base, n, w)
    report = validate(cover)
    local = [c for c in report.checks if c.check != "connected"]
    assert all(c.passed for c in local)
    # every cycle of the base alternates the two edge pairs, so it weighs a multiple of a + b
    assert report["connected"].passed == (gcd(w[0] + w[2], n) == 1)
    assert len(cover.sectors) == len(cover.vertices) == 2 * n
    assert parse_complex(serialize(cover)) == cover
