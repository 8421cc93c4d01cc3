"""Acceptance criteria, one test per criterion.

Run ``python3 tests/test_acceptance.py`` for a bare pass/fail listing, or the
usual pytest invocation, whose summary carries the same listing.
"""

from __future__ import annotations

import io
import random
import time

from oracles import (
    brute_representatives,
    brute_states,
    canon_multi,
    dense_f2_rank,
    single_loop_bases,
    torus_periodic_orbit_count,
)
from vbsfloer.cli import parse_config, run
from vbsfloer.complex import parse_complex, serialize
from vbsfloer.datasets import load_dataset
from vbsfloer.dynamic import (
    Core,
    build_dynamic_region,
    cc_complex,
    cc_multiloop_complex,
    core_growth_sequence,
    maximal_core,
)
from vbsfloer.f2 import F2Matrix, f2_rank, homology_dim
from vbsfloer.grading import Gradings, cycle_vector, epsilon_tilde, strum_resolutions
from vbsfloer.homology import SLEEK, fibered_report, sfh_report
from vbsfloer.loops import is_embedded
from vbsfloer.states import enumerate_states
from vbsfloer.sweep import (
    branch_multiloops,
    is_sleek,
    orientability_bipartition,
    representatives_of_cycle,
    sleek_branch_count,
    sweep_class,
)

DATASETS = ("fig8", "fig8-cover2")
SEED = 20240601
# the figure-eight knot complement fibres with this monodromy
FIG8_MONODROMY = ((2, 1), (1, 1))


def test_c01_fig8_state_count():
    start = time.perf_counter()
    c = parse_complex(serialize(load_dataset("fig8")))
    out = io.StringIO()
    code = run(parse_config(["states", "data/fig8", "--format", "tsv"]), out, io.StringIO())
    states = enumerate_states(c)
    elapsed = time.perf_counter() - start
    g = Gradings(c)
    assert code == 0
    assert len(out.getvalue().splitlines()) - 1 == 10
    assert len(states) == 10
    slots = [set(dict(x.assignment).values()) for x in (g.top, g.bot)]
    assert slots == [{"top"}, {"bottom"}]
    assert g.top in states and g.bot in states
    assert elapsed < 1.0


def test_c02_fig8_spinc_partition():
    g = Gradings(load_dataset("fig8"))
    part = g.spinc_partition()
    assert sorted(part.sizes()) == [1, 1, 4, 4]
    assert len(part.block_of(g.index_of(g.top)).members) == 1
    assert len(part.block_of(g.index_of(g.bot)).members) == 1
    assert part.block_of(g.index_of(g.top)) != part.block_of(g.index_of(g.bot))


def test_c03_fig8_s_tilde_refinement():
    g = Gradings(load_dataset("fig8"))
    tilde = g.s_tilde_partition()
    fours = [b for b in g.spinc_partition().blocks if len(b.members) == 4]
    splits = sorted(
        sorted(len(t.members) for t in tilde.blocks if set(t.members) <= set(b.members)) for b in fours
    )
    assert splits == [[1, 1, 1, 1], [4]]


def test_c04_sleek_blocks_have_rank_one():
    start = time.perf_counter()
    for name in DATASETS:
        rep = sfh_report(load_dataset(name))
        sleek = [b for b in rep.blocks if b.status == SLEEK]
        assert sleek
        assert all(b.homology_dim == 1 for b in sleek)
        assert rep.unresolved == 0
    assert time.perf_counter() - start < 10.0


def test_c05_boundary_squares_to_zero():
    checked = 0
    for name in DATASETS:
        c = load_dataset(name)
        g = Gradings(c)
        for m in g.multiloops:
            cls = sweep_class(c, m)
            if all(is_embedded(c, x) for x in cls.members):
                cc = cc_multiloop_complex(c, cls)
                assert cc.squares_to_zero()
                checked += 1
        for base in single_loop_bases(c):
            region = build_dynamic_region(c, base)
            start = Core(frozenset())
            for core in [start] + core_growth_sequence(region, start, maximal_core(region)):
                cc = cc_complex(region, core)
                d = cc.boundary
                assert (d @ d).is_zero()
                checked += 1
    assert checked > 0


def test_c06_core_growth_keeps_homology():
    pool = [(name, base) for name in DATASETS for base in single_loop_bases(load_dataset(name))]
    nontrivial = []
    for name, base in pool:
        region = build_dynamic_region(load_dataset(name), base)
        if region.n_sectors > 0:
            nontrivial.append(region)
    assert len(nontrivial) >= 5
    for region in random.Random(SEED).sample(nontrivial, 5):
        start = Core(frozenset())
        chain = [start] + core_growth_sequence(region, start, maximal_core(region))
        assert len(chain) == region.n_sectors + 1
        dims = [homology_dim(cc_complex(region, k)) for k in chain]
        assert len(set(dims)) == 1, dims


def test_c07_epsilon_lift_is_consistent():
    for name in DATASETS:
        c = load_dataset(name)
        g = Gradings(c)
        q = g.quotient
        assert not any(g.classes[g.index_of(g.bot)].key)
        for i, x in enumerate(g.states):
            lifts = {q.h1m_class(v) for v in epsilon_tilde(c, x)}
            assert lifts == {g.classes[i]}
            for r in strum_resolutions(c, g.multiloops[i]):
                assert q.h1m_class(cycle_vector(c, r)) == g.classes[i]


def test_c08_orientable_bound():
    c = load_dataset("fig8")
    bip = orientability_bipartition(c)
    assert bip is not None
    n = len(bip.east)
    assert n == 1
    unions = branch_multiloops(c, bip)
    assert len(unions) == 2 ** (n + 1) - 1
    assert all(is_sleek(c, m)[0] for m in unions)
    _, bound = sleek_branch_count(c)
    assert bound == 2 ** (n + 1)
    assert sfh_report(c).bound >= 2 ** (n + 1)


def test_c09_fibered_counting():
    rep = fibered_report(load_dataset("fig8"))
    assert rep.bot_pairing == 0
    assert rep.top_pairing == 3
    for n in (1, 2):
        expected = torus_periodic_orbit_count(FIG8_MONODROMY, n)
        assert expected == 4
        row = rep.row(n)
        assert (row.sleek_blocks, row.dim) == (4, expected), f"row {n}: {row}"


def test_c10_oracle_equivalence():
    for name in DATASETS:
        c = load_dataset(name)
        if len(c.sectors) > 6:
            continue
        assert [x.as_dict() for x in enumerate_states(c)] == brute_states(c)
        g = Gradings(c)
        for eps in g.epsilon:
            for v in sorted(eps):
                got = representatives_of_cycle(c, v)
                assert {canon_multi(m) for m in got} == brute_representatives(c, v)
    rng = random.Random(SEED)
    for _ in range(40):
        r, k = rng.randint(1, 50), rng.randint(1, 50)
        dense = [[rng.randint(0, 1) for _ in range(k)] for _ in range(r)]
        assert f2_rank(F2Matrix.from_dense(dense)) == dense_f2_rank(dense)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_c")):
        try:
            fn()
            print(f"PASS  {name}")
        except AssertionError as exc:
            failed += 1
            print(f"FAIL  {name}  {exc}")
    sys.exit(1 if failed else 0)
