import random

import pytest

from trackgraph import chart as C
from trackgraph import cones as K
from trackgraph import track as T
from trackgraph.experiments import random_guide

from oracles import brute_force_rays


@pytest.fixture(scope="module", params=["s05", "s12"])
def adapted(request):
    return T.adapted_track(request.param)


def test_rays_match_brute_force(adapted):
    tr = adapted.track
    assert K.extreme_rays(tr) == brute_force_rays(tr)


def test_pants_measures_are_rays(adapted):
    rays = K.extreme_rays(adapted.track)
    for conn in adapted.connectors:
        assert tuple(conn["measure"]) in rays


def test_marker_uniqueness(adapted):
    rays = K.extreme_rays(adapted.track)
    for conn in adapted.connectors:
        positive = [r for r in rays if r[conn["marker"]] > 0]
        assert positive == [tuple(conn["measure"])]


def test_rays_primitive_and_mass_bounded(adapted):
    from math import gcd
    rays = K.extreme_rays(adapted.track)
    for r in rays:
        g = 0
        for x in r:
            g = gcd(g, x)
        assert g == 1
        assert sum(r) <= 2 * adapted.track.n_branches


def test_degenerate_single_ray_cone():
    # a one-branch closed loop fixture: one switch with the two ends of a
    # single branch on opposite sides has V = a ray through the loop
    chart = C.get_chart("s12")
    tr = T.TrainTrack(chart, [((0,), (1,))], [()], [0], check=False)
    assert K.extreme_rays(tr) == [(1,)]


def test_trainpath_examples(adapted):
    tr = adapted.track
    # pants counting measure: single trainpath, branches at most twice,
    # opposite orientations
    for conn in adapted.connectors:
        assert K.is_vertex_cycle_by_trainpath(tr, conn["measure"])
        doubled = [2 * x for x in conn["measure"]]
        with pytest.raises(K.NotConnectedTrainpath):
            K.is_vertex_cycle_by_trainpath(tr, doubled)
    # a sum of two disjoint cycles decomposes
    m1 = adapted.connectors[0]["measure"]
    m2 = adapted.connectors[1]["measure"]
    with pytest.raises(K.NotConnectedTrainpath):
        K.is_vertex_cycle_by_trainpath(tr, [a + b for a, b in zip(m1, m2)])


def test_cross_validation_on_adapted(adapted):
    tr = adapted.track
    assert K.trainpath_characterized(tr) == K.extreme_rays(tr)


def test_vertex_cycles_curves(adapted):
    vcs = K.vertex_cycles(adapted.track)
    curves = {vc.curve for vc in vcs}
    for g in adapted.pants:
        assert g in curves


def test_representative_curve_deterministic(adapted):
    tr = adapted.track
    assert K.representative_curve(tr) == K.representative_curve(tr)


def test_representative_curve_relabeling_invariant(adapted):
    tr = adapted.track
    perm = list(range(tr.n_branches))
    random.Random(7).shuffle(perm)
    inv = {b: i for i, b in enumerate(perm)}

    def mh(h):
        return 2 * inv[h // 2] + h % 2

    switches = [(tuple(mh(h) for h in a), tuple(mh(h) for h in b))
                for (a, b) in tr.switches]
    words = [None] * tr.n_branches
    for b in range(tr.n_branches):
        words[inv[b]] = tr.words[b]
    relabeled = T.TrainTrack(tr.chart, switches, words, tr.homes)
    assert K.representative_curve(relabeled) == K.representative_curve(tr)


def test_mass_intersection_examples(adapted):
    tr = adapted.track
    # a vertex cycle against itself and the disjoint pants pair
    for conn in adapted.connectors:
        ok, _w, i = K.mass_intersection_check(tr, conn["measure"])
        assert ok
    rng = random.Random(13)
    rays = K.extreme_rays(tr)
    for _ in range(10):
        mu = random_guide(tr, rays, rng, 0, 4)
        if not any(mu):
            continue
        ok, _witness, i = K.mass_intersection_check(tr, mu)
        assert ok
        assert i <= 2 * sum(mu)


def test_recurrence_false_with_dead_branch():
    # a track with a branch carried by no cycle: add a dead-end branch is
    # not possible with closed switches, so instead check a split descendant
    # stays recurrent along a guided walk
    at = T.adapted_track("s05")
    tr = at.track
    rng = random.Random(3)
    rays = K.extreme_rays(tr)
    mu = random_guide(tr, rays, rng)
    from trackgraph import sequences as S
    seq = S.run_splitting_sequence(tr, mu, 15)
    for t in seq.tracks:
        assert K.recurrence_check(t)
