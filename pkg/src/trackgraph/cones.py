r"""
Vertex cycles: extreme rays of the cone of transverse measures.

The cone is {mu >= 0 : S mu = 0} for the integer switch-condition matrix S.
Extreme rays are enumerated by the double description method run with exact
integer arithmetic (rays reduced by gcd); this is cheap at the scale of a
dozen branches.  A second, independent characterization via trainpaths (a
carried curve is a vertex cycle iff its trainpath crosses every branch at
most twice and never twice with the same orientation) cross-validates the
enumeration on every track the test suite touches.
"""

from fractions import Fraction
from math import gcd

from .track import NotConnectedTrainpath, RealizationFailure


class NoVertexCycles(RuntimeError):
    pass


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    g = g or 1
    return tuple(x // g for x in vec)


def extreme_rays(track):
    """
    Primitive integral generators of the extreme rays of the transverse
    measure cone, sorted.  Double description over the positive orthant,
    processing one switch equality at a time; adjacency is decided by the
    standard zero-set inclusion test.
    """
    n = track.n_branches
    rows = track.switch_matrix()
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    sat = [frozenset([i]) for i in range(n)]   # orthant facets NOT touched:
    # track instead the zero sets (facets of the orthant containing the ray)
    zero = [frozenset(j for j in range(n) if j != i) for i in range(n)]
    done_rows = []
    for row in rows:
        val = [sum(r * x for r, x in zip(row, ray)) for ray in rays]
        keep = [i for i, v in enumerate(val) if v == 0]
        pos = [i for i, v in enumerate(val) if v > 0]
        neg = [i for i, v in enumerate(val) if v < 0]
        new_rays = [rays[i] for i in keep]
        new_zero = [zero[i] for i in keep]
        for i in pos:
            for j in neg:
                common = zero[i] & zero[j]
                # adjacency: no third ray's zero set contains the common one
                adjacent = True
                for k in range(len(rays)):
                    if k != i and k != j and common <= zero[k]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                a, b = val[i], -val[j]
                combo = tuple(b * rays[i][t] + a * rays[j][t] for t in range(n))
                combo = _primitive(combo)
                z = frozenset(t for t in range(n) if combo[t] == 0)
                new_rays.append(combo)
                new_zero.append(z)
        # de-duplicate
        rays, zero = [], []
        seen = set()
        for r, z in zip(new_rays, new_zero):
            if r not in seen:
                seen.add(r)
                rays.append(r)
                zero.append(z)
        done_rows.append(row)
    return sorted(rays)


def is_vertex_cycle_by_trainpath(track, mu):
    """
    True iff the integral measure realizes a single closed trainpath that
    crosses every branch at most twice and never twice with the same
    orientation.  Raises NotConnectedTrainpath when the canonical
    resolution has several circuits.
    """
    mu = [int(x) for x in mu]
    if not track.check_switch_conditions(mu):
        return False
    if all(x == 0 for x in mu):
        return False
    circs = track.circuits(mu)
    if len(circs) != 1:
        raise NotConnectedTrainpath(f"{len(circs)} circuits")
    if any(x > 2 for x in mu):
        return False
    dirs = {}
    for (b, d) in circs[0]:
        dirs.setdefault(b, []).append(d)
    for b, ds in dirs.items():
        if len(ds) == 2 and ds[0] == ds[1]:
            return False
    return True


def connected_small_measures(track, bound=2):
    """
    All nonzero integral measures with every weight <= bound, enumerated by
    DFS with switch-condition pruning.  Used by the cross-validation of the
    trainpath characterization (vertex cycles have weights at most two).
    """
    n = track.n_branches
    rows = track.switch_matrix()
    # process branches in an order that completes switches early
    order = []
    seen = set()
    for (a, b) in track.switches:
        for h in a + b:
            if h // 2 not in seen:
                seen.add(h // 2)
                order.append(h // 2)
    pos = {b: i for i, b in enumerate(order)}
    row_complete = {}
    for ri, row in enumerate(rows):
        support = [b for b in range(n) if row[b]]
        row_complete.setdefault(max(pos[b] for b in support), []).append(ri)

    out = []
    mu = [0] * n

    def dfs(i):
        if i == n:
            if any(mu):
                out.append(tuple(mu))
            return
        b = order[i]
        for x in range(bound + 1):
            mu[b] = x
            ok = True
            for ri in row_complete.get(i, ()):
                if sum(r * y for r, y in zip(rows[ri], mu)) != 0:
                    ok = False
                    break
            if ok:
                dfs(i + 1)
        mu[b] = 0

    dfs(0)
    return out


def trainpath_characterized(track, bound=2):
    """Connected integral measures with weights <= bound passing the
    trainpath test; by the vertex-cycle characterization this equals the
    extreme ray set."""
    out = []
    for mu in connected_small_measures(track, bound):
        try:
            if is_vertex_cycle_by_trainpath(track, mu):
                out.append(tuple(mu))
        except NotConnectedTrainpath:
            continue
    return sorted(out)


class VertexCycle:
    __slots__ = ("measure", "curve")

    def __init__(self, measure, curve):
        self.measure = tuple(measure)
        self.curve = curve

    def __repr__(self):
        return f"VertexCycle({self.measure}, {self.curve.coords})"


def vertex_cycles(track):
    """Extreme rays paired with their curves.  Raises RealizationFailure if
    some ray does not push forward to a single essential curve."""
    out = []
    for ray in extreme_rays(track):
        curve = track.pushforward_curve(ray)
        out.append(VertexCycle(ray, curve))
    if not out:
        raise NoVertexCycles(repr(track))
    return out


def representative_curve(track):
    """
    The deterministic curve assigned to a track: the vertex cycle whose
    measure vector is lexicographically minimal after canonical relabelling
    of the branches.  Any choice would do; this one is relabelling-invariant.
    """
    cycles = vertex_cycles(track)
    track.canonical_encoding()
    perm = track._canonical_perm
    def key(vc):
        return tuple(vc.measure[b] for b in sorted(range(track.n_branches),
                                                   key=lambda x: perm[x]))
    best = min(cycles, key=key)
    return best.curve


def mass_intersection_check(track, mu, carried=None):
    """
    Verify that the multicurve of an integral measure meets every vertex
    cycle at most twice the measure's total mass.  Returns (ok, witness)
    where witness is the vertex cycle maximizing the intersection number.
    """
    from .chart import intersection_number
    if carried is None:
        carried = track.pushforward(mu)
    mass = sum(mu)
    worst = None
    worst_i = -1
    for vc in vertex_cycles(track):
        i = intersection_number(carried, vc.curve)
        if i > worst_i:
            worst, worst_i = vc, i
    return (worst_i <= 2 * mass, worst, worst_i)


def recurrence_check(track):
    """True iff the sum of all extreme rays is positive on every branch."""
    rays = extreme_rays(track)
    if not rays:
        return False
    total = [0] * track.n_branches
    for r in rays:
        for b, x in enumerate(r):
            total[b] += x
    return all(x > 0 for x in total)
