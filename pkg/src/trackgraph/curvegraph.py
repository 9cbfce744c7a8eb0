r"""
The curve graph at desk scale.

Vertices are the essential simple closed curves of a bounded-coordinate
universe; edges join disjoint curves.  Distances come from BFS inside the
universe, so a computed value is always realized by an actual path; whether
it is certified as the true curve-graph distance follows the truncation
protocol below (the graph is infinite, and honesty about truncation is
essential).

Certification: a BFS result d from x is certified when every universe curve
strictly closer to x than d has maximal coordinate at most bound - g_step,
where g_step is the maximal single-step coordinate growth observed over the
index's adjacency.  Uncertified distances are upper bounds (real paths).
"""

from fractions import Fraction
import itertools

from .chart import (NormalCurve, MultiCurve, enumerate_curves, is_disjoint,
                    intersection_number, as_components)
from .overlay import fills


class NotInUniverse(KeyError):
    pass


class Unreachable(RuntimeError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"no path within radius cap {cap}")


class DegeneratePair(ValueError):
    pass


class CurveGraphIndex:
    """Bounded universe of curves with cached adjacency and BFS distances."""

    def __init__(self, chart, bound=4, cap=4):
        self.chart = chart
        self.bound = bound
        self.cap = cap
        self.universe = enumerate_curves(chart, bound)
        self.key = {c: i for i, c in enumerate(self.universe)}
        self._adj = {}
        self._bfs = {}
        self._g_step = 0

    def __len__(self):
        return len(self.universe)

    def index_of(self, curve):
        if curve not in self.key:
            raise NotInUniverse(repr(curve))
        return self.key[curve]

    def adjacency_row(self, i):
        if i not in self._adj:
            x = self.universe[i]
            row = []
            for j, y in enumerate(self.universe):
                if i != j and is_disjoint(x, y):
                    row.append(j)
                    growth = max(abs(a - b) for a, b in zip(x.coords, y.coords))
                    if growth > self._g_step:
                        self._g_step = growth
            self._adj[i] = tuple(row)
        return self._adj[i]

    def build_adjacency(self):
        for i in range(len(self.universe)):
            self.adjacency_row(i)
        return self._g_step

    def bfs(self, i, cap=None):
        cap = self.cap if cap is None else cap
        if (i, cap) not in self._bfs:
            dist = {i: 0}
            parent = {i: None}
            frontier = [i]
            d = 0
            while frontier and d < cap:
                nxt = []
                for a in frontier:
                    for b in self.adjacency_row(a):
                        if b not in dist:
                            dist[b] = d + 1
                            parent[b] = a
                            nxt.append(b)
                frontier = nxt
                d += 1
            self._bfs[(i, cap)] = (dist, parent)
        return self._bfs[(i, cap)]

    # -- distances ---------------------------------------------------------

    def distance_info(self, x, y, cap=None):
        """
        (distance, certified) or raises Unreachable/NotInUniverse.

        The BFS value is an upper bound realized by an actual path.  It is
        certified as the true curve-graph distance exactly when the value
        admits an unconditional lower bound: d <= 1 is definitional, d = 2
        follows from non-disjointness, and d = 3 from the filling criterion.
        Values of four and more are reported uncertified (upper bound only);
        no finite universe can certify them.
        """
        cap = self.cap if cap is None else cap
        i, j = self.index_of(x), self.index_of(y)
        dist, _ = self.bfs(i, cap)
        if j not in dist:
            raise Unreachable(cap)
        d = dist[j]
        if d <= 2:
            certified = True
        elif d == 3:
            certified = fills(x, y)
        else:
            certified = False
        return d, certified

    def distance(self, x, y, cap=None):
        return self.distance_info(x, y, cap)[0]

    def geodesic(self, x, y, cap=None):
        """A BFS geodesic as a list of curves from x to y."""
        cap = self.cap if cap is None else cap
        i, j = self.index_of(x), self.index_of(y)
        dist, parent = self.bfs(i, cap)
        if j not in dist:
            raise Unreachable(cap)
        path = [j]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return [self.universe[k] for k in reversed(path)]

    def gromov_product(self, x, y, p, cap=None):
        """((d(x,p) + d(y,p) - d(x,y)) / 2, exactly, as a Fraction."""
        dxp = self.distance(x, p, cap)
        dyp = self.distance(y, p, cap)
        dxy = self.distance(x, y, cap)
        return Fraction(dxp + dyp - dxy, 2)

    def hausdorff_distance(self, A, B, cap=None):
        """Symmetrized max-min distance between two finite curve sets."""
        def one_sided(P, Q):
            worst = 0
            for a in P:
                best = None
                for b in Q:
                    d = self.distance(a, b, cap)
                    if best is None or d < best:
                        best = d
                    if best == 0:
                        break
                worst = max(worst, best)
            return worst
        return max(one_sided(A, B), one_sided(B, A))


# ---------------------------------------------------------------------------
# intersection-level sets
# ---------------------------------------------------------------------------

def multicurve_i(a, b):
    return intersection_number(a, b)


def in_L_a(gamma, alpha, beta, a, r):
    """
    Membership of gamma in the level set
    { max(a*i(gamma,alpha), i(gamma,beta) / (a*i(alpha,beta))) <= r },
    with exact rational arithmetic.
    """
    iab = multicurve_i(alpha, beta)
    if iab == 0:
        raise DegeneratePair("i(alpha, beta) = 0")
    a = Fraction(a)
    r = Fraction(r)
    term1 = a * multicurve_i(gamma, alpha)
    term2 = Fraction(multicurve_i(gamma, beta), 1) / (a * iab)
    return max(term1, term2) <= r


def scan_L(alpha, beta, r, a_grid, index, cap=None):
    """
    Exhaustive membership of the universe in the level sets across a grid of
    scale parameters.  Returns {a: {"members": [...], "diameter": d|None}};
    the diameter is the max pairwise universe distance (None when a distance
    is unreachable within the cap).
    """
    out = {}
    for a in a_grid:
        members = [g for g in index.universe if in_L_a(g, alpha, beta, a, r)]
        diam = 0
        for x, y in itertools.combinations(members, 2):
            try:
                d = index.distance(x, y, cap)
            except Unreachable:
                diam = None
                break
            diam = max(diam, d)
        out[Fraction(a)] = {"members": members, "diameter": diam}
    return out


def delta_estimate(index, triples, cap=None):
    """
    Thin-triangle estimate over sampled triples: the max over triangles and
    sides of the min distance from a side point to the union of the other
    two sides.  Triples whose geodesics are unreachable are skipped and
    counted; returns (delta, used, skipped).
    """
    best = 0
    used = skipped = 0
    for (x, y, z) in triples:
        try:
            sides = [index.geodesic(x, y, cap), index.geodesic(y, z, cap),
                     index.geodesic(x, z, cap)]
        except (Unreachable, NotInUniverse):
            skipped += 1
            continue
        used += 1
        for s in range(3):
            others = [c for t in range(3) if t != s for c in sides[t]]
            for p in sides[s]:
                m = min(index.distance(p, q, cap) for q in others)
                best = max(best, m)
    return best, used, skipped


def fills_surface(a, b):
    """Exact filling test: curve-graph distance >= 3."""
    return fills(a, b)
