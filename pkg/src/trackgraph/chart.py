r"""
Ideal triangulations of punctured surfaces and simple closed curves in
normal coordinates.

A chart is a fixed ideal triangulation, stored as a gluing table: every
triangle is an ordered triple of directed edge references, and every edge
appears in exactly two triangle slots.  A curve is a vector of nonnegative
integers, one per edge, subject to the parity and corner conditions in each
triangle; the vector is a canonical key for the isotopy class.

All arithmetic is exact.
"""

from fractions import Fraction
import itertools
import json

EULER_EDGE = lambda g, m: 6 * g - 6 + 3 * m
EULER_TRIANGLE = lambda g, m: 4 * g - 4 + 2 * m


class InvalidCurve(ValueError):
    """Raised by validate_coords; .reason names the first violated invariant."""

    def __init__(self, reason, detail=""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class MismatchedChart(ValueError):
    pass


class SurfaceSig:
    """Genus and puncture count, restricted to complexity 3g-3+m >= 2."""

    __slots__ = ("genus", "punctures")

    def __init__(self, genus, punctures):
        if genus < 0 or punctures < 1:
            raise ValueError("need genus >= 0 and at least one puncture")
        if 3 * genus - 3 + punctures < 2:
            raise ValueError("surface complexity 3g-3+m must be at least 2")
        self.genus = genus
        self.punctures = punctures

    @property
    def complexity(self):
        return 3 * self.genus - 3 + self.punctures

    def __eq__(self, other):
        return (isinstance(other, SurfaceSig)
                and (self.genus, self.punctures) == (other.genus, other.punctures))

    def __hash__(self):
        return hash((self.genus, self.punctures))

    def __repr__(self):
        return f"SurfaceSig(genus={self.genus}, punctures={self.punctures})"


class Chart:
    """
    An ideal triangulation given by a labelled gluing table.

    edges[i] = (tail puncture, head puncture) fixes an orientation of each
    edge.  triangles[t] = ((e0, s0), (e1, s1), (e2, s2)) lists the directed
    boundary; sign +1 means the boundary traversal agrees with the edge's
    own orientation.  Corner k of triangle t sits at the puncture where
    directed side k ends.
    """

    def __init__(self, name, sig, edge_names, edges, triangles, check=True):
        self.name = name
        self.sig = sig
        self.edge_names = list(edge_names)
        self.edges = [tuple(e) for e in edges]
        self.triangles = [tuple((int(e), int(s)) for (e, s) in tri) for tri in triangles]
        self.n_edges = len(self.edges)
        self.n_triangles = len(self.triangles)
        # edge -> the two (triangle, slot) places it occupies, in a fixed order
        self.edge_sides = {e: [] for e in range(self.n_edges)}
        for t, tri in enumerate(self.triangles):
            for slot, (e, _) in enumerate(tri):
                self.edge_sides[e].append((t, slot))
        if check:
            self._check()

    def _check(self):
        if self.n_edges != EULER_EDGE(self.sig.genus, self.sig.punctures):
            raise ValueError("edge count does not match 6g-6+3m")
        if self.n_triangles != EULER_TRIANGLE(self.sig.genus, self.sig.punctures):
            raise ValueError("triangle count does not match 4g-4+2m")
        for e, sides in self.edge_sides.items():
            if len(sides) != 2:
                raise ValueError(f"edge {e} appears in {len(sides)} slots, not 2")
        for t, tri in enumerate(self.triangles):
            for k in range(3):
                if self.side_head(t, k) != self.side_tail(t, (k + 1) % 3):
                    raise ValueError(f"triangle {t} gluing table is not closed at corner {k}")
        punctures = {p for e in self.edges for p in e}
        if punctures != set(range(self.sig.punctures)):
            raise ValueError("puncture labels must be 0..m-1 and all present")

    # -- directed-side helpers -------------------------------------------

    def side_tail(self, t, k):
        e, s = self.triangles[t][k]
        return self.edges[e][0] if s > 0 else self.edges[e][1]

    def side_head(self, t, k):
        e, s = self.triangles[t][k]
        return self.edges[e][1] if s > 0 else self.edges[e][0]

    def corner_puncture(self, t, k):
        """Puncture at corner k (between directed sides k and k+1)."""
        return self.side_head(t, k)

    def other_side(self, e, t):
        """The (triangle, slot) of edge e that is not in triangle t at the given slot."""
        a, b = self.edge_sides[e]
        if a[0] == t:
            return b
        return a

    def triangle_of_crossing(self, e, entering_from):
        """Cross edge e out of triangle `entering_from`: the triangle on the other side."""
        a, b = self.edge_sides[e]
        if a[0] == entering_from:
            return b[0]
        if b[0] == entering_from:
            return a[0]
        raise ValueError(f"edge {e} is not a side of triangle {entering_from}")

    def vertex_link(self, puncture):
        """Normal coordinates of the small curve around one puncture."""
        w = [0] * self.n_edges
        for e, (a, b) in enumerate(self.edges):
            w[e] += (a == puncture) + (b == puncture)
        return tuple(w)

    def edge_index(self, name):
        return self.edge_names.index(name)

    # -- serialization ---------------------------------------------------

    def to_json(self):
        return {
            "name": self.name,
            "genus": self.sig.genus,
            "punctures": self.sig.punctures,
            "edges": [list(e) for e in self.edges],
            "edge_names": self.edge_names,
            "triangles": [[[e, s] for (e, s) in tri] for tri in self.triangles],
        }

    @classmethod
    def from_json(cls, data):
        sig = SurfaceSig(data["genus"], data["punctures"])
        return cls(data["name"], sig, data["edge_names"], data["edges"], data["triangles"])

    def __repr__(self):
        return f"Chart({self.name!r}, {self.n_edges} edges, {self.n_triangles} triangles)"


def corner_counts(chart, t, w):
    """
    Corner arc counts of triangle t for the weight vector w, indexed by
    corner; None if parity or a corner count fails.
    """
    (e0, _), (e1, _), (e2, _) = chart.triangles[t]
    w0, w1, w2 = w[e0], w[e1], w[e2]
    if (w0 + w1 + w2) % 2:
        return None
    c0 = (w0 + w1 - w2) // 2   # corner 0, between sides 0 and 1
    c1 = (w1 + w2 - w0) // 2
    c2 = (w2 + w0 - w1) // 2
    if c0 < 0 or c1 < 0 or c2 < 0:
        return None
    return (c0, c1, c2)


def check_coords(chart, w):
    """Return None if w could be a normal multicurve, else the violated invariant."""
    if len(w) != chart.n_edges:
        return "IndexMismatch"
    if any(x < 0 for x in w):
        return "CornerNegative"
    if all(x == 0 for x in w):
        return "ZeroVector"
    for t in range(chart.n_triangles):
        (e0, _), (e1, _), (e2, _) = chart.triangles[t]
        if (w[e0] + w[e1] + w[e2]) % 2:
            return "ParityViolation"
        if corner_counts(chart, t, w) is None:
            return "CornerNegative"
    return None


def _slot_weight_positions(chart, w):
    """
    For each (triangle, slot), how the points on that side split between the
    two corners: returns dict (t, slot) -> (first, last) where `first` points
    (in the side's traversal direction) belong to the previous corner.
    """
    out = {}
    for t in range(chart.n_triangles):
        cc = corner_counts(chart, t, w)
        for slot in range(3):
            # points on side `slot`: the first cc[slot-1] belong to corner
            # slot-1 (at the side's tail), the rest to corner slot.
            out[(t, slot)] = cc[(slot - 1) % 3]
    return out


def trace(chart, w):
    """
    Resolve a valid weight vector into its normal arcs and walk them.

    Returns a list of cycles; each cycle is a list of steps
    (triangle, corner, edge_in, pos_in, edge_out, pos_out) where positions
    are indices along the edge's own orientation.  Total visits per edge
    equal the coordinates.  Deterministic: cycles start at the smallest
    unvisited (edge, position).
    """
    reason = check_coords(chart, w)
    if reason is not None and reason != "ZeroVector":
        raise InvalidCurve(reason)
    split = _slot_weight_positions(chart, w)

    def tri_pos(t, slot, global_pos):
        e, s = chart.triangles[t][slot]
        return global_pos if s > 0 else w[e] - 1 - global_pos

    def global_pos(t, slot, tp):
        e, s = chart.triangles[t][slot]
        return tp if s > 0 else w[e] - 1 - tp

    # arc through triangle t at side `slot`, triangle-position tp: which
    # corner does it belong to and where does it exit?
    def step(t, slot, tp):
        cut = split[(t, slot)]
        if tp < cut:
            corner = (slot - 1) % 3
            other = (slot - 1) % 3
            # corner arcs between sides `other` and `slot`: position k on
            # side slot pairs with position (w_other - 1 - k) on side other.
            e_other, _ = chart.triangles[t][other]
            tp_out = w[e_other] - 1 - tp
            return corner, other, tp_out
        corner = slot
        other = (slot + 1) % 3
        e, _ = chart.triangles[t][slot]
        k = w[e] - 1 - tp  # nesting depth at this corner
        return corner, other, k

    visited = set()
    cycles = []
    for e0 in range(chart.n_edges):
        for p0 in range(w[e0]):
            t0, slot0 = chart.edge_sides[e0][0]
            state = (t0, slot0, tri_pos(t0, slot0, p0))
            if (e0, p0) in visited:
                continue
            cycle = []
            t, slot, tp = state
            while True:
                e_in, _ = chart.triangles[t][slot]
                gp_in = global_pos(t, slot, tp)
                if (e_in, gp_in) in visited:
                    break
                visited.add((e_in, gp_in))
                corner, slot_out, tp_out = step(t, slot, tp)
                e_out, _ = chart.triangles[t][slot_out]
                gp_out = global_pos(t, slot_out, tp_out)
                cycle.append((t, corner, e_in, gp_in, e_out, gp_out))
                # cross edge e_out into the neighbouring triangle
                t2, slot2 = chart.other_side(e_out, t)
                t, slot, tp = t2, slot2, tri_pos(t2, slot2, gp_out)
            if cycle:
                cycles.append(cycle)
    return cycles


def cycle_coords(chart, cycle):
    w = [0] * chart.n_edges
    for (_, _, e_in, _, _, _) in cycle:
        w[e_in] += 1
    return tuple(w)


class NormalCurve:
    """An essential simple closed curve in canonical normal coordinates."""

    __slots__ = ("chart", "coords", "_hash")

    def __init__(self, chart, coords, check=True):
        self.chart = chart
        self.coords = tuple(int(x) for x in coords)
        self._hash = hash((chart.name, self.coords))
        if check:
            err = classify_curve(chart, self.coords)
            if err is not None:
                raise InvalidCurve(err, str(self.coords))

    def __eq__(self, other):
        return (isinstance(other, NormalCurve)
                and self.chart.name == other.chart.name
                and self.coords == other.coords)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.coords < other.coords

    def __repr__(self):
        return f"NormalCurve({self.chart.name}, {self.coords})"

    @property
    def weight(self):
        return sum(self.coords)

    def to_json(self):
        return {"chart": self.chart.name, "coords": list(self.coords)}


def classify_curve(chart, w):
    """None if w is a valid essential connected curve, else the first reason."""
    err = check_coords(chart, w)
    if err is not None:
        return err
    cycles = trace(chart, w)
    if len(cycles) != 1:
        return "Disconnected"
    if _is_peripheral_cycle(chart, cycles[0]):
        return "Peripheral"
    return None


def _is_peripheral_cycle(chart, cycle):
    """True iff every arc of the cycle is a corner arc around one same puncture."""
    punctures = {chart.corner_puncture(t, corner) for (t, corner, *_rest) in cycle}
    if len(punctures) != 1:
        return False
    # it must be the plain link: one arc per corner incidence of the puncture
    p = punctures.pop()
    incidences = sum(1 for t in range(chart.n_triangles)
                     for k in range(3) if chart.corner_puncture(t, k) == p)
    return len(cycle) == incidences


def validate_coords(chart, w):
    """The spec'd constructor: NormalCurve if valid, InvalidCurve otherwise."""
    return NormalCurve(chart, w)


class MultiCurve:
    """Weighted disjoint union of distinct essential curves."""

    __slots__ = ("chart", "components", "_hash")

    def __init__(self, chart, components, check=True):
        self.chart = chart
        comp = {}
        for c, k in components.items() if isinstance(components, dict) else components:
            if k <= 0:
                raise ValueError("component weights must be positive")
            comp[c] = comp.get(c, 0) + int(k)
        self.components = comp
        self._hash = hash((chart.name, tuple(sorted((c.coords, k) for c, k in comp.items()))))
        if check:
            comps = sorted(self.components)
            for i, a in enumerate(comps):
                for b in comps[i + 1:]:
                    if not is_disjoint(a, b):
                        raise InvalidCurve("ComponentsIntersect", f"{a} vs {b}")

    @classmethod
    def from_vector(cls, chart, w, check=True):
        """Trace a weight vector and split it into components (may raise)."""
        cycles = trace(chart, w)
        comp = {}
        for cyc in cycles:
            c = NormalCurve(chart, cycle_coords(chart, cyc))
            comp[c] = comp.get(c, 0) + 1
        return cls(chart, comp, check=check)

    @property
    def coords(self):
        w = [0] * self.chart.n_edges
        for c, k in self.components.items():
            for e, x in enumerate(c.coords):
                w[e] += k * x
        return tuple(w)

    def total_weight(self):
        return sum(k for k in self.components.values())

    def __eq__(self, other):
        return (isinstance(other, MultiCurve) and self.chart.name == other.chart.name
                and self.components == other.components)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k}*{c.coords}" for c, k in sorted(self.components.items()))
        return f"MultiCurve({self.chart.name}, {inner})"


def as_components(x):
    """Uniform view of a curve or multicurve as [(NormalCurve, weight)]."""
    if isinstance(x, NormalCurve):
        return [(x, 1)]
    if isinstance(x, MultiCurve):
        return sorted(x.components.items())
    raise TypeError(f"not a curve or multicurve: {x!r}")


def is_disjoint(a, b):
    """
    Exact test for i(a, b) = 0 between two connected curves: the canonical
    multicurve of the coordinate sum equals {a} u {b} iff they are disjoint
    (normal coordinates determine the multicurve).
    """
    if a.chart.name != b.chart.name:
        raise MismatchedChart(f"{a.chart.name} vs {b.chart.name}")
    chart = a.chart
    w = tuple(x + y for x, y in zip(a.coords, b.coords))
    cycles = trace(chart, w)
    found = sorted(cycle_coords(chart, cyc) for cyc in cycles)
    return found == sorted([a.coords, b.coords])


def intersection_number(a, b):
    """
    Geometric intersection number, bilinear over multicurve weights.
    The connected-connected case is delegated to the overlay engine
    (overlay of normal resolutions + innermost bigon removal).
    """
    from . import overlay
    ca, cb = as_components(a), as_components(b)
    if ca and cb and ca[0][0].chart.name != cb[0][0].chart.name:
        raise MismatchedChart("curves live on different charts")
    total = 0
    for x, kx in ca:
        for y, ky in cb:
            if x == y:
                continue
            if is_disjoint(x, y):
                continue
            total += kx * ky * overlay.i_reduced(x, y)
    return total


def enumerate_curves(chart, bound):
    """
    All valid NormalCurves with every coordinate <= bound, sorted.
    DFS over edge weights with per-triangle parity/corner pruning.
    """
    if bound < 1:
        return []
    n = chart.n_edges
    # order edges so that triangles complete as early as possible
    order = []
    seen = set()
    for t in range(chart.n_triangles):
        for e, _ in chart.triangles[t]:
            if e not in seen:
                seen.add(e)
                order.append(e)
    tri_edges = [tuple(e for e, _ in chart.triangles[t]) for t in range(chart.n_triangles)]
    complete_at = {}  # position in `order` after which triangle t is fully assigned
    pos = {e: i for i, e in enumerate(order)}
    for t, tes in enumerate(tri_edges):
        complete_at.setdefault(max(pos[e] for e in tes), []).append(t)

    out = []
    w = [0] * n

    def dfs(i):
        if i == n:
            if classify_curve(chart, tuple(w)) is None:
                out.append(NormalCurve(chart, tuple(w), check=False))
            return
        e = order[i]
        for x in range(bound + 1):
            w[e] = x
            ok = True
            for t in complete_at.get(i, ()):
                a, b, c = (w[e2] for e2 in tri_edges[t])
                if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
                    ok = False
                    break
            if ok:
                dfs(i + 1)
        w[e] = 0

    dfs(0)
    return sorted(set(out))


# ---------------------------------------------------------------------------
# built-in charts
# ---------------------------------------------------------------------------

def chart_s05():
    """
    Five-punctured sphere, 9 edges / 6 triangles. Doubled pentagon on
    punctures 0..4: sides s0..s4 shared, diagonals f1,f2 in the front
    copy and b1,b2 in the back copy.
    """
    sig = SurfaceSig(0, 5)
    names = ["s0", "s1", "s2", "s3", "s4", "f1", "f2", "b1", "b2"]
    S0, S1, S2, S3, S4, F1, F2, B1, B2 = range(9)
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (0, 3), (0, 2), (0, 3)]
    triangles = [
        [(S0, 1), (S1, 1), (F1, -1)],   # 0 -> 1 -> 2 -> 0
        [(F1, 1), (S2, 1), (F2, -1)],   # 0 -> 2 -> 3 -> 0
        [(F2, 1), (S3, 1), (S4, 1)],    # 0 -> 3 -> 4 -> 0
        [(B1, 1), (S1, -1), (S0, -1)],  # 0 -> 2 -> 1 -> 0
        [(B2, 1), (S2, -1), (B1, -1)],  # 0 -> 3 -> 2 -> 0
        [(S4, -1), (S3, -1), (B2, -1)], # 0 -> 4 -> 3 -> 0
    ]
    return Chart("s05", sig, names, edges, triangles)


def chart_s12():
    """
    Twice-punctured torus, 6 edges / 4 triangles.  Unit square with all
    corners at puncture 0 and the centre at puncture 1; sides a (horizontal)
    and b (vertical), spokes e1..e4 from the four corners to the centre.
    """
    sig = SurfaceSig(1, 2)
    names = ["a", "b", "e1", "e2", "e3", "e4"]
    A, B, E1, E2, E3, E4 = range(6)
    edges = [(0, 0), (0, 0), (0, 1), (0, 1), (0, 1), (0, 1)]
    triangles = [
        [(A, 1), (E2, 1), (E1, -1)],   # bottom
        [(B, 1), (E3, 1), (E2, -1)],   # right
        [(A, -1), (E4, 1), (E3, -1)],  # top
        [(B, -1), (E1, 1), (E4, -1)],  # left
    ]
    return Chart("s12", sig, names, edges, triangles)


_CHARTS = {"s05": chart_s05, "s12": chart_s12}
_cache = {}


def get_chart(name):
    if name not in _cache:
        if name not in _CHARTS:
            raise KeyError(f"unknown chart {name!r}; built-ins: {sorted(_CHARTS)}")
        _cache[name] = _CHARTS[name]()
    return _cache[name]


def pants_curves(chart):
    """The built-in pants decomposition, as NormalCurves."""
    if chart.name == "s05":
        g1 = [0] * 9
        for nm in ("s0", "s2", "f1", "b1"):
            g1[chart.edge_index(nm)] = 1
        g2 = [0] * 9
        for nm in ("s2", "s4", "f2", "b2"):
            g2[chart.edge_index(nm)] = 1
        return [NormalCurve(chart, g1), NormalCurve(chart, g2)]
    if chart.name == "s12":
        g1 = [0] * 6
        for nm in ("b", "e1", "e2"):
            g1[chart.edge_index(nm)] = 1
        g2 = [0] * 6
        for nm in ("b", "e3", "e4"):
            g2[chart.edge_index(nm)] = 1
        return [NormalCurve(chart, g1), NormalCurve(chart, g2)]
    raise KeyError(f"no built-in pants decomposition for {chart.name}")


def curve_from_json(data):
    chart = get_chart(data["chart"])
    return NormalCurve(chart, data["coords"])


def dual_spanning_tree(chart):
    """BFS spanning tree of the dual graph; returns set of tree edge ids."""
    tree = set()
    seen = {0}
    queue = [0]
    while queue:
        t = queue.pop(0)
        for e, _ in chart.triangles[t]:
            t2 = chart.triangle_of_crossing(e, t)
            if t2 not in seen:
                seen.add(t2)
                tree.add(e)
                queue.append(t2)
    return tree
