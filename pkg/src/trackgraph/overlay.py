r"""
Exact overlay of two normal curves and reduction to minimal position.

Each curve is a cyclic itinerary of edge crossings with exact rational
positions along the edges; between consecutive crossings the arc is drawn
as a straight chord between points in convex position (a rational arc of
the unit circle parametrized by the triangle's boundary coordinate), so two
chords cross iff their endpoints interleave and every pair is drawn with
the minimal number of crossings.

An innermost bigon is a pair of crossings adjacent along both curves whose
boundary loop is null-homotopic in the punctured surface.  The loop test is
cyclic backtrack reduction of the dual-graph walk: the punctured surface
deformation retracts onto the dual spine, so a closed transverse loop is
null-homotopic iff its edge-crossing word reduces to nothing.  Punctured
bigons fail the test and are never removed.  Removing a bigon reroutes one
curve parallel to the other across the disc; when no bigon remains the
position is minimal (bigon criterion) and the crossing count is the
geometric intersection number.
"""

from fractions import Fraction
import functools


# ---------------------------------------------------------------------------
# rational geometry on the unit circle
# ---------------------------------------------------------------------------

def circle_point(u):
    """Convex-position point for a boundary coordinate u in [0, 3]."""
    t = Fraction(u)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def seg_intersect_params(p0, p1, q0, q1):
    """(s, t) with p0+s(p1-p0) = q0+t(q1-q0) for properly crossing open
    segments, else None."""
    r = (p1[0] - p0[0], p1[1] - p0[1])
    s = (q1[0] - q0[0], q1[1] - q0[1])
    den = r[0] * s[1] - r[1] * s[0]
    if den == 0:
        return None
    qp = (q0[0] - p0[0], q0[1] - p0[1])
    t1 = (qp[0] * s[1] - qp[1] * s[0]) / den
    t2 = (qp[0] * r[1] - qp[1] * r[0]) / den
    if 0 < t1 < 1 and 0 < t2 < 1:
        return (t1, t2)
    return None


def _ccw_order(dirs):
    """Indices of nonzero rational directions sorted counterclockwise."""
    def cmp(i, j):
        xi, yi = dirs[i]
        xj, yj = dirs[j]
        hi = 0 if (yi > 0 or (yi == 0 and xi > 0)) else 1
        hj = 0 if (yj > 0 or (yj == 0 and xj > 0)) else 1
        if hi != hj:
            return -1 if hi < hj else 1
        c = xi * yj - yi * xj
        return -1 if c > 0 else (1 if c < 0 else 0)
    return sorted(range(len(dirs)), key=functools.cmp_to_key(cmp))


# ---------------------------------------------------------------------------
# state
# ---------------------------------------------------------------------------

class Itin:
    """Cyclic itinerary: per crossing, the edge, the exact position along it
    and the triangle of the chord that follows."""

    __slots__ = ("edges", "pos", "tri")

    def __init__(self, edges, pos, tri):
        self.edges = list(edges)
        self.pos = list(pos)
        self.tri = list(tri)

    def __len__(self):
        return len(self.edges)


def _itinerary(chart, coords, offset):
    from .chart import trace
    cycles = trace(chart, coords)
    if len(cycles) != 1:
        raise ValueError("overlay needs connected curves")
    edges, pos, tri = [], [], []
    for (t, _corner, e_in, gp_in, _e_out, _gp_out) in cycles[0]:
        p = Fraction(gp_in + 1, coords[e_in] + 1) + offset
        edges.append(e_in)
        pos.append(p)
        tri.append(t)
    return Itin(edges, pos, tri)


class State:
    def __init__(self, a, b):
        self.chart = a.chart
        wa, wb = max(a.coords), max(b.coords)
        self.A = _itinerary(self.chart, a.coords, Fraction(0))
        self.B = _itinerary(self.chart, b.coords, Fraction(1, 4 * (wa + 1) * (wb + 1)))
        self.geom = None

    def side_u(self, t, edge, position):
        for slot in range(3):
            e, s = self.chart.triangles[t][slot]
            if e == edge:
                return slot + (position if s > 0 else 1 - position)
        raise ValueError(f"edge {edge} not on triangle {t}")

    def rebuild(self):
        chords = {}
        for name, it in (("A", self.A), ("B", self.B)):
            lst = []
            n = len(it)
            for k in range(n):
                k2 = (k + 1) % n
                t = it.tri[k]
                u0 = self.side_u(t, it.edges[k], it.pos[k])
                u1 = self.side_u(t, it.edges[k2], it.pos[k2])
                lst.append((t, u0, u1, circle_point(u0), circle_point(u1)))
            chords[name] = lst
        crossings = []
        btri = {}
        for j, cb in enumerate(chords["B"]):
            btri.setdefault(cb[0], []).append(j)
        for i, ca in enumerate(chords["A"]):
            for j in btri.get(ca[0], ()):
                cb = chords["B"][j]
                st = seg_intersect_params(ca[3], ca[4], cb[3], cb[4])
                if st is not None:
                    crossings.append((i, j, st[0], st[1]))
        orderA = sorted(range(len(crossings)),
                        key=lambda x: (crossings[x][0], crossings[x][2]))
        orderB = sorted(range(len(crossings)),
                        key=lambda x: (crossings[x][1], crossings[x][3]))
        self.geom = {
            "chords": chords,
            "crossings": crossings,
            "orderA": orderA,
            "orderB": orderB,
            "posB": {x: i for i, x in enumerate(orderB)},
        }
        return self.geom

    # -- bigon detection --------------------------------------------------

    def _points_between(self, it, c_from, c_to):
        """Itinerary indices strictly inside the arc from chord c_from
        forward to chord c_to: points c_from+1 .. c_to (inclusive)."""
        n = len(it)
        out = []
        k = (c_from + 1) % n
        while True:
            out.append(k)
            if k == c_to % n:
                break
            k = (k + 1) % n
        return out

    @staticmethod
    def _null_loop(word):
        stack = []
        for e in word:
            if stack and stack[-1] == e:
                stack.pop()
            else:
                stack.append(e)
        while len(stack) >= 2 and stack[0] == stack[-1]:
            stack = stack[1:-1]
        return not stack

    def _word_A(self, x, y):
        cr = self.geom["crossings"]
        if cr[x][0] == cr[y][0] and cr[x][2] < cr[y][2]:
            return []
        return [self.A.edges[k] for k in self._points_between(self.A, cr[x][0], cr[y][0])]

    def _word_B_forward(self, x, y):
        cr = self.geom["crossings"]
        if cr[x][1] == cr[y][1] and cr[x][3] < cr[y][3]:
            return []
        return [self.B.edges[k] for k in self._points_between(self.B, cr[x][1], cr[y][1])]

    def find_bigon(self):
        g = self.geom
        cr = g["crossings"]
        n = len(cr)
        if n < 2:
            return None
        orderA, posB = g["orderA"], g["posB"]
        for i, x in enumerate(orderA):
            y = orderA[(i + 1) % n]
            if x == y:
                continue
            db = (posB[y] - posB[x]) % n
            if db == 1:
                loop = self._word_A(x, y) + self._word_B_forward(x, y)[::-1]
                if self._null_loop(loop):
                    return (x, y, True)
            elif db == n - 1:
                loop = self._word_A(x, y) + self._word_B_forward(y, x)
                if self._null_loop(loop):
                    return (x, y, False)
        return None

    # -- bigon removal -----------------------------------------------------

    def _offset_position(self, edge, p, upward):
        pts = sorted(q for it in (self.A, self.B)
                     for e, q in zip(it.edges, it.pos) if e == edge)
        if upward:
            bigger = [q for q in pts if q > p]
            hi = min(bigger) if bigger else Fraction(1)
            return p + (hi - p) / 4
        smaller = [q for q in pts if q < p]
        lo = max(smaller) if smaller else Fraction(0)
        return p - (p - lo) / 4

    def _upward_is_left(self, t, edge, position, direction):
        """Does increasing the edge position move the point to the left of
        the oriented chord direction, in triangle t's model?"""
        for slot in range(3):
            e, s = self.chart.triangles[t][slot]
            if e == edge:
                u = slot + (position if s > 0 else 1 - position)
                h = Fraction(1, 10 ** 9) * (1 if s > 0 else -1)
                q0 = circle_point(u)
                q1 = circle_point(u + h)
                v = (q1[0] - q0[0], q1[1] - q0[1])
                c = direction[0] * v[1] - direction[1] * v[0]
                return c > 0
        raise ValueError

    def remove_bigon(self, x, y, forward):
        g = self.geom
        cr = g["crossings"]
        A, B = self.A, self.B
        nA, nB = len(A), len(B)
        ca, cya = cr[x][0], cr[y][0]
        bx, by = cr[x][1], cr[y][1]
        chA = g["chords"]["A"][ca]
        chB = g["chords"]["B"][bx]
        dA = (chA[4][0] - chA[3][0], chA[4][1] - chA[3][1])
        dB = (chB[4][0] - chB[3][0], chB[4][1] - chB[3][1])
        if not forward:
            dB = (-dB[0], -dB[1])
        disc_left = (dB[0] * dA[1] - dB[1] * dA[0]) > 0
        want_left = not disc_left

        # B points along the arc from x to y in traversal order
        pts = []
        if forward:
            if not (bx == by and cr[x][3] < cr[y][3]):
                k = (bx + 1) % nB
                while True:
                    pts.append((k, B.tri[k], +1))
                    if k == by % nB:
                        break
                    k = (k + 1) % nB
        else:
            if not (bx == by and cr[y][3] < cr[x][3]):
                k = bx
                while True:
                    pts.append((k, B.tri[(k - 1) % nB], -1))
                    if k == (by + 1) % nB:
                        break
                    k = (k - 1) % nB

        new_pts = []
        for (k, t_after, sgn) in pts:
            k2 = (k + sgn) % nB
            u0 = self.side_u(t_after, B.edges[k], B.pos[k])
            u1 = self.side_u(t_after, B.edges[k2], B.pos[k2])
            q0, q1 = circle_point(u0), circle_point(u1)
            d = (q1[0] - q0[0], q1[1] - q0[1])
            up_left = self._upward_is_left(t_after, B.edges[k], B.pos[k], d)
            upward = (up_left == want_left)
            new_pts.append((B.edges[k], self._offset_position(B.edges[k], B.pos[k], upward),
                            t_after))

        keep = self._points_between(A, cya, ca)     # cya+1 .. ca
        edges = [A.edges[k] for k in keep]
        pos = [A.pos[k] for k in keep]
        tri = [A.tri[k] for k in keep]
        t_x = chA[0]
        t_y = g["chords"]["A"][cya][0]
        tri[-1] = t_x
        for m, (edge, p, t_after) in enumerate(new_pts):
            edges.append(edge)
            pos.append(p)
            tri.append(t_after if m < len(new_pts) - 1 else t_y)
        if not new_pts:
            tri[-1] = t_x  # direct junction; t_x == t_y here
        self.A = Itin(edges, pos, tri)

    def reduce(self, max_rounds=100000):
        self.rebuild()
        prev = len(self.geom["crossings"])
        for _ in range(max_rounds):
            found = self.find_bigon()
            if found is None:
                return prev
            self.remove_bigon(*found)
            self.rebuild()
            now = len(self.geom["crossings"])
            if now > prev - 2:
                raise RuntimeError("bigon removal failed to reduce crossings")
            prev = now
        raise RuntimeError("bigon reduction did not terminate")


_i_cache = {}
_fill_cache = {}


def i_reduced(a, b):
    """Geometric intersection number of connected curves via overlay and
    innermost bigon removal."""
    key = (a.chart.name,) + tuple(sorted((a.coords, b.coords)))
    if key not in _i_cache:
        st = State(a, b)
        _i_cache[key] = st.reduce()
    return _i_cache[key]


# ---------------------------------------------------------------------------
# complement census: regions of S - (a u b) in minimal position
# ---------------------------------------------------------------------------

class _DSU:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def complement_census(a, b):
    """
    Put a, b in minimal position and compute the complementary regions of
    their union.  Returns (i, regions); each region is a dict with 'chi'
    (Euler characteristic of the abstract closure) and 'punctures'.
    """
    chart = a.chart
    st = State(a, b)
    icount = st.reduce()
    g = st.geom
    curves = {"A": st.A, "B": st.B}

    # vertices: corners, curve points (one instance per incident triangle),
    # crossings
    vcoord = {}
    tri_boundary = {t: [] for t in range(chart.n_triangles)}
    for t in range(chart.n_triangles):
        for k in range(3):
            key = ("c", t, k)
            vcoord[(t, key)] = circle_point(Fraction(k))
            tri_boundary[t].append((Fraction(k), key))
    for name, it in curves.items():
        for k in range(len(it)):
            e = it.edges[k]
            for (tt, slot) in chart.edge_sides[e]:
                _, s = chart.triangles[tt][slot]
                u = slot + (it.pos[k] if s > 0 else 1 - it.pos[k])
                key = ("p", name, k)
                vcoord[(tt, key)] = circle_point(u)
                tri_boundary[tt].append((u, key))
    cross_on = {("A", i): [] for i in range(len(st.A))}
    cross_on.update({("B", j): [] for j in range(len(st.B))})
    for cid, (i, j, s, t) in enumerate(g["crossings"]):
        tt = g["chords"]["A"][i][0]
        p0, p1 = g["chords"]["A"][i][3], g["chords"]["A"][i][4]
        vcoord[(tt, ("x", cid))] = (p0[0] + s * (p1[0] - p0[0]),
                                    p0[1] + s * (p1[1] - p0[1]))
        cross_on[("A", i)].append((s, cid))
        cross_on[("B", j)].append((t, cid))

    # segments per triangle
    segments = []  # (t, vkey0, vkey1, kind, payload)
    for t in range(chart.n_triangles):
        pts = sorted(tri_boundary[t], key=lambda x: x[0])
        n = len(pts)
        for i in range(n):
            u0, k0 = pts[i]
            u1, k1 = pts[(i + 1) % n]
            segments.append((t, k0, k1, "bnd", (u0, u1 if i + 1 < n else Fraction(3))))
    for name, it in curves.items():
        n = len(it)
        for ci in range(n):
            t = it.tri[ci]
            ends = [("p", name, ci)]
            ends += [("x", cid) for (_s, cid) in sorted(cross_on[(name, ci)])]
            ends.append(("p", name, (ci + 1) % n))
            for i in range(len(ends) - 1):
                segments.append((t, ends[i], ends[i + 1], "arc", (name, ci, i)))

    # half-edge face extraction per triangle
    faces = []        # (triangle, [halfedge tuples])
    face_left = {}    # (t, seg index, orientation) -> face id; orientation
                      # +1 means traversal vkey0 -> vkey1
    per_tri = {}
    for si, seg in enumerate(segments):
        per_tri.setdefault(seg[0], []).append(si)
    for t, sids in per_tri.items():
        hls = []
        for si in sids:
            hls.append((si, +1))
            hls.append((si, -1))
        out = {}
        for h, (si, o) in enumerate(hls):
            v0 = segments[si][1] if o > 0 else segments[si][2]
            out.setdefault(v0, []).append(h)
        nxt = {}
        for v, hs in out.items():
            dirs = []
            for h in hs:
                si, o = hls[h]
                a0 = segments[si][1] if o > 0 else segments[si][2]
                a1 = segments[si][2] if o > 0 else segments[si][1]
                c0, c1 = vcoord[(t, a0)], vcoord[(t, a1)]
                dirs.append((c1[0] - c0[0], c1[1] - c0[1]))
            order = _ccw_order(dirs)
            ordered = [hs[i] for i in order]
            rank = {h: r for r, h in enumerate(ordered)}
            for h in hs:
                si, o = hls[h]
                twin = h ^ 1
                nxt[twin] = ordered[(rank[h] - 1) % len(ordered)]
        seen = set()
        for h0 in range(len(hls)):
            if h0 in seen:
                continue
            cyc = []
            h = h0
            while h not in seen:
                seen.add(h)
                cyc.append(h)
                h = nxt[h]
            fid = len(faces)
            faces.append((t, [hls[h2] for h2 in cyc]))
            for h2 in cyc:
                si, o = hls[h2]
                face_left[(si, o)] = fid

    # outer faces: left of a boundary arc traversed with decreasing u
    outer = set()
    for si, seg in enumerate(segments):
        if seg[3] == "bnd":
            outer.add(face_left[(si, -1)])

    # interface keys and gluing
    fdsu = _DSU()
    vdsu = _DSU()
    edge_points = {e: [] for e in range(chart.n_edges)}
    for name, it in curves.items():
        for k in range(len(it)):
            edge_points[it.edges[k]].append((it.pos[k], ("p", name, k)))
    for e in edge_points:
        edge_points[e].sort(key=lambda x: x[0])

    by_key = {}
    for si, seg in enumerate(segments):
        if seg[3] != "bnd":
            continue
        t, k0, k1 = seg[0], seg[1], seg[2]
        u0, u1 = seg[4]
        mid = (u0 + u1) / 2
        slot = int(mid)   # arcs never straddle a corner
        e, s = chart.triangles[t][slot]
        w = len(edge_points[e])
        # rank of the arc along the side, in u order: points strictly below
        # the arc's midpoint (no point lies inside an arc)
        rank = 0
        for (p, _k) in edge_points[e]:
            uu = slot + (p if s > 0 else 1 - p)
            if uu < mid:
                rank += 1
        interval = rank if s > 0 else w - rank
        by_key.setdefault((e, interval), []).append((si, t, s))

    interfaces = []
    for key, lst in by_key.items():
        if len(lst) != 2:
            raise RuntimeError(f"unmatched boundary arc {key}: {lst}")
        (si1, t1, s1), (si2, t2, s2) = lst
        f1 = face_left[(si1, +1)]
        f2 = face_left[(si2, +1)]
        fdsu.union(f1, f2)
        interfaces.append((key, f1, f2))
        # identify endpoint instances: match by global position along e
        def endpoints(si, t, s):
            seg = segments[si]
            u0, u1 = seg[4]
            lo = (seg[1], u0)
            hi = (seg[2], u1)
            # global order: if s > 0 increasing u is increasing position
            return (lo, hi) if s > 0 else (hi, lo)
        lo1, hi1 = endpoints(si1, t1, s1)
        lo2, hi2 = endpoints(si2, t2, s2)
        vdsu.union((f1, lo1[0]), (f2, lo2[0]))
        vdsu.union((f1, hi1[0]), (f2, hi2[0]))

    # region data
    interior = [f for f in range(len(faces)) if f not in outer]
    region_of = {f: fdsu.find(f) for f in interior}
    regions = {}
    for f in interior:
        regions.setdefault(region_of[f], {"faces": [], "chi": 0, "punctures": []})
        regions[region_of[f]]["faces"].append(f)

    # V: vertex-instance classes; E: interfaces once + arc incidences
    vclasses = {}
    for f in interior:
        t, cyc = faces[f]
        for (si, o) in cyc:
            v = segments[si][1] if o > 0 else segments[si][2]
            vclasses.setdefault(vdsu.find((f, v)), region_of[f])
    vcount = {}
    for cls, r in vclasses.items():
        vcount[r] = vcount.get(r, 0) + 1
    ecount = {}
    for (key, f1, f2) in interfaces:
        r = region_of[f1]
        ecount[r] = ecount.get(r, 0) + 1
    for f in interior:
        t, cyc = faces[f]
        r = region_of[f]
        for (si, o) in cyc:
            if segments[si][3] == "arc":
                ecount[r] = ecount.get(r, 0) + 1

    # punctures: each corner class belongs to one region
    corner_class_seen = {}
    for f in interior:
        t, cyc = faces[f]
        for (si, o) in cyc:
            v = segments[si][1] if o > 0 else segments[si][2]
            if v[0] == "c":
                cls = vdsu.find((f, v))
                if cls not in corner_class_seen:
                    corner_class_seen[cls] = (region_of[f],
                                              chart.corner_puncture(t, (v[2] - 1) % 3))
    out = []
    for r, data in regions.items():
        chi = vcount.get(r, 0) - ecount.get(r, 0) + len(data["faces"])
        punct = [p for cls, (rr, p) in corner_class_seen.items() if rr == r]
        out.append({"chi": chi, "punctures": punct})
    return icount, out


def fills(a, b):
    """True iff a and b jointly fill the surface: every complementary region
    of a minimal-position overlay is a disc with at most one puncture.
    Equivalent to curve-graph distance >= 3."""
    if a == b:
        return False
    key = (a.chart.name,) + tuple(sorted((a.coords, b.coords)))
    if key not in _fill_cache:
        from .chart import is_disjoint
        if is_disjoint(a, b):
            _fill_cache[key] = False
        else:
            _icount, regions = complement_census(a, b)
            _fill_cache[key] = all(r["chi"] == 1 and len(r["punctures"]) <= 1
                                   for r in regions)
    return _fill_cache[key]
