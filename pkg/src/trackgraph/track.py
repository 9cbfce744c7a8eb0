r"""
Combinatorial train tracks with geometric realizations.

A track is a collection of switches and branches.  Each switch carries two
sides of half-branches; the counterclockwise cyclic order around the switch
is side_a followed by side_b reversed.  Branch b owns half-branches 2b
(end 0) and 2b+1 (end 1).  A transverse measure assigns a nonnegative
weight per branch with equal sums on the two sides of every switch.

The realization maps each branch to the word of triangulation edges its
strand crosses, read from end 0 to end 1, together with a home triangle per
switch.  Pushforwards of integral measures resolve the measure into
strands, walk the resulting circuits, and cyclically reduce each circuit's
dual walk before reading off normal coordinates (the reduced walk crosses
every edge minimally, so the counts are normal).

Splits follow a fixed orientation convention, documented at `split`:
with the large branch read from end 0 to end 1 and looking along it, the
left split keeps the corner paths on the left corners.
"""

from fractions import Fraction

from .chart import (NormalCurve, MultiCurve, InvalidCurve, get_chart,
                    pants_curves)


class NonGeneric(ValueError):
    pass


class NotLargeBranch(ValueError):
    pass


class IndexMismatch(ValueError):
    pass


class RealizationFailure(RuntimeError):
    pass


class NotConnectedTrainpath(ValueError):
    pass


class NotAdapted(ValueError):
    pass


class NonIntegral(ValueError):
    pass


class ZeroOnLargeBranch(ValueError):
    pass


class TrainTrack:
    """
    switches: list of (side_a, side_b), each a tuple of half-branch ids.
    words:    tuple of edge-id tuples, one per branch, read end0 -> end1.
    homes:    triangle id per switch (where the switch sits).
    """

    def __init__(self, chart, switches, words, homes, check=True):
        self.chart = chart
        self.switches = [(tuple(a), tuple(b)) for (a, b) in switches]
        self.words = tuple(tuple(w) for w in words)
        self.homes = tuple(homes)
        self.n_branches = len(self.words)
        self.switch_of = {}
        for s, (a, b) in enumerate(self.switches):
            for h in a + b:
                self.switch_of[h] = s
        if check:
            self._check()

    def _check(self):
        seen = set()
        for s, (a, b) in enumerate(self.switches):
            for h in a + b:
                if h in seen:
                    raise ValueError(f"half-branch {h} used twice")
                seen.add(h)
            if not a or not b:
                raise ValueError(f"switch {s} has an empty side")
        if seen != set(range(2 * self.n_branches)):
            raise ValueError("half-branches must be exactly 0..2B-1")
        for b, w in enumerate(self.words):
            t = self.homes[self.switch_of[2 * b]]
            for e in w:
                t = self.chart.triangle_of_crossing(e, t)
            if t != self.homes[self.switch_of[2 * b + 1]]:
                raise ValueError(f"branch {b}: word does not connect its home triangles")

    # -- basic structure --------------------------------------------------

    def cyclic(self, s):
        """Half-branches in ccw order around switch s."""
        a, b = self.switches[s]
        return a + tuple(reversed(b))

    def side_of(self, h):
        s = self.switch_of[h]
        a, b = self.switches[s]
        return 0 if h in a else 1

    def is_generic(self):
        return all(len(a) + len(b) <= 3 for (a, b) in self.switches)

    def n_switches(self):
        return len(self.switches)

    def branch_endpoints(self, b):
        return (self.switch_of[2 * b], self.switch_of[2 * b + 1])

    def is_large(self, b):
        """Both half-branches alone on their side, at distinct switches."""
        for h in (2 * b, 2 * b + 1):
            s = self.switch_of[h]
            a, bb = self.switches[s]
            side = a if h in a else bb
            if len(side) != 1:
                return False
        return self.switch_of[2 * b] != self.switch_of[2 * b + 1]

    def large_branches(self):
        if not self.is_generic():
            raise NonGeneric("track has a switch of valence above three")
        return [b for b in range(self.n_branches) if self.is_large(b)]

    # -- measures ----------------------------------------------------------

    def check_switch_conditions(self, mu):
        if len(mu) != self.n_branches:
            raise IndexMismatch(f"measure has {len(mu)} entries, track has "
                                f"{self.n_branches} branches")
        for (a, b) in self.switches:
            if sum(mu[h // 2] for h in a) != sum(mu[h // 2] for h in b):
                return False
        return all(x >= 0 for x in mu)

    def switch_matrix(self):
        """Rows: switches; entry = (side_a incidences) - (side_b incidences)."""
        rows = []
        for (a, b) in self.switches:
            row = [0] * self.n_branches
            for h in a:
                row[h // 2] += 1
            for h in b:
                row[h // 2] -= 1
            rows.append(row)
        return rows

    # -- resolution of integral measures ------------------------------------

    def _slots(self, h, mu, ccw=True):
        """Strands of the half-branch h in transverse order: the ccw walk
        around the switch crosses end-0 bands as 0..mu-1 and end-1 bands
        reversed (the band is untwisted on the oriented surface)."""
        b = h // 2
        rng = list(range(mu[b]))
        if (h % 2 == 1) == ccw:
            rng.reverse()
        return [(b, i) for i in rng]

    def circuits(self, mu):
        """
        Resolve an integral measure into strands and walk the closed
        circuits of its canonical resolution.  Returns a list of circuits;
        each is a list of (branch, direction) with direction +1 for an
        end0 -> end1 traversal.  The resolution pairs the side_a strands in
        ccw transverse order against the side_b strands in cw order: this
        is the unique non-crossing matching across the switch.
        """
        if any(x < 0 or int(x) != x for x in mu):
            raise NonIntegral(str(mu))
        mu = [int(x) for x in mu]
        if not self.check_switch_conditions(mu):
            raise ValueError("not a transverse measure")
        # connection[(strand, end)] = (strand', end') across the switch
        conn = {}
        for s, (a, b) in enumerate(self.switches):
            list_a = [(h, slot) for h in a for slot in self._slots(h, mu, ccw=True)]
            list_b = [(h, slot) for h in b for slot in self._slots(h, mu, ccw=False)]
            for (ha, sa), (hb, sb) in zip(list_a, list_b):
                conn[(sa, ha % 2)] = (sb, hb % 2)
                conn[(sb, hb % 2)] = (sa, ha % 2)
        visited = set()
        circuits = []
        for b in range(self.n_branches):
            for i in range(mu[b]):
                if (b, i) in visited:
                    continue
                circ = []
                strand, entry = (b, i), 0   # traverse from end0
                while strand not in visited:
                    visited.add(strand)
                    circ.append((strand[0], 1 if entry == 0 else -1))
                    strand, entry = conn[(strand, 1 - entry)]
                circuits.append(circ)
        return circuits

    def circuit_word(self, circ):
        word = []
        for (b, d) in circ:
            word.extend(self.words[b] if d > 0 else reversed(self.words[b]))
        return word

    @staticmethod
    def reduce_cyclic(word):
        stack = []
        for e in word:
            if stack and stack[-1] == e:
                stack.pop()
            else:
                stack.append(e)
        while len(stack) >= 2 and stack[0] == stack[-1]:
            stack = stack[1:-1]
        return stack

    def pushforward(self, mu):
        """
        The multicurve carried by an integral measure, as a MultiCurve.
        Raises RealizationFailure if any circuit is null-homotopic or not an
        essential simple curve.
        """
        comp = {}
        for circ in self.circuits(mu):
            word = self.reduce_cyclic(self.circuit_word(circ))
            if not word:
                raise RealizationFailure("null-homotopic circuit")
            w = [0] * self.chart.n_edges
            for e in word:
                w[e] += 1
            try:
                c = NormalCurve(self.chart, w)
            except InvalidCurve as err:
                raise RealizationFailure(f"circuit is not a valid curve: {err}")
            comp[c] = comp.get(c, 0) + 1
        return MultiCurve(self.chart, comp)

    def pushforward_curve(self, mu):
        m = self.pushforward(mu)
        if len(m.components) == 1:
            (c, k), = m.components.items()
            if k == 1:
                return c
        raise RealizationFailure("measure does not define a single curve")

    # -- splitting -----------------------------------------------------------

    def _corners(self, e):
        """(L_u, R_u, L_v, R_v) half-branches at the large branch e."""
        h0, h1 = 2 * e, 2 * e + 1
        u, v = self.switch_of[h0], self.switch_of[h1]
        cu, cv = self.cyclic(u), self.cyclic(v)
        iu, iv = cu.index(h0), cv.index(h1)
        if len(cu) != 3 or len(cv) != 3:
            raise NonGeneric("splitting needs trivalent endpoints")
        L_u, R_u = cu[(iu + 1) % 3], cu[(iu + 2) % 3]
        R_v, L_v = cv[(iv + 1) % 3], cv[(iv + 2) % 3]
        return L_u, R_u, L_v, R_v

    def split_weights(self, e, mu):
        L_u, R_u, L_v, R_v = self._corners(e)
        return mu[L_u // 2], mu[R_u // 2], mu[L_v // 2], mu[R_v // 2]

    def compatible_split_direction(self, e, mu):
        """The unique split direction at e whose carrying matrix admits a
        nonnegative preimage of mu."""
        if not self.is_large(e):
            raise NotLargeBranch(str(e))
        if mu[e] == 0:
            raise ZeroOnLargeBranch(str(e))
        l_u, _r_u, l_v, _r_v = self.split_weights(e, mu)
        if l_u > l_v:
            return "L"
        if l_v > l_u:
            return "R"
        return "C"

    def split(self, e, direction):
        """
        Split at the large branch e.  Returns (track, matrix) where matrix
        has rows indexed by this track's branches and columns by the new
        track's branches, mapping measures of the split track into measures
        here.  Left and right splits preserve the branch and switch counts;
        the central split deletes e and fuses its two endpoint switches.
        """
        if not self.is_large(e):
            raise NotLargeBranch(str(e))
        h0, h1 = 2 * e, 2 * e + 1
        u, v = self.switch_of[h0], self.switch_of[h1]
        L_u, R_u, L_v, R_v = self._corners(e)
        W = self.words[e]
        words = [list(w) for w in self.words]
        homes = list(self.homes)
        switches = [list(map(list, sw)) for sw in self.switches]

        def extend(h, corridor):
            """Extend branch h//2's word at the end h by the corridor word
            (read from the end's new switch outward)."""
            b = h // 2
            if h % 2 == 0:
                words[b] = list(corridor) + words[b]
            else:
                words[b] = words[b] + list(reversed(corridor))

        rev = tuple(reversed(W))

        if direction in ("L", "R"):
            if direction == "L":
                # s1 at u: ccw (L_u, e0, L_v); s2 at v: ccw (R_v, e1, R_u)
                s1 = (u, [[L_u], [L_v, h0]])
                s2 = (v, [[R_v], [R_u, h1]])
                extend(L_v, W)        # L_v's moved end now sits at u's home
                extend(R_u, rev)      # R_u's moved end now sits at v's home
                covering = [L_v // 2, R_u // 2]
            else:
                # s1 at v: ccw (L_v, L_u, e0); s2 at u: ccw (R_u, R_v, e1)
                s1 = (v, [[L_v], [h0, L_u]])
                s2 = (u, [[R_u], [h1, R_v]])
                words[e] = list(rev)
                extend(L_u, rev)      # L_u's moved end now sits at v's home
                extend(R_v, W)        # R_v's moved end now sits at u's home
                covering = [L_u // 2, R_v // 2]
            si, sides = s1
            switches[si] = sides
            si, sides = s2
            switches[si] = sides
            track = TrainTrack(self.chart, [tuple(map(tuple, sw)) for sw in switches],
                               words, homes)
            matrix = [[1 if i == j else 0 for j in range(self.n_branches)]
                      for i in range(self.n_branches)]
            for b in covering:
                matrix[e][b] += 1
            return track, matrix

        if direction == "C":
            # delete e; fuse u and v: ccw (R_u, L_u, R_v, L_v)
            extend(L_v, W)
            extend(R_v, W)
            fused = [[R_u, L_u], [L_v, R_v]]
            keep = [b for b in range(self.n_branches) if b != e]
            remap = {b: i for i, b in enumerate(keep)}

            def mh(h):
                return 2 * remap[h // 2] + h % 2

            new_switches = []
            new_homes = []
            for s in range(len(switches)):
                if s == v:
                    continue
                if s == u:
                    new_switches.append((tuple(mh(h) for h in fused[0]),
                                         tuple(mh(h) for h in fused[1])))
                else:
                    a, b = switches[s]
                    a = [h for h in a if h // 2 != e]
                    b = [h for h in b if h // 2 != e]
                    new_switches.append((tuple(mh(h) for h in a),
                                         tuple(mh(h) for h in b)))
                new_homes.append(homes[s])
            new_words = [words[b] for b in keep]
            track = TrainTrack(self.chart, new_switches, new_words, new_homes)
            matrix = [[0] * (self.n_branches - 1) for _ in range(self.n_branches)]
            for b in keep:
                matrix[b][remap[b]] = 1
            matrix[e][remap[L_v // 2]] += 1
            matrix[e][remap[R_v // 2]] += 1
            return track, matrix

        raise ValueError(f"unknown split direction {direction!r}")

    def split_preimage(self, e, direction, mu):
        """Measure on the split track that pushes forward to mu; None if
        the direction is incompatible with mu."""
        l_u, r_u, l_v, r_v = self.split_weights(e, mu)
        if direction == "L":
            w = l_u - l_v
        elif direction == "R":
            w = l_v - l_u
        else:
            w = None
        if direction in ("L", "R"):
            if w < 0:
                return None
            out = list(mu)
            out[e] = w
            return out
        if l_u != l_v:
            return None
        return [mu[b] for b in range(self.n_branches) if b != e]

    # -- canonical form ------------------------------------------------------

    def canonical_encoding(self):
        """
        Lexicographically minimal relabelling of the combinatorial data over
        all starting half-branches, preserving the ccw structure.  Stands in
        for isotopy when comparing tracks.
        """
        best = None
        best_perm = None
        for h0 in range(2 * self.n_branches):
            enc, perm = self._encode_from(h0)
            if best is None or enc < best:
                best, best_perm = enc, perm
        self._canonical_perm = best_perm
        return best

    def _encode_from(self, h0):
        branch_lab = {}
        switch_lab = {}
        queue = [h0]
        half_queue = []
        enc = []
        while queue:
            h = queue.pop(0)
            s = self.switch_of[h]
            if s in switch_lab:
                continue
            switch_lab[s] = len(switch_lab)
            cyc = self.cyclic(s)
            i = cyc.index(h)
            ordered = cyc[i:] + cyc[:i]
            rec = []
            for hh in ordered:
                b = hh // 2
                if b not in branch_lab:
                    branch_lab[b] = len(branch_lab)
                    queue.append(2 * b + 1 - hh % 2)   # enqueue the far end
                rec.append((branch_lab[b], hh % 2,
                            self.side_of(hh) == self.side_of(ordered[0])))
            enc.append(tuple(rec))
        # disconnected tracks: append remaining components deterministically
        if len(switch_lab) < len(self.switches):
            enc.append(("DISCONNECTED", len(switch_lab)))
        return tuple(enc), branch_lab

    def __eq__(self, other):
        return (isinstance(other, TrainTrack)
                and self.chart.name == other.chart.name
                and self.canonical_encoding() == other.canonical_encoding())

    def __hash__(self):
        return hash((self.chart.name, self.canonical_encoding()))

    # -- serialization --------------------------------------------------------

    def to_json(self):
        return {
            "chart": self.chart.name,
            "switches": [{"sideA": list(a), "sideB": list(b)}
                         for (a, b) in self.switches],
            "branches": [[2 * b, 2 * b + 1] for b in range(self.n_branches)],
            "realization": {str(b): list(w) for b, w in enumerate(self.words)},
            "homes": list(self.homes),
        }

    @classmethod
    def from_json(cls, data):
        chart = get_chart(data["chart"])
        switches = [(tuple(s["sideA"]), tuple(s["sideB"])) for s in data["switches"]]
        words = [tuple(data["realization"][str(b)])
                 for b in range(len(data["branches"]))]
        return cls(chart, switches, words, data["homes"])

    def __repr__(self):
        return (f"TrainTrack({self.chart.name}, {self.n_branches} branches, "
                f"{self.n_switches()} switches)")


def total_mass(mu):
    return sum(mu)


# ---------------------------------------------------------------------------
# ribbon complement census (combinatorial: cusp count per region)
# ---------------------------------------------------------------------------

def complement_cusps(track):
    """
    Cusp counts of the complementary regions, computed from the ribbon
    structure alone.  For a complete generic track this is a multiset of
    once-punctured-monogon and trigon counts (five 1s and one 3, or two 1s
    and two 3s, on the built-in surfaces).  A dart is a branch traversal
    (h_from, h_to) with the region on one fixed side; at the far switch the
    boundary turns onto the cw-neighbouring half-branch, and a cusp is
    recorded when that neighbour sits on the same switch side.
    """
    def next_dart(dart):
        h_from, h_to = dart
        s = track.switch_of[h_to]
        cyc = track.cyclic(s)
        i = cyc.index(h_to)
        h2 = cyc[(i - 1) % len(cyc)]           # cw neighbour at arrival
        cusp = track.side_of(h2) == track.side_of(h_to)
        b2 = h2 // 2
        other = 2 * b2 + 1 - (h2 % 2)
        return (h2, other), cusp

    seen = set()
    out = []
    for b in range(track.n_branches):
        for dart in ((2 * b, 2 * b + 1), (2 * b + 1, 2 * b)):
            if dart in seen:
                continue
            cusps = 0
            d = dart
            while d not in seen:
                seen.add(d)
                d, c = next_dart(d)
                cusps += int(c)
            out.append(cusps)
    return sorted(out)


# ---------------------------------------------------------------------------
# built-in adapted tracks
# ---------------------------------------------------------------------------

class AdaptedTrack:
    """A complete track adapted to the built-in pants decomposition: every
    pants curve is carried with counting measure a vertex cycle, supported
    on a standard twist connector."""

    def __init__(self, track, pants, connectors):
        self.track = track
        self.pants = pants
        self.connectors = connectors   # list of dicts: large, marker, measure

    def pants_measure(self, i):
        return self.connectors[i]["measure"]


def _e(chart, name):
    return chart.edge_index(name)


def adapted_track(surface):
    """Built-in pants-adapted complete track for 's05' or 's12'."""
    chart = get_chart(surface)
    if surface == "s05":
        # branches: 0 c1, 1 d1, 2 tA, 3 lA, 4 t1, 5 t2, 6 t3, 7 g,
        #           8 c2, 9 d2, 10 tC, 11 lC
        # switches: 0 v1a, 1 v1b, 2 xA, 3 y1, 4 y2, 5 v2a, 6 v2b, 7 xC
        C1, D1, TA, LA, T1, T2, T3, G, C2, D2, TC, LC = range(12)
        E = lambda n: _e(chart, n)
        h = lambda b, end: 2 * b + end
        switches = [
            ((h(D1, 0),), (h(C1, 0), h(TA, 0))),    # v1a  ccw (d1, tA, c1)
            ((h(D1, 1),), (h(C1, 1), h(T1, 0))),    # v1b  ccw (d1, t1, c1)
            ((h(TA, 1),), (h(LA, 1), h(LA, 0))),    # xA   ccw (tA, lA.0, lA.1)
            ((h(T1, 1),), (h(T2, 0), h(G, 0))),     # y1   ccw (t1, g, t2)
            ((h(T2, 1),), (h(T3, 0), h(G, 1))),     # y2   ccw (t2, g, t3)
            ((h(D2, 0),), (h(T3, 1), h(C2, 0))),    # v2a  ccw (d2, c2, t3)
            ((h(D2, 1),), (h(TC, 0), h(C2, 1))),    # v2b  ccw (d2, c2, tC)
            ((h(TC, 1),), (h(LC, 1), h(LC, 0))),    # xC   ccw (tC, lC.0, lC.1)
        ]
        words = [
            (E("b1"), E("s2")),                                     # c1
            (E("s0"), E("f1")),                                     # d1
            (E("s1"),),                                             # tA
            (E("s1"), E("s0")),                                     # lA
            (), (), (),                                             # t1 t2 t3
            (E("f1"), E("s0"), E("b1"), E("b2"), E("s4"), E("f2")), # g
            (E("s2"), E("b2"), E("s4"), E("f2")),                   # c2
            (),                                                     # d2
            (E("f2"), E("s3")),                                     # tC
            (E("s4"), E("s3")),                                     # lC
        ]
        F1, F2, F3, B1, B2, B3 = 0, 1, 2, 3, 4, 5
        homes = [B1, F2, F1, F2, F2, F2, F2, B3]
        track = TrainTrack(chart, switches, words, homes)
        g1, g2 = pants_curves(chart)
        nu1 = [0] * 12
        nu1[C1] = nu1[D1] = 1
        nu2 = [0] * 12
        nu2[C2] = nu2[D2] = 1
        connectors = [
            {"large": D1, "marker": C1, "measure": tuple(nu1)},
            {"large": D2, "marker": C2, "measure": tuple(nu2)},
        ]
        return AdaptedTrack(track, [g1, g2], connectors)

    if surface == "s12":
        # branches: 0 c1, 1 d1, 2 t1, 3 t2, 4 t3, 5 gM, 6 c2, 7 d2,
        #           8 t4, 9 t5, 10 t6, 11 gP
        # switches: 0 w1, 1 w2, 2 u1, 3 u2, 4 y1, 5 y2, 6 y3, 7 y4
        C1, D1, T1, T2, T3, GM, C2, D2, T4, T5, T6, GP = range(12)
        E = lambda n: _e(chart, n)
        h = lambda b, end: 2 * b + end
        switches = [
            ((h(D1, 1),), (h(T1, 0), h(C1, 0))),    # w1  ccw (d1, c1, t1)
            ((h(D1, 0),), (h(T6, 0), h(C1, 1))),    # w2  ccw (d1, c1, t6)
            ((h(D2, 1),), (h(T3, 0), h(C2, 0))),    # u1  ccw (d2, c2, t3)
            ((h(D2, 0),), (h(T4, 0), h(C2, 1))),    # u2  ccw (d2, c2, t4)
            ((h(T1, 1),), (h(GM, 0), h(T2, 0))),    # y1  ccw (t1, t2, gM)
            ((h(T2, 1),), (h(T3, 1), h(GM, 1))),    # y2  ccw (t2, gM, t3)
            ((h(T5, 0),), (h(GP, 0), h(T4, 1))),    # y3  ccw (t5, t4, gP)
            ((h(T6, 1),), (h(T5, 1), h(GP, 1))),    # y4  ccw (t6, gP, t5)
        ]
        words = [
            (),                                                     # c1
            (E("e2"), E("b"), E("e1")),                             # d1
            (),                                                     # t1
            (E("e2"),),                                             # t2
            (E("e3"),),                                             # t3
            (E("e1"), E("e4"), E("e3")),                            # gM
            (),                                                     # c2
            (E("e4"), E("b"), E("e3")),                             # d2
            (),                                                     # t4
            (E("a"),),                                              # t5
            (),                                                     # t6
            (E("e4"), E("b"), E("e3"), E("a"), E("e2"), E("b"), E("e1")),  # gP
        ]
        TB, TR, TT, TL = 0, 1, 2, 3
        homes = [TB, TB, TT, TT, TB, TR, TT, TB]
        track = TrainTrack(chart, switches, words, homes)
        g1, g2 = pants_curves(chart)
        nu1 = [0] * 12
        nu1[C1] = nu1[D1] = 1
        nu2 = [0] * 12
        nu2[C2] = nu2[D2] = 1
        connectors = [
            {"large": D1, "marker": C1, "measure": tuple(nu1)},
            {"large": D2, "marker": C2, "measure": tuple(nu2)},
        ]
        return AdaptedTrack(track, [g1, g2], connectors)

    raise KeyError(f"no built-in adapted track for {surface!r}")


def decompose_at_adapted(at, mu):
    """
    Write an integral carried measure uniquely as mu0 + sum n_i nu_i with
    mu0 zero on every marker branch.  Returns (mu0, n, large_weights) where
    large_weights[i] = mu0(e_i) equals the intersection number with the
    i-th pants curve.
    """
    track = at.track
    if len(mu) != track.n_branches:
        raise IndexMismatch(str(mu))
    if any(int(x) != x for x in mu):
        raise NonIntegral(str(mu))
    if not track.check_switch_conditions(mu):
        raise NotAdapted("not a transverse measure on the adapted track")
    mu0 = [int(x) for x in mu]
    n = []
    for conn in at.connectors:
        ni = mu0[conn["marker"]]
        n.append(ni)
        for b, w in enumerate(conn["measure"]):
            mu0[b] -= ni * w
    if any(x < 0 for x in mu0):
        raise NotAdapted("decomposition left a negative weight")
    large = [mu0[conn["large"]] for conn in at.connectors]
    return tuple(mu0), tuple(n), tuple(large)
