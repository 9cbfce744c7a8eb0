r"""
Splitting sequences guided by carried measures, and the experiments that run
over them: single-split displacement of the representative curve, fellow
traveling along the sequence's curve path, the uniform projection constant
of sequences issuing from pants-adapted tracks, and the projectivized
coordinate diagnostic.

A guide is an integral transverse measure (the counting measure of a
carried multicurve); genuinely irrational guides are out of reach, so long
pseudo-random carried measures stand in.  Central ties abort: a tie means
the guide's carrying has terminated at that branch.
"""

from fractions import Fraction
from math import gcd
import itertools

from . import cones
from .chart import intersection_number, MultiCurve
from .curvegraph import Unreachable, NotInUniverse, in_L_a
from .track import decompose_at_adapted


class NotCarried(ValueError):
    pass


class NoLargeBranchWithMass(RuntimeError):
    pass


class CentralTie(RuntimeError):
    pass


class SplittingSequence:
    """tracks[i+1] = split(tracks[i], moves[i]); preimages[i] is the guide's
    exact nonnegative preimage on tracks[i]; matrices compose exactly."""

    def __init__(self, tracks, moves, matrices, guide, preimages, halt):
        self.tracks = tracks
        self.moves = moves
        self.matrices = matrices
        self.guide = tuple(guide)
        self.preimages = [tuple(p) for p in preimages]
        self.halt = halt

    def __len__(self):
        return len(self.moves)

    def matrix_product(self, upto=None):
        """Product matrix carrying measures of tracks[upto] to tracks[0]."""
        upto = len(self.moves) if upto is None else upto
        n0 = self.tracks[0].n_branches
        prod = None
        for M in self.matrices[:upto]:
            if prod is None:
                prod = [row[:] for row in M]
            else:
                cols = len(M[0])
                prod = [[sum(prod[i][k] * M[k][j] for k in range(len(M)))
                         for j in range(cols)] for i in range(len(prod))]
        if prod is None:
            prod = [[1 if i == j else 0 for j in range(n0)] for i in range(n0)]
        return prod

    def check_carried_throughout(self):
        """Push each stage's preimage through the stage matrix product and
        compare with the guide, bit for bit."""
        for k in range(len(self.tracks)):
            prod = self.matrix_product(k)
            mu = self.preimages[k]
            back = tuple(sum(prod[i][j] * mu[j] for j in range(len(mu)))
                         for i in range(len(prod)))
            if back != self.guide:
                return False
        return True


def _primitive(mu):
    g = 0
    for x in mu:
        g = gcd(g, x)
    g = g or 1
    return tuple(x // g for x in mu)


def _is_vertex_cycle(track, mu):
    if not any(mu):
        return False
    return _primitive(mu) in cones.extreme_rays(track)


def run_splitting_sequence(track, guide, max_steps, policy="lex"):
    """
    Split repeatedly at the lexicographically least large branch carrying
    positive guide weight, in the guide-compatible direction.  Halts when
    the preimage becomes a vertex cycle, on a central tie (recorded), when
    no large branch carries mass, or after max_steps.
    """
    guide = [int(x) for x in guide]
    if not track.check_switch_conditions(guide):
        raise NotCarried("guide does not satisfy the switch conditions")
    tracks = [track]
    moves, matrices, preimages = [], [], [guide]
    mu = guide
    halt = "max_steps"
    for _ in range(max_steps):
        cur = tracks[-1]
        if _is_vertex_cycle(cur, mu):
            halt = "vertex_cycle"
            break
        larges = [e for e in cur.large_branches() if mu[e] > 0]
        if not larges:
            halt = "no_large_branch_with_mass"
            break
        e = min(larges) if policy == "lex" else larges[0]
        d = cur.compatible_split_direction(e, mu)
        if d == "C":
            halt = "central_tie"
            break
        new, M = cur.split(e, d)
        mu = cur.split_preimage(e, d, mu)
        tracks.append(new)
        moves.append((e, d))
        matrices.append(M)
        preimages.append(mu)
    if halt == "max_steps" and _is_vertex_cycle(tracks[-1], mu):
        halt = "vertex_cycle"
    return SplittingSequence(tracks, moves, matrices, guide, preimages, halt)


def run_full_splitting_sequence(track, guide, rounds):
    """
    Full splitting: each round splits at every large branch of the round's
    starting track exactly once, in ascending branch order; branches created
    mid-round wait for the next round.  At zero guide weight the split goes
    left by convention; a central tie aborts the round with a report.
    """
    guide = [int(x) for x in guide]
    if not track.check_switch_conditions(guide):
        raise NotCarried("guide does not satisfy the switch conditions")
    tracks = [track]
    moves, matrices, preimages = [], [], [guide]
    mu = guide
    halt = "completed"
    for _r in range(rounds):
        cur = tracks[-1]
        round_larges = sorted(cur.large_branches())
        for e in round_larges:
            cur = tracks[-1]
            if not cur.is_large(e):
                raise RuntimeError(f"branch {e} stopped being large mid-round")
            if mu[e] == 0:
                d = "L"
            else:
                d = cur.compatible_split_direction(e, mu)
            if d == "C":
                halt = "central_tie"
                break
            new, M = cur.split(e, d)
            mu = cur.split_preimage(e, d, mu)
            tracks.append(new)
            moves.append((e, d))
            matrices.append(M)
            preimages.append(mu)
        if halt == "central_tie":
            break
    return SplittingSequence(tracks, moves, matrices, guide, preimages, halt)


# ---------------------------------------------------------------------------
# curve paths and their fits
# ---------------------------------------------------------------------------

def curve_path(seq):
    """The representative curve of every track along the sequence."""
    return [cones.representative_curve(t) for t in seq.tracks]


def curve_path_prefix(seq, index):
    """
    The longest initial run of representative curves inside the index's
    universe, plus the number of stages cut off.  A prefix of a splitting
    sequence is itself one, so its curve path is a legitimate sample; the
    tail is reported as truncation rather than silently dropped.
    """
    path = []
    for t in seq.tracks:
        c = cones.representative_curve(t)
        if c not in index.key:
            return path, len(seq.tracks) - len(path)
        path.append(c)
    return path, 0


def lipschitz_check(seq, index, cap=None):
    """Max single-step displacement of the representative curve."""
    path = curve_path(seq)
    worst = 0
    for a, b in zip(path, path[1:]):
        worst = max(worst, index.distance(a, b, cap))
    return worst


def quasigeodesic_fit(path, index, cap=None):
    """
    (Q_fit, D_fellow_travel) for a curve path.

    D_fellow_travel: the one-sided max distance from path points to a BFS
    geodesic between the endpoints.

    Q_fit: minimal rational L admitting a monotone surjective
    reparametrization sigma onto {0..d} with, for all i < j,
        sigma(j)-sigma(i) <= L*(d(p_i,p_j)+1)   and
        d(p_i,p_j) <= L*(sigma(j)-sigma(i)+1),
    the quasigeodesic inequalities with the additive constant folded
    multiplicatively so the search stays in exact rationals.  The minimum is
    taken over the finite set of critical ratios; feasibility of a given L
    is decided by depth-first search over the monotone alignment lattice
    with all pairwise constraints checked against the partial assignment.
    """
    n = len(path) - 1
    geo = index.geodesic(path[0], path[-1], cap)
    d_end = len(geo) - 1
    D = 0
    for p in path:
        D = max(D, min(index.distance(p, q, cap) for q in geo))

    dm = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            dm[(i, j)] = index.distance(path[i], path[j], cap)

    def feasible(L):
        assign = [None] * (n + 1)

        def dfs(j, t):
            assign[j] = t
            if j == n:
                ok = t == d_end
                if not ok:
                    assign[j] = None
                return ok
            for t2 in range(t, d_end + 1):
                ok = True
                for i in range(j + 1):
                    dij = dm[(i, j + 1)] if i < j + 1 else 0
                    if Fraction(t2 - assign[i]) > L * (dij + 1):
                        ok = False
                        break
                    if Fraction(dij) > L * (t2 - assign[i] + 1):
                        ok = False
                        break
                if ok and dfs(j + 1, t2):
                    return True
            assign[j] = None
            return False

        return dfs(0, 0)

    # quasigeodesic constants are at least one by definition
    candidates = {Fraction(1)}
    for (_pair, d) in dm.items():
        for t in range(0, d_end + 1):
            candidates.add(Fraction(t, d + 1))
            candidates.add(Fraction(d, t + 1))
    ladder = sorted(c for c in candidates if c >= 1)
    # feasibility is monotone in L (constraints only weaken), so bisect
    lo, hi = 0, len(ladder) - 1
    if not feasible(ladder[hi]):
        raise RuntimeError("no feasible quasigeodesic constant found")
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(ladder[mid]):
            hi = mid
        else:
            lo = mid + 1
    return ladder[lo], D


# ---------------------------------------------------------------------------
# uniform projection constants for sequences from adapted tracks
# ---------------------------------------------------------------------------

def pushed_measure(seq, stage, mu):
    """Carry a measure on tracks[stage] back to a measure on tracks[0]."""
    prod = seq.matrix_product(stage)
    return tuple(sum(prod[i][j] * mu[j] for j in range(len(mu)))
                 for i in range(len(prod)))


def pants_intersections(curve, pants):
    return [intersection_number(curve, g) for g in pants]


def greedy_cycle_decomposition(track, eta):
    """
    Write an integral carried measure as a nonnegative integer combination
    of vertex cycles, greedily extracting the largest coefficient first
    (with backtracking).  Returns the coefficient list or None.
    """
    rays = cones.extreme_rays(track)

    def extractable(mu, r):
        return min((mu[b] // r[b]) for b in range(len(mu)) if r[b]) \
            if any(r[b] and mu[b] for b in range(len(mu))) else 0

    def rec(mu, out, start):
        if not any(mu):
            return out
        best = []
        for idx in range(len(rays)):
            r = rays[idx]
            if all(mu[b] >= r[b] for b in range(len(mu))):
                a = min(mu[b] // r[b] for b in range(len(mu)) if r[b])
                if a > 0:
                    best.append((a, idx))
        for a, idx in sorted(best, reverse=True):
            r = rays[idx]
            for k in range(a, 0, -1):
                rest = [mu[b] - k * r[b] for b in range(len(mu))]
                got = rec(rest, out + [(idx, k)], 0)
                if got is not None:
                    return got
        return None

    return rays, rec(list(eta), [], 0)


def projection_bounds(at, seq, rho, index=None):
    """
    For a sequence issuing from the adapted track and a vertex cycle rho of
    the final track: at every admissible stage j (all vertex cycles of
    tracks[j] fill against all vertex cycles of tracks[0]), the minimal k
    with
        i(rho, alpha) * sum_i i(alpha, gamma_i) <= k * sum_i i(rho, gamma_i)
    for some vertex cycle alpha of tracks[j]; plus the pants-decomposition
    constants: k0 bounding mu0-mass against pants intersections, and the
    cycle-decomposition coefficient ratio q.

    Returns a dict with per-stage tables and the uniform constants.
    """
    from .overlay import fills
    track0 = at.track
    pants = at.pants
    base_cycles = cones.vertex_cycles(track0)
    rho_curve = rho if not hasattr(rho, "curve") else rho.curve
    sum_rho = sum(pants_intersections(rho_curve, pants))
    stages = []
    k_uniform = Fraction(0)
    k0 = Fraction(1)
    q = Fraction(1)
    for j in range(1, len(seq.tracks)):
        tj = seq.tracks[j]
        cyc_j = cones.vertex_cycles(tj)
        admissible = all(vc.curve != bc.curve and fills(vc.curve, bc.curve)
                         for vc in cyc_j for bc in base_cycles)
        if not admissible:
            continue
        if sum_rho == 0:
            continue
        best_k = None
        for vc in cyc_j:
            lhs = intersection_number(rho_curve, vc.curve) * \
                sum(pants_intersections(vc.curve, pants))
            kk = Fraction(lhs, sum_rho)
            if best_k is None or kk < best_k:
                best_k = kk
        # inequality (2) re-check for every vertex cycle at this stage
        for vc in cyc_j:
            mu_base = pushed_measure(seq, j, vc.measure)
            mu0, _n, large_w = decompose_at_adapted(at, mu_base)
            s = sum(pants_intersections(vc.curve, pants))
            m0 = sum(mu0)
            if s == 0:
                continue
            if s > m0:
                raise AssertionError("pants intersections exceed mu0 mass")
            k0 = max(k0, Fraction(m0, s))
        # decomposition coefficient for the guide preimage at stage j
        eta = seq.preimages[j]
        if any(eta):
            rays, deco = greedy_cycle_decomposition(tj, eta)
            if deco:
                amax = max(k for (_i, k) in deco)
                q = max(q, Fraction(sum(eta), amax))
        stages.append({"stage": j, "min_k": best_k})
        if best_k is not None:
            k_uniform = max(k_uniform, best_k)
    return {
        "stages": stages,
        "k_uniform": k_uniform,
        "k0_pants": k0,
        "q_cycle_decomp": q,
        "admissible_count": len(stages),
    }


def kappa_scan(at, seq, rho, k, a_grid):
    """
    For each scale s, the set of stages with a vertex cycle inside the level
    set L_s(rho, P, k) where P is the pants multicurve.  Reports whether
    stage 0 is covered for the smallest s and the final stage for the
    largest s.
    """
    pants_mc = MultiCurve(at.track.chart, {g: 1 for g in at.pants})
    rho_curve = rho if not hasattr(rho, "curve") else rho.curve
    table = {}
    for s in a_grid:
        hit = []
        for j, tj in enumerate(seq.tracks):
            cyc = cones.vertex_cycles(tj)
            if any(in_L_a(vc.curve, rho_curve, pants_mc, s, k) for vc in cyc):
                hit.append(j)
        table[Fraction(s)] = hit
    small = min(table)
    large = max(table)
    return {
        "table": table,
        "covers_start_at_small": 0 in table[small],
        "covers_end_at_large": (len(seq.tracks) - 1) in table[large],
    }


def convergence_diagnostic(seq, index=None, cap=None):
    """
    Per stage, the representative curve's projectivized coordinates (exact
    rationals summing to one) and, when an index is supplied and the curves
    are in its universe, the distance from the stage-0 curve (None when not
    computable).  No convergence claim is asserted.
    """
    path = curve_path(seq)
    rows = []
    for j, c in enumerate(path):
        total = sum(c.coords)
        proj = tuple(Fraction(x, total) for x in c.coords)
        d = None
        if index is not None:
            try:
                d = index.distance(path[0], c, cap)
            except (NotInUniverse, Unreachable):
                d = None
        rows.append({"stage": j, "curve": c, "projective": proj,
                     "d_from_start": d})
    return rows
