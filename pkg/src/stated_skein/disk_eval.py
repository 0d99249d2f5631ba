"""Evaluate stated, boundary-ordered tangle diagrams in the ideal bigon or
triangle.

Conventions.  The polygon's edges are listed counterclockwise (a, b, c or
a, b).  Boundary points are given in counterclockwise order, so the points
of each edge form a contiguous block, and "position" below means the index
in that order.  Each point carries a height (larger is higher) and a state.
A pair of neighbouring points on one edge is *positive* when the later one
is higher.

A crossing has four slots numbered counterclockwise; slots 0 and 2 belong
to the under strand.  The A-smoothing (coefficient q) joins slots 0-1 and
2-3, the B-smoothing (coefficient q^-1) joins 1-2 and 3-0.

Crossings are resolved by a state sum.  The resulting crossing-free
diagrams are reduced with the boundary rules only:

* height exchange of neighbouring points, ``D = q^-1 D_a + q D_b`` when the
  pair is inverted, where ``D_a`` swaps the two (height, state) labels and
  ``D_b`` caps the two points together and joins their far ends;
* a positive innermost cap with higher state e and lower state e' is C^e_e';
* on a positive pair with - above +, ``D = q^2 D' + q^-1/2 D_join``.

Diagrams without returning arcs in positive, increasing order are turned
into stacked words by walking the heights to the stacked layout with the
same exchange rule, recursing on the cap terms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .qcoeff import LOOP, Laurent, ONE, vpow
from .skein_presented import (
    BIGON, TRIANGLE, SkeinElement, Word, edges_of, is_normal, letter_edges,
    normal_form, rel_constant,
)

Q = vpow(2)
Q_INV = vpow(-2)
Q2 = vpow(4)
Q_HALF_INV = vpow(-1)

Point = Tuple[int, int, int]  # (edge index, height, state)
Key = Tuple[Tuple[Point, ...], Tuple[int, ...]]

POLYGONS = (BIGON, TRIANGLE)


class DiagramError(ValueError):
    pass


def _letter_table(polygon: str) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(first-state edge, second-state edge) -> (letter, orientation)."""
    names = edges_of(polygon)
    table = {}
    for letter, (e1, e2) in letter_edges(polygon).items():
        i1, i2 = names.index(e1), names.index(e2)
        table[(i1, i2)] = (letter, 0)
        table[(i2, i1)] = (letter, 1)
    return table


# ------------------------------------------------------ crossing-free layer

def _canon(points: Sequence[Point], partner: Sequence[int]) -> Key:
    """Replace heights by their ranks on each edge."""
    by_edge: Dict[int, List[int]] = {}
    for e, h, _ in points:
        by_edge.setdefault(e, []).append(h)
    rank = {e: {h: r for r, h in enumerate(sorted(hs))} for e, hs in by_edge.items()}
    return tuple((e, rank[e][h], s) for e, h, s in points), tuple(partner)


def _drop(points, partner, i: int, j: int, join: bool):
    """Delete points i, j; with ``join`` their partners are tied together.

    Returns the new key and the number of closed loops created.
    """
    n = len(points)
    par = list(partner)
    loops = 0
    if join:
        pi, pj = par[i], par[j]
        if pi == j:
            loops = 1
        else:
            par[pi], par[pj] = pj, pi
    keep = [k for k in range(n) if k != i and k != j]
    idx = {k: m for m, k in enumerate(keep)}
    return _canon([points[k] for k in keep], [idx[par[k]] for k in keep]), loops


def _swap_labels(points, i: int):
    pts = list(points)
    (e, h1, s1), (_, h2, s2) = pts[i], pts[i + 1]
    pts[i], pts[i + 1] = (e, h2, s2), (e, h1, s1)
    return tuple(pts)


def _cap(points, partner, i: int):
    """Cap positions i, i+1 together (sorted labels) and join the far ends."""
    pts = list(points)
    if pts[i][1] > pts[i + 1][1]:
        pts = list(_swap_labels(pts, i))
    par = list(partner)
    pi, pj = par[i], par[i + 1]
    loops = 0
    if pi == i + 1:
        loops = 1
    else:
        par[pi], par[pj] = pj, pi
    par[i], par[i + 1] = i + 1, i
    return (tuple(pts), tuple(par)), loops


def _same_edge(points, i: int) -> bool:
    return i + 1 < len(points) and points[i][0] == points[i + 1][0]


def _height_inversions(points) -> int:
    n = len(points)
    return sum(
        1
        for i in range(n)
        for j in range(i + 1, n)
        if points[i][0] == points[j][0] and points[i][1] > points[j][1]
    )


def _state_inversions(points) -> int:
    # (-, +) pairs with the - higher, counted per edge
    n = len(points)
    return sum(
        1
        for i in range(n)
        for j in range(n)
        if points[i][0] == points[j][0] and points[i][1] > points[j][1]
        and points[i][2] < 0 < points[j][2]
    )


def _returning(points, partner) -> bool:
    return any(points[i][0] == points[p][0] for i, p in enumerate(partner))


def measure(key: Key) -> Tuple[int, int, int, int]:
    """Lexicographic size that every reduction step strictly lowers."""
    points, partner = key
    return (
        len(points),
        0 if _returning(points, partner) else 1,
        _height_inversions(points),
        _state_inversions(points),
    )


def _acc(out: Dict[Word, Laurent], terms: Dict[Word, Laurent], c: Laurent) -> None:
    if not c:
        return
    for w, x in terms.items():
        s = out.get(w, Laurent()) + c * x
        if s:
            out[w] = s
        else:
            out.pop(w, None)


class Evaluator:
    """Memoized reduction of crossing-free diagrams.

    ``strategy="diagram"`` stays inside the diagram calculus until the
    diagram is a stacked normal word.  ``strategy="stack"`` stacks any
    crossing-free diagram without returning arcs as it is and hands the word
    to the presented normal form.
    """

    def __init__(self, polygon: str = TRIANGLE, strategy: str = "diagram", check: bool = True):
        if polygon not in POLYGONS:
            raise ValueError(f"unknown polygon {polygon!r}")
        if strategy not in ("diagram", "stack"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.polygon = polygon
        self.strategy = strategy
        self.check = check
        self.letters = _letter_table(polygon)
        self.memo: Dict[Key, Dict[Word, Laurent]] = {}
        self.steps = 0

    def eval_key(self, key: Key, parent: Optional[tuple] = None) -> Dict[Word, Laurent]:
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        # a memo hit was already checked when it was first reached
        if self.check and parent is not None:
            m = measure(key)
            if not m < parent:
                raise AssertionError(f"reduction measure did not drop: {parent} -> {m}")
        out = self._eval(key)
        self.memo[key] = out
        return out

    def _sub(self, out, c: Laurent, key: Key, loops: int, here) -> None:
        if loops:
            c = c * LOOP ** loops
        _acc(out, self.eval_key(key, here), c)

    def _eval(self, key: Key) -> Dict[Word, Laurent]:
        self.steps += 1
        points, partner = key
        n = len(points)
        if not n:
            return {(): ONE}
        here = measure(key) if self.check else None
        out: Dict[Word, Laurent] = {}
        inverted = next(
            (i for i in range(n - 1) if _same_edge(points, i) and points[i][1] > points[i + 1][1]),
            None,
        )
        if _returning(points, partner):
            if inverted is not None:
                self._exchange(out, points, partner, inverted, here)
                return out
            # positive: some returning arc has neighbouring endpoints
            i = next(i for i in range(n - 1) if partner[i] == i + 1 and _same_edge(points, i))
            c = rel_constant(points[i + 1][2], points[i][2])
            if c:
                rest, _ = _drop(points, partner, i, i + 1, join=False)
                _acc(out, self.eval_key(rest, here), c)
            return out
        if self.strategy == "stack":
            return self._stack(points, partner, here)
        if inverted is not None:
            self._exchange(out, points, partner, inverted, here)
            return out
        i = next(
            (i for i in range(n - 1)
             if _same_edge(points, i) and points[i][2] > 0 > points[i + 1][2]),
            None,
        )
        if i is not None:
            pts = list(points)
            (e, h1, s1), (_, h2, s2) = pts[i], pts[i + 1]
            pts[i], pts[i + 1] = (e, h1, s2), (e, h2, s1)
            self._sub(out, Q2, (tuple(pts), partner), 0, here)
            joined, loops = _drop(points, partner, i, i + 1, join=True)
            self._sub(out, Q_HALF_INV, joined, loops, here)
            return out
        return self._stack(points, partner, here)

    def _exchange(self, out, points, partner, i: int, here) -> None:
        self._sub(out, Q_INV, (_swap_labels(points, i), partner), 0, here)
        capped, loops = _cap(points, partner, i)
        self._sub(out, Q, capped, loops, here)

    def chords(self, points, partner) -> List[Tuple[int, int, int]]:
        """(letter, first-state point, second-state point), in stack order."""
        out = []
        for i, p in enumerate(partner):
            if i < p:
                letter, flip = self.letters[(points[i][0], points[p][0])]
                out.append((letter, p, i) if flip else (letter, i, p))
        # innermost chord of each corner first
        out.sort(key=lambda t: (t[0], t[1]))
        return out

    def _stack(self, points, partner, here) -> Dict[Word, Laurent]:
        chords = self.chords(points, partner)
        n = len(points)
        # target height at each point: the first chord sits highest
        target = [0] * n
        per_edge: Dict[int, List[int]] = {}
        for _, p1, p2 in chords:
            per_edge.setdefault(points[p1][0], []).append(p1)
            per_edge.setdefault(points[p2][0], []).append(p2)
        for pts in per_edge.values():
            for r, p in enumerate(pts):
                target[p] = len(pts) - 1 - r
        dest = {(points[p][0], target[p]): p for p in range(n)}
        out: Dict[Word, Laurent] = {}
        cur = tuple(points)
        coef = ONE
        while True:
            i = next(
                (i for i in range(n - 1)
                 if _same_edge(cur, i)
                 and dest[(cur[i][0], cur[i][1])] > dest[(cur[i + 1][0], cur[i + 1][1])]),
                None,
            )
            if i is None:
                break
            capped, loops = _cap(cur, partner, i)
            if cur[i][1] > cur[i + 1][1]:
                self._sub(out, coef * Q, capped, loops, here)
                coef = coef * Q_INV
            else:
                self._sub(out, -coef * Q2, capped, loops, here)
                coef = coef * Q
            cur = _swap_labels(cur, i)
        word = tuple((letter, cur[p1][2], cur[p2][2]) for letter, p1, p2 in chords)
        if self.strategy == "diagram":
            if not is_normal(word, self.polygon):
                raise AssertionError(f"stacking produced a non-normal word {word}")
            _acc(out, {word: ONE}, coef)
        else:
            _acc(out, normal_form(word, self.polygon).terms, coef)
        return out


_EVALUATORS: Dict[Tuple[str, str], Evaluator] = {}


def evaluator(polygon: str = TRIANGLE, strategy: str = "diagram") -> Evaluator:
    k = (polygon, strategy)
    if k not in _EVALUATORS:
        _EVALUATORS[k] = Evaluator(polygon, strategy)
    return _EVALUATORS[k]


# ------------------------------------------------------------- diagrams

Port = tuple  # ("p", i) or ("x", crossing, slot)


@dataclass(frozen=True)
class DiskDiagram:
    """A stated tangle diagram in an ideal polygon.

    ``points`` lists (edge name, height, state) counterclockwise.
    ``strands`` pairs up ports: ``("p", i)`` is boundary point i and
    ``("x", k, slot)`` is a slot of crossing k.  ``loops`` counts extra
    trivial closed components.
    """

    polygon: str
    points: Tuple[Tuple[str, int, int], ...]
    strands: Tuple[Tuple[Port, Port], ...] = ()
    crossings: int = 0
    loops: int = 0

    def edge_index(self, name: str) -> int:
        return edges_of(self.polygon).index(name)

    def validate(self) -> None:
        if self.polygon not in POLYGONS:
            raise DiagramError(f"unknown polygon {self.polygon!r}")
        names = edges_of(self.polygon)
        last = -1
        seen = set()
        for e, h, s in self.points:
            if e not in names:
                raise DiagramError(f"no edge {e!r} in the {self.polygon}")
            k = names.index(e)
            if k < last:
                raise DiagramError("boundary points must be listed counterclockwise, edge by edge")
            last = k
            if s not in (1, -1):
                raise DiagramError(f"state must be +1 or -1, got {s!r}")
            if (e, h) in seen:
                raise DiagramError(f"two points at height {h} on edge {e}")
            seen.add((e, h))
        if self.loops < 0 or self.crossings < 0:
            raise DiagramError("negative counts")
        ports = [("p", i) for i in range(len(self.points))]
        ports += [("x", k, j) for k in range(self.crossings) for j in range(4)]
        used: Dict[Port, int] = {}
        for a, b in self.strands:
            for x in (tuple(a), tuple(b)):
                used[x] = used.get(x, 0) + 1
        for x in ports:
            if used.get(x, 0) != 1:
                raise DiagramError(f"port {x} is used {used.get(x, 0)} times")
        if len(used) != len(ports):
            extra = sorted(set(used) - set(ports))
            raise DiagramError(f"unknown ports {extra}")
        if not _planar(len(self.points), self.crossings, self.strands):
            raise DiagramError("crossing data is not planar")

    def key_points(self) -> Tuple[Point, ...]:
        names = edges_of(self.polygon)
        return tuple((names.index(e), h, s) for e, h, s in self.points)

    def resolutions(self):
        """Yield (coefficient, crossing-free key, loops) for every state."""
        n = len(self.points)
        base = self.key_points()
        nodes = {("p", i): i for i in range(n)}
        for k in range(self.crossings):
            for j in range(4):
                nodes[("x", k, j)] = len(nodes)
        adj: List[List[int]] = [[] for _ in nodes]
        for a, b in self.strands:
            ia, ib = nodes[tuple(a)], nodes[tuple(b)]
            adj[ia].append(ib)
            adj[ib].append(ia)
        for choice in product((0, 1), repeat=self.crossings):
            extra: List[List[int]] = [[] for _ in nodes]
            for k, c in enumerate(choice):
                s = [nodes[("x", k, j)] for j in range(4)]
                pairs = ((0, 1), (2, 3)) if c == 0 else ((1, 2), (3, 0))
                for u, v in pairs:
                    extra[s[u]].append(s[v])
                    extra[s[v]].append(s[u])
            partner = [-1] * n
            visited = [False] * len(nodes)
            for i in range(n):
                if visited[i]:
                    continue
                prev, cur = None, i
                visited[i] = True
                # a path alternates strand edges and smoothing edges
                step_strand = True
                while True:
                    nxt = adj[cur][0] if step_strand else extra[cur][0]
                    if not step_strand and len(extra[cur]) != 1:
                        raise AssertionError("bad smoothing")
                    visited[nxt] = True
                    prev, cur = cur, nxt
                    if cur < n:
                        break
                    step_strand = not step_strand
                partner[i], partner[cur] = cur, i
            loops = self.loops
            for v in range(n, len(nodes)):
                if visited[v]:
                    continue
                loops += 1
                cur, step_strand = v, True
                while not visited[cur]:
                    visited[cur] = True
                    cur = adj[cur][0] if step_strand else extra[cur][0]
                    step_strand = not step_strand
            if not _noncrossing(partner):
                raise DiagramError("a resolution is not planar")
            a = choice.count(0)
            coef = vpow(2 * (a - (self.crossings - a)))
            yield coef, _canon(base, partner), loops


def _noncrossing(partner: Sequence[int]) -> bool:
    for i, p in enumerate(partner):
        for j, r in enumerate(partner):
            if i < p and j < r and i < j < p < r:
                return False
    return True


def _planar(npoints: int, ncross: int, strands) -> bool:
    """Euler check on the rotation system with the boundary circle added."""
    rot: Dict[tuple, List[tuple]] = {}
    edges = []

    def add(u, v):
        e = len(edges)
        edges.append((u, v))
        return (e, 0), (e, 1)

    # boundary circle, then one strand edge per strand
    circle = [add(("p", i), ("p", (i + 1) % npoints)) for i in range(npoints)] if npoints > 1 else []
    slot_dart: Dict[tuple, tuple] = {}
    for a, b in strands:
        a, b = tuple(a), tuple(b)
        da, db = add(a, b)
        slot_dart[a] = da
        slot_dart[b] = db
    for i in range(npoints):
        p = ("p", i)
        if npoints > 1:
            rot[p] = [circle[i][0], slot_dart[p], circle[(i - 1) % npoints][1]]
        else:
            rot[p] = [slot_dart[p]]
    for k in range(ncross):
        rot[("x", k)] = [slot_dart[("x", k, j)] for j in range(4)]

    def node(d):
        u, v = edges[d[0]]
        x = u if d[1] == 0 else v
        return x if x[0] == "p" else ("x", x[1])

    pos = {}
    for v, ds in rot.items():
        for idx, d in enumerate(ds):
            pos[d] = (v, idx)
    seen = set()
    faces = 0
    for d in pos:
        if d in seen:
            continue
        faces += 1
        cur = d
        while cur not in seen:
            seen.add(cur)
            rev = (cur[0], 1 - cur[1])
            v, idx = pos[rev]
            cur = rot[v][(idx + 1) % len(rot[v])]
    # connected components of the graph
    parent = {v: v for v in rot}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(len(edges)):
        parent[find(node((e, 0)))] = find(node((e, 1)))
    comps = len({find(v) for v in rot})
    return len(rot) - len(edges) + faces == 2 * comps


# ------------------------------------------------------------ builders

def chord_diagram(
    polygon: str,
    points: Sequence[Tuple[str, int, int]],
    chords: Sequence[Tuple[int, int]],
    over: Optional[Dict[Tuple[int, int], int]] = None,
    loops: int = 0,
) -> DiskDiagram:
    """Straight chords between boundary points in convex position.

    Two chords cross iff their endpoints interleave.  ``over`` maps a chord
    pair ``(i, j)`` with ``i < j`` to the chord that passes over; by default
    the lower-numbered chord is over.
    """
    n = len(points)
    used = sorted(x for c in chords for x in c)
    if used != list(range(n)):
        raise DiagramError("every boundary point needs exactly one chord")
    over = dict(over or {})
    loc = [(Fraction(t), Fraction(t * t)) for t in range(n)]
    hits: Dict[int, List[Tuple[Fraction, int, str]]] = {c: [] for c in range(len(chords))}
    crossings: List[Tuple[int, int]] = []
    for ci, (a, b) in enumerate(chords):
        for cj in range(ci + 1, len(chords)):
            c, d = chords[cj]
            lo1, hi1 = sorted((a, b))
            lo2, hi2 = sorted((c, d))
            if not (lo1 < lo2 < hi1 < hi2 or lo2 < lo1 < hi2 < hi1):
                continue
            top = over.get((ci, cj), ci)
            if top not in (ci, cj):
                raise DiagramError(f"over-chord for {(ci, cj)} must be one of them")
            k = len(crossings)
            crossings.append((top, cj if top == ci else ci))
            t1, t2 = _intersect(loc[a], loc[b], loc[c], loc[d])
            hits[ci].append((t1, k, "P" if top == ci else "Q"))
            hits[cj].append((t2, k, "P" if top == cj else "Q"))
    strands = []
    for ci, (a, b) in enumerate(chords):
        prev: Port = ("p", a)
        for _, k, role in sorted(hits[ci]):
            p_idx, q_idx = crossings[k]
            P, Qc = chords[p_idx], chords[q_idx]
            slots = _slots(loc[P[0]], loc[P[1]], loc[Qc[0]], loc[Qc[1]])
            arm_in, arm_out = (slots["P-"], slots["P+"]) if role == "P" else (slots["Q-"], slots["Q+"])
            strands.append((prev, ("x", k, arm_in)))
            prev = ("x", k, arm_out)
        strands.append((prev, ("p", b)))
    d = DiskDiagram(polygon, tuple(tuple(p) for p in points), tuple(strands), len(crossings), loops)
    d.validate()
    return d


def _intersect(p0, p1, p2, p3) -> Tuple[Fraction, Fraction]:
    d1 = (p1[0] - p0[0], p1[1] - p0[1])
    d2 = (p3[0] - p2[0], p3[1] - p2[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    w = (p2[0] - p0[0], p2[1] - p0[1])
    t = (w[0] * d2[1] - w[1] * d2[0]) / den
    s = (w[0] * d1[1] - w[1] * d1[0]) / den
    return t, s


def _slots(p0, p1, q0, q1) -> Dict[str, int]:
    """Slot numbers of the four arms; P is over, Q is under."""
    dp = (p1[0] - p0[0], p1[1] - p0[1])
    dq = (q1[0] - q0[0], q1[1] - q0[1])
    cross = dp[0] * dq[1] - dp[1] * dq[0]
    # counterclockwise from an under arm
    if cross > 0:
        order = ["Q+", "P-", "Q-", "P+"]
    else:
        order = ["Q-", "P-", "Q+", "P+"]
    return {arm: i for i, arm in enumerate(order)}


def add_kink(d: DiskDiagram, strand: int, sign: int) -> DiskDiagram:
    """Put a curl on one strand; it evaluates to -q^(3*sign) times the original."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    strands = list(d.strands)
    a, b = strands.pop(strand)
    k = d.crossings
    loop_end, out = (3, 1) if sign > 0 else (1, 3)
    strands += [(a, ("x", k, 0)), (("x", k, 2), ("x", k, loop_end)), (("x", k, out), b)]
    out_d = DiskDiagram(d.polygon, d.points, tuple(strands), k + 1, d.loops)
    out_d.validate()
    return out_d


def _layout(word: Word, polygon: str) -> DiskDiagram:
    names = edges_of(polygon)
    le = letter_edges(polygon)
    n = len(word)
    # per edge: chords whose corner sits at its start, then at its end
    blocks: Dict[str, List[Tuple[int, int]]] = {e: [] for e in names}
    for e in names:
        start = [(j, 0) for j, g in enumerate(word) if le[g[0]][0] == e]
        end = [(j, 1) for j, g in enumerate(word) if le[g[0]][1] == e]
        blocks[e] = start + end[::-1]
    points = []
    where: Dict[Tuple[int, int], int] = {}
    for e in names:
        for j, side in blocks[e]:
            where[(j, side)] = len(points)
            points.append((e, n - j, word[j][1 + side]))
    strands = tuple((("p", where[(j, 0)]), ("p", where[(j, 1)])) for j in range(n))
    d = DiskDiagram(polygon, tuple(points), strands)
    d.validate()
    return d


def word_to_diagram(word: Sequence, polygon: str = TRIANGLE) -> DiskDiagram:
    """Stacked diagram of a normal word, earlier factors on top."""
    word = tuple(tuple(g) for g in word)
    if not is_normal(word, polygon):
        raise ValueError("word_to_diagram expects a normal word")
    return _layout(word, polygon)


def stack_diagram(word: Sequence, polygon: str = TRIANGLE) -> DiskDiagram:
    """Stacked diagram of any word."""
    return _layout(tuple(tuple(g) for g in word), polygon)


def theta(k: Sequence[int], states: Dict[str, Sequence[int]], polygon: str = TRIANGLE) -> DiskDiagram:
    """Simple diagram with k[i] parallel chords around corner i, in
    positive order; ``states[e]`` lists the states on edge e from the lowest
    point up.
    """
    le = letter_edges(polygon)
    skeleton = [L for L, m in enumerate(k) for _ in range(m)]
    if len(skeleton) and max(skeleton) >= len(le):
        raise ValueError("too many corners for this polygon")
    d = _layout(tuple((L, 1, 1) for L in skeleton), polygon)
    pts = []
    seen: Dict[str, int] = {}
    for e, _, _ in d.points:
        r = seen.get(e, 0)
        seen[e] = r + 1
        if r >= len(states.get(e, ())):
            raise ValueError(f"not enough states for edge {e}")
        pts.append((e, r, states[e][r]))
    for e, c in seen.items():
        if len(states[e]) != c:
            raise ValueError(f"edge {e} has {c} points, got {len(states[e])} states")
    out = DiskDiagram(polygon, tuple(pts), d.strands)
    out.validate()
    return out


# ---------------------------------------------------------- evaluation

def eval_diagram(d: DiskDiagram, strategy: str = "diagram") -> SkeinElement:
    d.validate()
    ev = evaluator(d.polygon, strategy)
    grouped: Dict[Tuple[Key, int], Laurent] = {}
    for c, key, loops in d.resolutions():
        grouped[(key, loops)] = grouped.get((key, loops), Laurent()) + c
    out: Dict[Word, Laurent] = {}
    for (key, loops), c in grouped.items():
        if loops:
            c = c * LOOP ** loops
        _acc(out, ev.eval_key(key), c)
    el = SkeinElement(d.polygon)
    el._t = out
    return el


def crossing_free(d: DiskDiagram) -> Tuple[Key, int]:
    if d.crossings:
        raise DiagramError("diagram has crossings")
    ((_, key, loops),) = list(d.resolutions())
    return key, loops


def _from_key(polygon: str, key: Key, loops: int) -> DiskDiagram:
    names = edges_of(polygon)
    points, partner = key
    strands = tuple((("p", i), ("p", p)) for i, p in enumerate(partner) if i < p)
    return DiskDiagram(polygon, tuple((names[e], h, s) for e, h, s in points), strands, 0, loops)


def exchange_step(d: DiskDiagram, edge: str, position: int) -> List[Tuple[Laurent, DiskDiagram]]:
    """Rewrite d at the points ``position`` and ``position + 1`` of an edge.

    The two points must be neighbours in height.  On a positive pair with
    - above + this is the boundary order relation (states swapped, plus a
    joined term).  Otherwise the heights are exchanged, states staying with
    their strands.
    """
    (points, partner), loops = crossing_free(d)
    e = d.edge_index(edge)
    on_edge = [i for i, p in enumerate(points) if p[0] == e]
    if not 0 <= position < len(on_edge) - 1:
        raise DiagramError(f"no neighbouring pair at position {position} on edge {edge}")
    i = on_edge[position]
    (_, h1, s1), (_, h2, s2) = points[i], points[i + 1]
    if abs(h1 - h2) != 1:
        raise DiagramError("the two points are not adjacent in height")
    positive = h2 > h1
    hi, lo = (s2, s1) if positive else (s1, s2)
    pts = list(points)
    if positive and hi < 0 < lo:
        pts[i], pts[i + 1] = (e, h1, s2), (e, h2, s1)
        joined, extra = _drop(points, partner, i, i + 1, join=True)
        return [
            (Q2, _from_key(d.polygon, (tuple(pts), partner), loops)),
            (Q_HALF_INV, _from_key(d.polygon, joined, loops + extra)),
        ]
    pts[i], pts[i + 1] = (e, h2, s1), (e, h1, s2)
    swapped = _from_key(d.polygon, (tuple(pts), partner), loops)
    if hi == lo:
        return [(Q_INV if not positive else Q, swapped)]
    if not positive and hi < 0 < lo:
        return [(Q, swapped)]
    if positive:  # + above -
        return [(Q_INV, swapped)]
    # inverted, + above -
    joined, extra = _drop(points, partner, i, i + 1, join=True)
    return [
        (vpow(-6), swapped),
        (vpow(1) - vpow(-7), _from_key(d.polygon, joined, loops + extra)),
    ]


def random_diagram(
    rng: random.Random,
    polygon: str = TRIANGLE,
    components: int = 3,
    max_crossings: int = 2,
    loop_chance: float = 0.2,
) -> DiskDiagram:
    """Random chord diagram with at most the given size; used for testing."""
    names = edges_of(polygon)
    while True:
        arcs = rng.randint(1, components)
        loops = 1 if arcs < components and rng.random() < loop_chance else 0
        n = 2 * arcs
        edge_of = sorted(rng.randrange(len(names)) for _ in range(n))
        heights: Dict[int, List[int]] = {}
        for e in edge_of:
            heights.setdefault(e, [])
        for e in heights:
            m = edge_of.count(e)
            heights[e] = rng.sample(range(m), m)
        pts = []
        count: Dict[int, int] = {}
        for e in edge_of:
            r = count.get(e, 0)
            count[e] = r + 1
            pts.append((names[e], heights[e][r], rng.choice((1, -1))))
        order = list(range(n))
        rng.shuffle(order)
        chords = [(order[2 * i], order[2 * i + 1]) for i in range(arcs)]
        over = {}
        for i in range(arcs):
            for j in range(i + 1, arcs):
                over[(i, j)] = rng.choice((i, j))
        d = chord_diagram(polygon, pts, chords, over, loops)
        if d.crossings <= max_crossings:
            return d
