"""Ideally triangulated surfaces and normal tangles on them.

A triangulation is a list of faces, each a counterclockwise triple of edge
labels.  A label used once is a boundary edge, a label used twice is glued
(orientation-reversing, so the glued surface is always orientable).  Slot
0, 1, 2 of a face plays the part of edge a, b, c of the ideal triangle.

A tangle is a list of components, each a sequence of corner passes
``(face, entry slot, exit slot)``.  Every component lives in a *layer*;
inside one layer the components are disjoint, and layer 0 sits above layer
1 and so on.  Positions of the points on each edge are recovered from the
normal-curve counts, so a layer has to be realizable without crossings.
Crossings only occur inside faces, between chords of different layers that
interleave, with the upper layer passing over.

Heights on a boundary edge are given per endpoint.  When an interior edge
is cut, its points get heights layer by layer (layer 0 highest), and inside
a layer in the positional order along the edge's declared orientation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .disk_eval import DiskDiagram, chord_diagram, eval_diagram
from .qcoeff import LOOP, Laurent, ONE
from .skein_presented import TRIANGLE, SkeinElement, Word, mul as skein_mul, normal_form

Pass = Tuple[int, int, int]
Incidence = Tuple[int, int]


class SurfaceError(ValueError):
    pass


class NotNormalError(SurfaceError):
    pass


# ----------------------------------------------------------- triangulation

@dataclass(frozen=True)
class Report:
    boundary_edges: Tuple[str, ...]
    interior_edges: Tuple[str, ...]
    euler_characteristic: int
    punctures: int
    boundary_vertices: int
    components: int

    def text(self) -> str:
        nb = len(self.boundary_edges)
        p = self.punctures
        return (
            f"valid, {nb} boundary edge{'' if nb == 1 else 's'}, "
            f"{p} puncture{'' if p == 1 else 's'}, χ={self.euler_characteristic}"
        )

    def as_dict(self) -> dict:
        return {
            "valid": True,
            "boundary_edges": list(self.boundary_edges),
            "interior_edges": list(self.interior_edges),
            "euler_characteristic": self.euler_characteristic,
            "punctures": self.punctures,
            "boundary_vertices": self.boundary_vertices,
            "components": self.components,
        }


class Triangulation:
    def __init__(
        self,
        faces: Sequence[Sequence[str]],
        edges: Optional[Sequence[str]] = None,
        orientations: Optional[Dict[str, str]] = None,
    ):
        self.faces: Tuple[Tuple[str, str, str], ...] = tuple(tuple(f) for f in faces)
        for f in self.faces:
            if len(f) != 3:
                raise SurfaceError(f"face {f} does not have three edges")
        seen: List[str] = []
        for f in self.faces:
            for e in f:
                if e not in seen:
                    seen.append(e)
        if edges is None:
            edges = seen
        self.edges: Tuple[str, ...] = tuple(edges)
        if sorted(self.edges) != sorted(seen):
            raise SurfaceError("declared edge list does not match the faces")
        self.inc: Dict[str, List[Incidence]] = {e: [] for e in self.edges}
        for fi, f in enumerate(self.faces):
            for s, e in enumerate(f):
                self.inc[e].append((fi, s))
        for e, lst in self.inc.items():
            if len(lst) > 2:
                raise SurfaceError(f"edge {e} is used {len(lst)} times")
        self.orientations: Dict[str, str] = {}
        for e in self.interior_edges():
            o = (orientations or {}).get(e, "forward")
            if o not in ("forward", "backward"):
                raise SurfaceError(f"orientation of {e} must be forward or backward")
            self.orientations[e] = o

    @classmethod
    def from_dict(cls, data: dict) -> "Triangulation":
        return cls(data["faces"], data.get("edges"), data.get("orientations"))

    def to_dict(self) -> dict:
        return {
            "edges": list(self.edges),
            "faces": [list(f) for f in self.faces],
            "orientations": dict(self.orientations),
        }

    def label(self, inc: Incidence) -> str:
        return self.faces[inc[0]][inc[1]]

    def is_interior(self, e: str) -> bool:
        return len(self.inc[e]) == 2

    def interior_edges(self) -> List[str]:
        return [e for e in self.edges if len(self.inc[e]) == 2]

    def boundary_edges(self) -> List[str]:
        return [e for e in self.edges if len(self.inc[e]) == 1]

    def glued(self, inc: Incidence) -> Optional[Incidence]:
        lst = self.inc[self.label(inc)]
        if len(lst) == 1:
            return None
        return lst[1] if lst[0] == tuple(inc) else lst[0]

    def is_first(self, inc: Incidence) -> bool:
        return self.inc[self.label(inc)][0] == tuple(inc)

    def euler_characteristic(self) -> int:
        return len(self.faces) - len(self.interior_edges())

    def vertex_classes(self) -> Tuple[List[List[Tuple[int, int]]], set]:
        """Corner classes of ideal vertices, and the boundary ones."""
        parent = {(f, k): (f, k) for f in range(len(self.faces)) for k in range(3)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        # slot s runs from corner s to corner s+1
        for e in self.interior_edges():
            (f, s), (g, t) = self.inc[e]
            union((f, s), (g, (t + 1) % 3))
            union((f, (s + 1) % 3), (g, t))
        classes: Dict[tuple, List] = {}
        for x in parent:
            classes.setdefault(find(x), []).append(x)
        boundary = set()
        for e in self.boundary_edges():
            (f, s), = self.inc[e]
            boundary.add(find((f, s)))
            boundary.add(find((f, (s + 1) % 3)))
        groups = list(classes.values())
        return groups, {i for i, g in enumerate(groups) if find(g[0]) in boundary}

    def components(self) -> int:
        parent = list(range(len(self.faces)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.interior_edges():
            (f, _), (g, _) = self.inc[e]
            parent[find(f)] = find(g)
        return len({find(f) for f in range(len(self.faces))})

    def validate(self) -> Report:
        groups, bd = self.vertex_classes()
        return Report(
            tuple(self.boundary_edges()),
            tuple(self.interior_edges()),
            self.euler_characteristic(),
            len(groups) - len(bd),
            len(bd),
            self.components(),
        )

    def cut(self, e: str) -> "Triangulation":
        if e not in self.inc:
            raise SurfaceError(f"no edge {e}")
        if not self.is_interior(e):
            raise SurfaceError(f"edge {e} is a boundary edge")
        (f1, s1), (f2, s2) = self.inc[e]
        names = cut_names(e)
        faces = [list(f) for f in self.faces]
        faces[f1][s1] = names[0]
        faces[f2][s2] = names[1]
        edges = []
        for x in self.edges:
            edges.extend(names if x == e else [x])
        orient = {k: v for k, v in self.orientations.items() if k != e}
        return Triangulation(faces, edges, orient)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Triangulation)
            and self.faces == other.faces
            and self.edges == other.edges
            and self.orientations == other.orientations
        )

    def __repr__(self) -> str:
        return f"Triangulation(faces={list(self.faces)})"


def cut_names(e: str) -> Tuple[str, str]:
    return f"{e}.1", f"{e}.2"


def punctured_torus(orientations: Optional[Dict[str, str]] = None) -> Triangulation:
    return Triangulation([("e1", "e2", "e3"), ("e1", "e2", "e3")], orientations=orientations)


def punctured_bigon(orientations: Optional[Dict[str, str]] = None) -> Triangulation:
    """Disk with two boundary marked points and one interior puncture."""
    return Triangulation([("e1", "e2", "x"), ("e2", "e1", "y")], orientations=orientations)


def ideal_triangle() -> Triangulation:
    return Triangulation([("a", "b", "c")])


# ----------------------------------------------------------------- tangles

@dataclass(frozen=True)
class Component:
    """``endpoints`` holds (state, height) for the start and the end of an
    arc; a height of None is filled in by :func:`default_heights`."""

    kind: str
    passes: Tuple[Pass, ...]
    endpoints: Tuple[Tuple[int, Optional[int]], ...] = ()
    layer: int = 0

    def reversed(self) -> "Component":
        ps = tuple((f, j, i) for f, i, j in reversed(self.passes))
        return replace(self, passes=ps, endpoints=tuple(reversed(self.endpoints)))


@dataclass(frozen=True)
class Tangle:
    components: Tuple[Component, ...] = ()
    trivial_loops: int = 0

    def layers(self) -> List[int]:
        return sorted({c.layer for c in self.components})

    def to_dict(self) -> dict:
        out = []
        for c in self.components:
            d = {"kind": c.kind, "passes": [list(p) for p in c.passes], "layer": c.layer}
            if c.kind == "arc":
                d["endpoints"] = [
                    {"state": "+" if s > 0 else "-", "height": h} for s, h in c.endpoints
                ]
            out.append(d)
        return {"components": out, "loops": self.trivial_loops}

    @classmethod
    def from_dict(cls, data: dict) -> "Tangle":
        comps = []
        loops = int(data.get("loops", 0))
        for c in data.get("components", []):
            kind = c.get("kind", "arc")
            if kind not in ("arc", "loop"):
                raise SurfaceError(f"unknown component kind {kind!r}")
            passes = tuple(tuple(int(x) for x in p) for p in c.get("passes", []))
            for p in passes:
                if len(p) != 3:
                    raise SurfaceError(f"a pass is [face, entry slot, exit slot], got {list(p)}")
            ends = []
            for ep in c.get("endpoints", []):
                if isinstance(ep, str):
                    ep = {"state": ep}
                s = ep.get("state", "+")
                s = {"+": 1, "-": -1, 1: 1, -1: -1}.get(s)
                if s is None:
                    raise SurfaceError(f"bad state {ep.get('state')!r}")
                h = ep.get("height")
                ends.append((s, None if h is None else int(h)))
            if kind == "loop" and not passes:
                loops += 1
                continue
            if kind == "arc" and len(ends) != 2:
                raise SurfaceError("an arc needs two endpoints")
            comps.append(Component(kind, passes, tuple(ends), int(c.get("layer", 0))))
        return cls(tuple(comps), loops)


def _corner(i: int, j: int) -> int:
    """Corner of a triangle between slots i and j (corner s starts slot s)."""
    return (i + 1) % 3 if j == (i + 1) % 3 else i


def check_tangle(t: Triangulation, d: Tangle, normal: bool = True) -> None:
    nf = len(t.faces)
    for c in d.components:
        if not c.passes:
            raise SurfaceError("only loops inside a face may have no passes; use the loop count")
        for f, i, j in c.passes:
            if not (0 <= f < nf and 0 <= i < 3 and 0 <= j < 3):
                raise SurfaceError(f"pass {(f, i, j)} is out of range")
            if normal and i == j:
                raise NotNormalError(
                    f"pass {(f, i, j)} enters and leaves through the same edge; straighten first"
                )
        ps = c.passes
        links = list(zip(ps, ps[1:]))
        if c.kind == "loop":
            links.append((ps[-1], ps[0]))
        for (f, _, j), (g, i, _) in links:
            if t.glued((f, j)) != (g, i):
                raise SurfaceError(f"passes {(f, j)} and {(g, i)} do not meet across an edge")
        if c.kind == "arc":
            if t.glued((ps[0][0], ps[0][1])) is not None or t.glued((ps[-1][0], ps[-1][2])) is not None:
                raise SurfaceError("arcs must start and end on boundary edges")


# ------------------------------------------------------------- realization

@dataclass
class Realized:
    """Positions of all points, counterclockwise on each face incidence."""

    tangle: Tangle
    # per component, per pass: (entry position, exit position)
    positions: List[List[Tuple[int, int]]]
    size: Dict[Incidence, int]


def _layer_counts(t: Triangulation, comps: Iterable[Component]):
    counts = [[0, 0, 0] for _ in t.faces]
    for c in comps:
        for f, i, j in c.passes:
            counts[f][_corner(i, j)] += 1
    return counts


def _trace(t: Triangulation, counts) -> List[Tuple[str, List[Tuple[int, int, int, int, int]]]]:
    """Trace the normal multicurve with the given corner counts.

    Returns (kind, [(face, entry, exit, entry position, exit position)]).
    """
    def size(f, s):
        return counts[f][s] + counts[f][(s + 1) % 3]

    for e in t.interior_edges():
        (f, s), (g, u) = t.inc[e]
        if size(f, s) != size(g, u):
            raise SurfaceError(f"layer meets edge {e} a different number of times on its two sides")

    def other_end(f, s, p):
        a = counts[f][s]
        if p < a:
            k, depth = s, p
            s2 = (s - 1) % 3
            return s2, size(f, s2) - 1 - depth
        depth = size(f, s) - 1 - p
        s2 = (s + 1) % 3
        return s2, depth

    seen = set()
    out = []

    def walk(f, s, p, closed_from=None):
        passes = []
        while True:
            s2, p2 = other_end(f, s, p)
            seen.add((f, s, p))
            seen.add((f, s2, p2))
            passes.append((f, s, s2, p, p2))
            g = t.glued((f, s2))
            if g is None:
                return "arc", passes
            f, s = g
            p = size(f, s) - 1 - p2
            if closed_from is not None and (f, s, p) == closed_from:
                return "loop", passes

    for e in t.boundary_edges():
        (f, s), = t.inc[e]
        for p in range(size(f, s)):
            if (f, s, p) not in seen:
                out.append(walk(f, s, p))
    for f in range(len(t.faces)):
        for s in range(3):
            for p in range(size(f, s)):
                if (f, s, p) not in seen:
                    out.append(walk(f, s, p, closed_from=(f, s, p)))
    return out


def _loop_key(passes: Sequence[Pass]) -> tuple:
    n = len(passes)
    rev = [(f, j, i) for f, i, j in reversed(passes)]
    cands = [tuple(passes[k:]) + tuple(passes[:k]) for k in range(n)]
    cands += [tuple(rev[k:]) + tuple(rev[:k]) for k in range(n)]
    return min(cands)


_REALIZE_CACHE: Dict[tuple, Tuple[list, dict]] = {}


def realize(t: Triangulation, d: Tangle) -> Realized:
    """Positions only depend on the passes and layers, so they are cached."""
    check_tangle(t, d)
    key = (t.faces, tuple((c.kind, c.passes, c.layer) for c in d.components))
    hit = _REALIZE_CACHE.get(key)
    if hit is None:
        r = _realize(t, d)
        hit = _REALIZE_CACHE[key] = (r.positions, r.size)
    return Realized(d, hit[0], hit[1])


def _realize(t: Triangulation, d: Tangle) -> Realized:
    layers = d.layers()
    local: Dict[int, Dict[int, List[Tuple[int, int]]]] = {}
    lsize: Dict[int, Dict[Incidence, int]] = {}
    for L in layers:
        idx = [k for k, c in enumerate(d.components) if c.layer == L]
        comps = [d.components[k] for k in idx]
        counts = _layer_counts(t, comps)
        traced = _trace(t, counts)
        lsize[L] = {
            (f, s): counts[f][s] + counts[f][(s + 1) % 3]
            for f in range(len(t.faces)) for s in range(3)
        }
        pools: Dict[tuple, List[List[Tuple[int, int]]]] = {}
        for kind, tr in traced:
            ps = tuple((f, i, j) for f, i, j, _, _ in tr)
            pos = [(a, b) for *_, a, b in tr]
            if kind == "arc":
                rev = tuple((f, j, i) for f, i, j in reversed(ps))
                rpos = [(b, a) for a, b in reversed(pos)]
                pools.setdefault(("arc", ps), []).append(pos)
                if rev != ps:
                    pools.setdefault(("arc", rev), []).append(rpos)
            else:
                key = _loop_key(ps)
                pools.setdefault(("loop", key), []).append((ps, pos))
        for pool in pools.values():
            if pool and isinstance(pool[0], list):
                pool.sort(key=lambda pos: pos[0][0])
        local[L] = {}
        taken = set()
        for k, c in zip(idx, comps):
            if c.kind == "arc":
                pool = pools.get(("arc", c.passes), [])
                choice = next((p for p in pool if id(p) not in taken), None)
                if choice is None:
                    raise SurfaceError(
                        f"component {k} cannot be drawn without crossings inside layer {L}"
                    )
                # the reversed copy of the same traced arc is used up too
                taken.add(id(choice))
                for other_key in (("arc", tuple((f, j, i) for f, i, j in reversed(c.passes))),):
                    for p in pools.get(other_key, []):
                        if [(b, a) for a, b in reversed(p)] == choice:
                            taken.add(id(p))
                local[L][k] = choice
            else:
                pool = pools.get(("loop", _loop_key(c.passes)), [])
                choice = next((p for p in pool if id(p) not in taken), None)
                if choice is None:
                    raise SurfaceError(
                        f"component {k} cannot be drawn without crossings inside layer {L}"
                    )
                taken.add(id(choice))
                local[L][k] = _align_loop(c.passes, *choice)
        if len(idx) != len(traced):
            raise SurfaceError(f"layer {L} has components that do not match its normal curves")
    best = None
    interior = [e for e in t.edges if t.is_interior(e) and any(lsize[L][t.inc[e][0]] for L in layers)]
    options = [{}] if len(layers) < 2 else [
        dict(zip(interior, bits)) for bits in product((False, True), repeat=len(interior))
    ]
    for flips in options:
        positions, size = _place(t, d, layers, local, lsize, flips)
        r = Realized(d, positions, size)
        if len(options) == 1:
            return r
        n = _count_crossings(t, d, r)
        if best is None or n < best[0]:
            best = (n, r)
        if n == 0:
            break
    return best[1]


def _place(t, d, layers, local, lsize, flips):
    """Global counterclockwise positions; on each edge the layers follow
    each other along its first incidence, reversed where flipped."""
    size: Dict[Incidence, int] = {}
    offset: Dict[Tuple[int, Incidence], int] = {}
    for f in range(len(t.faces)):
        for s in range(3):
            inc = (f, s)
            n = 0
            order = layers[::-1] if flips.get(t.label(inc)) else layers
            for L in order:
                offset[(L, inc)] = n
                n += lsize[L][inc]
            size[inc] = n

    def glob(L: int, inc: Incidence, p: int) -> int:
        if t.is_first(inc):
            return offset[(L, inc)] + p
        first = t.glued(inc)
        p_first = lsize[L][inc] - 1 - p
        return size[inc] - 1 - (offset[(L, first)] + p_first)

    positions = []
    for k, c in enumerate(d.components):
        loc = local[c.layer][k]
        positions.append(
            [(glob(c.layer, (f, i), a), glob(c.layer, (f, j), b)) for (f, i, j), (a, b) in zip(c.passes, loc)]
        )
    return positions, size


def _align_loop(want: Sequence[Pass], ps: Sequence[Pass], pos):
    n = len(ps)
    rev = [(f, j, i) for f, i, j in reversed(ps)]
    rpos = [(b, a) for a, b in reversed(pos)]
    want = tuple(want)
    for seq, pp in ((list(ps), list(pos)), (rev, rpos)):
        for k in range(n):
            if tuple(seq[k:] + seq[:k]) == want:
                return pp[k:] + pp[:k]
    raise AssertionError("loop alignment failed")


def default_heights(t: Triangulation, d: Tangle) -> Tangle:
    """Fill missing boundary heights: upper layers higher, then positive
    (increasing counterclockwise) order."""
    if all(h is not None for c in d.components for _, h in c.endpoints):
        return d
    r = realize(t, d)
    per_edge: Dict[str, List[Tuple[int, int, int, int]]] = {}
    for k, c in enumerate(d.components):
        if c.kind != "arc":
            continue
        (f0, i0, _), (f1, _, j1) = c.passes[0], c.passes[-1]
        per_edge.setdefault(t.label((f0, i0)), []).append((-c.layer, r.positions[k][0][0], k, 0))
        per_edge.setdefault(t.label((f1, j1)), []).append((-c.layer, r.positions[k][-1][1], k, 1))
    ends = {k: list(c.endpoints) for k, c in enumerate(d.components)}
    for pts in per_edge.values():
        for h, (_, _, k, side) in enumerate(sorted(pts)):
            s, old = ends[k][side]
            ends[k][side] = (s, old if old is not None else h)
    comps = tuple(replace(c, endpoints=tuple(ends[k])) for k, c in enumerate(d.components))
    out = Tangle(comps, d.trivial_loops)
    _check_heights(t, out)
    return out


def _check_heights(t: Triangulation, d: Tangle) -> None:
    seen = set()
    for c in d.components:
        if c.kind != "arc":
            continue
        (f0, i0, _), (f1, _, j1) = c.passes[0], c.passes[-1]
        for (s, h), e in zip(c.endpoints, (t.label((f0, i0)), t.label((f1, j1)))):
            if h is None:
                raise SurfaceError("missing height")
            if (e, h) in seen:
                raise SurfaceError(f"two endpoints at height {h} on edge {e}")
            seen.add((e, h))


def edge_counts(t: Triangulation, d: Tangle) -> Tuple[int, ...]:
    """Number of points of the tangle on each edge, in declared order."""
    n = {e: 0 for e in t.edges}
    for c in d.components:
        for f, i, j in c.passes:
            n[t.label((f, i))] += 1
            n[t.label((f, j))] += 1
    return tuple(n[e] // (2 if t.is_interior(e) else 1) for e in t.edges)


def face_chords(t: Triangulation, d: Tangle, r: Optional[Realized] = None):
    """Per face: [(component, pass index, entry position, exit position)]."""
    r = r or realize(t, d)
    out: Dict[int, List[Tuple[int, int, int, int]]] = {f: [] for f in range(len(t.faces))}
    for k, c in enumerate(d.components):
        for m, ((f, i, j), (a, b)) in enumerate(zip(c.passes, r.positions[k])):
            out[f].append((k, m, a, b))
    return out, r


def crossing_count(t: Triangulation, d: Tangle) -> int:
    """Number of in-face crossings in the realized diagram."""
    return _count_crossings(t, d, realize(t, d))


def _count_crossings(t: Triangulation, d: Tangle, r: Realized) -> int:
    total = 0
    for f in range(len(t.faces)):
        ends = []
        for k, c in enumerate(d.components):
            for m, (g, i, j) in enumerate(c.passes):
                if g == f:
                    a, b = r.positions[k][m]
                    ends.append(((i, a), (j, b)))
        for x in range(len(ends)):
            for y in range(x + 1, len(ends)):
                if _interleave(ends[x], ends[y]):
                    total += 1
    return total


def _interleave(c1, c2) -> bool:
    a, b = sorted(c1)
    c, d = sorted(c2)
    return a < c < b < d or c < a < d < b


# ------------------------------------------------------------------ cutting

def _cut_points(t: Triangulation, d: Tangle, e: str, r: Realized):
    """Points of d on e with their heights, lowest first.

    Each point is (component, index of the pass before it).
    """
    (f1, s1), _ = t.inc[e]
    n = r.size[(f1, s1)]
    pts = []
    for k, c in enumerate(d.components):
        ps = c.passes
        m = len(ps)
        last = m if c.kind == "loop" else m - 1
        for idx in range(last):
            f, _, j = ps[idx]
            if t.label((f, j)) != e:
                continue
            pos = r.positions[k][idx][1]
            first = pos if (f, j) == (f1, s1) else n - 1 - pos
            fpos = first if t.orientations[e] == "forward" else n - 1 - first
            pts.append(((-c.layer, fpos), k, idx))
    pts.sort()
    return [(k, idx) for _, k, idx in pts]


def cut(t: Triangulation, d: Tangle, e: str) -> Tuple[Triangulation, List[Tuple[Laurent, Tangle]]]:
    """Cut along an interior edge; returns the 2^k lifts, all with coefficient 1."""
    if e not in t.inc:
        raise SurfaceError(f"no edge {e}")
    if not t.is_interior(e):
        raise SurfaceError(f"edge {e} is a boundary edge and cannot be cut")
    d = default_heights(t, d)
    r = realize(t, d)
    t2 = t.cut(e)
    pts = _cut_points(t, d, e, r)
    height = {p: h for h, p in enumerate(pts)}
    lifts = []
    for states in product((1, -1), repeat=len(pts)):
        st = dict(zip(pts, states))
        comps: List[Component] = []
        for k, c in enumerate(d.components):
            cuts = [idx for idx in range(len(c.passes)) if (k, idx) in st]
            if not cuts:
                comps.append(c)
                continue
            ps = list(c.passes)
            if c.kind == "loop":
                start = cuts[-1] + 1
                order = list(range(start, len(ps))) + list(range(start))
                pieces, cur = [], []
                for idx in order:
                    cur.append(idx)
                    if (k, idx) in st:
                        pieces.append(cur)
                        cur = []
                for piece in pieces:
                    before = piece[0] - 1 if piece[0] > 0 else len(ps) - 1
                    e0 = (st[(k, before)], height[(k, before)])
                    e1 = (st[(k, piece[-1])], height[(k, piece[-1])])
                    comps.append(Component("arc", tuple(ps[i] for i in piece), (e0, e1), c.layer))
            else:
                bounds = [-1] + cuts + [len(ps) - 1]
                for a, b in zip(bounds, bounds[1:]):
                    e0 = c.endpoints[0] if a < 0 else (st[(k, a)], height[(k, a)])
                    e1 = c.endpoints[1] if b == len(ps) - 1 else (st[(k, b)], height[(k, b)])
                    comps.append(Component("arc", tuple(ps[a + 1:b + 1]), (e0, e1), c.layer))
        lifts.append((ONE, Tangle(tuple(comps), d.trivial_loops)))
    return t2, lifts


# ------------------------------------------------------------ decomposition

class TensorElement:
    """Element of the tensor product of one triangle algebra per face."""

    __slots__ = ("nfaces", "_t")

    def __init__(self, nfaces: int, terms: Optional[Dict[Tuple[Word, ...], Laurent]] = None):
        self.nfaces = nfaces
        self._t: Dict[Tuple[Word, ...], Laurent] = {}
        for k, c in (terms or {}).items():
            self._add(k, c)

    def _add(self, k, c: Laurent) -> None:
        s = self._t.get(k, Laurent()) + c
        if s:
            self._t[k] = s
        else:
            self._t.pop(k, None)

    @property
    def terms(self) -> Dict[Tuple[Word, ...], Laurent]:
        return dict(self._t)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.nfaces == other.nfaces and self._t == other._t

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = TensorElement(self.nfaces, self._t)
        for k, c in other._t.items():
            out._add(k, c)
        return out

    def scale(self, c: Laurent) -> "TensorElement":
        return TensorElement(self.nfaces, {k: c * x for k, x in self._t.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        out = TensorElement(self.nfaces)
        cache: Dict[Tuple[Word, Word], Dict[Word, Laurent]] = {}
        for ka, ca in self._t.items():
            for kb, cb in other._t.items():
                parts = []
                for wa, wb in zip(ka, kb):
                    if (wa, wb) not in cache:
                        cache[(wa, wb)] = normal_form(wa + wb).terms
                    parts.append(cache[(wa, wb)])
                for combo in product(*[list(p.items()) for p in parts]):
                    c = ca * cb
                    for _, x in combo:
                        c = c * x
                    out._add(tuple(w for w, _ in combo), c)
        return out

    def __len__(self) -> int:
        return len(self._t)

    def __repr__(self) -> str:
        return f"TensorElement({len(self._t)} terms)"


def _face_diagram(t: Triangulation, d: Tangle, f: int, r: Realized) -> DiskDiagram:
    """Diagram of one face of a fully cut surface, as a chord diagram."""
    names = ("a", "b", "c")
    slots: Dict[int, List[Tuple[int, int, int, int]]] = {0: [], 1: [], 2: []}
    for k, c in enumerate(d.components):
        for m, (g, i, j) in enumerate(c.passes):
            if g != f:
                continue
            a, b = r.positions[k][m]
            slots[i].append((a, k, 0, c.endpoints[0]))
            slots[j].append((b, k, 1, c.endpoints[1]))
    points = []
    index: Dict[Tuple[int, int], int] = {}
    for s in range(3):
        for _, k, side, (state, h) in sorted(slots[s]):
            index[(k, side)] = len(points)
            points.append((names[s], h, state))
    ks = sorted({k for s in slots.values() for _, k, _, _ in s})
    chords = [(index[(k, 0)], index[(k, 1)]) for k in ks]
    over = {}
    for x in range(len(ks)):
        for y in range(x + 1, len(ks)):
            lx, ly = d.components[ks[x]].layer, d.components[ks[y]].layer
            if _interleave(chords[x], chords[y]):
                if lx == ly:
                    raise SurfaceError("two chords of one layer cross")
                over[(x, y)] = x if lx < ly else y
    return chord_diagram(TRIANGLE, points, chords, over)


_FACE_CACHE: Dict[DiskDiagram, Dict[Word, Laurent]] = {}


def _eval_face(d: DiskDiagram) -> Dict[Word, Laurent]:
    hit = _FACE_CACHE.get(d)
    if hit is None:
        hit = _FACE_CACHE[d] = eval_diagram(d).terms
    return hit


def decompose(
    t: Triangulation, d: Tangle, order: Optional[Sequence[str]] = None
) -> TensorElement:
    """Image in the tensor product of the face algebras.

    Interior edges are cut one at a time in ``order`` (default: declared
    order), then every face is evaluated on its own.
    """
    check_tangle(t, d)
    order = list(order) if order is not None else t.interior_edges()
    if sorted(order) != sorted(t.interior_edges()):
        raise SurfaceError("cut order must list every interior edge once")
    d = default_heights(t, d)
    _check_heights(t, d)
    items = [(ONE, d)]
    cur = t
    for e in order:
        nxt = []
        t2 = cur
        for c, x in items:
            t2, lifts = cut(cur, x, e)
            nxt.extend((c * cc, y) for cc, y in lifts)
        items, cur = nxt, t2
    out = TensorElement(len(t.faces))
    for c, x in items:
        r = realize(cur, x)
        per_face = [_eval_face(_face_diagram(cur, x, f, r)) for f in range(len(t.faces))]
        scalar = c * LOOP ** x.trivial_loops if x.trivial_loops else c
        for combo in product(*[list(p.items()) for p in per_face]):
            cc = scalar
            for _, y in combo:
                cc = cc * y
            out._add(tuple(w for w, _ in combo), cc)
    return out


# ---------------------------------------------------------------- stacking

def stack(t: Triangulation, d1: Tangle, d2: Tangle) -> Tangle:
    """d1 entirely above d2."""
    d1 = default_heights(t, d1)
    d2 = default_heights(t, d2)
    shift = (max((c.layer for c in d1.components), default=-1) + 1) - min(
        (c.layer for c in d2.components), default=0
    )
    top: Dict[str, int] = {}
    for c in d2.components:
        for (s, h), e in zip(c.endpoints, _end_edges(t, c)):
            top[e] = max(top.get(e, -1), h)
    low: Dict[str, int] = {}
    for c in d1.components:
        for (s, h), e in zip(c.endpoints, _end_edges(t, c)):
            low[e] = min(low.get(e, h), h)
    comps = []
    for c in d1.components:
        ends = tuple(
            (s, h + top.get(e, -1) + 1 - low[e]) for (s, h), e in zip(c.endpoints, _end_edges(t, c))
        )
        comps.append(replace(c, endpoints=ends))
    comps += [replace(c, layer=c.layer + shift) for c in d2.components]
    return Tangle(tuple(comps), d1.trivial_loops + d2.trivial_loops)


def _end_edges(t: Triangulation, c: Component) -> Tuple[str, ...]:
    if c.kind != "arc":
        return ()
    (f0, i0, _), (f1, _, j1) = c.passes[0], c.passes[-1]
    return t.label((f0, i0)), t.label((f1, j1))


# ------------------------------------------------------------ straightening

def straighten(t: Triangulation, d: Tangle) -> Tuple[Laurent, Tangle]:
    """Slide chords that enter and leave a face through the same interior
    edge back across it, and drop loops that collapse.

    Returns (scalar, tangle).  Returning chords on boundary edges are kept.
    """
    check_tangle(t, d, normal=False)
    comps = []
    loops = d.trivial_loops
    for c in d.components:
        ps = list(c.passes)
        while True:
            n = len(ps)
            k = next(
                (k for k, (f, i, j) in enumerate(ps) if i == j and t.glued((f, i)) is not None),
                None,
            )
            if k is None:
                break
            if c.kind == "arc":
                # an interior returning chord always has neighbours in an arc
                prev, nxt = ps[k - 1], ps[k + 1]
                ps[k - 1:k + 2] = [(prev[0], prev[1], nxt[2])]
            elif n == 2:
                ps = []
                break
            else:
                ps = ps[k:] + ps[:k]
                prev, nxt = ps[-1], ps[1]
                ps = [(prev[0], prev[1], nxt[2])] + ps[2:-1]
        if c.kind == "loop" and not ps:
            loops += 1
            continue
        comps.append(replace(c, passes=tuple(ps)))
    out = Tangle(tuple(comps), d.trivial_loops)
    extra = loops - d.trivial_loops
    return (LOOP ** extra if extra else ONE), out


def is_normal_tangle(d: Tangle) -> bool:
    return all(i != j for c in d.components for _, i, j in c.passes)


# ----------------------------------------------------------- random input

def normal_curves(t: Triangulation, counts: Dict[str, int]) -> List[Component]:
    """Components of the normal multicurve meeting edge e counts[e] times."""
    corner = []
    for f, face in enumerate(t.faces):
        n = [counts[e] for e in face]
        row = [0, 0, 0]
        for k in range(3):
            # corner k sits between slot k-1 and slot k
            x2 = n[(k - 1) % 3] + n[k] - n[(k + 1) % 3]
            if x2 < 0 or x2 % 2:
                raise SurfaceError(f"edge counts {n} are not normal in face {f}")
            row[k] = x2 // 2
        corner.append(row)
    comps = []
    for kind, tr in _trace(t, corner):
        comps.append(Component(kind, tuple((f, i, j) for f, i, j, _, _ in tr)))
    return comps


def random_tangle(
    t: Triangulation,
    rng: random.Random,
    max_count: int = 2,
    layer: int = 0,
    loops: bool = True,
) -> Tangle:
    """A random crossing-free normal tangle with random states and heights."""
    while True:
        counts = {e: rng.randint(0, max_count) for e in t.edges}
        try:
            comps = normal_curves(t, counts)
        except SurfaceError:
            continue
        if not loops and any(c.kind == "loop" for c in comps):
            continue
        break
    out = []
    for c in comps:
        ends = ((rng.choice((1, -1)), None), (rng.choice((1, -1)), None)) if c.kind == "arc" else ()
        out.append(replace(c, endpoints=ends, layer=layer))
    d = default_heights(t, Tangle(tuple(out)))
    # shuffle heights on each boundary edge
    per_edge: Dict[str, List[Tuple[int, int]]] = {}
    for k, c in enumerate(d.components):
        for side, e in enumerate(_end_edges(t, c)):
            per_edge.setdefault(e, []).append((k, side))
    ends = {k: list(c.endpoints) for k, c in enumerate(d.components)}
    for pts in per_edge.values():
        hs = list(range(len(pts)))
        rng.shuffle(hs)
        for (k, side), h in zip(pts, hs):
            ends[k][side] = (ends[k][side][0], h)
    return Tangle(tuple(replace(c, endpoints=tuple(ends[k])) for k, c in enumerate(d.components)))
