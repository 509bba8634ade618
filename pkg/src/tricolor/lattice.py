"""Triangular color-code lattices and path algebra.

The code is laid out on a triangular patch of the honeycomb lattice.  All
construction happens on an integer grid ``(r, c)`` with ``0 <= c <= r``:
points with ``(r + c) % 3 == 1`` are stabilizer faces (one X-type and one
Z-type generator each), the remaining points are data qubits.  The dual
lattice has one vertex per stabilizer plus one boundary vertex per color;
its faces are the data qubits, and every face touches exactly one vertex
of each color.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

RED, GREEN, BLUE = 0, 1, 2
COLOR_NAMES = ("R", "G", "B")
COLOR_PAIRS = ((RED, GREEN), (RED, BLUE), (GREEN, BLUE))

# Grid displacements from a face center to its (up to) six qubits, listed
# clockwise starting from north-east.  The index in this tuple + 1 is the
# position label used by CNOT schedules.
FACE_NEIGHBOR_OFFSETS = ((-1, 0), (0, 1), (1, 1), (1, 0), (0, -1), (-1, -1))


class InvalidDistanceError(ValueError):
    pass


class NotConnectableError(ValueError):
    pass


class RegionSplitError(ValueError):
    pass


def grid_class(r: int, c: int) -> int:
    """0/2 for data qubits, 1 for stabilizer faces."""
    return (r + c) % 3


def face_color(r: int, c: int) -> int:
    return (c - r + 1) % 3


@dataclass(frozen=True)
class DualVertex:
    id: int
    color: int
    pos: tuple[int, int] | None
    boundary: bool
    region: int | None = None

    @property
    def carries_syndrome(self) -> bool:
        return not self.boundary


@dataclass(frozen=True)
class DualFace:
    """A data qubit, i.e. a triangular face of the dual lattice."""

    id: int
    pos: tuple[int, int]
    vertex_by_color: tuple[int, int, int]
    region: int | None = None

    @property
    def vertex_ids(self) -> tuple[int, int, int]:
        return self.vertex_by_color


@dataclass
class PrimalLattice:
    d: int
    qubit_pos: list[tuple[int, int]]
    stabilizers: list[tuple[int, ...]]  # per face: supported qubit ids
    stabilizer_colors: list[int]
    boundary_strings: dict[int, tuple[int, ...]]  # color -> logical support

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_pos)


class DualLattice:
    """Dual lattice: stabilizer vertices, boundary vertices, qubit faces.

    Immutable after construction; shared freely between threads/processes.
    """

    def __init__(self, d: int, kind: str = "triangle"):
        self.d = d
        self.kind = kind
        self.vertices: list[DualVertex] = []
        self.faces: list[DualFace] = []
        self.edges: list[tuple[int, int]] = []
        self.edge_faces: dict[tuple[int, int], tuple[int, ...]] = {}
        self.adj: dict[int, list[int]] = {}
        self.vertex_faces: dict[int, list[int]] = {}
        self.boundary_ids: dict[str, int] = {}
        self.face_id_by_pos: dict[tuple[int, int], int] = {}
        self.vertex_id_by_pos: dict[tuple[int, int], int] = {}
        self.boundary_strings: dict[int, tuple[int, ...]] = {}
        self.pairs: list[tuple[int, int]] = []  # Bell pairs (surgery middle)

    # -- construction helpers -------------------------------------------

    def _add_vertex(self, color, pos, boundary, region=None) -> int:
        vid = len(self.vertices)
        self.vertices.append(DualVertex(vid, color, pos, boundary, region))
        if pos is not None:
            self.vertex_id_by_pos[pos] = vid
        return vid

    def _add_face(self, pos, triangle: dict[int, int], region=None) -> int:
        fid = len(self.faces)
        vbc = tuple(triangle[c] for c in (RED, GREEN, BLUE))
        self.faces.append(DualFace(fid, pos, vbc, region))
        self.face_id_by_pos[pos] = fid
        return fid

    def _finalize(self):
        edge_faces: dict[tuple[int, int], list[int]] = {}
        for f in self.faces:
            vids = sorted(f.vertex_by_color)
            for i in range(3):
                for j in range(i + 1, 3):
                    e = (vids[i], vids[j])
                    edge_faces.setdefault(e, []).append(f.id)
        self.edges = sorted(edge_faces)
        self.edge_faces = {e: tuple(sorted(fs)) for e, fs in edge_faces.items()}
        adj: dict[int, set[int]] = {v.id: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = {v: sorted(ns) for v, ns in adj.items()}
        vertex_faces: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for f in self.faces:
            for vid in set(f.vertex_by_color):
                vertex_faces[vid].append(f.id)
        self.vertex_faces = {v: sorted(fs) for v, fs in vertex_faces.items()}

    # -- queries ---------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def syndrome_of(self, face_set) -> set[int]:
        """Syndrome-carrying vertices adjacent to an odd number of faces."""
        count: dict[int, int] = {}
        for fid in face_set:
            for vid in set(self.faces[fid].vertex_by_color):
                count[vid] = count.get(vid, 0) + 1
        return {
            v for v, n in count.items()
            if n % 2 == 1 and not self.vertices[v].boundary
        }

    def stabilizer_support(self, vid: int) -> list[int]:
        return self.vertex_faces[vid]

    def face_adjacency(self) -> list[tuple[int, int, tuple[int, int]]]:
        """(face_a, face_b, shared_edge) for every interior dual edge."""
        out = []
        for e, fs in self.edge_faces.items():
            if len(fs) == 2:
                out.append((fs[0], fs[1], e))
        return out

    def dump_json(self) -> str:
        def xy(pos):
            if pos is None:
                return None, None
            r, c = pos
            return c - r / 2.0, -float(r)

        vertices = []
        for v in self.vertices:
            x, y = xy(v.pos)
            vertices.append(
                {"id": v.id, "color": COLOR_NAMES[v.color], "x": x, "y": y,
                 "boundary": v.boundary}
            )
        payload = {
            "d": self.d,
            "kind": self.kind,
            "vertices": vertices,
            "faces": [{"id": f.id, "vertex_ids": sorted(f.vertex_by_color)}
                      for f in self.faces],
            "edges": [list(e) for e in self.edges],
        }
        return json.dumps(payload, indent=1, sort_keys=True)


def _triangle_points(d: int):
    rmax = 3 * (d - 1) // 2
    return [(r, c) for r in range(rmax + 1) for c in range(r + 1)], rmax


def build_triangular_code(d: int) -> tuple[PrimalLattice, DualLattice]:
    """Construct the distance-``d`` triangular color code (primal + dual)."""
    if d < 3 or d % 2 == 0:
        raise InvalidDistanceError(f"distance must be odd and >= 3, got {d}")
    points, rmax = _triangle_points(d)
    in_grid = set(points)

    dual = DualLattice(d, "triangle")
    qubit_pos = sorted(p for p in points if grid_class(*p) != 1)
    face_pos = sorted(p for p in points if grid_class(*p) == 1)
    qubit_id = {p: i for i, p in enumerate(qubit_pos)}

    for pos in face_pos:
        dual._add_vertex(face_color(*pos), pos, boundary=False)
    v_r = dual._add_vertex(RED, None, boundary=True)
    v_g = dual._add_vertex(GREEN, None, boundary=True)
    v_b = dual._add_vertex(BLUE, None, boundary=True)
    dual.boundary_ids = {"R": v_r, "G": v_g, "B": v_b}
    side_vertex = {RED: v_r, GREEN: v_g, BLUE: v_b}

    for pos in qubit_pos:
        r, c = pos
        triangle: dict[int, int] = {}
        for dr, dc in FACE_NEIGHBOR_OFFSETS:
            q = (r + dr, c + dc)
            if q in in_grid and grid_class(*q) == 1:
                triangle[face_color(*q)] = dual.vertex_id_by_pos[q]
        missing = [col for col in (RED, GREEN, BLUE) if col not in triangle]
        # Boundary qubits complete their triangle with the boundary vertex
        # of each missing color: bottom side is red, left green, right blue.
        for col in missing:
            triangle[col] = side_vertex[col]
        if r == rmax:
            assert RED in missing or len(missing) == 0
        dual._add_face(pos, triangle)
    dual._finalize()

    stabilizers = []
    stab_colors = []
    for pos in face_pos:
        r, c = pos
        supp = []
        for dr, dc in FACE_NEIGHBOR_OFFSETS:
            q = (r + dr, c + dc)
            if q in in_grid and grid_class(*q) != 1:
                supp.append(qubit_id[q])
        stabilizers.append(tuple(sorted(supp)))
        stab_colors.append(face_color(*pos))

    bottom = tuple(qubit_id[(rmax, c)] for c in range(rmax + 1)
                   if grid_class(rmax, c) != 1)
    left = tuple(qubit_id[(r, 0)] for r in range(rmax + 1)
                 if grid_class(r, 0) != 1)
    right = tuple(qubit_id[(r, r)] for r in range(rmax + 1)
                  if grid_class(r, r) != 1)
    strings = {RED: bottom, GREEN: left, BLUE: right}
    primal = PrimalLattice(d, qubit_pos, stabilizers, stab_colors, strings)
    dual.boundary_strings = strings
    return primal, dual


class RestrictedLattice:
    """Dual lattice with one color class removed."""

    def __init__(self, dual: DualLattice, pair: tuple[int, int]):
        pair = tuple(sorted(pair))
        if pair not in COLOR_PAIRS:
            raise ValueError(f"invalid color pair {pair}")
        self.dual = dual
        self.pair = pair
        keep = set(pair)
        self.vertex_ids = [v.id for v in dual.vertices if v.color in keep]
        vset = set(self.vertex_ids)
        self.edges = [e for e in dual.edges if e[0] in vset and e[1] in vset]
        adj: dict[int, set[int]] = {v: set() for v in self.vertex_ids}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = {v: sorted(ns) for v, ns in adj.items()}
        self.boundary_vertex_ids = [
            v for v in self.vertex_ids if dual.vertices[v].boundary
        ]

    @property
    def vertices(self):
        return [self.dual.vertices[v] for v in self.vertex_ids]


def restrict(dual: DualLattice, pair: tuple[int, int]) -> RestrictedLattice:
    return RestrictedLattice(dual, pair)


class Lattice3D:
    """Layered lattice: every layer is a copy of the base graph, with
    vertical edges between identical vertices of adjacent layers.

    Layers are 1-indexed to match round counting.
    """

    def __init__(self, base, n_layers: int):
        if n_layers < 1:
            raise ValueError("need at least one layer")
        self.base = base
        self.n_layers = n_layers

    def has_node(self, node) -> bool:
        v, t = node
        return v in self.base.adj and 1 <= t <= self.n_layers

    def neighbors(self, node):
        v, t = node
        out = [(u, t) for u in self.base.adj[v]]
        if t > 1:
            out.append((v, t - 1))
        if t < self.n_layers:
            out.append((v, t + 1))
        return out

    def has_edge(self, a, b) -> bool:
        (u, s), (v, t) = a, b
        if not (self.has_node(a) and self.has_node(b)):
            return False
        if s == t:
            return v in self.base.adj[u]
        return u == v and abs(s - t) == 1

    @property
    def num_vertices(self) -> int:
        return len(self.base.adj) * self.n_layers


def extend_3d(base, n_layers: int) -> Lattice3D:
    return Lattice3D(base, n_layers)


class Path:
    """A vertex sequence in a lattice or graph.

    Nodes are either plain vertex ids (2-D) or ``(vertex, layer)`` pairs.
    """

    def __init__(self, nodes):
        nodes = list(nodes)
        if not nodes:
            raise ValueError("empty path")
        self.nodes = nodes

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __eq__(self, other):
        return isinstance(other, Path) and self.nodes == other.nodes

    def __repr__(self):
        return f"Path({self.nodes!r})"

    @property
    def endpoints(self):
        return (self.nodes[0], self.nodes[-1])

    @property
    def enclosed(self) -> bool:
        return len(self.nodes) > 1 and self.nodes[0] == self.nodes[-1]

    def reverse(self) -> "Path":
        return Path(self.nodes[::-1])

    def edge_footprint(self) -> set[tuple]:
        """Edges traversed an odd number of times."""
        seen: set[tuple] = set()
        for a, b in zip(self.nodes, self.nodes[1:]):
            if a == b:
                continue
            e = (a, b) if a <= b else (b, a)
            seen.symmetric_difference_update({e})
        return seen


def connect(s1: Path, s2: Path) -> Path:
    """Connection of two paths sharing an endpoint.

    The result traverses ``s1`` (or its reverse) and then ``s2`` (or its
    reverse) through the shared endpoint.
    """
    a0, a1 = s1.endpoints
    b0, b1 = s2.endpoints
    if a1 == b0:
        return Path(s1.nodes + s2.nodes[1:])
    if a1 == b1:
        return Path(s1.nodes + s2.nodes[-2::-1])
    if a0 == b0:
        return Path(s1.nodes[::-1] + s2.nodes[1:])
    if a0 == b1:
        return Path(s1.nodes[::-1] + s2.nodes[-2::-1])
    raise NotConnectableError(f"paths share no endpoint: {a0, a1} / {b0, b1}")


def project(path: Path) -> Path:
    """Project a 3-D path onto the base lattice (vertical edges vanish)."""
    flat = []
    for node in path.nodes:
        v = node[0] if isinstance(node, tuple) else node
        if not flat or flat[-1] != v:
            flat.append(v)
    if not flat:
        flat = [path.nodes[0][0]]
    return Path(flat)


@dataclass
class SubareaMap:
    """Partition of the dual faces used when a projected path does not
    split the lattice globally (open time boundaries).

    ``extra_adjacency`` holds face adjacencies that only exist inside a
    subarea (e.g. across a seam boundary vertex of a merged lattice).
    """

    assignment: dict[int, object]
    extra_adjacency: list[tuple[int, int, tuple[int, int]]] = field(
        default_factory=list
    )

    def groups(self) -> dict[object, list[int]]:
        out: dict[object, list[int]] = {}
        for fid, key in self.assignment.items():
            out.setdefault(key, []).append(fid)
        return {k: sorted(v) for k, v in out.items()}


def _two_color(face_ids, adjacency, cut) -> dict[int, int] | None:
    """2-color faces so adjacent ones differ iff their shared edge is cut.

    Returns None when no consistent coloring exists.
    """
    neigh: dict[int, list[tuple[int, int]]] = {f: [] for f in face_ids}
    for a, b, e in adjacency:
        flip = 1 if e in cut else 0
        neigh[a].append((b, flip))
        neigh[b].append((a, flip))
    color: dict[int, int] = {}
    for start in face_ids:
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for g, flip in neigh[f]:
                want = color[f] ^ flip
                if g in color:
                    if color[g] != want:
                        return None
                else:
                    color[g] = want
                    stack.append(g)
    return color


def _smaller_side(face_ids, color) -> set[int]:
    side = {0: [], 1: []}
    for f in face_ids:
        side[color[f]].append(f)
    n0, n1 = len(side[0]), len(side[1])
    if n0 != n1:
        return set(side[0] if n0 < n1 else side[1])
    if n0 == 0:
        return set()
    # Tie: take the side containing the lexicographically smallest face id.
    return set(side[0] if min(side[0]) < min(side[1]) else side[1])


def split_regions(dual: DualLattice, path, subareas: SubareaMap | None = None
                  ) -> set[int]:
    """Correction region selected by a projected path.

    The path's mod-2 edge footprint cuts the face set in two; the smaller
    region is returned.  When the cut does not close up globally (the path
    ends at an undetermined boundary inside the lattice), the smaller
    region is selected independently inside every subarea.
    """
    if isinstance(path, Path):
        cut = path.edge_footprint()
    else:
        cut = set(path)
    if not cut:
        return set()
    all_faces = [f.id for f in dual.faces]
    global_adj = dual.face_adjacency()
    color = _two_color(all_faces, global_adj, cut)
    if color is not None:
        # A cut along outer boundary edges only (flanked by a single face)
        # may separate nothing: that is a valid empty correction.
        return _smaller_side(all_faces, color)
    if subareas is None:
        raise RegionSplitError(
            "path does not divide the lattice and no subareas were given"
        )
    groups = subareas.groups()
    flat = {f for fs in groups.values() for f in fs}
    if flat != set(all_faces):
        raise RegionSplitError("subarea map does not cover the face set")
    extra = subareas.extra_adjacency
    correction: set[int] = set()
    for key, fids in groups.items():
        fset = set(fids)
        adj = [(a, b, e) for a, b, e in global_adj if a in fset and b in fset]
        adj += [(a, b, e) for a, b, e in extra if a in fset and b in fset]
        col = _two_color(fids, adj, cut)
        if col is None:
            raise RegionSplitError(f"inconsistent cut inside subarea {key}")
        correction ^= _smaller_side(fids, col)
    return correction
