"""Cell complexes built from diagrams.

A colored diagram yields one ideal tetrahedron per crossing; faces are
glued along strand adjacency.  Four tetrahedra coming from one doubled
crossing assemble into an octahedron.  For a doubled tangle diagram the
octahedra are completed, per original crossing, with two distinguished
vertices (the poles, written +inf/-inf) and extra edge identifications,
giving the octahedral triangulation of the diagram.

Each tetrahedron has four labelled vertices: vertex 0 sits on the core
of the over strand, vertex 1 on the core of the under strand, and
vertices 2 and 3 are the two octahedron equator (sliver) vertices next
to it.  The thickness pattern of a tetrahedron determines where it
sits inside its octahedron (thin-thin at the bottom, thick-thick at
the top, thick-under on the left, thick-over on the right), hence
which two of its legs face the inside of the octahedron and which
cluster corners its slivers occupy.  Faces at inside legs consist of
both core vertices and the sliver shared with the neighbouring
tetrahedron; faces at outside legs consist of one core vertex (the one
on the strand piercing the face) and both slivers.  Two adjacent faces
are glued with the marked vertices attached: core to core, and sliver
to sliver so that the sliver sitting inside the doubled band (the one
at the same cluster corner as the leg) maps to its counterpart.  The
conventions are pinned by two checks: the four tetrahedra of a doubled
crossing must assemble into an octahedron, and the octahedral complex
of a closed diagram must be a manifold (sphere links at the poles,
torus links at the cusps).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, Token, UP, DOWN, double_diagram

LEGS = ("bl", "br", "tl", "tr")
VERTS = (0, 1, 2, 3)

# Octahedron role names for the two core vertices.
OVER_CORE = 0
UNDER_CORE = 1

def _position(tok: Token) -> str:
    """Where a crossing's tetrahedron sits in its octahedron.

    Doubling thickens the copy on the left of each strand, so which
    side of the octahedron a thick copy passes depends on the strand
    direction: the bl-tr strand's thick copy runs through the left and
    top seats when oriented down (through bottom and right when up),
    and the br-tl strand's thick copy runs through the right and top
    seats when oriented up (through bottom and left when down).
    """
    nw = tok.thick == (tok.orient == DOWN)
    ne = tok.thick2 == (tok.orient2 == UP)
    if nw and ne:
        return "top"
    if nw:
        return "left"
    if ne:
        return "right"
    return "bottom"

# Per position: the cluster corners occupied by the sliver vertices 2
# and 3, and the inside legs with the sliver shared through each.
_SLIVER_CORNERS = {"bottom": ("bl", "br"), "left": ("bl", "tl"),
                   "right": ("br", "tr"), "top": ("tl", "tr")}
_INTERNAL_LEGS = {"bottom": {"tl": 2, "tr": 3}, "left": {"br": 2, "tr": 3},
                  "right": {"bl": 2, "tl": 3}, "top": {"bl": 2, "br": 3}}

# Pole conventions.  Around a doubled crossing the four sliver vertices
# sit at the cluster corners bl/br/tl/tr; the pair on the under strand's
# diagonal is pulled to +inf and the pair on the over strand's diagonal
# to -inf, independently of the strand orientations.  The +inf pair
# folds along the over-strand core, the -inf pair along the under-strand
# core.  Both conventions are pinned by the closed-diagram manifold
# checks (sphere links at the poles, torus links at the cusps), which
# single them out uniquely.
UP_PAIRS = {
    "x+": {(DOWN, UP): ("bl", "tr"), (UP, DOWN): ("bl", "tr"),
           (DOWN, DOWN): ("bl", "tr"), (UP, UP): ("bl", "tr")},
    "x-": {(DOWN, UP): ("br", "tl"), (UP, DOWN): ("br", "tl"),
           (DOWN, DOWN): ("br", "tl"), (UP, UP): ("br", "tl")},
}


class ComplexError(ValueError):
    """Raised when a complex cannot be built from the input."""


def _build_faces(tok: Token):
    """leg -> face descriptor.

    An inside face is ("int", sliver): both cores plus one sliver.  An
    outside face is ("ext", core, inner sliver, outer sliver), where
    the inner sliver is the one at the same cluster corner as the leg
    (it sits inside the doubled band leaving through that leg).
    """
    position = _position(tok)
    corners = _SLIVER_CORNERS[position]
    internal = _INTERNAL_LEGS[position]
    over_is_b = tok.kind == "x+"
    faces = {}
    for leg in LEGS:
        if leg in internal:
            faces[leg] = ("int", internal[leg])
            continue
        # strand bl-tr is the first (a) strand, br-tl the second (b)
        is_b = leg in ("br", "tl")
        core = OVER_CORE if is_b == over_is_b else UNDER_CORE
        inner = 2 + corners.index(leg)
        outer = 5 - inner
        faces[leg] = ("ext", core, inner, outer)
    return faces


def _face_vertices(face):
    if face[0] == "int":
        return (OVER_CORE, UNDER_CORE, face[1])
    return face[1:]


def _match_faces(face1, face2):
    """Vertex correspondence for gluing two faces.

    Outside faces are pierced by a strand whose core vertex may be the
    over core on one side and the under core on the other.  When the
    core roles differ the two slivers trade places (inner pairs with
    outer); when they agree the slivers pair straight.  This is the only
    correspondence that keeps the glued complex a manifold away from the
    distinguished vertices.
    """
    if face1[0] != face2[0]:
        raise ComplexError("cannot glue an inside face to an outside face")
    if face1[0] == "int":
        return [(OVER_CORE, OVER_CORE), (UNDER_CORE, UNDER_CORE),
                (face1[1], face2[1])]
    _, core1, inner1, outer1 = face1
    _, core2, inner2, outer2 = face2
    if core1 != core2:
        return [(core1, core2), (inner1, outer2), (outer1, inner2)]
    return [(core1, core2), (inner1, inner2), (outer1, outer2)]


@dataclass(frozen=True)
class ColoredTetrahedron:
    """One ideal tetrahedron, sitting at a crossing of a colored diagram."""

    index: int
    cell: tuple  # (row, col) of the crossing token
    kind: str
    under_thick: bool
    over_thick: bool
    position: str = field(compare=False)  # place within its octahedron
    faces: dict = field(compare=False)  # leg -> face descriptor

    @property
    def type(self):
        return (self.kind, self.under_thick, self.over_thick)

    def sliver_vertex(self, corner):
        """The local vertex (2 or 3) at the given cluster corner."""
        corners = _SLIVER_CORNERS[self.position]
        if corner not in corners:
            raise ComplexError(f"tetrahedron has no sliver at {corner}")
        return 2 + corners.index(corner)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class CellComplex:
    """Tetrahedra with face gluings and vertex/edge identifications.

    Vertices are (tet_index, vertex) pairs, or bare strings for added
    material vertices such as the poles.  Edges are (tet_index,
    frozenset of two vertices).  Face gluings match vertices core to
    core and sliver to sliver, inner sliver first.
    """

    def __init__(self, tetrahedra, gluings, boundary):
        self.tetrahedra = list(tetrahedra)
        self.gluings = list(gluings)  # ((tet, leg), (tet, leg))
        self.boundary = list(boundary)  # (tet, leg) with open legs
        self.vertices = _UnionFind()
        self.edges = _UnionFind()
        for tet in self.tetrahedra:
            for v in VERTS:
                self.vertices.find((tet.index, v))
            for i, a in enumerate(VERTS):
                for b in VERTS[i + 1:]:
                    self.edges.find((tet.index, frozenset((a, b))))
        for (t1, l1), (t2, l2) in self.gluings:
            f1 = self.tetrahedra[t1].faces[l1]
            f2 = self.tetrahedra[t2].faces[l2]
            pairs = _match_faces(f1, f2)
            for a, b in pairs:
                self.vertices.union((t1, a), (t2, b))
            for i in range(3):
                for j in range(i + 1, 3):
                    self.edges.union(
                        (t1, frozenset((pairs[i][0], pairs[j][0]))),
                        (t2, frozenset((pairs[i][1], pairs[j][1]))))

    # -- identifications used by the octahedral construction ------------

    def add_vertex(self, name):
        self.vertices.find(name)

    def identify_vertices(self, a, b):
        self.vertices.union(a, b)

    def identify_edges(self, a, b):
        self.edges.union(a, b)

    # -- statistics ------------------------------------------------------

    def face_count(self):
        return len(self.gluings) + len(self.boundary)

    def stats(self):
        v = len(self.vertices.classes())
        e = len(self.edges.classes())
        f = self.face_count()
        t = len(self.tetrahedra)
        return {
            "tetrahedra": t,
            "face_pairs": len(self.gluings),
            "boundary_faces": len(self.boundary),
            "edge_classes": e,
            "vertex_classes": v,
            "euler": v - e + f - t,
        }

    def vertex_class_sizes(self):
        return sorted(len(c) for c in self.vertices.classes().values())

    def vertex_link_euler(self, vertex):
        """Euler characteristic of the link surface of a vertex class.

        Only meaningful when every face is glued (closed complex): the
        link is then a closed surface triangulated with one triangle per
        tetrahedron corner in the class.
        """
        root = self.vertices.find(vertex)
        faces_l = 0
        for tet in self.tetrahedra:
            for v in VERTS:
                if self.vertices.find((tet.index, v)) == root:
                    faces_l += 1
        edges_l = 0
        for (t1, l1), _ in self.gluings:
            for a in _face_vertices(self.tetrahedra[t1].faces[l1]):
                if self.vertices.find((t1, a)) == root:
                    edges_l += 1
        verts_l = 0
        for members in self.edges.classes().values():
            tidx, pair = members[0]
            ends = sum(1 for v in pair
                       if self.vertices.find((tidx, v)) == root)
            verts_l += ends
        return verts_l - edges_l + faces_l


# ----------------------------------------------------------------------
# strand adjacency sweep
# ----------------------------------------------------------------------

def _leg_adjacency(diagram: Diagram):
    """Connections between crossing legs along the strands of a diagram.

    Returns (cells, links): ``cells`` maps (row, col) of each crossing
    token to a sequential index; ``links`` is a list of endpoint pairs
    where an endpoint is ("leg", index, leg_name) or ("bot"/"top", pos).
    """
    cells = {}
    links = []
    cup_count = 0
    cur = [("bot", i) for i in range(len(diagram.bottom))]
    for r, row in enumerate(diagram.rows):
        new = []
        offset = 0
        for c, tok in enumerate(row):
            take = cur[offset:offset + tok.in_width]
            offset += tok.in_width
            if tok.kind == "strand":
                new.append(take[0])
            elif tok.kind == "sym":
                new.extend([take[1], take[0]])
            elif tok.kind == "cap":
                links.append((take[0], take[1]))
            elif tok.kind == "cup":
                cup_count += 1
                new.extend([("cupL", cup_count), ("cupR", cup_count)])
            else:
                idx = cells.setdefault((r, c), len(cells))
                links.append((take[0], ("leg", idx, "bl")))
                links.append((take[1], ("leg", idx, "br")))
                new.extend([("leg", idx, "tl"), ("leg", idx, "tr")])
        cur = new
    for i, ep in enumerate(cur):
        links.append((ep, ("top", i)))
    # resolve cup junctions: chase chains through cup endpoints
    adj = {}
    for a, b in links:
        adj[a] = b
        adj[b] = a

    def other_side(ep):
        return ("cupR", ep[1]) if ep[0] == "cupL" else ("cupL", ep[1])

    resolved = []
    seen = set()
    for a, b in links:
        for start in (a, b):
            if start[0] in ("cupL", "cupR") or start in seen:
                continue
            seen.add(start)
            cur_ep = adj[start]
            while cur_ep[0] in ("cupL", "cupR"):
                cur_ep = adj[other_side(cur_ep)]
            seen.add(cur_ep)
            resolved.append((start, cur_ep))
    return cells, resolved


# ----------------------------------------------------------------------
# complex constructions
# ----------------------------------------------------------------------

def _crossing_type(tok: Token):
    """(kind, under_thick, over_thick) of a crossing token."""
    if tok.kind == "x+":
        return (tok.kind, tok.thick, tok.thick2)
    return (tok.kind, tok.thick2, tok.thick)


def build_C(diagram: Diagram) -> CellComplex:
    """One tetrahedron per crossing, glued along strand adjacency."""
    cells, links = _leg_adjacency(diagram)
    tets = [None] * len(cells)
    for (r, c), idx in cells.items():
        tok = diagram.rows[r][c]
        kind, ut, ot = _crossing_type(tok)
        tets[idx] = ColoredTetrahedron(idx, (r, c), kind, ut, ot,
                                       _position(tok), _build_faces(tok))
    gluings = []
    boundary = []
    for a, b in links:
        if a[0] == "leg" and b[0] == "leg":
            gluings.append(((a[1], a[2]), (b[1], b[2])))
        else:
            for ep in (a, b):
                if ep[0] == "leg":
                    boundary.append((ep[1], ep[2]))
    return CellComplex(tets, gluings, boundary)


def _check_nonsplitting(diagram: Diagram):
    comps = diagram.components()
    crossings_of = [[] for _ in comps]
    # passages record (row, col, token, role); collect crossing passages
    passage_info = {}
    for ci, comp in enumerate(comps):
        for p in comp.passages:
            if p.token.kind in ("x+", "x-"):
                crossings_of[ci].append(p)
                passage_info.setdefault((p.row, p.col), []).append(ci)
    if not passage_info:
        raise ComplexError("the diagram has no crossings")
    # connectivity of the component graph through shared crossings
    uf = _UnionFind()
    for ci in range(len(comps)):
        uf.find(ci)
    for members in passage_info.values():
        for ci in members[1:]:
            uf.union(members[0], ci)
    if len(uf.classes()) > 1:
        raise ComplexError("splitting diagram: components share no crossings")
    for ci, plist in enumerate(crossings_of):
        if not plist:
            raise ComplexError(f"splitting diagram: component {ci} "
                               "has no crossings")
        others = [p for p in plist
                  if len(set(passage_info[(p.row, p.col)])) > 1]
        if others:
            over = {p.role == ("b" if p.token.kind == "x+" else "a")
                    for p in others}
            if len(over) == 1:
                which = "over" if over.pop() else "under"
                raise ComplexError(f"splitting diagram: component {ci} "
                                   f"is all-{which}")


def _cluster_positions(provenance, tetrahedra):
    """Group doubled crossings by original crossing.

    Returns {orig_cell: {"bottom"/"left"/"right"/"top": tet_index}}.
    """
    grouped = {}
    for tet in tetrahedra:
        orig = provenance[tet.cell]
        seats = grouped.setdefault(orig, {})
        if tet.position in seats:
            raise ComplexError("doubled crossing with a repeated seat")
        seats[tet.position] = tet.index
    for orig, seats in grouped.items():
        if len(seats) != 4:
            raise ComplexError("doubled crossing does not have 4 copies")
    return grouped


def _pole_pairs(tok: Token, up_pairs=None):
    """(+inf corners, -inf corners) of the original crossing ``tok``."""
    up_pairs = up_pairs or UP_PAIRS
    up = up_pairs[tok.kind][(tok.orient, tok.orient2)]
    down = tuple(sorted(set(LEGS) - set(up)))
    return up, down


# the cluster position owning the sliver at each corner
_CORNER_OWNER = {"bl": "bottom", "br": "bottom", "tl": "top", "tr": "top"}


def build_O(diagram: Diagram, up_pairs=None) -> CellComplex:
    """The octahedral complex of a tangle diagram.

    Doubles the diagram, builds the colored complex, then completes each
    crossing's octahedron with the two poles and the extra edge
    identifications.  Rejects splitting or crossingless diagrams.
    """
    if diagram.colored:
        raise ComplexError("the octahedral complex takes uncolored diagrams")
    _check_nonsplitting(diagram)
    prov = {}
    doubled = double_diagram(diagram, provenance=prov)
    cx = build_C(doubled)
    cx.add_vertex("+inf")
    cx.add_vertex("-inf")
    positions = _cluster_positions(prov, cx.tetrahedra)
    for orig, pos in positions.items():
        tok = diagram.rows[orig[0]][orig[1]]
        up_pair, down_pair = _pole_pairs(tok, up_pairs)
        # each corner sliver is represented in the tetrahedron owning it
        for pair, pole, core in ((up_pair, "+inf", OVER_CORE),
                                 (down_pair, "-inf", UNDER_CORE)):
            eds = []
            for corner in pair:
                tidx = pos[_CORNER_OWNER[corner]]
                sv = cx.tetrahedra[tidx].sliver_vertex(corner)
                cx.identify_vertices(pole, (tidx, sv))
                # the pole pair folds along the corresponding core
                eds.append((tidx, frozenset((core, sv))))
            cx.identify_edges(*eds)
    return cx


def complex_stats(cx: CellComplex) -> dict:
    return cx.stats()
