"""Planar tangle diagrams as rows of Morse tokens.

A diagram is a grid of rows read bottom-to-top.  Each row is a list of
tokens placed side by side; a token consumes a contiguous block of strand
endpoints from below and produces a block above.  Tokens:

- ``strand``: a vertical strand segment (1 in, 1 out).
- ``cap``: a local maximum joining two adjacent strands (2 in, 0 out).
- ``cup``: a local minimum creating two adjacent strands (0 in, 2 out).
- ``x+`` / ``x-``: a crossing (2 in, 2 out).  The two strands are the
  diagonal from bottom-left to top-right (slot ``a``) and the diagonal
  from bottom-right to top-left (slot ``b``).  In ``x+`` the ``b`` strand
  passes over; in ``x-`` the ``a`` strand passes over.
- ``sym``: a symmetry (transposition without over/under data), only
  allowed in colored diagrams.

Orientations are per-strand directions: ``up``/``down`` for strands and
crossing slots; ``lr``/``rl`` for extrema giving the direction of travel
through the extremum (an ``lr`` cap is entered going up its left leg; an
``lr`` cup is entered going down its left leg).

Colored diagrams additionally mark each strand thin or thick.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

UP = "up"
DOWN = "down"
LR = "lr"
RL = "rl"

TOKEN_KINDS = ("strand", "cap", "cup", "x+", "x-", "sym")
CROSSING_KINDS = ("x+", "x-", "sym")


class DiagramError(ValueError):
    """Raised for malformed diagram data."""


@dataclass(frozen=True)
class Token:
    """One Morse token.

    For ``strand``: ``orient`` in {up, down}, ``thick`` a bool.
    For ``cap``/``cup``: ``orient`` in {lr, rl}, ``thick`` a bool.
    For crossings and ``sym``: ``orient``/``thick`` describe the ``a``
    strand (bottom-left to top-right) and ``orient2``/``thick2`` the
    ``b`` strand (bottom-right to top-left).
    """

    kind: str
    orient: str
    thick: bool = False
    orient2: Optional[str] = None
    thick2: Optional[bool] = None

    def __post_init__(self):
        if self.kind not in TOKEN_KINDS:
            raise DiagramError(f"unknown token kind {self.kind!r}")
        if self.kind in CROSSING_KINDS:
            if self.orient not in (UP, DOWN) or self.orient2 not in (UP, DOWN):
                raise DiagramError(f"crossing token needs up/down orientations, got {self}")
            if self.thick2 is None:
                raise DiagramError("crossing token needs both thickness flags")
        elif self.kind == "strand":
            if self.orient not in (UP, DOWN):
                raise DiagramError(f"strand orientation must be up/down, got {self.orient!r}")
        else:
            if self.orient not in (LR, RL):
                raise DiagramError(f"extremum orientation must be lr/rl, got {self.orient!r}")

    @property
    def in_width(self) -> int:
        return {"strand": 1, "cap": 2, "cup": 0}.get(self.kind, 2)

    @property
    def out_width(self) -> int:
        return {"strand": 1, "cap": 0, "cup": 2}.get(self.kind, 2)

    def in_points(self):
        """Endpoint data consumed from below, left to right: (orient, thick)."""
        if self.kind == "strand":
            return [(self.orient, self.thick)]
        if self.kind == "cap":
            # lr: travel up the left leg, down the right leg.
            if self.orient == LR:
                return [(UP, self.thick), (DOWN, self.thick)]
            return [(DOWN, self.thick), (UP, self.thick)]
        if self.kind == "cup":
            return []
        return [(self.orient, self.thick), (self.orient2, self.thick2)]

    def out_points(self):
        """Endpoint data produced above, left to right: (orient, thick)."""
        if self.kind == "strand":
            return [(self.orient, self.thick)]
        if self.kind == "cap":
            return []
        if self.kind == "cup":
            # lr: travel down the left leg, up the right leg.
            if self.orient == LR:
                return [(DOWN, self.thick), (UP, self.thick)]
            return [(UP, self.thick), (DOWN, self.thick)]
        # Crossing: top-left carries the b strand, top-right the a strand.
        return [(self.orient2, self.thick2), (self.orient, self.thick)]

    def to_json(self):
        if self.kind in CROSSING_KINDS:
            return {
                "kind": self.kind,
                "orient": [self.orient, self.orient2],
                "thick": [self.thick, self.thick2],
            }
        return {"kind": self.kind, "orient": self.orient, "thick": self.thick}

    @staticmethod
    def from_json(obj) -> "Token":
        kind = obj.get("kind")
        orient = obj.get("orient")
        thick = obj.get("thick", False)
        if kind in CROSSING_KINDS:
            if not (isinstance(orient, (list, tuple)) and len(orient) == 2):
                raise DiagramError(f"crossing token needs a 2-list orientation, got {orient!r}")
            if isinstance(thick, (list, tuple)):
                t1, t2 = bool(thick[0]), bool(thick[1])
            else:
                t1 = t2 = bool(thick)
            return Token(kind, orient[0], t1, orient[1], t2)
        return Token(kind, orient, bool(thick))


def crossing_sign(tok: Token) -> int:
    """Sign of a crossing token (+1 positive, -1 negative).

    Uses the local direction vectors of the two strands: the a strand
    runs along (1,1)/(-1,-1), the b strand along (-1,1)/(1,-1).  The
    crossing is positive when the over strand is counterclockwise from
    the under strand.
    """
    if tok.kind not in ("x+", "x-"):
        raise DiagramError(f"not a crossing: {tok}")
    a = (1, 1) if tok.orient == UP else (-1, -1)
    b = (-1, 1) if tok.orient2 == UP else (1, -1)
    over, under = (b, a) if tok.kind == "x+" else (a, b)
    det = under[0] * over[1] - under[1] * over[0]
    return 1 if det > 0 else -1


@dataclass
class Passage:
    """One visit of a component to a token, in orientation order."""

    row: int
    col: int
    token: Token
    role: str  # "a" or "b" for 2-strand tokens; "cap"/"cup"/"strand"

    def key(self):
        return (self.row, self.col)


@dataclass
class Component:
    index: int
    closed: bool
    thick: bool
    passages: list = field(default_factory=list)

    @property
    def lr_max_count(self):
        return sum(1 for p in self.passages if p.token.kind == "cap" and p.token.orient == LR)

    @property
    def lr_min_count(self):
        return sum(1 for p in self.passages if p.token.kind == "cup" and p.token.orient == LR)


@dataclass
class Diagram:
    """A tangle diagram: boundary endpoints at the bottom plus token rows."""

    colored: bool
    bottom: list  # list of (orient, thick)
    rows: list  # list of list[Token]

    # ------------------------------------------------------------------
    # structural validation and traversal
    # ------------------------------------------------------------------

    def scan(self):
        """Validate the grid and return (segments, attachments, top_boundary).

        Segments are numbered strand intervals between consecutive rows.
        ``attachments`` maps each segment id to its lower and upper ends,
        each either ("bottom", pos) / ("top", pos) or (row, col, port).
        """
        seg_data = []  # sid -> (orient, thick)
        lower = {}
        upper = {}

        def new_seg(orient, thick, low):
            sid = len(seg_data)
            seg_data.append((orient, thick))
            lower[sid] = low
            return sid

        current = []
        for pos, (orient, thick) in enumerate(self.bottom):
            if orient not in (UP, DOWN):
                raise DiagramError(f"bottom point {pos}: orientation must be up/down")
            if thick and not self.colored:
                raise DiagramError("thick strands require a colored diagram")
            current.append(new_seg(orient, bool(thick), ("bottom", pos)))

        bottom_ports = {"strand": ["in"], "cap": ["l_in", "r_in"], "cup": [],
                        "x+": ["bl", "br"], "x-": ["bl", "br"], "sym": ["bl", "br"]}
        top_ports = {"strand": ["out"], "cap": [], "cup": ["l_out", "r_out"],
                     "x+": ["tl", "tr"], "x-": ["tl", "tr"], "sym": ["tl", "tr"]}

        for r, row in enumerate(self.rows):
            offset = 0
            nxt = []
            for c, tok in enumerate(row):
                if not self.colored:
                    if tok.kind == "sym":
                        raise DiagramError(f"row {r} col {c}: sym token in uncolored diagram")
                    if tok.thick or tok.thick2:
                        raise DiagramError(f"row {r} col {c}: thick strand in uncolored diagram")
                ins = current[offset:offset + tok.in_width]
                if len(ins) != tok.in_width:
                    raise DiagramError(f"row {r} col {c}: not enough strands below token")
                want = tok.in_points()
                for k, sid in enumerate(ins):
                    got = seg_data[sid]
                    if got != want[k]:
                        raise DiagramError(
                            f"row {r} col {c}: leg {k} expects {want[k]}, strand below is {got}")
                    upper[sid] = (r, c, bottom_ports[tok.kind][k])
                for k, (orient, thick) in enumerate(tok.out_points()):
                    nxt.append(new_seg(orient, thick, (r, c, top_ports[tok.kind][k])))
                offset += tok.in_width
            if offset != len(current):
                raise DiagramError(f"row {r}: width {offset} does not match {len(current)} strands below")
            current = nxt
        for pos, sid in enumerate(current):
            upper[sid] = ("top", pos)
        return seg_data, lower, upper, current

    def top(self):
        """Endpoint data (orient, thick) along the top boundary."""
        seg_data, _, _, current = self.scan()
        return [seg_data[s] for s in current]

    def components(self):
        """Split the diagram into oriented components.

        Open components are listed first, ordered by their smallest bottom
        boundary position (components touching only the top come after,
        by smallest top position); closed components follow in scan order.
        Each component's passages are listed along its orientation.
        """
        seg_data, lower, upper, _ = self.scan()
        # internal pairing of ports within a token
        pair = {"in": "out", "out": "in", "l_in": "r_in", "r_in": "l_in",
                "l_out": "r_out", "r_out": "l_out",
                "bl": "tr", "tr": "bl", "br": "tl", "tl": "br"}
        is_top_port = {"out", "l_out", "r_out", "tl", "tr"}
        # map (row, col, port) -> segment id
        port_seg = {}
        for sid in range(len(seg_data)):
            for att in (lower[sid], upper[sid]):
                if att[0] not in ("bottom", "top"):
                    port_seg[att] = sid

        def role_of(port):
            if port in ("bl", "tr"):
                return "a"
            if port in ("br", "tl"):
                return "b"
            if port in ("in", "out"):
                return "strand"
            if port in ("l_in", "r_in"):
                return "cap"
            return "cup"

        visited = set()

        def walk(sid, going_up, collect):
            """Follow from segment sid; returns boundary attachment or None on a loop."""
            start = (sid, going_up)
            while True:
                visited.add(sid)
                att = upper[sid] if going_up else lower[sid]
                if att[0] in ("bottom", "top"):
                    return att
                r, c, port = att
                collect.append(Passage(r, c, self.rows[r][c], role_of(port)))
                other_port = pair[port]
                sid = port_seg[(r, c, other_port)]
                # exiting through a top port means we continue upward
                going_up = other_port in is_top_port
                if (sid, going_up) == start:
                    return None

        comps = []
        # open components: start from every boundary endpoint where the strand enters
        for sid, (orient, thick) in enumerate(seg_data):
            going_up = None
            if lower[sid][0] == "bottom" and orient == UP:
                going_up = True
            elif upper[sid][0] == "top" and orient == DOWN:
                going_up = False
            if going_up is None or sid in visited:
                continue
            passages = []
            start_att = lower[sid] if going_up else upper[sid]
            end_att = walk(sid, going_up, passages)
            comp = Component(len(comps), False, thick, passages)
            comp.endpoints = (start_att, end_att)
            comps.append(comp)

        def open_key(comp):
            botpos = [k[1] for k in comp.endpoints if k[0] == "bottom"]
            toppos = [k[1] for k in comp.endpoints if k[0] == "top"]
            return (0, min(botpos)) if botpos else (1, min(toppos))

        open_comps = sorted(comps, key=open_key)
        # closed components: remaining segments in scan order
        closed = []
        for sid, (orient, thick) in enumerate(seg_data):
            if sid in visited:
                continue
            passages = []
            end = walk(sid, orient == UP, passages)
            if end is not None:
                raise DiagramError("traversal error: open walk from interior segment")
            comp = Component(0, True, thick, passages)
            comp.endpoints = ()
            closed.append(comp)
        out = []
        for comp in open_comps + closed:
            comp.index = len(out)
            out.append(comp)
        return out

    # ------------------------------------------------------------------
    # statistics
    # ------------------------------------------------------------------

    def component_stats(self):
        """Per-component dict: writhe, lr extrema counts and their difference."""
        comps = self.components()
        # map crossing cell -> set of component indices using it (a/b roles)
        cell_roles = {}
        for comp in comps:
            for p in comp.passages:
                if p.token.kind in ("x+", "x-"):
                    cell_roles.setdefault(p.key(), {})[p.role] = comp.index
        stats = []
        for comp in comps:
            writhe = 0
            seen = set()
            for p in comp.passages:
                if p.token.kind in ("x+", "x-") and p.key() not in seen:
                    roles = cell_roles[p.key()]
                    if roles.get("a") == comp.index and roles.get("b") == comp.index:
                        writhe += crossing_sign(p.token)
                        seen.add(p.key())
            stats.append({
                "closed": comp.closed,
                "thick": comp.thick,
                "writhe": writhe,
                "lr_max": comp.lr_max_count,
                "lr_min": comp.lr_min_count,
                "rotation": comp.lr_max_count - comp.lr_min_count,
            })
        return stats

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json(self):
        return {
            "colored": self.colored,
            "bottom": [{"orient": o, "thick": t} for o, t in self.bottom],
            "rows": [[tok.to_json() for tok in row] for row in self.rows],
        }

    @staticmethod
    def from_json(obj) -> "Diagram":
        try:
            colored = bool(obj.get("colored", False))
            bottom = [(p["orient"], bool(p.get("thick", False))) for p in obj.get("bottom", [])]
            rows = [[Token.from_json(t) for t in row] for row in obj.get("rows", [])]
        except (KeyError, TypeError, AttributeError) as exc:
            raise DiagramError(f"malformed diagram data: {exc}") from exc
        d = Diagram(colored, bottom, rows)
        d.scan()
        return d

    @staticmethod
    def load(path) -> "Diagram":
        with open(path, "r", encoding="utf-8") as fh:
            return Diagram.from_json(json.load(fh))


# ----------------------------------------------------------------------
# row-expansion helper used by left_normalize and doubling
# ----------------------------------------------------------------------

def _expand_rows(diagram: Diagram, colored_out: bool, expand_bottom, expand_token,
                 provenance=None):
    """Rebuild a diagram by replacing each token with a stack of rows.

    ``expand_bottom(orient, thick)`` returns the replacement list of bottom
    points for one boundary point.  ``expand_token(tok)`` returns a list of
    rows (bottom to top), each a list of tokens; the stack must consume the
    expanded inputs of ``tok`` and produce the expanded outputs.  Stacks in
    the same row are padded to equal height with vertical strands.

    If ``provenance`` is a dict it is filled with
    ``(new_row, new_col) -> (orig_row, orig_col)``.
    """
    new_bottom = []
    for o, t in diagram.bottom:
        new_bottom.extend(expand_bottom(o, t))
    new_rows = []
    for r, row in enumerate(diagram.rows):
        stacks = [expand_token(tok) for tok in row]
        height = max((len(s) for s in stacks), default=1)
        for stack in stacks:
            while len(stack) < height:
                tops = []
                for tok in stack[-1]:
                    tops.extend(tok.out_points())
                stack.append([Token("strand", o, t) for o, t in tops])
        for level in range(height):
            new_row = []
            for c, stack in enumerate(stacks):
                for tok in stack[level]:
                    if provenance is not None:
                        provenance[(len(new_rows), len(new_row))] = (r, c)
                    new_row.append(tok)
            new_rows.append(new_row)
    out = Diagram(colored_out, new_bottom, new_rows)
    out.scan()
    return out


# ----------------------------------------------------------------------
# left normalization: trade left-to-right extrema for right-to-left ones
# ----------------------------------------------------------------------

def left_normalize(diagram: Diagram) -> Diagram:
    """Replace every rl extremum by an lr extremum plus a kink crossing.

    An rl cap becomes a crossing with the downward leg passing under,
    then an lr cap (a -1 kink); an rl cup becomes an lr cup followed by a
    crossing with the downward leg passing over (a +1 kink).  The output
    has only left-to-right extrema; the choice of inserted crossing signs
    is the one under which the normalized doubled invariant matches the
    embedded universal invariant.
    """
    if diagram.colored:
        raise DiagramError("left normalization applies to uncolored diagrams")

    def expand(tok: Token):
        if tok.kind == "cap" and tok.orient == RL:
            return [[Token("x+", DOWN, tok.thick, UP, tok.thick)],
                    [Token("cap", LR, tok.thick)]]
        if tok.kind == "cup" and tok.orient == RL:
            return [[Token("cup", LR, tok.thick)],
                    [Token("x-", DOWN, tok.thick, UP, tok.thick)]]
        return [[tok]]

    return _expand_rows(diagram, diagram.colored, lambda o, t: [(o, t)], expand)


# ----------------------------------------------------------------------
# doubling: replace every strand by a parallel thick/thin pair
# ----------------------------------------------------------------------

def _pair_points(orient, thick_first_when_down=True):
    """Page order of the (thick, thin) copies of a strand.

    A downward strand carries its thick copy on the page-left side; an
    upward strand on the page-right side.
    """
    if orient == DOWN:
        return [(orient, True), (orient, False)]
    return [(orient, False), (orient, True)]


def double_diagram(diagram: Diagram, provenance=None) -> Diagram:
    """Double an uncolored diagram into a colored one.

    Every strand is replaced by a parallel pair (one thick, one thin);
    each crossing becomes a four-crossing cluster in which each copy of
    the over strand crosses over each copy of the under strand, and each
    extremum becomes a nested pair of extrema.
    """
    if diagram.colored:
        raise DiagramError("doubling applies to uncolored diagrams")

    def expand_bottom(orient, thick):
        return _pair_points(orient)

    def expand(tok: Token):
        if tok.kind == "strand":
            pts = _pair_points(tok.orient)
            return [[Token("strand", o, t) for o, t in pts]]
        if tok.kind == "cap":
            pts = tok.in_points()
            four = _pair_points(pts[0][0]) + _pair_points(pts[1][0])
            inner_thick = four[1][1]
            return [
                [Token("strand", four[0][0], four[0][1]),
                 Token("cap", tok.orient, inner_thick),
                 Token("strand", four[3][0], four[3][1])],
                [Token("cap", tok.orient, four[0][1])],
            ]
        if tok.kind == "cup":
            pts = tok.out_points()
            four = _pair_points(pts[0][0]) + _pair_points(pts[1][0])
            inner_thick = four[1][1]
            return [
                [Token("cup", tok.orient, four[0][1])],
                [Token("strand", four[0][0], four[0][1]),
                 Token("cup", tok.orient, inner_thick),
                 Token("strand", four[3][0], four[3][1])],
            ]
        if tok.kind in ("x+", "x-"):
            a_pair = _pair_points(tok.orient)
            b_pair = _pair_points(tok.orient2)
            # bottom of the cluster, left to right: a copies then b copies
            pts = list(a_pair) + list(b_pair)

            def sub(left, right):
                # left point rides the a slot of the sub-crossing
                return Token(tok.kind, left[0], left[1], right[0], right[1])

            p1, p2, p3, p4 = pts
            rows = [
                [Token("strand", *p1), sub(p2, p3), Token("strand", *p4)],
                [sub(p1, p3), sub(p2, p4)],
                [Token("strand", *p3), sub(p1, p4), Token("strand", *p2)],
            ]
            return rows
        raise DiagramError(f"cannot double token {tok.kind}")

    return _expand_rows(diagram, True, expand_bottom, expand, provenance)


def double_component_order(diagram: Diagram):
    """Component order of the doubled diagram grouped per original component.

    Returns ``(doubled, order)`` where ``order`` lists component indices
    of ``doubled`` so that positions (2i, 2i+1) hold the thin and thick
    copies of the i-th component of ``diagram``.
    """
    prov = {}
    doubled = double_diagram(diagram, provenance=prov)
    comps = doubled.components()
    orig = diagram.components()
    if len(comps) != 2 * len(orig):
        raise DiagramError("doubled diagram has unexpected component count")

    def cell_set(comp, mapper):
        # Copies ride the same diagonal slot as their original at every
        # crossing, so (cell, role) pairs identify the original component.
        return frozenset(
            (mapper(p), p.role) for p in comp.passages if p.token.kind != "strand")

    orig_cells = {cell_set(oc, lambda p: (p.row, p.col)): oc for oc in orig}
    order = [None] * (2 * len(orig))
    for c in comps:
        cells = cell_set(c, lambda p: prov[(p.row, p.col)])
        # padding strands were filtered out; sub-tokens map to original cells
        oc = orig_cells.get(cells)
        if oc is None:
            raise DiagramError("could not match a doubled copy to an original component")
        slot = 2 * oc.index + (1 if c.thick else 0)
        if order[slot] is not None:
            raise DiagramError("two doubled copies matched the same original component")
        order[slot] = c.index
    return doubled, order


# ----------------------------------------------------------------------
# convenience constructors
# ----------------------------------------------------------------------

def strand_token(orient=DOWN, thick=False):
    return Token("strand", orient, thick)


def crossing_token(kind, a_orient=DOWN, b_orient=DOWN, a_thick=False, b_thick=False):
    return Token(kind, a_orient, a_thick, b_orient, b_thick)
