"""Local rewriting moves on colored diagrams and move-pair generation.

Moves come in two families:

- the generating family (tag ``prime``): pair creation/removal of opposite
  crossings, Pachner-style crossing rearrangement, symmetry-token moves,
  and planar isotopies (zigzags, row slides);
- the exceptional rotations (tag ``exception``): rotating a crossing leg
  through an extremum whose closing cap runs right-to-left.  These
  preserve the colored invariant only when the antipode is an
  involution.

All rewrites return new diagrams; inputs are never mutated.  Every
rewrite re-validates its output.
"""

from __future__ import annotations

import random

from .diagram import DOWN, LR, RL, UP, Diagram, Token

TAG_PRIME = "prime"
TAG_EXCEPTION = "exception"


class MoveError(ValueError):
    """Raised when a move does not apply at the requested site."""


# ----------------------------------------------------------------------
# profile helpers
# ----------------------------------------------------------------------

def profile_at(diagram: Diagram, level: int):
    """Strand endpoint data (orient, thick) between rows level-1 and level."""
    if level < 0 or level > len(diagram.rows):
        raise MoveError(f"level {level} out of range")
    pts = list(diagram.bottom)
    for row in diagram.rows[:level]:
        nxt = []
        for tok in row:
            nxt.extend(tok.out_points())
        pts = nxt
    return pts


def _strand_row(points, override=None):
    """A row of vertical strands for the given profile, with optional
    ``override`` dict mapping position -> list of tokens replacing the
    strands starting there (consuming their in_width)."""
    override = override or {}
    row = []
    pos = 0
    while pos < len(points):
        if pos in override:
            toks = override[pos]
            for tok in toks:
                row.append(tok)
                pos += tok.in_width
        else:
            o, t = points[pos]
            row.append(Token("strand", o, t))
            pos += 1
    return row


def _rebuild(diagram: Diagram, rows) -> Diagram:
    out = Diagram(diagram.colored, list(diagram.bottom), rows)
    out.scan()
    return out


def insert_rows(diagram: Diagram, level: int, new_rows) -> Diagram:
    rows = diagram.rows[:level] + list(new_rows) + diagram.rows[level:]
    return _rebuild(diagram, rows)


# ----------------------------------------------------------------------
# pair creation / removal  (two opposite crossings)
# ----------------------------------------------------------------------

def insert_pair(diagram: Diagram, level: int, pos: int,
                first_kind: str = "x+") -> Diagram:
    """Insert a cancelling pair of crossings between two adjacent strands.

    The same strand passes over at both crossings, so the two labels are
    an element and its inverse.
    """
    pts = profile_at(diagram, level)
    if pos < 0 or pos + 1 >= len(pts):
        raise MoveError(f"no adjacent strand pair at position {pos}")
    if first_kind not in ("x+", "x-"):
        raise MoveError(f"bad crossing kind {first_kind}")
    second_kind = "x-" if first_kind == "x+" else "x+"
    a, b = pts[pos], pts[pos + 1]
    row1 = _strand_row(pts, {pos: [Token(first_kind, a[0], a[1], b[0], b[1])]})
    mid = list(pts)
    mid[pos], mid[pos + 1] = mid[pos + 1], mid[pos]
    row2 = _strand_row(mid, {pos: [Token(second_kind, b[0], b[1], a[0], a[1])]})
    return insert_rows(diagram, level, [row1, row2])


def remove_pair(diagram: Diagram, row: int, pos: int) -> Diagram:
    """Remove a cancelling crossing pair previously inserted at (row, pos)."""
    try:
        r1, r2 = diagram.rows[row], diagram.rows[row + 1]
    except IndexError:
        raise MoveError("no two rows at the site") from None
    pts = profile_at(diagram, row)
    col1 = _token_at(r1, pos)
    col2 = _token_at(r2, pos)
    t1, t2 = r1[col1], r2[col2]
    kinds = {t1.kind, t2.kind}
    if kinds != {"x+", "x-"}:
        raise MoveError("site does not hold a cancelling pair")
    if (t2.orient, t2.thick, t2.orient2, t2.thick2) != (
            t1.orient2, t1.thick2, t1.orient, t1.thick):
        raise MoveError("crossing pair does not cancel")
    for r, col in ((r1, col1), (r2, col2)):
        for k, tok in enumerate(r):
            if k != col and tok.kind != "strand":
                raise MoveError("other tokens interleave the pair")
    rows = (diagram.rows[:row]
            + [_strand_row(pts)]
            + [_strand_row(pts)]
            + diagram.rows[row + 2:])
    return _rebuild(diagram, rows)


def _token_at(row, pos):
    """Index of the token whose input block starts at strand position pos."""
    at = 0
    for k, tok in enumerate(row):
        if at == pos:
            return k
        at += tok.in_width
    raise MoveError(f"no token starts at position {pos}")


# ----------------------------------------------------------------------
# symmetry moves
# ----------------------------------------------------------------------

def insert_sym_pair(diagram: Diagram, level: int, pos: int) -> Diagram:
    """Insert two stacked symmetry tokens (their composite is identity)."""
    if not diagram.colored:
        raise MoveError("symmetry tokens require a colored diagram")
    pts = profile_at(diagram, level)
    if pos + 1 >= len(pts):
        raise MoveError(f"no adjacent strand pair at position {pos}")
    a, b = pts[pos], pts[pos + 1]
    row1 = _strand_row(pts, {pos: [Token("sym", a[0], a[1], b[0], b[1])]})
    mid = list(pts)
    mid[pos], mid[pos + 1] = mid[pos + 1], mid[pos]
    row2 = _strand_row(mid, {pos: [Token("sym", b[0], b[1], a[0], a[1])]})
    return insert_rows(diagram, level, [row1, row2])


def braid_exchange(diagram: Diagram, row: int, pos: int) -> Diagram:
    """Exchange a three-row braid-like block between its two readings.

    Matches rows (bottom-up) [T(pos,pos+1)], [U(pos+1,pos+2)],
    [V(pos,pos+1)] and rewrites them to the mirrored column pattern
    [·(pos+1,pos+2)], [·(pos,pos+1)], [·(pos+1,pos+2)] so that the same
    pairs of strands meet with the same over/under pattern.  Allowed
    token patterns: all three ``sym`` (symmetry coherence), exactly one
    crossing among two ``sym`` (naturality of the symmetry), or three
    crossings of one kind (the braid relation; one strand then passes
    over or under both others).
    """
    try:
        rows3 = [diagram.rows[row + k] for k in range(3)]
    except IndexError:
        raise MoveError("no three rows at the site") from None
    pts = profile_at(diagram, row)
    for shape in ((pos, pos + 1, pos), (pos + 1, pos, pos + 1)):
        try:
            cols = [_token_at(rows3[k], shape[k]) for k in range(3)]
        except MoveError:
            continue
        toks = [rows3[k][cols[k]] for k in range(3)]
        if all(r[c].in_width == 2 for r, c in zip(rows3, cols)):
            break
    else:
        raise MoveError("no exchangeable block at the site")
    for r, keep in zip(rows3, cols):
        if any(tok.kind != "strand" for k, tok in enumerate(r) if k != keep):
            raise MoveError("block contains extra non-strand tokens")
    kinds = [tok.kind for tok in toks]
    for k in kinds:
        if k not in ("x+", "x-", "sym"):
            raise MoveError("block tokens must be crossings or symmetries")
    n_sym = kinds.count("sym")
    if n_sym == 1 or (n_sym == 0 and len(set(kinds)) > 1):
        raise MoveError("token pattern is not an exchangeable block")
    # strands at pos..pos+2.  Reading pairs bottom-up:
    #   shape (pos, pos+1, pos):   T on (A,B), U on (A,C), V on (B,C)
    #   shape (pos+1, pos, pos+1): T on (B,C), U on (A,C), V on (A,B)
    # The rewrite keeps each pair with the same token kind, in reversed
    # row order, on the mirrored columns.
    A, B, C = pts[pos], pts[pos + 1], pts[pos + 2]
    t_lo, t_mid, t_hi = toks

    def retok(tok, x, y):
        return Token(tok.kind, x[0], x[1], y[0], y[1])

    if shape[0] == pos:
        new1 = _strand_row(pts, {pos + 1: [retok(t_hi, B, C)]})
        p1 = list(pts)
        p1[pos + 1], p1[pos + 2] = p1[pos + 2], p1[pos + 1]
        new2 = _strand_row(p1, {pos: [retok(t_mid, A, C)]})
        p2 = list(p1)
        p2[pos], p2[pos + 1] = p2[pos + 1], p2[pos]
        new3 = _strand_row(p2, {pos + 1: [retok(t_lo, A, B)]})
    else:
        new1 = _strand_row(pts, {pos: [retok(t_hi, A, B)]})
        p1 = list(pts)
        p1[pos], p1[pos + 1] = p1[pos + 1], p1[pos]
        new2 = _strand_row(p1, {pos + 1: [retok(t_mid, A, C)]})
        p2 = list(p1)
        p2[pos + 1], p2[pos + 2] = p2[pos + 2], p2[pos + 1]
        new3 = _strand_row(p2, {pos: [retok(t_lo, B, C)]})
    rows = diagram.rows[:row] + [new1, new2, new3] + diagram.rows[row + 3:]
    return _rebuild(diagram, rows)


# ----------------------------------------------------------------------
# planar isotopies
# ----------------------------------------------------------------------

def insert_zigzag(diagram: Diagram, level: int, pos: int, side: str) -> Diagram:
    """S-bend a strand through a right-to-left (side="rl") or
    left-to-right (side="lr") pair of extrema (a planar isotopy)."""
    pts = profile_at(diagram, level)
    if pos >= len(pts):
        raise MoveError(f"no strand at position {pos}")
    o, t = pts[pos]
    if side == "rl":
        if o == UP:
            row1 = _strand_row(pts, {pos: [Token("cup", RL, t),
                                           Token("strand", UP, t)]})
            mid = pts[:pos] + [(UP, t), (DOWN, t), (UP, t)] + pts[pos + 1:]
            row2 = _strand_row(mid, {pos + 1: [Token("cap", RL, t)]})
        else:
            row1 = _strand_row(pts, {pos: [Token("strand", DOWN, t),
                                           Token("cup", RL, t)]})
            mid = pts[:pos] + [(DOWN, t), (UP, t), (DOWN, t)] + pts[pos + 1:]
            row2 = _strand_row(mid, {pos: [Token("cap", RL, t),
                                           Token("strand", DOWN, t)]})
    elif side == "lr":
        if o == UP:
            row1 = _strand_row(pts, {pos: [Token("strand", UP, t),
                                           Token("cup", LR, t)]})
            mid = pts[:pos] + [(UP, t), (DOWN, t), (UP, t)] + pts[pos + 1:]
            row2 = _strand_row(mid, {pos: [Token("cap", LR, t),
                                           Token("strand", UP, t)]})
        else:
            row1 = _strand_row(pts, {pos: [Token("cup", LR, t),
                                           Token("strand", DOWN, t)]})
            mid = pts[:pos] + [(DOWN, t), (UP, t), (DOWN, t)] + pts[pos + 1:]
            row2 = _strand_row(mid, {pos + 1: [Token("cap", LR, t)]})
    else:
        raise MoveError(f"unknown zigzag side {side!r}")
    return insert_rows(diagram, level, [row1, row2])


def slide_rows(diagram: Diagram, row: int) -> Diagram:
    """Swap rows ``row`` and ``row+1`` when each non-strand token above
    sits entirely over strand tokens below and vice versa."""
    try:
        r1, r2 = diagram.rows[row], diagram.rows[row + 1]
    except IndexError:
        raise MoveError("no two rows at the site") from None
    pts = profile_at(diagram, row)

    # positions of each token's input block in the two rows
    def blocks(r):
        out = []
        at = 0
        for tok in r:
            out.append((at, tok))
            at += tok.in_width
        return out

    b1 = blocks(r1)
    b2 = blocks(r2)
    # map from row-2 bottom positions back to row-1 bottom positions:
    # only defined across strand tokens of row 1
    back = {}
    top_at = 0
    for at, tok in b1:
        if tok.kind == "strand":
            back[top_at] = at
        top_at += tok.out_width
    new_low = {}
    moved_spans = []
    for at, tok in b2:
        if tok.kind == "strand":
            continue
        if tok.in_width == 0:
            raise MoveError("cannot slide a cup down")
        span = range(at, at + tok.in_width)
        if not all(p in back for p in span):
            raise MoveError("token above does not sit over plain strands")
        new_low[back[at]] = [tok]
        moved_spans.append((back[at], tok))
    if not moved_spans:
        raise MoveError("nothing to slide")
    lowered = _strand_row(pts, new_low)
    # profile above the lowered row
    mid_pts = []
    for tok in lowered:
        mid_pts.extend(tok.out_points())
    # the original non-strand tokens of row 1 now act on mid_pts; their
    # positions shift by the width differences of moved tokens placed to
    # their left
    raised_over = {}

    def shift(p):
        s = 0
        for start, tok in moved_spans:
            if start < p:
                s += tok.out_width - tok.in_width
        return p + s

    for at, tok in b1:
        if tok.kind == "strand":
            continue
        start, width = at, tok.in_width
        for mstart, mtok in moved_spans:
            if not (mstart + mtok.in_width <= start or start + width <= mstart):
                raise MoveError("tokens overlap; cannot slide")
        raised_over[shift(at)] = [tok]
    if not raised_over:
        raise MoveError("nothing to slide against")
    raised = _strand_row(mid_pts, raised_over)
    rows = diagram.rows[:row] + [lowered, raised] + diagram.rows[row + 2:]
    return _rebuild(diagram, rows)


# ----------------------------------------------------------------------
# Pachner-style crossing rearrangement
# ----------------------------------------------------------------------

def _pachner_rows(points, pos, kind, side):
    """Token rows (bottom-up) for the two sides of the crossing
    rearrangement on the three strands starting at ``pos``.

    Three-crossing side: rows [x(pos,pos+1)], [x(pos+1,pos+2)],
    [x(pos,pos+1)].  Two-crossing side: rows [x(pos+1,pos+2)],
    [sym(pos,pos+1)], [x(pos+1,pos+2)].  Both permute the strands
    [A,B,C] -> [C,B,A] with the same pairs meeting at crossings of the
    same kind; on the two-crossing side the middle strand does not cross
    the outer ones.  The rearrangement preserves the colored invariant
    only when the middle strand is thin and downward or thick and
    upward, so other profiles are rejected.
    """
    A, B, C = points[pos], points[pos + 1], points[pos + 2]
    if B not in ((DOWN, False), (UP, True)):
        raise MoveError("middle strand must be thin-down or thick-up")

    def tok(k, x, y):
        return Token(k, x[0], x[1], y[0], y[1])

    if side == "three":
        p0 = list(points)
        r1 = _strand_row(p0, {pos: [tok(kind, A, B)]})
        p1 = list(p0)
        p1[pos], p1[pos + 1] = p1[pos + 1], p1[pos]
        r2 = _strand_row(p1, {pos + 1: [tok(kind, A, C)]})
        p2 = list(p1)
        p2[pos + 1], p2[pos + 2] = p2[pos + 2], p2[pos + 1]
        r3 = _strand_row(p2, {pos: [tok(kind, B, C)]})
        return [r1, r2, r3]
    if side == "two":
        p0 = list(points)
        r1 = _strand_row(p0, {pos + 1: [tok(kind, B, C)]})
        p1 = list(p0)
        p1[pos + 1], p1[pos + 2] = p1[pos + 2], p1[pos + 1]
        r2 = _strand_row(p1, {pos: [tok("sym", A, C)]})
        p2 = list(p1)
        p2[pos], p2[pos + 1] = p2[pos + 1], p2[pos]
        r3 = _strand_row(p2, {pos + 1: [tok(kind, A, B)]})
        return [r1, r2, r3]
    raise MoveError(f"unknown side {side!r}")


def pachner(diagram: Diagram, row: int, pos: int) -> Diagram:
    """Apply the crossing rearrangement at rows row..row+2, positions
    pos..pos+2, flipping between the two- and three-crossing sides."""
    if not diagram.colored:
        raise MoveError("the rearrangement move acts on colored diagrams")
    try:
        rows3 = [diagram.rows[row + k] for k in range(3)]
    except IndexError:
        raise MoveError("no three rows at the site") from None
    pts = profile_at(diagram, row)
    for side in ("three", "two"):
        for kind in ("x+", "x-"):
            want = _pachner_rows(pts, pos, kind, side)
            if _match_rows(rows3, want, pos):
                other = "two" if side == "three" else "three"
                new = _pachner_rows(pts, pos, kind, other)
                merged = [_merge_row(old, repl, pos)
                          for old, repl in zip(rows3, new)]
                rows = diagram.rows[:row] + merged + diagram.rows[row + 3:]
                return _rebuild(diagram, rows)
    raise MoveError("no rearrangement pattern at the site")


def _match_rows(rows, want, pos):
    """True when each actual row equals the wanted row on the token block
    covering strand positions pos..pos+2 and has strands elsewhere."""
    for actual, wanted in zip(rows, want):
        if _row_signature(actual, pos) != _row_signature(wanted, pos):
            return False
    return True


def _row_signature(row, pos):
    sig = []
    at = 0
    for tok in row:
        lo, hi = at, at + tok.in_width
        at = hi
        if hi <= pos or lo >= pos + 3:
            continue
        sig.append((lo, tok.kind, tok.orient, tok.thick, tok.orient2, tok.thick2))
    return sig


def _merge_row(old, replacement, pos):
    """Replace the token block covering positions pos..pos+2 of ``old``
    with the corresponding block of ``replacement``."""
    out = []
    at = 0
    for tok in old:
        lo = at
        at += tok.in_width
        if at <= pos or lo >= pos + 3:
            out.append((lo, tok))
    rat = 0
    for tok in replacement:
        lo = rat
        rat += tok.in_width
        if rat <= pos or lo >= pos + 3:
            continue
        out.append((lo, tok))
    out.sort(key=lambda kv: kv[0])
    return [tok for _, tok in out]


# ----------------------------------------------------------------------
# rotations through an extremum (the exceptional family)
# ----------------------------------------------------------------------

def rotate_cap(diagram: Diagram, row: int, pos: int) -> Diagram:
    """Rotate a bent strand's leg past a transversal strand at a cap.

    Site shape, bottom-up, on strands [P, Q, R] starting at ``pos``:
    left form  [crossing(P,Q)], [cap(·,·) at pos+1];
    right form [crossing(Q,R) at pos+1], [cap(·,·) at pos].
    P and R are the two legs of the bent strand; Q is transversal.  The
    move is exceptional exactly when the cap runs right-to-left (its
    left leg P oriented downward).
    """
    new, _ = _rotate_cap_build(diagram, row, pos)
    return new


def rotate_cap_tag(diagram: Diagram, row: int, pos: int) -> str:
    """Tag (prime/exception) of the rotation applicable at the site."""
    _, tag = _rotate_cap_build(diagram, row, pos)
    return tag


def _rotate_cap_build(diagram, row, pos):
    try:
        r1, r2 = diagram.rows[row], diagram.rows[row + 1]
    except IndexError:
        raise MoveError("no two rows at the site") from None
    pts = profile_at(diagram, row)
    if pos + 2 >= len(pts):
        raise MoveError("need three strands at the site")
    P, Q, R = pts[pos], pts[pos + 1], pts[pos + 2]

    def tok(k, x, y):
        return Token(k, x[0], x[1], y[0], y[1])

    def cap_for(x, y):
        if (x[0], y[0]) == (UP, DOWN):
            orient = LR
        elif (x[0], y[0]) == (DOWN, UP):
            orient = RL
        else:
            raise MoveError("cap legs must have opposite orientations")
        if x[1] != y[1]:
            raise MoveError("cap legs must have equal thickness")
        return Token("cap", orient, x[1])

    # left form: crossing at pos on (P,Q), cap at pos+1 on (P,R)
    for kind in ("x+", "x-"):
        left1 = _strand_row(pts, {pos: [tok(kind, P, Q)]})
        p1 = list(pts)
        p1[pos], p1[pos + 1] = p1[pos + 1], p1[pos]
        left2 = _strand_row(p1, {pos + 1: [cap_for(P, R)]}) \
            if _cap_ok(P, R) else None
        if left2 is not None and _rows_equal(r1, left1) and _rows_equal(r2, left2):
            # rewrite to right form with the same strand over/under pattern:
            # Q over bent strand <-> crossing kinds x+ (left) / x- (right)
            new_kind = "x-" if kind == "x+" else "x+"
            right1 = _strand_row(pts, {pos + 1: [tok(new_kind, Q, R)]})
            p2 = list(pts)
            p2[pos + 1], p2[pos + 2] = p2[pos + 2], p2[pos + 1]
            right2 = _strand_row(p2, {pos: [cap_for(P, R)]})
            rows = diagram.rows[:row] + [right1, right2] + diagram.rows[row + 2:]
            tag = TAG_PRIME if P[0] == UP else TAG_EXCEPTION
            return _rebuild(diagram, rows), tag
    for kind in ("x+", "x-"):
        if not _cap_ok(P, R):
            break
        right1 = _strand_row(pts, {pos + 1: [tok(kind, Q, R)]})
        p2 = list(pts)
        p2[pos + 1], p2[pos + 2] = p2[pos + 2], p2[pos + 1]
        right2 = _strand_row(p2, {pos: [cap_for(P, R)]})
        if _rows_equal(r1, right1) and _rows_equal(r2, right2):
            new_kind = "x-" if kind == "x+" else "x+"
            left1 = _strand_row(pts, {pos: [tok(new_kind, P, Q)]})
            p1 = list(pts)
            p1[pos], p1[pos + 1] = p1[pos + 1], p1[pos]
            left2 = _strand_row(p1, {pos + 1: [cap_for(P, R)]})
            rows = diagram.rows[:row] + [left1, left2] + diagram.rows[row + 2:]
            tag = TAG_PRIME if P[0] == UP else TAG_EXCEPTION
            return _rebuild(diagram, rows), tag
    raise MoveError("no rotation pattern at the site")


def _cap_ok(x, y):
    return x[1] == y[1] and {x[0], y[0]} == {UP, DOWN}



def _rows_equal(a, b):
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


# ----------------------------------------------------------------------
# move registry and pair enumeration
# ----------------------------------------------------------------------

MOVES = {
    "pair": lambda d, site: insert_pair(d, *site),
    "unpair": lambda d, site: remove_pair(d, *site),
    "sym2": lambda d, site: insert_sym_pair(d, *site),
    "braid-exchange": lambda d, site: braid_exchange(d, *site),
    "zigzag": lambda d, site: insert_zigzag(d, *site),
    "slide": lambda d, site: slide_rows(d, *site),
    "pachner": lambda d, site: pachner(d, *site),
    "rotate-cap": lambda d, site: rotate_cap(d, *site),
}


def apply_move(diagram: Diagram, move: str, site) -> Diagram:
    """Apply the named move at the site (a tuple of move arguments)."""
    fn = MOVES.get(move)
    if fn is None:
        raise MoveError(f"unknown move {move!r}")
    return fn(diagram, tuple(site))


def move_tag(diagram: Diagram, move: str, site) -> str:
    if move == "rotate-cap":
        return rotate_cap_tag(diagram, *site)
    return TAG_PRIME

# -- seed diagrams and pair enumeration ---------------------------------

def random_colored_braid(rng, width, depth):
    """A random colored braid-like diagram on vertical strands."""
    bottom = [(rng.choice((UP, DOWN)), rng.choice((False, True)))
              for _ in range(width)]
    rows = []
    pts = list(bottom)
    for _ in range(depth):
        pos = rng.randrange(width - 1)
        kind = rng.choice(("x+", "x-", "sym"))
        a, b = pts[pos], pts[pos + 1]
        rows.append(_strand_row(pts, {pos: [Token(kind, a[0], a[1], b[0], b[1])]}))
        pts[pos], pts[pos + 1] = pts[pos + 1], pts[pos]
    d = Diagram(True, bottom, rows)
    d.scan()
    return d


def pachner_pair(points, pos=0):
    """A standalone move pair: the two sides of the rearrangement on the
    given three strand points."""
    lhs = Diagram(True, list(points), _pachner_rows(points, pos, "x+", "two"))
    rhs = Diagram(True, list(points), _pachner_rows(points, pos, "x+", "three"))
    lhs.scan()
    rhs.scan()
    return lhs, rhs


def rotation_pair(P, Q, R, q_over):
    """A standalone rotation pair on strands [P, Q, R] (P, R the bent
    strand's legs, Q transversal).  Returns (left, right, tag)."""
    def tok(k, x, y):
        return Token(k, x[0], x[1], y[0], y[1])

    if not _cap_ok(P, R):
        raise MoveError("P and R cannot cap")
    orient = LR if P[0] == UP else RL
    cap = Token("cap", orient, P[1])
    kind_left = "x+" if q_over else "x-"
    kind_right = "x-" if q_over else "x+"
    pts = [P, Q, R]
    left1 = _strand_row(pts, {0: [tok(kind_left, P, Q)]})
    p1 = [Q, P, R]
    left2 = _strand_row(p1, {1: [cap]})
    right1 = _strand_row(pts, {1: [tok(kind_right, Q, R)]})
    p2 = [P, R, Q]
    right2 = _strand_row(p2, {0: [cap]})
    lhs = Diagram(True, pts, [left1, left2])
    rhs = Diagram(True, pts, [right1, right2])
    lhs.scan()
    rhs.scan()
    return lhs, rhs, (TAG_PRIME if P[0] == UP else TAG_EXCEPTION)


def applicable_moves(diagram: Diagram):
    """All (move, site) pairs whose pattern matches the diagram."""
    out = []
    nrows = len(diagram.rows)
    for level in range(nrows + 1):
        width = len(profile_at(diagram, level))
        for pos in range(width - 1):
            out.append(("pair", (level, pos, "x+")))
            out.append(("pair", (level, pos, "x-")))
            out.append(("sym2", (level, pos)))
        for pos in range(width):
            out.append(("zigzag", (level, pos, "lr")))
            out.append(("zigzag", (level, pos, "rl")))
    for row in range(max(nrows - 1, 0)):
        out.append(("slide", (row,)))
        width = len(profile_at(diagram, row))
        for pos in range(width):
            out.append(("unpair", (row, pos)))
            out.append(("rotate-cap", (row, pos)))
    for row in range(max(nrows - 2, 0)):
        width = len(profile_at(diagram, row))
        for pos in range(max(width - 2, 0)):
            out.append(("pachner", (row, pos)))
            out.append(("braid-exchange", (row, pos)))
    matched = []
    for move, site in out:
        try:
            apply_move(diagram, move, site)
        except MoveError:
            continue
        matched.append((move, site))
    return matched


def enumerate_move_pairs(seeds, depth, seed=0, include_exceptions=False):
    """Deterministically enumerate single-move diagram pairs.

    Starting from each seed diagram, every applicable move is emitted as
    a pair (before, after, move, tag), then one random applicable move
    advances the walk; this repeats ``depth`` times per seed.  Pairs
    tagged ``exception`` are produced only when ``include_exceptions``
    is set.
    """
    if depth < 1:
        raise MoveError("depth must be at least 1")
    rng = random.Random(seed)
    out = []
    for seed_diagram in seeds:
        cur = seed_diagram
        for _ in range(depth):
            nxt = []
            for move, site in applicable_moves(cur):
                tag = move_tag(cur, move, site)
                if tag == TAG_EXCEPTION and not include_exceptions:
                    continue
                new = apply_move(cur, move, site)
                out.append((cur, new, move, tag))
                nxt.append(new)
            if not nxt:
                break
            cur = rng.choice(nxt)
    return out
