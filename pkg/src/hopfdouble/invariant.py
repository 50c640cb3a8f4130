"""Tangle invariants from crossing labels.

Two evaluators share one engine:

- :func:`universal_J` labels crossings of an uncolored diagram with the
  braiding element of the double (or its inverse) and left-to-right
  extrema with ribbon factors, then multiplies the labels along each
  component read against its orientation.  Values live in the double
  extended by a central square root of the ribbon element.

- :func:`colored_J` labels crossings of a colored diagram with the
  pairing element of the smash product, decorated per the thin/thick
  pattern of the two strands; extrema carry no labels.  Values live in
  tensor powers of the smash product and its opposite.

Closed components are only well defined up to cyclic reordering, so
their tensor slots are compared in the quotient by the span of
commutators (:class:`InvariantValue` handles that).
"""

from __future__ import annotations

import itertools

from .diagram import (DOWN, LR, UP, Diagram, DiagramError, double_component_order,
                      left_normalize)
from .doubles import (AlgebraOps, Doubles, ThetaAlgebra, pair_algebra)
from .exactlin import RowSpace, SparseTensor


# ----------------------------------------------------------------------
# values modulo cyclic reordering on closed slots
# ----------------------------------------------------------------------

def commutator_space(ops: AlgebraOps) -> RowSpace:
    """Span of all basis commutators of ``ops`` (cached on the instance)."""
    space = getattr(ops, "_commutator_space", None)
    if space is None:
        space = RowSpace(ops.field, ops.dim)
        for i in range(ops.dim):
            for j in range(i + 1, ops.dim):
                diff = ops.bp(i, j).sub(ops.bp(j, i))
                space.add({k: v for (k,), v in diff.entries.items()})
        ops._commutator_space = space
    return space


class InvariantValue:
    """A tensor over per-slot algebras, with closed slots compared
    modulo the commutator span of their algebra."""

    def __init__(self, slot_ops, closed, tensor: SparseTensor):
        if tensor.dims != tuple(ops.dim for ops in slot_ops):
            raise ValueError("tensor dims do not match slot algebras")
        if len(closed) != len(slot_ops):
            raise ValueError("closed flags do not match slot count")
        self.slot_ops = list(slot_ops)
        self.closed = list(closed)
        self.tensor = tensor

    def canonical_tensor(self) -> SparseTensor:
        """Project every closed slot onto quotient representatives."""
        t = self.tensor
        for s, is_closed in enumerate(self.closed):
            if not is_closed:
                continue
            space = commutator_space(self.slot_ops[s])
            fibers = {}
            for idx, v in t.entries.items():
                rest = idx[:s] + idx[s + 1:]
                fibers.setdefault(rest, {})[idx[s]] = v
            out = SparseTensor(t.field, t.dims)
            for rest, fiber in fibers.items():
                for k, v in space.reduce(fiber).items():
                    out.add_at(rest[:s] + (k,) + rest[s:], v)
            t = out
        return t

    def __eq__(self, other):
        if not isinstance(other, InvariantValue):
            return NotImplemented
        if self.tensor.dims != other.tensor.dims or self.closed != other.closed:
            return False
        return self.canonical_tensor() == other.canonical_tensor()

    def __repr__(self):
        return f"InvariantValue(dims={self.tensor.dims}, closed={self.closed})"


# ----------------------------------------------------------------------
# shared evaluation engine
# ----------------------------------------------------------------------

def _evaluate(slot_ops, comp_words, label_terms):
    """Sum over label expansions of the per-component word products.

    ``comp_words[i]`` is a list of items, each ("fixed", vec) or
    ("half", label_id, half).  ``label_terms[label_id]`` is a list of
    (vec_half0, vec_half1) pairs; the label equals the sum over the list
    of half0 (x) half1.
    """
    field = slot_ops[0].field if slot_ops else None
    dims = tuple(ops.dim for ops in slot_ops)
    result = SparseTensor(field, dims) if slot_ops else None
    if not slot_ops:
        raise ValueError("no components to evaluate")

    label_ids = sorted(label_terms)
    comp_label_ids = []
    for word in comp_words:
        used = sorted({item[1] for item in word if item[0] == "half"})
        comp_label_ids.append(used)
    caches = [{} for _ in comp_words]

    def comp_value(ci, assign):
        key = tuple(assign[l] for l in comp_label_ids[ci])
        cached = caches[ci].get(key)
        if cached is not None:
            return cached
        vecs = []
        for item in comp_words[ci]:
            if item[0] == "fixed":
                vecs.append(item[1])
            else:
                _, lid, half = item
                vecs.append(label_terms[lid][assign[lid]][half])
        value = slot_ops[ci].mul_many(vecs)
        caches[ci][key] = value
        return value

    ranges = [range(len(label_terms[l])) for l in label_ids]
    for choice in itertools.product(*ranges):
        assign = dict(zip(label_ids, choice))
        vecs = [comp_value(ci, assign) for ci in range(len(comp_words))]
        if any(v.is_zero() for v in vecs):
            continue
        term = vecs[0]
        for v in vecs[1:]:
            term = term.outer(v)
        result = result.add(term)
    return result


# ----------------------------------------------------------------------
# universal invariant over the double
# ----------------------------------------------------------------------

class UniversalContext:
    """Cached label data for the universal invariant over one double."""

    def __init__(self, dd: Doubles):
        self.dd = dd
        f, d = dd.field, dd.d
        self.u, self.u_inv, self.c = dd.ribbon()
        self.c_inv = dd.double_ops.invert(self.c)
        self.theta_alg = ThetaAlgebra(dd.double_ops, self.c,
                                      name=dd.A.name + " double^theta")
        # braiding as a short sum of product terms: sum_a (eps (x) e_a) (x) (e^a (x) 1)
        D = dd.double
        self.braid_terms = []
        self.braid_inv_terms = []
        for a in range(d):
            first = dd.pure(dd.eps_vec, _basis(f, d, a))
            second = dd.pure(_basis(f, d, a), _unit_vec(dd))
            self.braid_terms.append((first, second))
            self.braid_inv_terms.append((D.apply_antipode(first), second))

    def lift(self, vec, deg=0):
        return self.theta_alg.lift(vec, deg)

    def min_label(self):
        """Label of a left-to-right local minimum.

        Words are read against the orientation, so the ribbon factor is
        the antipode image of the usual one: gamma(u) theta^{-1}.
        """
        D, ops = self.dd.double, self.dd.double_ops
        return self.lift(ops.mul(D.apply_antipode(self.u), self.c_inv), 1)

    def max_label(self):
        """Label of a left-to-right local maximum: gamma(u)^{-1} theta."""
        return self.lift(self.dd.double.apply_antipode(self.u_inv), 1)


def _basis(field, dim, i):
    return SparseTensor(field, (dim,), {(i,): field.one()})


def _unit_vec(dd: Doubles):
    # unit of the base algebra as a vector over its basis
    return dd.A.unit.copy()


def universal_J(diagram: Diagram, dd: Doubles,
                context: UniversalContext = None) -> InvariantValue:
    """Universal invariant of an uncolored diagram, valued in tensor
    powers of the double extended by a ribbon square root."""
    if diagram.colored:
        raise DiagramError("the universal invariant takes uncolored diagrams")
    ctx = context or UniversalContext(dd)
    comps = diagram.components()
    D = dd.double
    theta = ctx.theta_alg

    # assign roles at each crossing cell: which component is under/over
    label_terms = {}
    comp_words = []
    for comp in comps:
        word = []
        for p in reversed(comp.passages):
            tok = p.token
            if tok.kind == "cup":
                if tok.orient == LR:
                    word.append(("fixed", ctx.min_label()))
            elif tok.kind == "cap":
                if tok.orient == LR:
                    word.append(("fixed", ctx.max_label()))
            elif tok.kind in ("x+", "x-"):
                lid = p.key()
                if lid not in label_terms:
                    base = ctx.braid_terms if tok.kind == "x+" else ctx.braid_inv_terms
                    under_role = "a" if tok.kind == "x+" else "b"
                    under_up = (tok.orient if under_role == "a" else tok.orient2) == UP
                    over_up = (tok.orient2 if under_role == "a" else tok.orient) == UP
                    terms = []
                    for h0, h1 in base:
                        v0 = D.apply_antipode(h0) if under_up else h0
                        v1 = D.apply_antipode(h1) if over_up else h1
                        terms.append((ctx.lift(v0), ctx.lift(v1)))
                    label_terms[lid] = terms
                under_role = "a" if tok.kind == "x+" else "b"
                half = 0 if p.role == under_role else 1
                word.append(("half", lid, half))
        comp_words.append(word)

    tensor = _evaluate([theta] * len(comps), comp_words, label_terms)
    return InvariantValue([theta] * len(comps), [c.closed for c in comps], tensor)


# ----------------------------------------------------------------------
# colored invariant over the smash product
# ----------------------------------------------------------------------

FLAVOUR_BY_THICKNESS = {
    (False, False): "S",
    (True, False): "Sp",
    (False, True): "Spp",
    (True, True): "St",
}


class ColoredContext:
    """Cached label data for the colored invariant over one double."""

    def __init__(self, dd: Doubles):
        self.dd = dd
        f, d = dd.field, dd.d
        A = dd.A
        self._terms = {}
        for (under_thick, over_thick), flavour in FLAVOUR_BY_THICKNESS.items():
            plus, minus = [], []
            for a in range(d):
                elem = _basis(f, d, a)
                if under_thick:
                    elem = A.apply_antipode(elem)
                func = _basis(f, d, a)
                if over_thick:
                    func = dd.gammabar_star(func)
                first = dd.pure(dd.eps_vec, elem)
                second = dd.pure(func, _unit_vec(dd))
                plus.append((first, second))
                # the inverse pairing twists the element half by the antipode
                minus.append((_apply_elem_antipode(dd, first), second))
            self._terms[(flavour, "x+")] = plus
            self._terms[(flavour, "x-")] = minus

    def terms(self, flavour, kind):
        return self._terms[(flavour, kind)]


def _apply_elem_antipode(dd: Doubles, vec: SparseTensor) -> SparseTensor:
    """Apply the antipode to the element tensorand of f (x) a vectors."""
    f, d = dd.field, dd.d
    out = SparseTensor(f, (d * d,))
    for (p,), v in vec.entries.items():
        fi, xi = divmod(p, d)
        img = dd.A.apply_antipode(_basis(f, d, xi))
        for (y,), w in img.entries.items():
            out.add_at((fi * d + y,), f.mul(v, w))
    return out


def _apply_func_antipode(dd: Doubles, vec: SparseTensor) -> SparseTensor:
    """Apply the inverse dual antipode to the functional tensorand."""
    f, d = dd.field, dd.d
    out = SparseTensor(f, (d * d,))
    for (p,), v in vec.entries.items():
        fi, xi = divmod(p, d)
        img = dd.gammabar_star(_basis(f, d, fi))
        for (y,), w in img.entries.items():
            out.add_at((y * d + xi,), f.mul(v, w))
    return out


def colored_J(diagram: Diagram, dd: Doubles, component_order=None,
              context: ColoredContext = None) -> InvariantValue:
    """Colored invariant of a thin/thick diagram.

    Thin components take values in the smash product, thick components in
    its opposite.  ``component_order`` optionally permutes the slots: it
    lists component indices in the desired slot order.
    """
    if not diagram.colored:
        raise DiagramError("the colored invariant takes colored diagrams")
    ctx = context or ColoredContext(dd)
    comps = diagram.components()
    if component_order is not None:
        if sorted(component_order) != list(range(len(comps))):
            raise ValueError("component_order must permute all components")
        comps = [comps[i] for i in component_order]

    label_terms = {}
    comp_words = []
    for comp in comps:
        word = []
        for p in reversed(comp.passages):
            tok = p.token
            if tok.kind not in ("x+", "x-"):
                continue
            lid = p.key()
            under_role = "a" if tok.kind == "x+" else "b"
            if lid not in label_terms:
                if under_role == "a":
                    under_thick, over_thick = tok.thick, tok.thick2
                    under_up = tok.orient == UP
                    over_up = tok.orient2 == UP
                else:
                    under_thick, over_thick = tok.thick2, tok.thick
                    under_up = tok.orient2 == UP
                    over_up = tok.orient == UP
                flavour = FLAVOUR_BY_THICKNESS[(under_thick, over_thick)]
                terms = []
                for h0, h1 in ctx.terms(flavour, tok.kind):
                    v0 = _apply_elem_antipode(dd, h0) if under_up else h0
                    v1 = _apply_func_antipode(dd, h1) if over_up else h1
                    terms.append((v0, v1))
                label_terms[lid] = terms
            half = 0 if p.role == under_role else 1
            word.append(("half", lid, half))
        comp_words.append(word)

    slot_ops = [dd.smash_op if c.thick else dd.smash for c in comps]
    tensor = _evaluate(slot_ops, comp_words, label_terms)
    return InvariantValue(slot_ops, [c.closed for c in comps], tensor)


# ----------------------------------------------------------------------
# doubled invariants and the comparison theorem
# ----------------------------------------------------------------------

class DoubledContext:
    """Cached data for invariants of doubled diagrams over one double."""

    def __init__(self, dd: Doubles):
        self.dd = dd
        self.colored = ColoredContext(dd)
        self.pair = pair_algebra(dd.smash, dd.smash_op,
                                 name=dd.A.name + " smash pair")
        _, _, c = dd.ribbon()
        self.c = c
        self.c_inv = dd.double_ops.invert(c)
        self.cbar = self._embed_flat(c)
        self.cbar_inv = self._embed_flat(self.c_inv)
        self.pair_theta = ThetaAlgebra(self.pair, self.cbar,
                                       name=dd.A.name + " smash pair^theta")

    def _embed_flat(self, x: SparseTensor) -> SparseTensor:
        n = self.dd.d * self.dd.d
        img = self.dd.embed_element(x)
        out = SparseTensor(self.dd.field, (n * n,))
        for (s1, s2), v in img.entries.items():
            out.add_at((s1 * n + s2,), v)
        return out

    def theta_power(self, k: int) -> SparseTensor:
        pt = self.pair_theta
        if k >= 0:
            return pt.power(pt.theta(), k)
        inv = pt.lift(self.pair.invert(self.cbar), 1)  # theta^{-1} = cbar^{-1} theta
        return pt.power(inv, -k)

    def embed_theta(self, vec: SparseTensor) -> SparseTensor:
        """Embedding of the theta-extended double into the theta-extended pair."""
        dd = self.dd
        n = dd.d * dd.d
        out = SparseTensor(dd.field, (2 * n * n,))
        images = dd.embed_matrix()
        for (p,), v in vec.entries.items():
            deg, i = divmod(p, n)
            for (s1, s2), w in images[i].entries.items():
                out.add_at((deg * n * n + s1 * n + s2,), dd.field.mul(v, w))
        return out

    def embed_theta_basis(self, p: int) -> SparseTensor:
        cache = getattr(self, "_embed_theta_cache", None)
        if cache is None:
            cache = self._embed_theta_cache = {}
        img = cache.get(p)
        if img is None:
            n = 2 * self.dd.d * self.dd.d
            img = self.embed_theta(
                SparseTensor(self.dd.field, (n,), {(p,): self.dd.field.one()}))
            cache[p] = img
        return img


def _pair_up_slots(value: InvariantValue, pair_theta: ThetaAlgebra) -> SparseTensor:
    """Merge slot pairs (2i, 2i+1) of a colored value into single slots over
    the theta-extended pair algebra (at degree zero)."""
    t = value.tensor
    if len(t.dims) % 2:
        raise ValueError("expected an even number of slots")
    half = len(t.dims) // 2
    n2 = pair_theta.base.dim
    nthin = int(n2 ** 0.5 + 0.5)
    out = SparseTensor(t.field, (pair_theta.dim,) * half)
    for idx, v in t.entries.items():
        merged = tuple(idx[2 * i] * nthin + idx[2 * i + 1] for i in range(half))
        out.add_at(merged, v)
    return out


def doubled_colored_J(diagram: Diagram, dd: Doubles,
                      context: DoubledContext = None):
    """Colored invariant of the doubled diagram, with slot pairs merged.

    Returns ``(tensor, closed_flags)`` where the tensor has one slot per
    component of ``diagram`` over the theta-extended pair algebra at
    degree zero.
    """
    ctx = context or DoubledContext(dd)
    doubled, order = double_component_order(diagram)
    value = colored_J(doubled, dd, component_order=order, context=ctx.colored)
    merged = _pair_up_slots(value, ctx.pair_theta)
    closed = [c.closed for c in diagram.components()]
    return merged, closed


def _scale_slot(tensor: SparseTensor, slot: int, ops: AlgebraOps,
                factor: SparseTensor) -> SparseTensor:
    """Left-multiply one tensor slot by a fixed algebra element."""
    out = SparseTensor(tensor.field, tensor.dims)
    cols = {}
    for idx, v in tensor.entries.items():
        p = idx[slot]
        col = cols.get(p)
        if col is None:
            col = ops.mul(factor, SparseTensor(ops.field, (ops.dim,), {(p,): ops.field.one()}))
            cols[p] = col
        for (q,), w in col.entries.items():
            out.add_at(idx[:slot] + (q,) + idx[slot + 1:], tensor.field.mul(v, w))
    return out


def normalized_doubled_J(diagram: Diagram, dd: Doubles,
                         context: DoubledContext = None) -> InvariantValue:
    """Rotation-normalized doubled invariant of an uncolored diagram.

    Left-normalizes the diagram, doubles it, evaluates the colored
    invariant, and multiplies each slot by theta to the power of the
    component's rotation number (lr maxima minus lr minima).
    """
    ctx = context or DoubledContext(dd)
    stats = diagram.component_stats()
    normalized = left_normalize(diagram)
    merged, closed = doubled_colored_J(normalized, dd, context=ctx)
    for i, st in enumerate(stats):
        k = st["rotation"]
        if k:
            merged = _scale_slot(merged, i, ctx.pair_theta, ctx.theta_power(k))
    return InvariantValue([ctx.pair_theta] * len(closed), closed, merged)


def framing_doubled_J(diagram: Diagram, dd: Doubles,
                      context: DoubledContext = None) -> InvariantValue:
    """Writhe-normalized doubled invariant of an uncolored diagram:
    multiplies each slot by theta to the power of the component writhe."""
    ctx = context or DoubledContext(dd)
    stats = diagram.component_stats()
    merged, closed = doubled_colored_J(diagram, dd, context=ctx)
    for i, st in enumerate(stats):
        k = st["writhe"]
        if k:
            merged = _scale_slot(merged, i, ctx.pair_theta, ctx.theta_power(k))
    return InvariantValue([ctx.pair_theta] * len(closed), closed, merged)


def embedded_universal_J(diagram: Diagram, dd: Doubles,
                         context: DoubledContext = None,
                         universal_context: UniversalContext = None) -> InvariantValue:
    """Image of the universal invariant under the slotwise embedding of
    the double into the pair of smash products."""
    ctx = context or DoubledContext(dd)
    value = universal_J(diagram, dd, context=universal_context)
    t = value.tensor
    out = SparseTensor(t.field, (ctx.pair_theta.dim,) * len(t.dims))
    for idx, v in t.entries.items():
        vecs = [ctx.embed_theta_basis(p) for p in idx]
        term = vecs[0]
        for w in vecs[1:]:
            term = term.outer(w)
        out = out.add(term.scale(v))
    return InvariantValue([ctx.pair_theta] * len(t.dims), value.closed, out)


def doubled_J(diagram: Diagram, dd: Doubles,
              context: DoubledContext = None) -> InvariantValue:
    """Colored invariant of the doubled diagram as an InvariantValue
    (one merged slot per component, no normalization factors)."""
    ctx = context or DoubledContext(dd)
    merged, closed = doubled_colored_J(diagram, dd, context=ctx)
    return InvariantValue([ctx.pair_theta] * len(closed), closed, merged)


def verify_embedding_theorem(diagram: Diagram, dd: Doubles,
                             context: DoubledContext = None) -> bool:
    """Check that the embedded universal invariant agrees with the
    rotation-normalized doubled invariant."""
    ok, _ = verify_jj(diagram, dd, context=context)
    return ok


def verify_jj(diagram: Diagram, dd: Doubles, context: DoubledContext = None):
    """Compare the slotwise embedding of the universal invariant against
    the rotation-normalized doubled invariant.

    Returns ``(True, None)`` when the two canonical tensors agree, else
    ``(False, witness)`` where the witness names the first index at which
    they differ and the two coefficients there.
    """
    ctx = context or DoubledContext(dd)
    lhs = embedded_universal_J(diagram, dd, context=ctx)
    rhs = normalized_doubled_J(diagram, dd, context=ctx)
    a = lhs.canonical_tensor()
    b = rhs.canonical_tensor()
    if a == b:
        return True, None
    diff = a.sub(b)
    idx = min(diff.entries)
    f = a.field
    return False, {
        "index": list(idx),
        "embedded": str(a.entries.get(idx, f.zero())),
        "doubled": str(b.entries.get(idx, f.zero())),
    }


# Contract-facing aliases: the short names match the command-line modes.
quotient_N = commutator_space
J_double_prime = normalized_doubled_J
J_zero = framing_doubled_J
