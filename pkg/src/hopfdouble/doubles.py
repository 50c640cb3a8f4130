"""Double constructions on a finite-dimensional Hopf algebra.

Two algebras are built from a presentation A with basis (e_a) and dual
basis (e^a):

  * the quantum double ``double(A)``: the vector space A* (x) A with
    product  (f (x) a)(g (x) b) = sum f * g(ibar(a''') ? a') (x) a'' b,
    which is again a Hopf algebra (ibar denotes the inverse antipode);
  * the smash product ``smash(A)``: same space with the simpler product
    (f (x) a)(g (x) b) = sum f * g(? a') (x) a'' b, an associative algebra.

Basis elements of either are indexed by fi * dim + xi for e^fi (x) e_xi.

The canonical braiding element R lives in double(A) (x) double(A); the
canonical pentagon element S lives in smash(A) (x) smash(A) and comes in
four decorated flavours (S, Sp, Spp, St) obtained by twisting a tensorand
with the antipode or the transposed inverse antipode.  ``embed_matrix``
realizes the algebra embedding of double(A) into smash(A) (x) smash(A)^op.
"""
from __future__ import annotations

import itertools

from .exactlin import (Field, SparseTensor, contract, solve_linear,
                       NoSolutionError, ExactError)
from .hopf import HopfPresentation, _basis_vec, _permute


class AlgebraOps:
    """Associative unital algebra with memoized basis-pair products."""

    def __init__(self, name: str, field: Field, dim: int,
                 unit: SparseTensor, bp_func):
        self.name = name
        self.field = field
        self.dim = dim
        self.unit = unit
        self._bp_func = bp_func
        self._memo: dict = {}

    def bp(self, i: int, j: int) -> SparseTensor:
        key = (i, j)
        out = self._memo.get(key)
        if out is None:
            out = self._bp_func(i, j)
            self._memo[key] = out
        return out

    def mul(self, x: SparseTensor, y: SparseTensor) -> SparseTensor:
        out = SparseTensor(self.field, (self.dim,))
        f = self.field
        for (i,), vx in x.entries.items():
            for (j,), vy in y.entries.items():
                c = f.mul(vx, vy)
                for (k,), vb in self.bp(i, j).entries.items():
                    out.add_at((k,), f.mul(c, vb))
        return out

    def mul_many(self, elems) -> SparseTensor:
        acc = self.unit
        for e in elems:
            acc = self.mul(acc, e)
        return acc

    def power(self, x: SparseTensor, k: int) -> SparseTensor:
        acc = self.unit
        for _ in range(k):
            acc = self.mul(acc, x)
        return acc

    def op(self) -> "AlgebraOps":
        return AlgebraOps(self.name + "^op", self.field, self.dim,
                          self.unit.copy(), lambda i, j: self.bp(j, i))

    def invert(self, x: SparseTensor) -> SparseTensor:
        """Two-sided inverse via an exact linear solve; raises if singular."""
        f, n = self.field, self.dim
        cols = [self.mul(x, _basis_vec(f, n, j)) for j in range(n)]
        rows = [[cols[j][(i,)] for j in range(n)] for i in range(n)]
        rhs = [self.unit[(i,)] for i in range(n)]
        try:
            sol, _ = solve_linear(f, rows, rhs, require_unique=True)
        except (NoSolutionError, ExactError) as e:
            raise ExactError(f"element is not invertible in {self.name}") from e
        y = SparseTensor(f, (n,), {(j,): sol[j] for j in range(n)})
        if self.mul(y, x) != self.unit:
            raise ExactError(f"one-sided inverse only in {self.name}")
        return y

    def check_associative(self, triples=None) -> None:
        n = self.dim
        it = triples if triples is not None else itertools.product(range(n), repeat=3)
        for a, b, c in it:
            ea, eb, ec = (_basis_vec(self.field, n, i) for i in (a, b, c))
            if self.mul(self.mul(ea, eb), ec) != self.mul(ea, self.mul(eb, ec)):
                raise ExactError(f"{self.name} not associative at ({a},{b},{c})")


def algebra_of_hopf(H: HopfPresentation, name: str = "") -> AlgebraOps:
    return AlgebraOps(name or H.name, H.field, H.dim, H.unit.copy(),
                      H.basis_product)


def pair_algebra(X: AlgebraOps, Y: AlgebraOps, name: str = "") -> AlgebraOps:
    """X (x) Y as a single algebra; index i * Y.dim + j."""
    if X.field != Y.field:
        raise ValueError("field mismatch")
    f = X.field
    dim = X.dim * Y.dim
    unit = SparseTensor(f, (dim,))
    for (i,), vx in X.unit.entries.items():
        for (j,), vy in Y.unit.entries.items():
            unit.add_at((i * Y.dim + j,), f.mul(vx, vy))

    def bp(p, q):
        i1, j1 = divmod(p, Y.dim)
        i2, j2 = divmod(q, Y.dim)
        out = SparseTensor(f, (dim,))
        for (a,), va in X.bp(i1, i2).entries.items():
            for (b,), vb in Y.bp(j1, j2).entries.items():
                out.add_at((a * Y.dim + b,), f.mul(va, vb))
        return out
    return AlgebraOps(name or f"{X.name}(x){Y.name}", f, dim, unit, bp)


# -- ambient tensor-power helpers -------------------------------------------

def ambient_unit(algs) -> SparseTensor:
    out = algs[0].unit
    for a in algs[1:]:
        out = out.outer(a.unit)
    return out


def ambient_place(algs, x: SparseTensor, slots) -> SparseTensor:
    from .exactlin import place
    dims = [a.dim for a in algs]
    units = [a.unit for a in algs]
    return place(x, slots, dims, units)


def ambient_mul(algs, t: SparseTensor, u: SparseTensor) -> SparseTensor:
    """Slot-wise product of arity-k tensors, slot s multiplied in algs[s]."""
    f = algs[0].field
    k = len(algs)
    out = SparseTensor(f, t.dims)
    for it, vt in t.entries.items():
        for iu, vu in u.entries.items():
            coeff = f.mul(vt, vu)
            partial = [((), coeff)]
            for s in range(k):
                bp = algs[s].bp(it[s], iu[s])
                if bp.is_zero():
                    partial = []
                    break
                nxt = []
                for pref, c in partial:
                    for (b,), vb in bp.entries.items():
                        nxt.append((pref + (b,), f.mul(c, vb)))
                partial = nxt
            for idx, c in partial:
                out.add_at(idx, c)
    return out


def ambient_mul_many(algs, tensors) -> SparseTensor:
    acc = None
    for t in tensors:
        acc = t if acc is None else ambient_mul(algs, acc, t)
    return acc


# -- the two double constructions --------------------------------------------

class Doubles:
    """All derived structure for one base Hopf presentation A."""

    def __init__(self, A: HopfPresentation):
        A.validate()
        self.A = A
        self.field = A.field
        self.d = A.dim
        self._delta = {a: list(A.coproduct_of(a).entries.items())
                       for a in range(A.dim)}
        self._delta2 = {a: self._iterated_coproduct(a) for a in range(A.dim)}
        self.double = self._build_double_hopf()
        self.double_ops = algebra_of_hopf(self.double, name=f"D({A.name})")
        self.smash = self._build_smash_ops()
        self.smash_op = self.smash.op()
        if self.d <= 6:
            self.double_ops.check_associative()
            self.smash.check_associative()
        self._canonical_cache: dict = {}
        self._embed_cache = None
        self._ribbon_cache = None

    # -- base-algebra helpers ------------------------------------------------
    def _iterated_coproduct(self, a: int):
        """List of ((a1, a2, a3), coeff) for the twice-iterated coproduct."""
        A = self.A
        out: dict = {}
        for (a1, mid), v in A.coproduct_of(a).entries.items():
            for (a2, a3), w in A.coproduct_of(mid).entries.items():
                key = (a1, a2, a3)
                out[key] = A.field.add(out.get(key, A.field.zero()),
                                       A.field.mul(v, w))
        return [(k, v) for k, v in out.items() if not A.field.is_zero(v)]

    def dual_mul(self, fvec: SparseTensor, gvec: SparseTensor) -> SparseTensor:
        """Product of covectors: (fg)(x) = sum f(x') g(x'')."""
        A = self.A
        f = A.field
        out = SparseTensor(f, (A.dim,))
        for (m, p, q), v in A.comult.entries.items():
            fp = fvec.entries.get((p,))
            gq = gvec.entries.get((q,))
            if fp is not None and gq is not None:
                out.add_at((m,), f.mul(v, f.mul(fp, gq)))
        return out

    def gammabar_star(self, fvec: SparseTensor) -> SparseTensor:
        """Transpose of the inverse antipode acting on covectors."""
        return contract(self.A.antipode_inv, fvec, [1], [0])

    def gamma_star(self, fvec: SparseTensor) -> SparseTensor:
        return contract(self.A.antipode, fvec, [1], [0])

    def pair_index(self, fi: int, xi: int) -> int:
        return fi * self.d + xi

    def pure(self, fvec: SparseTensor, xvec: SparseTensor) -> SparseTensor:
        """Flatten f (x) x into a vector over the d^2 double/smash basis."""
        f = self.field
        out = SparseTensor(f, (self.d * self.d,))
        for (i,), vf in fvec.entries.items():
            for (j,), vx in xvec.entries.items():
                out.add_at((i * self.d + j,), f.mul(vf, vx))
        return out

    @property
    def eps_vec(self) -> SparseTensor:
        return self.A.counit

    # -- double ----------------------------------------------------------------
    def _double_bp(self, p: int, q: int) -> SparseTensor:
        A, f, d = self.A, self.field, self.d
        i, j = divmod(p, d)
        k, l = divmod(q, d)
        out = SparseTensor(f, (d * d,))
        e_i = _basis_vec(f, d, i)
        for (j1, j2, j3), c in self._delta2[j]:
            gbar_j3 = A.apply_antipode_inv(_basis_vec(f, d, j3))
            h = SparseTensor(f, (d,))
            # h_m = < e^k, ibar(e_j3) e_m e_j1 >
            for m in range(d):
                prod = A.multiply(A.multiply(gbar_j3, _basis_vec(f, d, m)),
                                  _basis_vec(f, d, j1))
                coef = prod.entries.get((k,))
                if coef is not None:
                    h.add_at((m,), coef)
            if h.is_zero():
                continue
            f1 = self.dual_mul(e_i, h)
            a2 = A.basis_product(j2, l)
            for (m,), vf in f1.entries.items():
                for (n,), va in a2.entries.items():
                    out.add_at((m * d + n,), f.mul(c, f.mul(vf, va)))
        return out

    def _smash_bp_factory(self):
        A, f, d = self.A, self.field, self.d

        def bp(p: int, q: int) -> SparseTensor:
            i, j = divmod(p, d)
            k, l = divmod(q, d)
            out = SparseTensor(f, (d * d,))
            e_i = _basis_vec(f, d, i)
            for (j1, j2), c in self._delta[j]:
                h = SparseTensor(f, (d,))
                # h_m = < e^k, e_m e_j1 >
                for (m, jj, kk), v in A.mult.entries.items():
                    if jj == j1 and kk == k:
                        h.add_at((m,), v)
                if h.is_zero():
                    continue
                f1 = self.dual_mul(e_i, h)
                a2 = A.basis_product(j2, l)
                for (m,), vf in f1.entries.items():
                    for (n,), va in a2.entries.items():
                        out.add_at((m * d + n,), f.mul(c, f.mul(vf, va)))
            return out
        return bp

    def _build_smash_ops(self) -> AlgebraOps:
        unit = self.pure(self.eps_vec, self.A.unit)
        return AlgebraOps(f"H({self.A.name})", self.field, self.d * self.d,
                          unit, self._smash_bp_factory())

    def _build_double_hopf(self) -> HopfPresentation:
        """Assemble the double as a full Hopf presentation and validate it."""
        A, f, d = self.A, self.field, self.d
        n = d * d
        mult = SparseTensor(f, (n, n, n))
        for p in range(n):
            for q in range(n):
                for (r,), v in self._double_bp(p, q).entries.items():
                    mult.add_at((p, q, r), v)
        comult = SparseTensor(f, (n, n, n))
        # coproduct(f (x) a) = sum (f'' (x) a') (x) (f' (x) a'')
        # with f', f'' the standard duals of the multiplication of A
        for (q, p, i), v in A.mult.entries.items():
            # the second dual factor of e^i (w.r.t. e_q e_p) comes first
            for (j, a1, a2), w in A.comult.entries.items():
                comult.add_at((i * d + j, p * d + a1, q * d + a2),
                              f.mul(v, w))
        unit = self.pure(self.eps_vec, A.unit)
        counit = SparseTensor(f, (n,))
        for i in range(d):
            fi = A.unit.entries.get((i,))
            if fi is None:
                continue
            for j in range(d):
                cj = A.counit.entries.get((j,))
                if cj is not None:
                    counit.add_at((i * d + j,), f.mul(fi, cj))
        antipode = self._double_antipode_tensor()
        D = HopfPresentation(f, n, unit, counit, mult, comult, antipode,
                             name=f"D({A.name})")
        return D

    def _double_antipode_tensor(self) -> SparseTensor:
        """antipode(f (x) a) = (1 (x) gamma(a)) * (ibar^*(f) (x) 1).

        Both tensor factors include into the double as Hopf algebra maps,
        and f (x) a = (f (x) 1)(1 (x) a), so the anti-homomorphism property
        determines the antipode from the two factor antipodes.
        """
        A, f, d = self.A, self.field, self.d
        n = d * d
        out = SparseTensor(f, (n, n))
        for i in range(d):
            fpart = self.pure(self.gammabar_star(_basis_vec(f, d, i)), A.unit)
            for j in range(d):
                apart = self.pure(self.eps_vec,
                                  A.apply_antipode(_basis_vec(f, d, j)))
                val = SparseTensor(f, (n,))
                for (p,), va in apart.entries.items():
                    for (q,), vb in fpart.entries.items():
                        for (r,), vc in self._double_bp(p, q).entries.items():
                            val.add_at((r,), f.mul(va, f.mul(vb, vc)))
                for (r,), vv in val.entries.items():
                    out.add_at((i * d + j, r), vv)
        return out

    # -- canonical elements ------------------------------------------------
    def braiding(self) -> SparseTensor:
        """R = sum (1 (x) e_a) (x) (e^a (x) 1) in double (x) double."""
        key = "R"
        if key not in self._canonical_cache:
            f, d = self.field, self.d
            n = d * d
            out = SparseTensor(f, (n, n))
            for a in range(d):
                alpha = self.pure(self.eps_vec, _basis_vec(f, d, a))
                beta = self.pure(_basis_vec(f, d, a), self.A.unit)
                for (p,), vp in alpha.entries.items():
                    for (q,), vq in beta.entries.items():
                        out.add_at((p, q), f.mul(vp, vq))
            self._canonical_cache[key] = out
        return self._canonical_cache[key]

    def braiding_inverse(self) -> SparseTensor:
        key = "Rinv"
        if key not in self._canonical_cache:
            amb = [self.double_ops, self.double_ops]
            self._canonical_cache[key] = invert_in_ambient(amb, self.braiding())
        return self._canonical_cache[key]

    def pentagon_element(self, tilde_elem: bool = False,
                         tilde_func: bool = False) -> SparseTensor:
        """S and its decorated flavours, as arity-2 tensors over smash bases.

        First tensorand: the element part (1 (x) e_a), antipode-twisted when
        ``tilde_elem``.  Second: the functional part (e^a (x) 1), twisted by
        the transposed inverse antipode when ``tilde_func``.
        """
        key = ("S", tilde_elem, tilde_func)
        if key not in self._canonical_cache:
            f, d = self.field, self.d
            n = d * d
            out = SparseTensor(f, (n, n))
            for a in range(d):
                xv = _basis_vec(f, d, a)
                if tilde_elem:
                    xv = self.A.apply_antipode(xv)
                fv = _basis_vec(f, d, a)
                if tilde_func:
                    fv = self.gammabar_star(fv)
                first = self.pure(self.eps_vec, xv)
                second = self.pure(fv, self.A.unit)
                for (p,), vp in first.entries.items():
                    for (q,), vq in second.entries.items():
                        out.add_at((p, q), f.mul(vp, vq))
            self._canonical_cache[key] = out
        return self._canonical_cache[key]

    def variant(self, name: str) -> SparseTensor:
        """S, Sp (tilde element), Spp (tilde functional), St (both)."""
        flags = {"S": (False, False), "Sp": (True, False),
                 "Spp": (False, True), "St": (True, True)}[name]
        return self.pentagon_element(*flags)

    def variant_ambient(self, name: str):
        """Ambient algebras of the two tensorands of a flavour of S."""
        H, Hop = self.smash, self.smash_op
        return {"S": (H, H), "Sp": (Hop, H),
                "Spp": (H, Hop), "St": (Hop, Hop)}[name]

    def variant_inverse(self, name: str) -> SparseTensor:
        key = ("Sinv", name)
        if key not in self._canonical_cache:
            amb = list(self.variant_ambient(name))
            self._canonical_cache[key] = invert_in_ambient(amb, self.variant(name))
        return self._canonical_cache[key]

    # -- embedding into smash (x) smash^op ----------------------------------
    def embed_matrix(self):
        """Map of the double into smash (x) smash^op, per-basis images.

        Returns a list over double-basis indices of arity-2 tensors with
        slots (smash, smash^op).
        """
        if self._embed_cache is None:
            A, f, d = self.A, self.field, self.d
            n = d * d
            images = []
            # dual iterated coproduct of e^i: coefficients of e^p (x) e^q (x) e^r
            # are the coefficients of e_i in e_p e_q e_r
            triple = {}
            for (p, q, m), v in A.mult.entries.items():
                for (m2, r, i) , w in A.mult.entries.items():
                    if m2 == m:
                        triple.setdefault(i, []).append(
                            ((p, q, r), f.mul(v, w)))
            for i in range(d):
                for j in range(d):
                    img = SparseTensor(f, (n, n))
                    for (p, q, r), v in triple.get(i, []):
                        for (x1, x2, x3), w in self._delta2[j]:
                            # < e^p , e_x3 >
                            if p != x3:
                                continue
                            coef = f.mul(v, w)
                            first = self.pure(_basis_vec(f, d, r),
                                              _basis_vec(f, d, x1))
                            second = self.pure(
                                self.gammabar_star(_basis_vec(f, d, q)),
                                A.apply_antipode(_basis_vec(f, d, x2)))
                            for (s1,), v1 in first.entries.items():
                                for (s2,), v2 in second.entries.items():
                                    img.add_at((s1, s2),
                                               f.mul(coef, f.mul(v1, v2)))
                    images.append(img)
            self._embed_cache = images
        return self._embed_cache

    def embed_element(self, x: SparseTensor) -> SparseTensor:
        """Apply the embedding to a vector over the double's basis."""
        f = self.field
        n = self.d * self.d
        out = SparseTensor(f, (n, n))
        images = self.embed_matrix()
        for (p,), v in x.entries.items():
            for idx, w in images[p].entries.items():
                out.add_at(idx, f.mul(v, w))
        return out

    # -- ribbon data ---------------------------------------------------------
    def ribbon(self):
        """(u, u_inverse, c) with u = sum antipode(beta) alpha and c = u antipode(u)."""
        if self._ribbon_cache is None:
            f, d, D = self.field, self.d, self.double
            n = d * d
            u = SparseTensor(f, (n,))
            ops = self.double_ops
            for a in range(d):
                alpha = self.pure(self.eps_vec, _basis_vec(f, d, a))
                beta = self.pure(_basis_vec(f, d, a), self.A.unit)
                u = u.add(ops.mul(D.apply_antipode(beta), alpha))
            u_inv = ops.invert(u)
            c = ops.mul(u, D.apply_antipode(u))
            self._ribbon_cache = (u, u_inv, c)
        return self._ribbon_cache

    def is_central_in_double(self, x: SparseTensor) -> bool:
        ops = self.double_ops
        for p in range(ops.dim):
            e = _basis_vec(self.field, ops.dim, p)
            if ops.mul(x, e) != ops.mul(e, x):
                return False
        return True


def invert_in_ambient(algs, t: SparseTensor) -> SparseTensor:
    """Invert an arity-k tensor inside the tensor-product algebra."""
    flat = algs[0]
    for a in algs[1:]:
        flat = pair_algebra(flat, a)
    dims = [a.dim for a in algs]

    def flatten(x: SparseTensor) -> SparseTensor:
        out = SparseTensor(x.field, (flat.dim,))
        for idx, v in x.entries.items():
            lin = 0
            for i, d in zip(idx, dims):
                lin = lin * d + i
            out.add_at((lin,), v)
        return out

    def unflatten(x: SparseTensor) -> SparseTensor:
        out = SparseTensor(x.field, tuple(dims))
        for (lin,), v in x.entries.items():
            idx = []
            for d in reversed(dims):
                lin, r = divmod(lin, d)
                idx.append(r)
            out.add_at(tuple(reversed(idx)), v)
        return out
    return unflatten(flat.invert(flatten(t)))


# -- theta extension ---------------------------------------------------------

class ThetaAlgebra(AlgebraOps):
    """Adjoin a central square root: base algebra extended by a degree-one
    generator t with t^2 rewritten to left-multiplication by ``csq``.

    Basis index: deg * base.dim + i for (basis element i) * t^deg.
    """

    def __init__(self, base: AlgebraOps, csq: SparseTensor, name: str = ""):
        self.base = base
        self.csq = csq
        f, n = base.field, base.dim
        unit = SparseTensor(f, (2 * n,),
                            {(i,): v for (i,), v in base.unit.entries.items()})

        def bp(p, q):
            d1, i = divmod(p, n)
            d2, j = divmod(q, n)
            prod = base.bp(i, j)
            deg = d1 + d2
            if deg == 2:
                prod = base.mul(csq, prod)
                deg = 0
            out = SparseTensor(f, (2 * n,))
            for (k,), v in prod.entries.items():
                out.add_at((deg * n + k,), v)
            return out
        super().__init__(name or base.name + "^theta", f, 2 * n, unit, bp)

    def lift(self, x: SparseTensor, deg: int = 0) -> SparseTensor:
        n = self.base.dim
        out = SparseTensor(self.field, (2 * n,))
        for (i,), v in x.entries.items():
            out.add_at((deg * n + i,), v)
        return out

    def theta(self) -> SparseTensor:
        return self.lift(self.base.unit, 1)

    def theta_inverse(self) -> SparseTensor:
        return self.lift(self.base.invert(self.csq), 1)

    def degree_part(self, x: SparseTensor, deg: int) -> SparseTensor:
        n = self.base.dim
        out = SparseTensor(self.field, (n,))
        for (p,), v in x.entries.items():
            d, i = divmod(p, n)
            if d == deg:
                out.add_at((i,), v)
        return out


# -- identity checks ----------------------------------------------------------

class IdentityFailure(Exception):
    """An algebraic identity failed; the message carries a witness."""


def _expect_equal(lhs: SparseTensor, rhs: SparseTensor, what: str):
    if lhs != rhs:
        diff = lhs.sub(rhs)
        idx, v = next(iter(diff.sorted_items()))
        raise IdentityFailure(f"{what}: differs at index {idx} by {v}")


def check_qybe(dd: Doubles) -> None:
    ops = dd.double_ops
    amb = [ops, ops, ops]
    R = dd.braiding()
    r12 = ambient_place(amb, R, [0, 1])
    r13 = ambient_place(amb, R, [0, 2])
    r23 = ambient_place(amb, R, [1, 2])
    lhs = ambient_mul_many(amb, [r12, r13, r23])
    rhs = ambient_mul_many(amb, [r23, r13, r12])
    _expect_equal(lhs, rhs, "quantum Yang-Baxter for R")
    # invertibility
    Rinv = dd.braiding_inverse()
    prod = ambient_mul([ops, ops], R, Rinv)
    _expect_equal(prod, ambient_unit([ops, ops]), "R R^-1 = 1")


def check_pentagon(dd: Doubles) -> None:
    H = dd.smash
    amb = [H, H, H]
    S = dd.variant("S")
    s12 = ambient_place(amb, S, [0, 1])
    s13 = ambient_place(amb, S, [0, 2])
    s23 = ambient_place(amb, S, [1, 2])
    lhs = ambient_mul(amb, s12, ambient_mul(amb, s13, s23))
    rhs = ambient_mul(amb, s23, s12)
    _expect_equal(lhs, rhs, "pentagon for S")


# the eight decorated pentagon identities, one per choice of ambient signature
PENTAGON_VARIANTS = [
    # (signature, long side as [(name, slots)...], short side as [...])
    # signature True means the slot multiplies oppositely
    ((False, False, False),
     [("S", (0, 1)), ("S", (0, 2)), ("S", (1, 2))], [("S", (1, 2)), ("S", (0, 1))]),
    ((True, False, False),
     [("Sp", (0, 1)), ("Sp", (0, 2)), ("S", (1, 2))], [("S", (1, 2)), ("Sp", (0, 1))]),
    ((False, False, True),
     [("S", (0, 1)), ("Spp", (0, 2)), ("Spp", (1, 2))], [("Spp", (1, 2)), ("S", (0, 1))]),
    ((True, False, True),
     [("Sp", (0, 1)), ("St", (0, 2)), ("Spp", (1, 2))], [("Spp", (1, 2)), ("Sp", (0, 1))]),
    ((False, True, False),
     [("Sp", (1, 2)), ("S", (0, 2)), ("Spp", (0, 1))], [("Spp", (0, 1)), ("Sp", (1, 2))]),
    ((True, True, False),
     [("Sp", (1, 2)), ("Sp", (0, 2)), ("St", (0, 1))], [("St", (0, 1)), ("Sp", (1, 2))]),
    ((False, True, True),
     [("St", (1, 2)), ("Spp", (0, 2)), ("Spp", (0, 1))], [("Spp", (0, 1)), ("St", (1, 2))]),
    ((True, True, True),
     [("St", (1, 2)), ("St", (0, 2)), ("St", (0, 1))], [("St", (0, 1)), ("St", (1, 2))]),
]


def check_pentagon_variants(dd: Doubles) -> None:
    for sig, long_side, short_side in PENTAGON_VARIANTS:
        amb = [dd.smash_op if o else dd.smash for o in sig]
        def side(word):
            # words are recorded leftmost factor first
            placed = [ambient_place(amb, dd.variant(nm), list(slots))
                      for nm, slots in word]
            return ambient_mul_many(amb, placed)
        lhs = side(long_side)
        rhs = side(short_side)
        _expect_equal(lhs, rhs, f"pentagon variant signature {sig}")


def check_embedding_multiplicative(dd: Doubles) -> None:
    amb = [dd.smash, dd.smash_op]
    images = dd.embed_matrix()
    n = dd.d * dd.d
    unit_img = dd.embed_element(dd.double.unit)
    _expect_equal(unit_img, ambient_unit(amb), "embedding preserves the unit")
    for p in range(n):
        for q in range(n):
            lhs = dd.embed_element(dd.double_ops.bp(p, q))
            rhs = ambient_mul(amb, images[p], images[q])
            _expect_equal(lhs, rhs, f"embedding multiplicative at ({p},{q})")


def check_r_factorization(dd: Doubles) -> None:
    """phi (x) phi of R equals Spp_14 S_13 St_24 Sp_23."""
    f = dd.field
    n = dd.d * dd.d
    amb = [dd.smash, dd.smash_op, dd.smash, dd.smash_op]
    R = dd.braiding()
    images = dd.embed_matrix()
    lhs = SparseTensor(f, (n, n, n, n))
    for (p, q), v in R.entries.items():
        for i1, v1 in images[p].entries.items():
            for i2, v2 in images[q].entries.items():
                lhs.add_at(i1 + i2, f.mul(v, f.mul(v1, v2)))
    word = [("Spp", (0, 3)), ("S", (0, 2)), ("St", (1, 3)), ("Sp", (1, 2))]
    placed = [ambient_place(amb, dd.variant(nm), list(slots)) for nm, slots in word]
    rhs = ambient_mul_many(amb, placed)
    _expect_equal(lhs, rhs, "factorization of the embedded braiding")


def check_dual_smash_iso(dd: Doubles) -> None:
    """smash(A^*) is isomorphic, as an algebra, to smash(A)^op via
    x (x) f |-> ibar^*(f) (x) gamma(x)."""
    A = dd.A
    dstar = Doubles(A.dual())
    f, d = dd.field, dd.d
    n = d * d

    def iso(p: int) -> SparseTensor:
        # basis of smash(A*) is e_x (x) e^f (double-dual identified with A)
        x, fi = divmod(p, d)
        fv = dd.gammabar_star(_basis_vec(f, d, fi))
        xv = A.apply_antipode(_basis_vec(f, d, x))
        return dd.pure(fv, xv)
    target = dd.smash_op
    for p in range(n):
        for q in range(n):
            lhs = SparseTensor(f, (n,))
            for (r,), v in dstar.smash.bp(p, q).entries.items():
                for (s,), w in iso(r).entries.items():
                    lhs.add_at((s,), f.mul(v, w))
            rhs = target.mul(iso(p), iso(q))
            _expect_equal(lhs, rhs, f"dual smash isomorphism at ({p},{q})")
    _expect_equal(iso_image_of_unit(dstar, iso), target.unit,
                  "dual smash isomorphism preserves the unit")


def iso_image_of_unit(dstar: Doubles, iso) -> SparseTensor:
    f = dstar.field
    n = dstar.d * dstar.d
    out = SparseTensor(f, (n,))
    for (p,), v in dstar.smash.unit.entries.items():
        for (s,), w in iso(p).entries.items():
            out.add_at((s,), f.mul(v, w))
    return out


def _twist_first(dd: Doubles, t: SparseTensor) -> SparseTensor:
    """Apply id (x) antipode to the element part of the first tensorand."""
    f, d = dd.field, dd.d
    n = d * d
    out = SparseTensor(f, (n, n))
    for (p, q), v in t.entries.items():
        fi, xi = divmod(p, d)
        gx = dd.A.apply_antipode(_basis_vec(f, d, xi))
        for (y,), w in gx.entries.items():
            out.add_at((fi * d + y, q), f.mul(v, w))
    return out


def _twist_second(dd: Doubles, t: SparseTensor) -> SparseTensor:
    """Apply ibar^* (x) id to the functional part of the second tensorand."""
    f, d = dd.field, dd.d
    n = d * d
    out = SparseTensor(f, (n, n))
    for (p, q), v in t.entries.items():
        fi, xi = divmod(q, d)
        gf = dd.gammabar_star(_basis_vec(f, d, fi))
        for (y,), w in gf.entries.items():
            out.add_at((p, y * d + xi), f.mul(v, w))
    return out


def check_antipode_twists(dd: Doubles) -> None:
    """Twelve identities: for each flavour X of the pentagon element,
    twisting the element part gives X^-1, untwisting the functional part of
    X^-1 gives X, and twisting both parts fixes X."""
    for name in ("S", "Sp", "Spp", "St"):
        X = dd.variant(name)
        Xinv = dd.variant_inverse(name)
        _expect_equal(_twist_first(dd, X), Xinv,
                      f"element twist of {name} is its inverse")
        _expect_equal(_twist_second(dd, Xinv), X,
                      f"functional twist of {name}^-1 recovers {name}")
        _expect_equal(_twist_second(dd, _twist_first(dd, X)), X,
                      f"double twist fixes {name}")


def check_antipode_twists_exceptional(dd: Doubles) -> None:
    """The two extra twist identities that require an involutive antipode."""
    for name in ("S", "Sp", "Spp", "St"):
        X = dd.variant(name)
        Xinv = dd.variant_inverse(name)
        _expect_equal(_twist_second(dd, X), Xinv,
                      f"functional twist of {name} is its inverse")
        _expect_equal(_twist_first(dd, Xinv), X,
                      f"element twist of {name}^-1 recovers {name}")


IDENTITY_CHECKS = {
    "qybe": check_qybe,
    "pentagon": check_pentagon,
    "pentagon-variants": check_pentagon_variants,
    "embedding": check_embedding_multiplicative,
    "r-factorization": check_r_factorization,
    "dual-smash-iso": check_dual_smash_iso,
    "antipode-twists": check_antipode_twists,
    "antipode-twists-exceptional": check_antipode_twists_exceptional,
}


def check_identity(dd: Doubles, name: str) -> None:
    try:
        fn = IDENTITY_CHECKS[name]
    except KeyError:
        raise ValueError(f"unknown identity {name!r}; choices: "
                         f"{sorted(IDENTITY_CHECKS)}")
    fn(dd)
