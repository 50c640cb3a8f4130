"""Finite-dimensional Hopf algebras given by structure constants.

A presentation consists of a field, a dimension n, and exact sparse tensors
for the unit (n), counit (n), multiplication (n,n,n), comultiplication
(n,n,n) and antipode (n,n).  Conventions:

  * ``mult[a, b, c]``    is the coefficient of basis vector c in e_a * e_b
  * ``comult[a, b, c]``  is the coefficient of e_b (x) e_c in coproduct(e_a)
  * ``antipode[a, b]``   is the coefficient of e_b in antipode(e_a)

The inverse antipode is computed (and its existence checked) on
construction.  ``validate()`` checks every axiom by exact expansion.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field

from .exactlin import (Field, SparseTensor, NoSolutionError, ExactError,
                       contract, solve_linear, _scalar_to_json, _scalar_from_json)


class HopfAxiomError(Exception):
    """A Hopf algebra axiom failed; carries a witness description."""


@dataclass
class HopfPresentation:
    field: Field
    dim: int
    unit: SparseTensor        # arity 1
    counit: SparseTensor      # arity 1 (covector)
    mult: SparseTensor        # arity 3
    comult: SparseTensor      # arity 3
    antipode: SparseTensor    # arity 2
    name: str = ""
    antipode_inv: SparseTensor | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        n = self.dim
        expect = {"unit": (n,), "counit": (n,), "mult": (n, n, n),
                  "comult": (n, n, n), "antipode": (n, n)}
        for attr, dims in expect.items():
            t = getattr(self, attr)
            if t.dims != dims:
                raise ValueError(f"{attr} has dims {t.dims}, expected {dims}")
            if t.field != self.field:
                raise ValueError(f"{attr} lives over the wrong field")
        if self.antipode_inv is None:
            self.antipode_inv = _invert_matrix_tensor(self.antipode)

    # -- convenience ------------------------------------------------------
    def basis_product(self, a: int, b: int) -> SparseTensor:
        out = SparseTensor(self.field, (self.dim,))
        for (i, j, c), v in self.mult.entries.items():
            if i == a and j == b:
                out.add_at((c,), v)
        return out

    def coproduct_of(self, a: int) -> SparseTensor:
        out = SparseTensor(self.field, (self.dim, self.dim))
        for (i, b, c), v in self.comult.entries.items():
            if i == a:
                out.add_at((b, c), v)
        return out

    def apply_antipode(self, x: SparseTensor) -> SparseTensor:
        return contract(x, self.antipode, [0], [0])

    def apply_antipode_inv(self, x: SparseTensor) -> SparseTensor:
        return contract(x, self.antipode_inv, [0], [0])

    def multiply(self, x: SparseTensor, y: SparseTensor) -> SparseTensor:
        # (x*y)_c = sum_{a,b} x_a y_b mult[a,b,c]
        return contract(y, contract(x, self.mult, [0], [0]), [0], [0])

    def counit_of(self, x: SparseTensor):
        s = self.field.zero()
        for (i,), v in x.entries.items():
            s = self.field.add(s, self.field.mul(v, self.counit[(i,)]))
        return s

    # -- validation -------------------------------------------------------
    def validate(self) -> None:
        """Check every axiom by exact expansion; raise with a witness."""
        f, n = self.field, self.dim
        mult, com = self.mult, self.comult

        def msum(terms):
            s = f.zero()
            for t in terms:
                s = f.add(s, t)
            return s

        # associativity: (ab)c = a(bc)
        left = contract(mult, mult, [2], [0])    # axes a,b,c,d : (ab)c -> d
        right_raw = contract(mult, mult, [2], [1])  # axes b,c,a,d : a(bc) -> d
        right = _permute(right_raw, (2, 0, 1, 3))
        if left != right:
            raise HopfAxiomError(f"associativity fails: {_first_diff(left, right)}")
        # unit
        for a in range(n):
            e_a = _basis_vec(f, n, a)
            if self.multiply(self.unit, e_a) != e_a:
                raise HopfAxiomError(f"left unit fails at basis {a}")
            if self.multiply(e_a, self.unit) != e_a:
                raise HopfAxiomError(f"right unit fails at basis {a}")
        # coassociativity
        cleft = _permute(contract(com, com, [1], [0]), (0, 2, 3, 1))
        cright = contract(com, com, [2], [0])
        if cleft != cright:
            raise HopfAxiomError(f"coassociativity fails: {_first_diff(cleft, cright)}")
        # counit axioms
        for a in range(n):
            cp = self.coproduct_of(a)
            lt = contract(cp, self.counit, [0], [0])
            rt = contract(cp, self.counit, [1], [0])
            e_a = _basis_vec(f, n, a)
            if lt != e_a or rt != e_a:
                raise HopfAxiomError(f"counit axiom fails at basis {a}")
        # comultiplication of the unit is unit (x) unit
        cp_unit = contract(self.unit, com, [0], [0])
        if cp_unit != self.unit.outer(self.unit):
            raise HopfAxiomError("coproduct of unit is not unit (x) unit")
        # counit is an algebra map
        for a in range(n):
            for b in range(n):
                lhs = self.counit_of(self.basis_product(a, b))
                rhs = f.mul(self.counit[(a,)], self.counit[(b,)])
                if lhs != rhs:
                    raise HopfAxiomError(f"counit not multiplicative at ({a},{b})")
        # bialgebra compatibility: coproduct(ab) = coproduct(a) coproduct(b)
        for a in range(n):
            cp_a = self.coproduct_of(a)
            for b in range(n):
                cp_b = self.coproduct_of(b)
                lhs = contract(self.basis_product(a, b), com, [0], [0])
                rhs = SparseTensor(f, (n, n))
                for (a1, a2), va in cp_a.entries.items():
                    for (b1, b2), vb in cp_b.entries.items():
                        coeff = f.mul(va, vb)
                        p1 = self.basis_product(a1, b1)
                        p2 = self.basis_product(a2, b2)
                        for (c1,), v1 in p1.entries.items():
                            for (c2,), v2 in p2.entries.items():
                                rhs.add_at((c1, c2), f.mul(coeff, f.mul(v1, v2)))
                if lhs != rhs:
                    raise HopfAxiomError(f"coproduct not multiplicative at ({a},{b})")
        # antipode axioms: m(S (x) 1)coproduct = unit counit = m(1 (x) S)coproduct
        for a in range(n):
            cp = self.coproduct_of(a)
            ls = SparseTensor(f, (n,))
            rs = SparseTensor(f, (n,))
            for (a1, a2), v in cp.entries.items():
                g1 = self.apply_antipode(_basis_vec(f, n, a1))
                for (s1,), sv in g1.entries.items():
                    for (c,), pv in self.basis_product(s1, a2).entries.items():
                        ls.add_at((c,), f.mul(v, f.mul(sv, pv)))
                g2 = self.apply_antipode(_basis_vec(f, n, a2))
                for (s2,), sv in g2.entries.items():
                    for (c,), pv in self.basis_product(a1, s2).entries.items():
                        rs.add_at((c,), f.mul(v, f.mul(sv, pv)))
            target = self.unit.scale(self.counit[(a,)])
            if ls != target:
                raise HopfAxiomError(f"left antipode axiom fails at basis {a}")
            if rs != target:
                raise HopfAxiomError(f"right antipode axiom fails at basis {a}")

    # -- derived presentations ---------------------------------------------
    def dual(self, name: str = "") -> "HopfPresentation":
        """Dual Hopf algebra on the dual basis (all structure transposed)."""
        return HopfPresentation(
            field=self.field, dim=self.dim,
            unit=self.counit.copy(), counit=self.unit.copy(),
            mult=_permute(self.comult, (1, 2, 0)),
            comult=_permute(self.mult, (2, 0, 1)),
            antipode=_permute(self.antipode, (1, 0)),
            name=name or (self.name + "^*"))

    def opposite(self, name: str = "") -> "HopfPresentation":
        """Opposite multiplication; antipode is replaced by its inverse."""
        return HopfPresentation(
            field=self.field, dim=self.dim,
            unit=self.unit.copy(), counit=self.counit.copy(),
            mult=_permute(self.mult, (1, 0, 2)),
            comult=self.comult.copy(),
            antipode=self.antipode_inv.copy(),
            name=name or (self.name + "^op"))

    def co_opposite(self, name: str = "") -> "HopfPresentation":
        """Opposite comultiplication; antipode is replaced by its inverse."""
        return HopfPresentation(
            field=self.field, dim=self.dim,
            unit=self.unit.copy(), counit=self.counit.copy(),
            mult=self.mult.copy(),
            comult=_permute(self.comult, (0, 2, 1)),
            antipode=self.antipode_inv.copy(),
            name=name or (self.name + "^cop"))

    def op_cop(self, name: str = "") -> "HopfPresentation":
        """Opposite multiplication and comultiplication; same antipode."""
        return HopfPresentation(
            field=self.field, dim=self.dim,
            unit=self.unit.copy(), counit=self.counit.copy(),
            mult=_permute(self.mult, (1, 0, 2)),
            comult=_permute(self.comult, (0, 2, 1)),
            antipode=self.antipode.copy(),
            name=name or (self.name + "^opcop"))

    def antipode_order_two(self) -> bool:
        sq = contract(self.antipode, self.antipode, [1], [0])
        return sq == _identity_matrix(self.field, self.dim)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        def triples(t: SparseTensor):
            return [list(idx) + [_scalar_to_json(v)] for idx, v in t.sorted_items()]
        return {
            "field": self.field.to_json(),
            "dim": self.dim,
            "unit": triples(self.unit),
            "counit": triples(self.counit),
            "mult": triples(self.mult),
            "comult": triples(self.comult),
            "antipode": triples(self.antipode),
        }

    @staticmethod
    def from_json(obj, name: str = "") -> "HopfPresentation":
        try:
            fld = Field.from_json(obj["field"])
            n = int(obj["dim"])
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"malformed algebra file: {e}") from e
        if n <= 0:
            raise ValueError("dim must be positive")

        def load(key, arity):
            t = SparseTensor(fld, (n,) * arity)
            for row in obj.get(key, []):
                if len(row) != arity + 1:
                    raise ValueError(f"{key} entries need {arity} indices + value")
                idx = tuple(int(i) for i in row[:arity])
                t.add_at(idx, _scalar_from_json(fld, row[arity]))
            return t
        return HopfPresentation(
            field=fld, dim=n, unit=load("unit", 1), counit=load("counit", 1),
            mult=load("mult", 3), comult=load("comult", 3),
            antipode=load("antipode", 2), name=name)

    @staticmethod
    def load(path: str) -> "HopfPresentation":
        with open(path) as fh:
            return HopfPresentation.from_json(json.load(fh))


# -- helpers ----------------------------------------------------------------

def _basis_vec(field: Field, n: int, i: int) -> SparseTensor:
    return SparseTensor(field, (n,), {(i,): field.one()})


def _identity_matrix(field: Field, n: int) -> SparseTensor:
    return SparseTensor(field, (n, n), {(i, i): field.one() for i in range(n)})


def _permute(t: SparseTensor, perm) -> SparseTensor:
    out = SparseTensor(t.field, tuple(t.dims[p] for p in perm))
    for idx, v in t.entries.items():
        out.entries[tuple(idx[p] for p in perm)] = v
    return out


def _invert_matrix_tensor(m: SparseTensor) -> SparseTensor:
    """Inverse of an (n,n) tensor regarded as the matrix rows=input basis."""
    f = m.field
    n = m.dims[0]
    rows = [[m[(i, j)] for j in range(n)] for i in range(n)]
    # solve row-wise: find X with X m = identity, i.e. m^T X^T = I column-wise
    cols = []
    mt = [[rows[j][i] for j in range(n)] for i in range(n)]
    for k in range(n):
        e = [f.one() if i == k else f.zero() for i in range(n)]
        try:
            x, _ = solve_linear(f, mt, e, require_unique=True)
        except (NoSolutionError, ExactError) as err:
            raise HopfAxiomError("antipode is not invertible") from err
        cols.append(x)
    inv = SparseTensor(f, (n, n))
    for k in range(n):
        # x solves M^T x = e_k, i.e. x is row k of M^{-1}
        for j in range(n):
            inv.add_at((k, j), cols[k][j])
    return inv


def _first_diff(a: SparseTensor, b: SparseTensor) -> str:
    d = a.sub(b)
    idx, v = next(iter(d.sorted_items()))
    return f"index {idx}: difference {v}"


# -- builtin algebras --------------------------------------------------------

def group_algebra(elements, mul_table, inverse, field: Field, name: str) -> HopfPresentation:
    """Group algebra k[G]: grouplike basis, antipode by inversion."""
    n = len(elements)
    f = field
    unit_idx = next(i for i in range(n) if all(mul_table[i][j] == j for j in range(n)))
    unit = _basis_vec(f, n, unit_idx)
    counit = SparseTensor(f, (n,), {(i,): f.one() for i in range(n)})
    mult = SparseTensor(f, (n, n, n),
                        {(a, b, mul_table[a][b]): f.one()
                         for a in range(n) for b in range(n)})
    comult = SparseTensor(f, (n, n, n), {(a, a, a): f.one() for a in range(n)})
    antipode = SparseTensor(f, (n, n), {(a, inverse[a]): f.one() for a in range(n)})
    return HopfPresentation(f, n, unit, counit, mult, comult, antipode, name=name)


def cyclic_group_algebra(m: int, field: Field = None) -> HopfPresentation:
    f = field or Field(0)
    table = [[(a + b) % m for b in range(m)] for a in range(m)]
    inv = [(-a) % m for a in range(m)]
    return group_algebra(list(range(m)), table, inv, f, f"k[Z/{m}]")


def symmetric_group_algebra_s3(field: Field = None) -> HopfPresentation:
    f = field or Field(0)
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p o q)(i) = p[q[i]]
        return tuple(p[q[i]] for i in range(3))
    table = [[index[compose(p, q)] for q in perms] for p in perms]
    inv = [index[tuple(sorted(range(3), key=lambda i: p[i]))] for p in perms]
    return group_algebra(perms, table, inv, f, "k[S3]")


def sweedler4(field: Field = None) -> HopfPresentation:
    """The 4-dimensional algebra on basis {1, g, x, gx} with g^2=1, x^2=0,
    xg=-gx; the antipode has infinite order obstruction gamma^2 != id."""
    f = field or Field(0)
    if f.p == 2:
        raise ValueError("this presentation needs characteristic != 2")
    n = 4
    E, G, X, GX = range(4)
    one, neg = f.one(), f.from_int(-1)
    mult = SparseTensor(f, (n, n, n))
    table = {
        (E, E): [(E, one)], (E, G): [(G, one)], (E, X): [(X, one)], (E, GX): [(GX, one)],
        (G, E): [(G, one)], (G, G): [(E, one)], (G, X): [(GX, one)], (G, GX): [(X, one)],
        (X, E): [(X, one)], (X, G): [(GX, neg)], (X, X): [], (X, GX): [],
        (GX, E): [(GX, one)], (GX, G): [(X, neg)], (GX, X): [], (GX, GX): [],
    }
    for (a, b), terms in table.items():
        for c, v in terms:
            mult.add_at((a, b, c), v)
    comult = SparseTensor(f, (n, n, n))
    comult.add_at((E, E, E), one)
    comult.add_at((G, G, G), one)
    comult.add_at((X, X, E), one)        # x -> x (x) 1 + g (x) x
    comult.add_at((X, G, X), one)
    comult.add_at((GX, GX, G), one)      # gx -> gx (x) g + 1 (x) gx
    comult.add_at((GX, E, GX), one)
    unit = _basis_vec(f, n, E)
    counit = SparseTensor(f, (n,), {(E,): one, (G,): one})
    antipode = SparseTensor(f, (n, n))
    antipode.add_at((E, E), one)
    antipode.add_at((G, G), one)
    antipode.add_at((X, GX), neg)        # solves the antipode axiom
    antipode.add_at((GX, X), one)
    return HopfPresentation(f, n, unit, counit, mult, comult, antipode,
                            name="sweedler4")


def function_algebra_s3(field: Field = None) -> HopfPresentation:
    """Functions on S3 (pointwise product), the dual of k[S3]."""
    base = symmetric_group_algebra_s3(field)
    return base.dual(name="Fun(S3)")


BUILTINS = {
    "zmod2": lambda f=None: cyclic_group_algebra(2, f),
    "zmod3": lambda f=None: cyclic_group_algebra(3, f),
    "zmod4": lambda f=None: cyclic_group_algebra(4, f),
    "s3": symmetric_group_algebra_s3,
    "sweedler4": sweedler4,
    "fun_s3": function_algebra_s3,
}


def builtin(name: str, field: Field = None) -> HopfPresentation:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin algebra {name!r}; "
                         f"choices: {sorted(BUILTINS)}")
    return factory(field)
