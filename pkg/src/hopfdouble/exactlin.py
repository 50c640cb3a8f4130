"""Exact scalar fields, sparse multi-index tensors and exact linear algebra.

All arithmetic is exact: rationals use :class:`fractions.Fraction`, finite
prime fields use canonical integer representatives in ``[0, p)``.  No floats
appear anywhere in this package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ExactError(Exception):
    """Base class for errors raised by exact linear algebra."""


class NoSolutionError(ExactError):
    """Raised when a linear system has no solution."""


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """A computable field: the rationals (``p == 0``) or F_p for prime p."""

    p: int = 0

    def __post_init__(self) -> None:
        if self.p != 0 and not _is_probable_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def from_int(self, n: int):
        if self.p:
            return n % self.p
        return Fraction(n)

    def from_fraction(self, num: int, den: int = 1):
        if self.p:
            return num * pow(den, -1, self.p) % self.p
        return Fraction(num, den)

    def zero(self):
        return 0 if self.p else Fraction(0)

    def one(self):
        return 1 if self.p else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def to_json(self):
        return {"kind": "Q"} if self.p == 0 else {"kind": "Fp", "p": self.p}

    @staticmethod
    def from_json(obj) -> "Field":
        if not isinstance(obj, Mapping) or "kind" not in obj:
            raise ValueError("field descriptor must be an object with a 'kind'")
        if obj["kind"] == "Q":
            return Field(0)
        if obj["kind"] == "Fp":
            return Field(int(obj["p"]))
        raise ValueError(f"unknown field kind {obj['kind']!r}")

    def scalar_repr(self, a) -> str:
        return str(a)


QQ = Field(0)


class SparseTensor:
    """Sparse tensor over a :class:`Field`, keyed by integer multi-indices.

    Canonical form: only nonzero entries are stored.  Equality and hashing
    use the sorted entry list, so structurally equal tensors compare equal.
    """

    __slots__ = ("field", "dims", "entries")

    def __init__(self, field: Field, dims: Sequence[int],
                 entries: Mapping[tuple, object] | None = None):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        self.entries: dict = {}
        if entries:
            for idx, val in entries.items():
                self[tuple(idx)] = val

    # -- basic access -----------------------------------------------------
    @property
    def arity(self) -> int:
        return len(self.dims)

    def _check_index(self, idx: tuple) -> None:
        if len(idx) != len(self.dims):
            raise IndexError(f"index arity {len(idx)} != tensor arity {len(self.dims)}")
        for i, d in zip(idx, self.dims):
            if not 0 <= i < d:
                raise IndexError(f"index {idx} out of bounds for dims {self.dims}")

    def __getitem__(self, idx):
        idx = tuple(idx)
        self._check_index(idx)
        return self.entries.get(idx, self.field.zero())

    def __setitem__(self, idx, val):
        idx = tuple(idx)
        self._check_index(idx)
        if self.field.is_zero(val):
            self.entries.pop(idx, None)
        else:
            self.entries[idx] = val

    def add_at(self, idx, val) -> None:
        idx = tuple(idx)
        cur = self.entries.get(idx)
        new = self.field.add(cur, val) if cur is not None else val
        if self.field.is_zero(new):
            self.entries.pop(idx, None)
        else:
            self.entries[idx] = new

    def items(self):
        return self.entries.items()

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def copy(self) -> "SparseTensor":
        t = SparseTensor(self.field, self.dims)
        t.entries = dict(self.entries)
        return t

    # -- algebra ----------------------------------------------------------
    def scale(self, c) -> "SparseTensor":
        out = SparseTensor(self.field, self.dims)
        if self.field.is_zero(c):
            return out
        for idx, v in self.entries.items():
            out.entries[idx] = self.field.mul(c, v)
        return out

    def add(self, other: "SparseTensor") -> "SparseTensor":
        self._check_compatible(other)
        out = self.copy()
        for idx, v in other.entries.items():
            out.add_at(idx, v)
        return out

    def sub(self, other: "SparseTensor") -> "SparseTensor":
        return self.add(other.scale(self.field.from_int(-1)))

    def outer(self, other: "SparseTensor") -> "SparseTensor":
        if self.field != other.field:
            raise ValueError("field mismatch")
        out = SparseTensor(self.field, self.dims + other.dims)
        for i1, v1 in self.entries.items():
            for i2, v2 in other.entries.items():
                out.entries[i1 + i2] = self.field.mul(v1, v2)
        return out

    def _check_compatible(self, other: "SparseTensor") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.dims != other.dims:
            raise ValueError(f"shape mismatch {self.dims} vs {other.dims}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return (self.field == other.field and self.dims == other.dims
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.dims, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        items = ", ".join(f"{idx}: {v}" for idx, v in sorted(self.entries.items()))
        return f"SparseTensor(dims={self.dims}, {{{items}}})"

    def sorted_items(self):
        return sorted(self.entries.items())

    def to_json(self):
        return [[list(idx), _scalar_to_json(v)] for idx, v in self.sorted_items()]

    @staticmethod
    def from_json(field: Field, dims: Sequence[int], data) -> "SparseTensor":
        t = SparseTensor(field, dims)
        for idx, v in data:
            t.add_at(tuple(idx), _scalar_from_json(field, v))
        return t


def _scalar_to_json(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    return v


def _scalar_from_json(field: Field, v):
    if isinstance(v, str):
        if "/" in v:
            num, den = v.split("/")
            return field.from_fraction(int(num), int(den))
        return field.from_int(int(v))
    return field.from_int(int(v))


def place(x: SparseTensor, slots: Sequence[int], ambient_dims: Sequence[int],
          units: Sequence[SparseTensor | None]) -> SparseTensor:
    """Embed arity-m tensor ``x`` into an arity-k ambient tensor.

    ``slots[i]`` is the ambient position receiving axis ``i`` of ``x``
    (0-based, distinct).  Every ambient position not in ``slots`` is filled
    with the arity-1 tensor ``units[j]`` supplied by the caller.
    """
    k = len(ambient_dims)
    slots = list(slots)
    if len(set(slots)) != len(slots):
        raise ValueError("slots must be distinct")
    if len(slots) != x.arity:
        raise ValueError("one slot per tensor axis is required")
    for i, j in enumerate(slots):
        if not 0 <= j < k:
            raise ValueError(f"slot {j} out of range")
        if ambient_dims[j] != x.dims[i]:
            raise ValueError(f"axis {i} (dim {x.dims[i]}) does not fit slot {j}")
    free = [j for j in range(k) if j not in slots]
    for j in free:
        u = units[j]
        if u is None or u.arity != 1 or u.dims[0] != ambient_dims[j]:
            raise ValueError(f"missing/invalid unit vector for ambient slot {j}")
    out = SparseTensor(x.field, ambient_dims)
    unit_items = [list(units[j].entries.items()) for j in free]
    import itertools
    for idx, v in x.entries.items():
        for combo in itertools.product(*unit_items):
            full = [0] * k
            coeff = v
            for i, j in enumerate(slots):
                full[j] = idx[i]
            for (uj, (ui, uv)) in zip(free, combo):
                full[uj] = ui[0]
                coeff = x.field.mul(coeff, uv)
            out.add_at(tuple(full), coeff)
    return out


def contract(a: SparseTensor, b: SparseTensor,
             axes_a: Sequence[int], axes_b: Sequence[int]) -> SparseTensor:
    """Contract axes_a of ``a`` against axes_b of ``b`` (pairwise).

    Output axes: the remaining axes of ``a`` in order, then those of ``b``.
    """
    if a.field != b.field:
        raise ValueError("field mismatch")
    axes_a, axes_b = list(axes_a), list(axes_b)
    if len(axes_a) != len(axes_b):
        raise ValueError("axis lists must have equal length")
    for ia, ib in zip(axes_a, axes_b):
        if a.dims[ia] != b.dims[ib]:
            raise ValueError("contracted axes must have equal dims")
    keep_a = [i for i in range(a.arity) if i not in axes_a]
    keep_b = [i for i in range(b.arity) if i not in axes_b]
    out = SparseTensor(a.field, [a.dims[i] for i in keep_a] + [b.dims[i] for i in keep_b])
    # bucket b entries by contracted index for fast matching
    buckets: dict = {}
    for idx, v in b.entries.items():
        key = tuple(idx[i] for i in axes_b)
        buckets.setdefault(key, []).append((idx, v))
    for idx, v in a.entries.items():
        key = tuple(idx[i] for i in axes_a)
        hits = buckets.get(key)
        if not hits:
            continue
        pa = tuple(idx[i] for i in keep_a)
        for bidx, bv in hits:
            out.add_at(pa + tuple(bidx[i] for i in keep_b), a.field.mul(v, bv))
    return out


# -- exact dense linear algebra -------------------------------------------

def solve_linear(field: Field, rows: Sequence[Sequence], rhs: Sequence,
                 require_unique: bool = False):
    """Solve ``M x = b`` exactly by Gaussian elimination.

    ``rows`` is a dense list of rows of M; ``rhs`` the right-hand side.
    Returns ``(x, unique)`` where ``x`` is one solution.  Raises
    :class:`NoSolutionError` when the system is inconsistent, and
    :class:`ExactError` when ``require_unique`` is set but the system is
    underdetermined.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if not field.is_zero(aug[i][c])), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        piv = field.inv(aug[r][c])
        aug[r] = [field.mul(piv, v) for v in aug[r]]
        for i in range(m):
            if i != r and not field.is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [field.sub(v, field.mul(f, w)) for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not field.is_zero(aug[i][n]):
            raise NoSolutionError("inconsistent linear system")
    unique = len(pivots) == n
    if require_unique and not unique:
        raise ExactError("underdetermined linear system")
    x = [field.zero()] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x, unique


class RowSpace:
    """Incremental exact row space (for spans/quotients).

    Rows are sparse dicts index -> scalar; pivot columns are normalized to 1.
    """

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.pivot_rows: dict = {}  # pivot column -> sparse row dict

    def reduce(self, vec: Mapping[int, object]) -> dict:
        f = self.field
        v = {i: c for i, c in vec.items() if not f.is_zero(c)}
        # rows are kept fully reduced (RREF), so one pass over pivot
        # coordinates eliminates every pivot column from v
        for lead in sorted(set(v) & set(self.pivot_rows)):
            coef = v.get(lead)
            if coef is None or f.is_zero(coef):
                continue
            for j, c in self.pivot_rows[lead].items():
                nj = f.sub(v.get(j, f.zero()), f.mul(coef, c))
                if f.is_zero(nj):
                    v.pop(j, None)
                else:
                    v[j] = nj
        return v

    def add(self, vec: Mapping[int, object]) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        f = self.field
        lead = min(v)
        inv = f.inv(v[lead])
        v = {j: f.mul(inv, c) for j, c in v.items()}
        # back-substitute into existing rows
        for piv, row in self.pivot_rows.items():
            if lead in row:
                coef = row[lead]
                for j, c in v.items():
                    nj = f.sub(row.get(j, f.zero()), f.mul(coef, c))
                    if f.is_zero(nj):
                        row.pop(j, None)
                    else:
                        row[j] = nj
        self.pivot_rows[lead] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)

    def complement_basis(self) -> list:
        """Indices of coordinates forming a basis of the quotient space."""
        return [i for i in range(self.dim) if i not in self.pivot_rows]

    def project_to_quotient(self, vec: Mapping[int, object]) -> dict:
        """Coordinates of the class of ``vec`` w.r.t. :meth:`complement_basis`."""
        v = self.reduce(vec)
        comp = {i: k for k, i in enumerate(self.complement_basis())}
        return {comp[i]: c for i, c in v.items()}
