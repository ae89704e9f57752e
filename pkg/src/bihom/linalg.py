"""Dense exact vectors, matrices, and small tensors.

Everything is stored as nested tuples of :class:`~bihom.fields.Scalar`
and is immutable after construction. Dimensions stay small (<= 8), so
dense storage and naive loops are the right tool.

Matrix convention: ``apply(F, v)[i] = sum_j F[i][j] * v[j]``, i.e. the
j-th column of F is the image of the j-th basis vector.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Sequence

from .fields import Field, FieldError, FieldMismatchError, Scalar


class DimensionError(ValueError):
    """Shapes of two exact objects do not line up."""


class NotBijectiveError(FieldError):
    """A linear map that must be invertible is singular."""

    def __init__(self, name: str):
        super().__init__(f"{name} is not bijective")
        self.name = name


def _same_field(field: Field, items) -> None:
    for s in items:
        if s.field is not field:
            raise FieldMismatchError("all entries must share one field kind")


class Vector:
    """Element of K^n."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence[Scalar]):
        coeffs = tuple(coeffs)
        _same_field(field, coeffs)
        self.field = field
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field: Field, n: int) -> "Vector":
        return cls(field, (field.zero,) * n)

    @classmethod
    def basis(cls, field: Field, n: int, i: int) -> "Vector":
        coeffs = [field.zero] * n
        coeffs[i] = field.one
        return cls(field, coeffs)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Scalar:
        return self.coeffs[i]

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.coeffs)

    def _check(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"vector dims {self.dim} != {other.dim}")
        if self.field is not other.field:
            raise FieldMismatchError("vectors over different fields")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Vector":
        return Vector(self.field, tuple(-a for a in self.coeffs))

    def scale(self, c: Scalar) -> "Vector":
        return Vector(self.field, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def items(self) -> Iterator[tuple[int, Scalar]]:
        """Nonzero entries only."""
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                yield i, a

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        return "Vector[" + ", ".join(str(a) for a in self.coeffs) + "]"


class LinMap:
    """Square matrix acting on K^n by apply(v)[i] = sum_j entries[i][j] v[j]."""

    __slots__ = ("field", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence[Scalar]]):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise DimensionError("LinMap must be square")
            _same_field(field, row)
        self.field = field
        self.entries = rows

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinMap":
        return cls(
            field,
            tuple(
                tuple(field.one if i == j else field.zero for j in range(n))
                for i in range(n)
            ),
        )

    @classmethod
    def zero(cls, field: Field, n: int) -> "LinMap":
        return cls(field, ((field.zero,) * n,) * n)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Vector]) -> "LinMap":
        n = len(columns)
        return cls(field, tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> Vector:
        """Image of the j-th basis vector."""
        return Vector(self.field, tuple(row[j] for row in self.entries))

    def apply(self, v: Vector) -> Vector:
        if v.dim != self.dim:
            raise DimensionError(f"map dim {self.dim} vs vector dim {v.dim}")
        out = [self.field.zero] * self.dim
        for j, c in v.items():
            for i in range(self.dim):
                out[i] = out[i] + self.entries[i][j] * c
        return Vector(self.field, out)

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other (matrix product self . other)."""
        if other.dim != self.dim:
            raise DimensionError("composition of maps with different dims")
        n = self.dim
        z = self.field.zero
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = z
                for k in range(n):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return LinMap(self.field, tuple(rows))

    def __add__(self, other: "LinMap") -> "LinMap":
        if other.dim != self.dim:
            raise DimensionError("sum of maps with different dims")
        return LinMap(
            self.field,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def __sub__(self, other: "LinMap") -> "LinMap":
        if other.dim != self.dim:
            raise DimensionError("difference of maps with different dims")
        return LinMap(
            self.field,
            tuple(
                tuple(a - b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            ),
        )

    def scale(self, c: Scalar) -> "LinMap":
        return LinMap(self.field, tuple(tuple(c * a for a in row) for row in self.entries))

    def is_identity(self) -> bool:
        return self == LinMap.identity(self.field, self.dim)

    def commutes_with(self, other: "LinMap") -> bool:
        return self.compose(other) == other.compose(self)

    def inverse(self, name: str = "map") -> "LinMap":
        """Exact Gauss-Jordan inverse; raises NotBijectiveError when singular."""
        n = self.dim
        one, zero = self.field.one, self.field.zero
        aug = [list(self.entries[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if pivot is None:
                raise NotBijectiveError(name)
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [inv * x for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    factor = aug[r][col]
                    aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
        return LinMap(self.field, tuple(tuple(row[n:]) for row in aug))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return self.field is other.field and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((id(self.field), self.entries))

    def __repr__(self) -> str:
        rows = "; ".join("[" + ", ".join(str(a) for a in row) + "]" for row in self.entries)
        return f"LinMap[{rows}]"


def invert_map(f: LinMap, name: str = "map") -> LinMap:
    """Inverse with the composition guarantee G.F = F.G = id."""
    return f.inverse(name)


def solve_linear(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], field: Field) -> list[Scalar] | None:
    """One exact solution of a (possibly rectangular) linear system, or None.

    Free variables are pinned to zero, which is enough for the callers
    here: they only use systems whose solution set is empty or a point.
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if not aug[i][c].is_zero()), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c].inverse()
        aug[r] = [inv * x for x in aug[r]]
        for i in range(m):
            if i != r and not aug[i][c].is_zero():
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not aug[i][n].is_zero():
            return None
    solution = [field.zero] * n
    for row, col in pivots:
        solution[col] = aug[row][n]
    return solution


class Tensor2:
    """Element of K^n (x) K^n: sum coeffs[i][j] e_i (x) e_j."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence[Sequence[Scalar]]):
        grid = tuple(tuple(row) for row in coeffs)
        n = len(grid)
        for row in grid:
            if len(row) != n:
                raise DimensionError("Tensor2 grid must be n x n")
            _same_field(field, row)
        self.field = field
        self.coeffs = grid

    @classmethod
    def zero(cls, field: Field, n: int) -> "Tensor2":
        return cls(field, ((field.zero,) * n,) * n)

    @classmethod
    def basis(cls, field: Field, n: int, i: int, j: int) -> "Tensor2":
        grid = [[field.zero] * n for _ in range(n)]
        grid[i][j] = field.one
        return cls(field, grid)

    @classmethod
    def outer(cls, u: Vector, v: Vector) -> "Tensor2":
        if u.field is not v.field:
            raise FieldMismatchError("outer product over different fields")
        return cls(u.field, tuple(tuple(a * b for b in v.coeffs) for a in u.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.coeffs[i][j]

    def _check(self, other: "Tensor2") -> None:
        if self.dim != other.dim:
            raise DimensionError("Tensor2 dims differ")
        if self.field is not other.field:
            raise FieldMismatchError("Tensor2 over different fields")

    def __add__(self, other: "Tensor2") -> "Tensor2":
        self._check(other)
        return Tensor2(
            self.field,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "Tensor2") -> "Tensor2":
        self._check(other)
        return Tensor2(
            self.field,
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "Tensor2":
        return Tensor2(self.field, tuple(tuple(-a for a in row) for row in self.coeffs))

    def scale(self, c: Scalar) -> "Tensor2":
        return Tensor2(self.field, tuple(tuple(c * a for a in row) for row in self.coeffs))

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.coeffs for a in row)

    def items(self) -> Iterator[tuple[tuple[int, int], Scalar]]:
        """Nonzero entries only."""
        for i, row in enumerate(self.coeffs):
            for j, a in enumerate(row):
                if not a.is_zero():
                    yield (i, j), a

    def apply_pair(self, f: LinMap | None, g: LinMap | None) -> "Tensor2":
        """(f (x) g)(self); None legs stay untouched."""
        n = self.dim
        out = [[self.field.zero] * n for _ in range(n)]
        for (i, j), c in self.items():
            u = f.column(i) if f is not None else Vector.basis(self.field, n, i)
            v = g.column(j) if g is not None else Vector.basis(self.field, n, j)
            for a, ca in u.items():
                for b, cb in v.items():
                    out[a][b] = out[a][b] + c * ca * cb
        return Tensor2(self.field, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor2):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        entries = ", ".join(f"({i},{j}):{c}" for (i, j), c in self.items())
        return f"Tensor2{{{entries or '0'}}}"


class Tensor3:
    """Element of K^n (x) K^n (x) K^n."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence[Sequence[Sequence[Scalar]]]):
        grid = tuple(tuple(tuple(row) for row in plane) for plane in coeffs)
        n = len(grid)
        for plane in grid:
            if len(plane) != n:
                raise DimensionError("Tensor3 grid must be n x n x n")
            for row in plane:
                if len(row) != n:
                    raise DimensionError("Tensor3 grid must be n x n x n")
                _same_field(field, row)
        self.field = field
        self.coeffs = grid

    @classmethod
    def zero(cls, field: Field, n: int) -> "Tensor3":
        return cls(field, (((field.zero,) * n,) * n,) * n)

    @classmethod
    def basis(cls, field: Field, n: int, i: int, j: int, k: int) -> "Tensor3":
        grid = [[[field.zero] * n for _ in range(n)] for _ in range(n)]
        grid[i][j][k] = field.one
        return cls(field, grid)

    @classmethod
    def outer(cls, u: Vector, v: Vector, w: Vector) -> "Tensor3":
        if not (u.field is v.field is w.field):
            raise FieldMismatchError("outer product over different fields")
        return cls(
            u.field,
            tuple(tuple(tuple(a * b * c for c in w.coeffs) for b in v.coeffs) for a in u.coeffs),
        )

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, ijk: tuple[int, int, int]) -> Scalar:
        i, j, k = ijk
        return self.coeffs[i][j][k]

    def _check(self, other: "Tensor3") -> None:
        if self.dim != other.dim:
            raise DimensionError("Tensor3 dims differ")
        if self.field is not other.field:
            raise FieldMismatchError("Tensor3 over different fields")

    def __add__(self, other: "Tensor3") -> "Tensor3":
        self._check(other)
        return Tensor3(
            self.field,
            tuple(
                tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2))
                for p1, p2 in zip(self.coeffs, other.coeffs)
            ),
        )

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        self._check(other)
        return Tensor3(
            self.field,
            tuple(
                tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2))
                for p1, p2 in zip(self.coeffs, other.coeffs)
            ),
        )

    def __neg__(self) -> "Tensor3":
        return Tensor3(
            self.field,
            tuple(tuple(tuple(-a for a in row) for row in plane) for plane in self.coeffs),
        )

    def scale(self, c: Scalar) -> "Tensor3":
        return Tensor3(
            self.field,
            tuple(tuple(tuple(c * a for a in row) for row in plane) for plane in self.coeffs),
        )

    def is_zero(self) -> bool:
        return all(a.is_zero() for plane in self.coeffs for row in plane for a in row)

    def items(self) -> Iterator[tuple[tuple[int, int, int], Scalar]]:
        """Nonzero entries only."""
        for i, plane in enumerate(self.coeffs):
            for j, row in enumerate(plane):
                for k, a in enumerate(row):
                    if not a.is_zero():
                        yield (i, j, k), a

    def apply_triple(self, f: LinMap | None, g: LinMap | None, h: LinMap | None) -> "Tensor3":
        """(f (x) g (x) h)(self); None legs stay untouched."""
        n = self.dim
        out = [[[self.field.zero] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), c in self.items():
            u = f.column(i) if f is not None else Vector.basis(self.field, n, i)
            v = g.column(j) if g is not None else Vector.basis(self.field, n, j)
            w = h.column(k) if h is not None else Vector.basis(self.field, n, k)
            for a, ca in u.items():
                for b, cb in v.items():
                    for d, cd in w.items():
                        out[a][b][d] = out[a][b][d] + c * ca * cb * cd
        return Tensor3(self.field, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __repr__(self) -> str:
        entries = ", ".join(f"({i},{j},{k}):{c}" for (i, j, k), c in self.items())
        return f"Tensor3{{{entries or '0'}}}"


class BilinearMap:
    """Bilinear map K^n x K^n -> K^n as the grid (e_i, e_j) -> sum table[i][j][k] e_k."""

    __slots__ = ("field", "table")

    def __init__(self, field: Field, table: Sequence[Sequence[Sequence[Scalar]]]):
        grid = tuple(tuple(tuple(cell) for cell in row) for row in table)
        n = len(grid)
        for row in grid:
            if len(row) != n:
                raise DimensionError("BilinearMap table must be n x n x n")
            for cell in row:
                if len(cell) != n:
                    raise DimensionError("BilinearMap table must be n x n x n")
                _same_field(field, cell)
        self.field = field
        self.table = grid

    @classmethod
    def zero(cls, field: Field, n: int) -> "BilinearMap":
        return cls(field, (((field.zero,) * n,) * n,) * n)

    @classmethod
    def from_function(cls, field: Field, n: int, f: Callable[[int, int], Vector]) -> "BilinearMap":
        return cls(
            field,
            tuple(tuple(tuple(f(i, j).coeffs) for j in range(n)) for i in range(n)),
        )

    @property
    def dim(self) -> int:
        return len(self.table)

    def on_basis(self, i: int, j: int) -> Vector:
        return Vector(self.field, self.table[i][j])

    def apply(self, u: Vector, v: Vector) -> Vector:
        if u.dim != self.dim or v.dim != self.dim:
            raise DimensionError("BilinearMap applied to wrong-dimension vectors")
        out = [self.field.zero] * self.dim
        for i, a in u.items():
            for j, b in v.items():
                ab = a * b
                for k, c in enumerate(self.table[i][j]):
                    if not c.is_zero():
                        out[k] = out[k] + ab * c
        return Vector(self.field, out)

    def apply_tensor(self, t: Tensor2) -> Vector:
        """Evaluate on an element of K^n (x) K^n."""
        out = Vector.zero(self.field, self.dim)
        for (i, j), c in t.items():
            out = out + self.on_basis(i, j).scale(c)
        return out

    def __add__(self, other: "BilinearMap") -> "BilinearMap":
        if other.dim != self.dim:
            raise DimensionError("BilinearMap dims differ")
        return BilinearMap(
            self.field,
            tuple(
                tuple(tuple(a + b for a, b in zip(c1, c2)) for c1, c2 in zip(r1, r2))
                for r1, r2 in zip(self.table, other.table)
            ),
        )

    def __sub__(self, other: "BilinearMap") -> "BilinearMap":
        if other.dim != self.dim:
            raise DimensionError("BilinearMap dims differ")
        return BilinearMap(
            self.field,
            tuple(
                tuple(tuple(a - b for a, b in zip(c1, c2)) for c1, c2 in zip(r1, r2))
                for r1, r2 in zip(self.table, other.table)
            ),
        )

    def __neg__(self) -> "BilinearMap":
        return self.scale(-self.field.one)

    def scale(self, c: Scalar) -> "BilinearMap":
        return BilinearMap(
            self.field,
            tuple(tuple(tuple(c * a for a in cell) for cell in row) for row in self.table),
        )

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.table for cell in row for a in cell)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearMap):
            return NotImplemented
        return self.field is other.field and self.table == other.table

    def __hash__(self) -> int:
        return hash((id(self.field), self.table))

    def __repr__(self) -> str:
        return f"BilinearMap(dim={self.dim})"


class Tensor2Map:
    """Linear map K^n -> K^n (x) K^n stored as the list of basis images."""

    __slots__ = ("field", "components")

    def __init__(self, field: Field, components: Sequence[Tensor2]):
        components = tuple(components)
        n = len(components)
        for t in components:
            if t.dim != n:
                raise DimensionError("Tensor2Map components must be n tensors of dim n")
            if t.field is not field:
                raise FieldMismatchError("Tensor2Map over mixed fields")
        self.field = field
        self.components = components

    @classmethod
    def zero(cls, field: Field, n: int) -> "Tensor2Map":
        return cls(field, tuple(Tensor2.zero(field, n) for _ in range(n)))

    @property
    def dim(self) -> int:
        return len(self.components)

    def on_basis(self, j: int) -> Tensor2:
        return self.components[j]

    def apply(self, v: Vector) -> Tensor2:
        out = Tensor2.zero(self.field, self.dim)
        for j, c in v.items():
            out = out + self.components[j].scale(c)
        return out

    def compose_linmap(self, f: LinMap) -> "Tensor2Map":
        """self after f."""
        return Tensor2Map(self.field, tuple(self.apply(f.column(j)) for j in range(self.dim)))

    def map_components(self, f: LinMap | None, g: LinMap | None) -> "Tensor2Map":
        """(f (x) g) after self."""
        return Tensor2Map(self.field, tuple(t.apply_pair(f, g) for t in self.components))

    def expand_first_leg(self, t: Tensor2, second: LinMap | None = None) -> Tensor3:
        """(self (x) second)(t): split leg 1 of t into two legs."""
        n = self.dim
        out = Tensor3.zero(self.field, n)
        for (i, j), c in t.items():
            v = second.column(j) if second is not None else Vector.basis(self.field, n, j)
            img = self.components[i]
            for (a, b), ci in img.items():
                for d, cv in v.items():
                    out = out + Tensor3.basis(self.field, n, a, b, d).scale(c * ci * cv)
        return out

    def expand_second_leg(self, t: Tensor2, first: LinMap | None = None) -> Tensor3:
        """(first (x) self)(t): split leg 2 of t into two legs."""
        n = self.dim
        out = Tensor3.zero(self.field, n)
        for (i, j), c in t.items():
            u = first.column(i) if first is not None else Vector.basis(self.field, n, i)
            img = self.components[j]
            for a, cu in u.items():
                for (b, d), cj in img.items():
                    out = out + Tensor3.basis(self.field, n, a, b, d).scale(c * cu * cj)
        return out

    def __add__(self, other: "Tensor2Map") -> "Tensor2Map":
        if other.dim != self.dim:
            raise DimensionError("Tensor2Map dims differ")
        return Tensor2Map(self.field, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Tensor2Map") -> "Tensor2Map":
        if other.dim != self.dim:
            raise DimensionError("Tensor2Map dims differ")
        return Tensor2Map(self.field, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, c: Scalar) -> "Tensor2Map":
        return Tensor2Map(self.field, tuple(t.scale(c) for t in self.components))

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor2Map):
            return NotImplemented
        return self.field is other.field and self.components == other.components

    def __hash__(self) -> int:
        return hash((id(self.field), self.components))

    def __repr__(self) -> str:
        return f"Tensor2Map(dim={self.dim})"


def flatten2(t: Tensor2) -> Vector:
    """Tensor2 -> vector of dim n^2, index (i, j) -> i*n + j."""
    n = t.dim
    return Vector(t.field, tuple(t.coeffs[i][j] for i in range(n) for j in range(n)))


def unflatten2(v: Vector, n: int) -> Tensor2:
    if v.dim != n * n:
        raise DimensionError("vector is not a flattened Tensor2")
    return Tensor2(v.field, tuple(tuple(v[i * n + j] for j in range(n)) for i in range(n)))


def flatten3(t: Tensor3) -> Vector:
    """Tensor3 -> vector of dim n^3, index (i, j, k) -> (i*n + j)*n + k."""
    n = t.dim
    return Vector(
        t.field,
        tuple(t.coeffs[i][j][k] for i in range(n) for j in range(n) for k in range(n)),
    )


def unflatten3(v: Vector, n: int) -> Tensor3:
    if v.dim != n * n * n:
        raise DimensionError("vector is not a flattened Tensor3")
    return Tensor3(
        v.field,
        tuple(
            tuple(tuple(v[(i * n + j) * n + k] for k in range(n)) for j in range(n))
            for i in range(n)
        ),
    )


# A contraction plan is one spec per output leg. Each spec lists factors
# (map, input_leg); factor values are multiplied left to right with the
# algebra product, so a one-factor leg is just a map application.
PlanFactor = "tuple[LinMap | None, int]"
Plan = "Sequence[Sequence[PlanFactor | int]]"


def identity_plan(rank: int) -> list[list[tuple[None, int]]]:
    return [[(None, leg)] for leg in range(rank)]


def contract(tensors, plan, alg=None):
    """Exact multilinear contraction of one or more small tensors.

    ``tensors`` is a Tensor2/Tensor3 or a sequence of them; their legs are
    concatenated in order. ``plan`` gives one factor list per output leg;
    a factor is an input leg index or a (LinMap-or-None, leg) pair. Legs
    with two or more factors multiply through the structure constants of
    ``alg`` (left-associated). Output rank 1/2/3 becomes Vector, Tensor2,
    or Tensor3.
    """
    if isinstance(tensors, (Tensor2, Tensor3)):
        tensors = (tensors,)
    else:
        tensors = tuple(tensors)
    if not tensors:
        raise DimensionError("contract needs at least one tensor")
    field = tensors[0].field
    n = tensors[0].dim
    for t in tensors:
        if t.field is not field:
            raise FieldMismatchError("contract over mixed fields")
        if t.dim != n:
            raise DimensionError("contract over mixed dimensions")

    ranks = [2 if isinstance(t, Tensor2) else 3 for t in tensors]
    total_legs = sum(ranks)

    normalized: list[list[tuple[LinMap | None, int]]] = []
    for leg_spec in plan:
        factors: list[tuple[LinMap | None, int]] = []
        for factor in leg_spec:
            if isinstance(factor, int):
                factor = (None, factor)
            f, leg = factor
            if not 0 <= leg < total_legs:
                raise DimensionError(f"plan references leg {leg}, but only {total_legs} exist")
            if f is not None and f.dim != n:
                raise DimensionError("plan map dimension mismatch")
            factors.append((f, leg))
        if not factors:
            raise DimensionError("every output leg needs at least one factor")
        if len(factors) > 1 and alg is None:
            raise DimensionError("a multiplying plan needs the algebra structure constants")
        normalized.append(factors)

    rank_out = len(normalized)
    if rank_out == 1:
        out = Vector.zero(field, n)
    elif rank_out == 2:
        out = Tensor2.zero(field, n)
    elif rank_out == 3:
        out = Tensor3.zero(field, n)
    else:
        raise DimensionError(f"contract supports output rank 1..3, got {rank_out}")

    mul = alg.mul if alg is not None else None

    def leg_value(factors: list[tuple[LinMap | None, int]], indices: tuple[int, ...]) -> Vector:
        value: Vector | None = None
        for f, leg in factors:
            base = indices[leg]
            vec = f.column(base) if f is not None else Vector.basis(field, n, base)
            value = vec if value is None else mul.apply(value, vec)
        return value

    # Iterate over nonzero entries of each input tensor.
    def entries(t):
        return list(t.items())

    stack = [entries(t) for t in tensors]

    def rec(pos: int, indices: tuple[int, ...], coeff: Scalar):
        nonlocal out
        if pos == len(tensors):
            vecs = [leg_value(factors, indices) for factors in normalized]
            if rank_out == 1:
                out = out + vecs[0].scale(coeff)
            elif rank_out == 2:
                out = out + Tensor2.outer(vecs[0], vecs[1]).scale(coeff)
            else:
                out = out + Tensor3.outer(vecs[0], vecs[1], vecs[2]).scale(coeff)
            return
        for idx, c in stack[pos]:
            rec(pos + 1, indices + (idx if isinstance(idx, tuple) else (idx,)), coeff * c)

    rec(0, (), field.one)
    return out
