"""BiHom-associative algebras, coalgebras, (bi)modules, and their axiom checkers.

An algebra lives entirely in its structure constants: e_i * e_j =
sum_k mul[i][j][k] e_k. All axioms are multilinear, so checking them on
basis tuples is exhaustive; every checker scans tuples in lexicographic
order and reports the first failing tuple as the witness.

The right-module axioms mirror the left ones with the twist map moved
inside: (m <| a) <| beta(b) = alpha_M(m) <| (ab).
"""

from __future__ import annotations

from typing import Sequence

from .fields import Field, FieldMismatchError, Scalar
from .linalg import (
    BilinearMap,
    DimensionError,
    LinMap,
    Tensor2,
    Tensor2Map,
    Vector,
)
from .reports import AxiomCheck, CheckReport, HypothesisError


class AlgebraData:
    """A finite-dimensional algebra: dimension, structure constants, optional unit."""

    __slots__ = ("field", "dim", "mul", "unit")

    def __init__(self, field: Field, dim: int, mul: BilinearMap, unit: Vector | None = None):
        if dim <= 0:
            raise DimensionError("algebra dimension must be positive")
        if mul.dim != dim or mul.field is not field:
            raise DimensionError("structure-constant grid does not match the algebra")
        if unit is not None:
            if unit.dim != dim or unit.field is not field:
                raise DimensionError("unit vector does not match the algebra")
            if unit.is_zero():
                raise ValueError("a declared unit must be nonzero")
        self.field = field
        self.dim = dim
        self.mul = mul
        self.unit = unit

    @classmethod
    def from_constants(cls, field: Field, constants: Sequence, unit=None) -> "AlgebraData":
        """Build from an n x n x n nested sequence of Scalars."""
        table = BilinearMap(field, constants)
        unit_vec = Vector(field, unit) if unit is not None else None
        return cls(field, table.dim, table, unit_vec)

    def product(self, u: Vector, v: Vector) -> Vector:
        return self.mul.apply(u, v)

    def basis_product(self, i: int, j: int) -> Vector:
        return self.mul.on_basis(i, j)

    def basis(self, i: int) -> Vector:
        return Vector.basis(self.field, self.dim, i)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def __repr__(self) -> str:
        return f"AlgebraData(dim={self.dim}, field={self.field}, unital={self.is_unital})"


class StructureMaps:
    """The twisting maps: alpha and beta always, psi and omega when a context needs them."""

    __slots__ = ("alpha", "beta", "psi", "omega")

    def __init__(self, alpha: LinMap, beta: LinMap, psi: LinMap | None = None, omega: LinMap | None = None):
        dims = {alpha.dim, beta.dim}
        if psi is not None:
            dims.add(psi.dim)
        if omega is not None:
            dims.add(omega.dim)
        if len(dims) != 1:
            raise DimensionError("structure maps must share one dimension")
        self.alpha = alpha
        self.beta = beta
        self.psi = psi
        self.omega = omega

    @classmethod
    def identity(cls, field: Field, n: int, with_psi_omega: bool = True) -> "StructureMaps":
        ident = LinMap.identity(field, n)
        if with_psi_omega:
            return cls(ident, ident, ident, ident)
        return cls(ident, ident)

    @property
    def dim(self) -> int:
        return self.alpha.dim

    def require_psi_omega(self, context: str) -> tuple[LinMap, LinMap]:
        if self.psi is None or self.omega is None:
            raise HypothesisError(f"{context} needs both psi and omega")
        return self.psi, self.omega

    def all_maps(self) -> list[tuple[str, LinMap]]:
        maps = [("alpha", self.alpha), ("beta", self.beta)]
        if self.psi is not None:
            maps.append(("psi", self.psi))
        if self.omega is not None:
            maps.append(("omega", self.omega))
        return maps

    def __repr__(self) -> str:
        present = [name for name, _ in self.all_maps()]
        return f"StructureMaps({', '.join(present)}; dim={self.dim})"


class CoalgebraData:
    """A comultiplication delta: A -> A (x) A with an optional counit functional."""

    __slots__ = ("field", "dim", "delta", "counit")

    def __init__(self, field: Field, dim: int, delta: Tensor2Map, counit: Vector | None = None):
        if delta.dim != dim or delta.field is not field:
            raise DimensionError("comultiplication does not match the coalgebra dimension")
        if counit is not None and (counit.dim != dim or counit.field is not field):
            raise DimensionError("counit does not match the coalgebra dimension")
        self.field = field
        self.dim = dim
        self.delta = delta
        self.counit = counit

    def __repr__(self) -> str:
        return f"CoalgebraData(dim={self.dim}, counital={self.counit is not None})"


class ModuleData:
    """A module over an algebra: optional left and right action grids.

    Left grid: e_i |> f_j = sum_k left[i][j][k] f_k (shape n x m x m).
    Right grid: f_j <| e_i = sum_k right[j][i][k] f_k (shape m x n x m).
    """

    __slots__ = ("field", "alg_dim", "dim", "left", "right", "alpha", "beta")

    def __init__(
        self,
        field: Field,
        alg_dim: int,
        dim: int,
        left: Sequence | None,
        right: Sequence | None,
        alpha: LinMap,
        beta: LinMap,
    ):
        if dim <= 0:
            raise DimensionError("module dimension must be positive")
        if alpha.dim != dim or beta.dim != dim:
            raise DimensionError("module maps must act on the module")

        def norm(grid, shape):
            rows = tuple(tuple(tuple(cell) for cell in row) for row in grid)
            if len(rows) != shape[0] or any(
                len(row) != shape[1] or any(len(cell) != shape[2] for cell in row) for row in rows
            ):
                raise DimensionError("action grid shape mismatch")
            for row in rows:
                for cell in row:
                    for s in cell:
                        if s.field is not field:
                            raise FieldMismatchError("action grid over mixed fields")
            return rows

        self.field = field
        self.alg_dim = alg_dim
        self.dim = dim
        self.left = norm(left, (alg_dim, dim, dim)) if left is not None else None
        self.right = norm(right, (dim, alg_dim, dim)) if right is not None else None
        self.alpha = alpha
        self.beta = beta

    def left_on_basis(self, i: int, j: int) -> Vector:
        return Vector(self.field, self.left[i][j])

    def right_on_basis(self, j: int, i: int) -> Vector:
        return Vector(self.field, self.right[j][i])

    def act_left(self, a: Vector, m: Vector) -> Vector:
        if self.left is None:
            raise HypothesisError("left action missing")
        out = [self.field.zero] * self.dim
        for i, ca in a.items():
            for j, cm in m.items():
                c = ca * cm
                for k, s in enumerate(self.left[i][j]):
                    if not s.is_zero():
                        out[k] = out[k] + c * s
        return Vector(self.field, out)

    def act_right(self, m: Vector, a: Vector) -> Vector:
        if self.right is None:
            raise HypothesisError("right action missing")
        out = [self.field.zero] * self.dim
        for j, cm in m.items():
            for i, ca in a.items():
                c = cm * ca
                for k, s in enumerate(self.right[j][i]):
                    if not s.is_zero():
                        out[k] = out[k] + c * s
        return Vector(self.field, out)

    def basis(self, j: int) -> Vector:
        return Vector.basis(self.field, self.dim, j)

    def __repr__(self) -> str:
        sides = []
        if self.left is not None:
            sides.append("left")
        if self.right is not None:
            sides.append("right")
        return f"ModuleData(dim={self.dim}, alg_dim={self.alg_dim}, {'+'.join(sides) or 'no actions'})"


def regular_bimodule(alg: AlgebraData, maps: StructureMaps) -> ModuleData:
    """The algebra acting on itself by its own product on both sides."""
    n = alg.dim
    left = [[list(alg.basis_product(i, j).coeffs) for j in range(n)] for i in range(n)]
    right = [[list(alg.basis_product(j, i).coeffs) for i in range(n)] for j in range(n)]
    return ModuleData(alg.field, n, n, left, right, maps.alpha, maps.beta)


def _check_dims(alg: AlgebraData, maps: StructureMaps) -> None:
    if maps.dim != alg.dim:
        raise DimensionError(f"maps act on dim {maps.dim}, algebra has dim {alg.dim}")


def _multiplicative(f: LinMap, alg: AlgebraData) -> tuple[bool, tuple[int, int] | None]:
    """First basis pair where f(e_i e_j) != f(e_i) f(e_j), if any."""
    for i in range(alg.dim):
        for j in range(alg.dim):
            lhs = f.apply(alg.basis_product(i, j))
            rhs = alg.product(f.column(i), f.column(j))
            if lhs != rhs:
                return False, (i, j)
    return True, None


def _maps_equal(f: LinMap, g: LinMap) -> tuple[bool, tuple[int] | None]:
    """First basis index where two maps differ, if any."""
    for j in range(f.dim):
        if f.column(j) != g.column(j):
            return False, (j,)
    return True, None


def check_bihom_algebra(
    alg: AlgebraData, maps: StructureMaps, include_unit: bool = True
) -> CheckReport:
    """All defining axioms of a BiHom-associative algebra.

    Checked, in order: alpha.beta = beta.alpha, multiplicativity of both
    maps, the twisted associativity alpha(a)(bc) = (ab)beta(c), and (for
    a declared unit, unless include_unit=False) the four unit laws
    alpha(1) = 1, beta(1) = 1, a1 = alpha(a), 1a = beta(a).
    """
    _check_dims(alg, maps)
    n = alg.dim
    checks: list[AxiomCheck] = []

    ok, wit = _maps_equal(maps.alpha.compose(maps.beta), maps.beta.compose(maps.alpha))
    checks.append(AxiomCheck("alpha-beta-commute", ok, wit))

    ok, wit = _multiplicative(maps.alpha, alg)
    checks.append(AxiomCheck("alpha-multiplicative", ok, wit))
    ok, wit = _multiplicative(maps.beta, alg)
    checks.append(AxiomCheck("beta-multiplicative", ok, wit))

    ok, wit = True, None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = alg.product(maps.alpha.column(i), alg.basis_product(j, k))
                rhs = alg.product(alg.basis_product(i, j), maps.beta.column(k))
                if lhs != rhs:
                    ok, wit = False, (i, j, k)
                    break
            if not ok:
                break
        if not ok:
            break
    checks.append(AxiomCheck("twisted-associativity", ok, wit))

    if include_unit and alg.unit is not None:
        one = alg.unit
        checks.append(AxiomCheck("unit-fixed-by-alpha", maps.alpha.apply(one) == one))
        checks.append(AxiomCheck("unit-fixed-by-beta", maps.beta.apply(one) == one))
        ok, wit = True, None
        for i in range(n):
            if alg.product(alg.basis(i), one) != maps.alpha.column(i):
                ok, wit = False, (i,)
                break
        checks.append(AxiomCheck("right-unit-law", ok, wit))
        ok, wit = True, None
        for i in range(n):
            if alg.product(one, alg.basis(i)) != maps.beta.column(i):
                ok, wit = False, (i,)
                break
        checks.append(AxiomCheck("left-unit-law", ok, wit))

    return CheckReport("bihom-algebra", checks)


def check_bihom_coalgebra(co: CoalgebraData, maps: StructureMaps) -> CheckReport:
    """All defining axioms of a BiHom-coassociative coalgebra.

    Checked: psi.omega = omega.psi, comultiplicativity of psi and omega,
    the twisted coassociativity (delta (x) psi)delta = (omega (x) delta)delta,
    and when a counit is declared its four laws.
    """
    psi, omega = maps.require_psi_omega("coalgebra check")
    if maps.dim != co.dim:
        raise DimensionError("maps and coalgebra dimension mismatch")
    n = co.dim
    delta = co.delta
    checks: list[AxiomCheck] = []

    ok, wit = _maps_equal(psi.compose(omega), omega.compose(psi))
    checks.append(AxiomCheck("psi-omega-commute", ok, wit))

    for name, f in (("psi-comultiplicative", psi), ("omega-comultiplicative", omega)):
        ok, wit = True, None
        for j in range(n):
            if delta.on_basis(j).apply_pair(f, f) != delta.apply(f.column(j)):
                ok, wit = False, (j,)
                break
        checks.append(AxiomCheck(name, ok, wit))

    ok, wit = True, None
    for j in range(n):
        t = delta.on_basis(j)
        if delta.expand_first_leg(t, second=psi) != delta.expand_second_leg(t, first=omega):
            ok, wit = False, (j,)
            break
    checks.append(AxiomCheck("twisted-coassociativity", ok, wit))

    if co.counit is not None:
        eps = co.counit

        def eps_of(v: Vector) -> Scalar:
            total = co.field.zero
            for i, c in v.items():
                total = total + eps[i] * c
            return total

        for name, f in (("counit-psi-invariant", psi), ("counit-omega-invariant", omega)):
            ok, wit = True, None
            for j in range(n):
                if eps_of(f.column(j)) != eps[j]:
                    ok, wit = False, (j,)
                    break
            checks.append(AxiomCheck(name, ok, wit))

        # (id (x) eps) delta = omega, then (eps (x) id) delta = psi.
        ok, wit = True, None
        for j in range(n):
            t = delta.on_basis(j)
            out = Vector.zero(co.field, n)
            for (a, b), c in t.items():
                out = out + Vector.basis(co.field, n, a).scale(c * eps[b])
            if out != omega.column(j):
                ok, wit = False, (j,)
                break
        checks.append(AxiomCheck("counit-right-law", ok, wit))

        ok, wit = True, None
        for j in range(n):
            t = delta.on_basis(j)
            out = Vector.zero(co.field, n)
            for (a, b), c in t.items():
                out = out + Vector.basis(co.field, n, b).scale(c * eps[a])
            if out != psi.column(j):
                ok, wit = False, (j,)
                break
        checks.append(AxiomCheck("counit-left-law", ok, wit))

    return CheckReport("bihom-coalgebra", checks)


def check_module(alg: AlgebraData, maps: StructureMaps, mod: ModuleData, side: str) -> CheckReport:
    """Module axioms for the requested side: "left", "right", or "bimodule".

    Witnesses list algebra indices before the module index, scanned in
    lexicographic order.
    """
    _check_dims(alg, maps)
    if mod.alg_dim != alg.dim:
        raise DimensionError("module was built over an algebra of another dimension")
    if side not in ("left", "right", "bimodule"):
        raise ValueError(f"side must be left, right, or bimodule, not {side!r}")
    if side in ("left", "bimodule") and mod.left is None:
        raise HypothesisError("left action missing for the requested side")
    if side in ("right", "bimodule") and mod.right is None:
        raise HypothesisError("right action missing for the requested side")

    n, m = alg.dim, mod.dim
    checks: list[AxiomCheck] = []

    ok, wit = _maps_equal(mod.alpha.compose(mod.beta), mod.beta.compose(mod.alpha))
    checks.append(AxiomCheck("alphaM-betaM-commute", ok, wit))

    if side in ("left", "bimodule"):
        for name, fa, fm in (
            ("left-alpha-compatible", maps.alpha, mod.alpha),
            ("left-beta-compatible", maps.beta, mod.beta),
        ):
            ok, wit = True, None
            for i in range(n):
                for j in range(m):
                    lhs = fm.apply(mod.left_on_basis(i, j))
                    rhs = mod.act_left(fa.column(i), fm.column(j))
                    if lhs != rhs:
                        ok, wit = False, (i, j)
                        break
                if not ok:
                    break
            checks.append(AxiomCheck(name, ok, wit))

        ok, wit = True, None
        for i in range(n):
            for j in range(n):
                for k in range(m):
                    lhs = mod.act_left(maps.alpha.column(i), mod.left_on_basis(j, k))
                    rhs = mod.act_left(alg.basis_product(i, j), mod.beta.column(k))
                    if lhs != rhs:
                        ok, wit = False, (i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        checks.append(AxiomCheck("left-action-associativity", ok, wit))

    if side in ("right", "bimodule"):
        for name, fa, fm in (
            ("right-alpha-compatible", maps.alpha, mod.alpha),
            ("right-beta-compatible", maps.beta, mod.beta),
        ):
            ok, wit = True, None
            for i in range(n):
                for j in range(m):
                    lhs = fm.apply(mod.right_on_basis(j, i))
                    rhs = mod.act_right(fm.column(j), fa.column(i))
                    if lhs != rhs:
                        ok, wit = False, (i, j)
                        break
                if not ok:
                    break
            checks.append(AxiomCheck(name, ok, wit))

        # (m <| a) <| beta(b) = alpha_M(m) <| (ab)
        ok, wit = True, None
        for i in range(n):
            for j in range(n):
                for k in range(m):
                    lhs = mod.act_right(mod.right_on_basis(k, i), maps.beta.column(j))
                    rhs = mod.act_right(mod.alpha.column(k), alg.basis_product(i, j))
                    if lhs != rhs:
                        ok, wit = False, (i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        checks.append(AxiomCheck("right-action-associativity", ok, wit))

    if side == "bimodule":
        # alpha_A(a) |> (m <| b) = (a |> m) <| beta_A(b)
        ok, wit = True, None
        for i in range(n):
            for j in range(n):
                for k in range(m):
                    lhs = mod.act_left(maps.alpha.column(i), mod.right_on_basis(k, j))
                    rhs = mod.act_right(mod.left_on_basis(i, k), maps.beta.column(j))
                    if lhs != rhs:
                        ok, wit = False, (i, j, k)
                        break
                if not ok:
                    break
            if not ok:
                break
        checks.append(AxiomCheck("bimodule-compatibility", ok, wit))

    return CheckReport(f"module-{side}", checks)


def _kron_columns(field: Field, factors: list[LinMap]) -> LinMap:
    """Tensor product of the factor maps on the lexicographically ordered basis."""
    dims = [f.dim for f in factors]
    total = 1
    for d in dims:
        total *= d

    def index(parts: tuple[int, ...]) -> int:
        idx = 0
        for p, d in zip(parts, dims):
            idx = idx * d + p
        return idx

    columns = [None] * total
    from itertools import product as iproduct

    for parts in iproduct(*(range(d) for d in dims)):
        cols = [f.column(p) for f, p in zip(factors, parts)]
        out = [field.zero] * total
        idxs = [list(c.items()) for c in cols]

        def rec(pos, target, coeff):
            if pos == len(idxs):
                out[index(tuple(target))] = out[index(tuple(target))] + coeff
                return
            for i, c in idxs[pos]:
                rec(pos + 1, target + [i], coeff * c)

        rec(0, [], field.one)
        columns[index(parts)] = Vector(field, out)
    return LinMap.from_columns(field, columns)


def tensor_bimodule(
    alg: AlgebraData,
    maps: StructureMaps,
    m_mod: ModuleData,
    n_mod: ModuleData,
    v_mod: ModuleData | None = None,
) -> ModuleData:
    """The bimodule structure on M (x) N ((x) V) with the twisted outer actions.

    Left action: a |> (m (x) n (x) v) = omega(a) |> m (x) beta_N(n) (x) beta_V(v).
    Right action: (m (x) n (x) v) <| a = alpha_M(m) (x) alpha_N(n) (x) v <| psi(a).
    Hypotheses (psi and omega multiplicative, all four maps pairwise
    commuting, each factor a bimodule) are checked, and the result is
    re-verified as a bimodule before being returned.
    """
    psi, omega = maps.require_psi_omega("tensor bimodule construction")
    _check_dims(alg, maps)

    ok, wit = _multiplicative(psi, alg)
    if not ok:
        raise HypothesisError("psi multiplicative", f"fails at basis pair {wit}")
    ok, wit = _multiplicative(omega, alg)
    if not ok:
        raise HypothesisError("omega multiplicative", f"fails at basis pair {wit}")
    named = maps.all_maps()
    for a in range(len(named)):
        for b in range(a + 1, len(named)):
            if not named[a][1].commutes_with(named[b][1]):
                raise HypothesisError(f"{named[a][0]} and {named[b][0]} commute")

    factors = [m_mod, n_mod] + ([v_mod] if v_mod is not None else [])
    for pos, factor in enumerate(factors):
        report = check_module(alg, maps, factor, "bimodule")
        if not report.passed:
            bad = report.failures()[0]
            raise HypothesisError(
                f"factor {pos} is a bimodule", f"axiom {bad.axiom} fails at {bad.witness}"
            )

    field = alg.field
    dims = [f.dim for f in factors]
    total = 1
    for d in dims:
        total *= d

    def index(parts: tuple[int, ...]) -> int:
        idx = 0
        for p, d in zip(parts, dims):
            idx = idx * d + p
        return idx

    from itertools import product as iproduct

    def big_vector(parts_vectors: list[Vector]) -> Vector:
        out = [field.zero] * total
        idxs = [list(v.items()) for v in parts_vectors]

        def rec(pos, target, coeff):
            if pos == len(idxs):
                out[index(tuple(target))] = out[index(tuple(target))] + coeff
                return
            for i, c in idxs[pos]:
                rec(pos + 1, target + [i], coeff * c)

        rec(0, [], field.one)
        return Vector(field, out)

    n = alg.dim
    left = [[None] * total for _ in range(n)]
    right = [[None] * total for _ in range(total)]
    for parts in iproduct(*(range(d) for d in dims)):
        col = index(parts)
        for a in range(n):
            first = factors[0].act_left(omega.column(a), factors[0].basis(parts[0]))
            rest = [factors[p].beta.column(parts[p]) for p in range(1, len(factors))]
            left[a][col] = list(big_vector([first] + rest).coeffs)
            last = factors[-1].act_right(factors[-1].basis(parts[-1]), psi.column(a))
            front = [factors[p].alpha.column(parts[p]) for p in range(len(factors) - 1)]
            right[col][a] = list(big_vector(front + [last]).coeffs)

    alpha_big = _kron_columns(field, [f.alpha for f in factors])
    beta_big = _kron_columns(field, [f.beta for f in factors])
    result = ModuleData(field, n, total, left, right, alpha_big, beta_big)

    conclusion = check_module(alg, maps, result, "bimodule")
    if not conclusion.passed:
        from .reports import ConclusionError

        bad = conclusion.failures()[0]
        raise ConclusionError(
            f"tensor bimodule fails {bad.axiom} at {bad.witness}; this is an implementation bug"
        )
    return result


THEOREMS = {
    "prop-2.1a": tensor_bimodule,
}
