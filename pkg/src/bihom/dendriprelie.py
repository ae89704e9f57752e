"""Dendriform splittings, pre-Lie products, and paired-module constructions.

A weight-lambda operator R splits the product two ways:

    first approach:   a < b = a R(b),              a > b = R(a) b + lambda ab
    second approach:  a < b = a R(b) + lambda ab,  a > b = R(a) b

and induces a left pre-Lie product (two variants again):

    a . b = R(a) b + lambda ab - alpha^-1 beta(b) R(alpha beta^-1(a))
    a # b = R(a) b - alpha^-1 beta(b) R(alpha beta^-1(a))
                   - lambda alpha^-1 beta(b) alpha beta^-1(a).

A paired operator (R on A, T on M) of the same weight turns a left
module action into a pre-Lie module action

    a |>. m = R(a) |> m + a |> T(m) + lambda a |> m.

All constructions check their hypotheses by name and re-verify their
conclusions with the matching checker before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Scalar
from .linalg import BilinearMap, DimensionError, LinMap, NotBijectiveError, Vector
from .reports import AxiomCheck, CheckReport, ConclusionError, HypothesisError
from .rbsystems import rb_operator_check
from .structures import AlgebraData, ModuleData, StructureMaps, check_module


@dataclass(frozen=True)
class Dendriform:
    """Two binary operations with their twisting maps."""

    prec: BilinearMap
    succ: BilinearMap
    maps: StructureMaps

    def __post_init__(self):
        if self.prec.dim != self.succ.dim or self.maps.dim != self.prec.dim:
            raise DimensionError("dendriform pieces have mismatched dimensions")

    @property
    def dim(self) -> int:
        return self.prec.dim

    @property
    def field(self):
        return self.prec.field


@dataclass(frozen=True)
class PreLie:
    """One binary operation with its twisting maps."""

    star: BilinearMap
    maps: StructureMaps

    def __post_init__(self):
        if self.maps.dim != self.star.dim:
            raise DimensionError("pre-Lie pieces have mismatched dimensions")

    @property
    def dim(self) -> int:
        return self.star.dim

    @property
    def field(self):
        return self.star.field


@dataclass(frozen=True)
class PairedModule:
    """A left module with a weight-lambda operator pair (R on A, T on M)."""

    mod: ModuleData
    R: LinMap
    T: LinMap
    lam: Scalar

    def __post_init__(self):
        if self.R.dim != self.mod.alg_dim:
            raise DimensionError("algebra operator dimension mismatch")
        if self.T.dim != self.mod.dim:
            raise DimensionError("module operator dimension mismatch")


def _bilinear_multiplicative(
    f: LinMap, table: BilinearMap
) -> tuple[bool, tuple[int, int] | None]:
    n = table.dim
    for i in range(n):
        for j in range(n):
            lhs = f.apply(table.on_basis(i, j))
            rhs = table.apply(f.column(i), f.column(j))
            if lhs != rhs:
                return False, (i, j)
    return True, None


def check_dendriform(d: Dendriform) -> CheckReport:
    """Multiplicativity of both maps for both operations plus the three splitting axioms."""
    n = d.dim
    maps = d.maps
    checks: list[AxiomCheck] = []

    from .structures import _maps_equal

    ok, wit = _maps_equal(maps.alpha.compose(maps.beta), maps.beta.compose(maps.alpha))
    checks.append(AxiomCheck("alpha-beta-commute", ok, wit))
    for name, f, table in (
        ("alpha-multiplicative-prec", maps.alpha, d.prec),
        ("alpha-multiplicative-succ", maps.alpha, d.succ),
        ("beta-multiplicative-prec", maps.beta, d.prec),
        ("beta-multiplicative-succ", maps.beta, d.succ),
    ):
        ok, wit = _bilinear_multiplicative(f, table)
        checks.append(AxiomCheck(name, ok, wit))

    prec, succ = d.prec, d.succ

    def scan(law) -> tuple[bool, tuple[int, int, int] | None]:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if not law(i, j, k):
                        return False, (i, j, k)
        return True, None

    # (a < b) < beta(c) = alpha(a) < (b < c) + alpha(a) < (b > c)
    ok, wit = scan(
        lambda i, j, k: prec.apply(prec.on_basis(i, j), maps.beta.column(k))
        == prec.apply(maps.alpha.column(i), prec.on_basis(j, k))
        + prec.apply(maps.alpha.column(i), succ.on_basis(j, k))
    )
    checks.append(AxiomCheck("left-splitting", ok, wit))

    # (a > b) < beta(c) = alpha(a) > (b < c)
    ok, wit = scan(
        lambda i, j, k: prec.apply(succ.on_basis(i, j), maps.beta.column(k))
        == succ.apply(maps.alpha.column(i), prec.on_basis(j, k))
    )
    checks.append(AxiomCheck("middle-splitting", ok, wit))

    # alpha(a) > (b > c) = (a < b) > beta(c) + (a > b) > beta(c)
    ok, wit = scan(
        lambda i, j, k: succ.apply(maps.alpha.column(i), succ.on_basis(j, k))
        == succ.apply(prec.on_basis(i, j), maps.beta.column(k))
        + succ.apply(succ.on_basis(i, j), maps.beta.column(k))
    )
    checks.append(AxiomCheck("right-splitting", ok, wit))
    return CheckReport("dendriform", checks)


def _require_weighted_operator(
    alg: AlgebraData, maps: StructureMaps, op: LinMap, lam: Scalar
) -> None:
    report = rb_operator_check(alg, maps, op, lam)
    if not report.passed:
        bad = report.failures()[0]
        raise HypothesisError("weight-lambda operator", f"{bad.axiom} fails at {bad.witness}")


def dendriform_from_rb(
    alg: AlgebraData, maps: StructureMaps, op: LinMap, lam: Scalar, approach: str = "first"
) -> Dendriform:
    """Split the product along a weight-lambda operator; both placements of the lambda term."""
    if approach not in ("first", "second"):
        raise ValueError(f"approach must be first or second, not {approach!r}")
    _require_weighted_operator(alg, maps, op, lam)
    n = alg.dim

    def weighted(i: int, j: int) -> Vector:
        return alg.basis_product(i, j).scale(lam)

    if approach == "first":
        prec = BilinearMap.from_function(
            alg.field, n, lambda i, j: alg.product(alg.basis(i), op.column(j))
        )
        succ = BilinearMap.from_function(
            alg.field, n, lambda i, j: alg.product(op.column(i), alg.basis(j)) + weighted(i, j)
        )
    else:
        prec = BilinearMap.from_function(
            alg.field, n, lambda i, j: alg.product(alg.basis(i), op.column(j)) + weighted(i, j)
        )
        succ = BilinearMap.from_function(
            alg.field, n, lambda i, j: alg.product(op.column(i), alg.basis(j))
        )
    result = Dendriform(prec, succ, maps)
    conclusion = check_dendriform(result)
    if not conclusion.passed:
        bad = conclusion.failures()[0]
        raise ConclusionError(
            f"split product fails {bad.axiom} at {bad.witness}; this is an implementation bug"
        )
    return result


def prelie_from_rb(
    alg: AlgebraData, maps: StructureMaps, op: LinMap, lam: Scalar, approach: str = "star"
) -> PreLie:
    """The left pre-Lie product of a weight-lambda operator, either variant."""
    if approach not in ("star", "natural"):
        raise ValueError(f"approach must be star or natural, not {approach!r}")
    _require_weighted_operator(alg, maps, op, lam)
    try:
        alpha_inv = maps.alpha.inverse("alpha")
        beta_inv = maps.beta.inverse("beta")
    except NotBijectiveError as exc:
        raise HypothesisError("alpha and beta bijective", str(exc)) from exc
    back = alpha_inv.compose(maps.beta)
    forth = maps.alpha.compose(beta_inv)
    n = alg.dim

    if approach == "star":

        def entry(i: int, j: int) -> Vector:
            return (
                alg.product(op.column(i), alg.basis(j))
                + alg.basis_product(i, j).scale(lam)
                - alg.product(back.column(j), op.apply(forth.column(i)))
            )

    else:

        def entry(i: int, j: int) -> Vector:
            return (
                alg.product(op.column(i), alg.basis(j))
                - alg.product(back.column(j), op.apply(forth.column(i)))
                - alg.product(back.column(j), forth.column(i)).scale(lam)
            )

    result = PreLie(BilinearMap.from_function(alg.field, n, entry), maps)
    conclusion = check_prelie(result)
    if not conclusion.passed:
        bad = conclusion.failures()[0]
        raise ConclusionError(
            f"derived product fails {bad.axiom} at {bad.witness}; this is an implementation bug"
        )
    return result


def check_prelie(p: PreLie) -> CheckReport:
    """Multiplicativity of the maps plus left-symmetry of the twisted associator."""
    n = p.dim
    maps = p.maps
    star = p.star
    checks: list[AxiomCheck] = []

    from .structures import _maps_equal

    ok, wit = _maps_equal(maps.alpha.compose(maps.beta), maps.beta.compose(maps.alpha))
    checks.append(AxiomCheck("alpha-beta-commute", ok, wit))
    for name, f in (("alpha-multiplicative", maps.alpha), ("beta-multiplicative", maps.beta)):
        ok, wit = _bilinear_multiplicative(f, star)
        checks.append(AxiomCheck(name, ok, wit))

    both = maps.alpha.compose(maps.beta)

    def associator(i: int, j: int, k: int) -> Vector:
        return star.apply(both.column(i), star.apply(maps.alpha.column(j), Vector.basis(p.field, n, k))) - star.apply(
            star.apply(maps.beta.column(i), maps.alpha.column(j)), maps.beta.column(k)
        )

    ok, wit = True, None
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if associator(i, j, k) != associator(j, i, k):
                    ok, wit = False, (i, j, k)
                    break
            if not ok:
                break
        if not ok:
            break
    checks.append(AxiomCheck("left-symmetry", ok, wit))
    return CheckReport("pre-lie", checks)


def check_paired_module(alg: AlgebraData, maps: StructureMaps, pm: PairedModule) -> CheckReport:
    """Commutations of (R, T) with the twisting maps plus the paired operator law."""
    module_report = check_module(alg, maps, pm.mod, "left")
    if not module_report.passed:
        bad = module_report.failures()[0]
        raise HypothesisError("left module axioms", f"{bad.axiom} fails at {bad.witness}")
    mod = pm.mod
    n, m = alg.dim, mod.dim
    checks: list[AxiomCheck] = []
    for name, twist, op in (
        ("alphaM-T-commute", mod.alpha, pm.T),
        ("betaM-T-commute", mod.beta, pm.T),
        ("alphaA-R-commute", maps.alpha, pm.R),
        ("betaA-R-commute", maps.beta, pm.R),
    ):
        ok, wit = True, None
        for j in range(op.dim):
            if twist.compose(op).column(j) != op.compose(twist).column(j):
                ok, wit = False, (j,)
                break
        checks.append(AxiomCheck(name, ok, wit))

    # R(a) |> T(m) = T(R(a) |> m) + T(a |> T(m)) + lambda T(a |> m)
    ok, wit = True, None
    for a in range(n):
        for j in range(m):
            lhs = mod.act_left(pm.R.column(a), pm.T.column(j))
            rhs = (
                pm.T.apply(mod.act_left(pm.R.column(a), mod.basis(j)))
                + pm.T.apply(mod.act_left(alg.basis(a), pm.T.column(j)))
                + pm.T.apply(mod.left_on_basis(a, j)).scale(pm.lam)
            )
            if lhs != rhs:
                ok, wit = False, (a, j)
                break
        if not ok:
            break
    checks.append(AxiomCheck("paired-operator-identity", ok, wit))
    return CheckReport("paired-module", checks)


def check_prelie_module(p: PreLie, mod: ModuleData, maps: StructureMaps) -> CheckReport:
    """Compatibilities of the action maps plus the module left-symmetry law."""
    if mod.alg_dim != p.dim:
        raise DimensionError("module was built over an algebra of another dimension")
    if mod.left is None:
        raise HypothesisError("left action missing")
    n, m = p.dim, mod.dim
    checks: list[AxiomCheck] = []

    from .structures import _maps_equal

    ok, wit = _maps_equal(mod.alpha.compose(mod.beta), mod.beta.compose(mod.alpha))
    checks.append(AxiomCheck("alphaM-betaM-commute", ok, wit))
    for name, fa, fm in (
        ("alpha-action-compatible", maps.alpha, mod.alpha),
        ("beta-action-compatible", maps.beta, mod.beta),
    ):
        ok, wit = True, None
        for i in range(n):
            for j in range(m):
                if fm.apply(mod.left_on_basis(i, j)) != mod.act_left(fa.column(i), fm.column(j)):
                    ok, wit = False, (i, j)
                    break
            if not ok:
                break
        checks.append(AxiomCheck(name, ok, wit))

    both = maps.alpha.compose(maps.beta)

    def law_side(i: int, j: int, k: int) -> Vector:
        return mod.act_left(
            both.column(i), mod.act_left(maps.alpha.column(j), mod.basis(k))
        ) - mod.act_left(
            p.star.apply(maps.beta.column(i), maps.alpha.column(j)), mod.beta.column(k)
        )

    ok, wit = True, None
    for i in range(n):
        for j in range(n):
            for k in range(m):
                if law_side(i, j, k) != law_side(j, i, k):
                    ok, wit = False, (i, j, k)
                    break
            if not ok:
                break
        if not ok:
            break
    checks.append(AxiomCheck("prelie-module-symmetry", ok, wit))
    return CheckReport("pre-lie-module", checks)


def prelie_module_from_paired(
    alg: AlgebraData, maps: StructureMaps, pm: PairedModule, approach: str = "star"
) -> tuple[PreLie, ModuleData]:
    """The pre-Lie algebra and the shifted action a |>. m = R(a)|>m + a|>T(m) + lambda a|>m."""
    paired_report = check_paired_module(alg, maps, pm)
    if not paired_report.passed:
        bad = paired_report.failures()[0]
        raise HypothesisError("paired operator axioms", f"{bad.axiom} fails at {bad.witness}")
    prelie = prelie_from_rb(alg, maps, pm.R, pm.lam, approach)
    mod = pm.mod
    n, m = alg.dim, mod.dim
    left = [
        [
            list(
                (
                    mod.act_left(pm.R.column(a), mod.basis(j))
                    + mod.act_left(alg.basis(a), pm.T.column(j))
                    + mod.left_on_basis(a, j).scale(pm.lam)
                ).coeffs
            )
            for j in range(m)
        ]
        for a in range(n)
    ]
    shifted = ModuleData(alg.field, n, m, left, None, mod.alpha, mod.beta)
    conclusion = check_prelie_module(prelie, shifted, maps)
    if not conclusion.passed:
        bad = conclusion.failures()[0]
        raise ConclusionError(
            f"shifted action fails {bad.axiom} at {bad.witness}; this is an implementation bug"
        )
    return prelie, shifted


from functools import partial

THEOREMS = {
    "cor-3.15": partial(dendriform_from_rb, approach="first"),
    "lem-3.19": partial(dendriform_from_rb, approach="second"),
    "prop-3.16": partial(prelie_from_rb, approach="star"),
    "lem-3.20": partial(prelie_from_rb, approach="natural"),
    "thm-3.17": partial(prelie_module_from_paired, approach="star"),
    "thm-3.21": partial(prelie_module_from_paired, approach="natural"),
}
