"""Twisted tensor-leg products and weighted associative Yang-Baxter pairs.

For r, s in A (x) A the three twisted leg products in A (x) A (x) A are

    r12 s23 = alpha(r1) (x) r2 s1          (x) beta(s2)
    r13 s12 = omega(r1) s1 (x) beta(s2)    (x) alpha psi(r2)
    r23 s13 = beta omega(s1) (x) alpha(r1) (x) r2 psi(s2)

with superscripts naming tensor components and juxtaposition the algebra
product. A pair (r, s) of weight (lambda, gamma) must satisfy

    r13 r12 - r12 r23 + s23 r13 = -lambda * r13
    s13 r12 - s12 s23 + s23 s13 = -gamma  * s13

where a standalone x13 embeds as omega(x1) (x) 1_A (x) psi(x2); the unit
is only required when the corresponding weight is nonzero. The residue
of an instance is the exact defect of the two equations, so the pair is
a solution precisely when both residue tensors vanish.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .fields import Field, FieldError, PrimeField, Scalar
from .linalg import DimensionError, LinMap, Tensor2, Tensor3, contract
from .parallel import parallel_map, thread_count
from .reports import HypothesisError
from .structures import AlgebraData, StructureMaps

LEG_PRODUCT_KINDS = ("12.23", "13.12", "23.13")


class SearchBoundError(ValueError):
    """The requested exhaustive search exceeds the candidate budget."""

    def __init__(self, candidates: int, bound: int, detail: str):
        super().__init__(f"search space of {detail} = {candidates} candidates exceeds the bound {bound}")
        self.candidates = candidates
        self.bound = bound


@dataclass(frozen=True)
class YbeInstance:
    """An algebra with twisting maps, a tensor pair, and a weight pair."""

    alg: AlgebraData
    maps: StructureMaps
    r: Tensor2
    s: Tensor2
    lam: Scalar
    gam: Scalar

    def __post_init__(self):
        n = self.alg.dim
        if self.r.dim != n or self.s.dim != n or self.maps.dim != n:
            raise DimensionError("instance pieces have mismatched dimensions")
        field = self.alg.field
        for piece in (self.r, self.s):
            if piece.field is not field:
                raise DimensionError("instance pieces over mixed fields")
        if self.lam.field is not field or self.gam.field is not field:
            raise DimensionError("weights must live in the instance field")


@dataclass(frozen=True)
class Residue:
    """Exact defects of the two weighted equations; zero means solution."""

    first: Tensor3
    second: Tensor3

    def is_zero(self) -> bool:
        return self.first.is_zero() and self.second.is_zero()


def leg_product(kind: str, first: Tensor2, second: Tensor2, alg: AlgebraData, maps: StructureMaps) -> Tensor3:
    """One twisted leg product; ``first`` supplies the left letter of the kind."""
    if first.dim != alg.dim or second.dim != alg.dim:
        raise DimensionError("leg product tensors do not match the algebra")
    alpha, beta = maps.alpha, maps.beta
    if kind == "12.23":
        plan = [[(alpha, 0)], [1, 2], [(beta, 3)]]
    elif kind == "13.12":
        psi, omega = maps.require_psi_omega("leg product 13.12")
        plan = [[(omega, 0), 2], [(beta, 3)], [(alpha.compose(psi), 1)]]
    elif kind == "23.13":
        psi, omega = maps.require_psi_omega("leg product 23.13")
        plan = [[(beta.compose(omega), 2)], [(alpha, 0)], [1, (psi, 3)]]
    else:
        raise ValueError(f"unknown leg product kind {kind!r}; expected one of {LEG_PRODUCT_KINDS}")
    return contract((first, second), plan, alg)


def embed_13(r: Tensor2, alg: AlgebraData, maps: StructureMaps) -> Tensor3:
    """The standalone outer-leg embedding omega(r1) (x) 1_A (x) psi(r2)."""
    if alg.unit is None:
        raise HypothesisError("unit required for weighted equation")
    psi, omega = maps.require_psi_omega("outer-leg embedding")
    n = alg.dim
    out = Tensor3.zero(alg.field, n)
    for (i, j), c in r.items():
        u = omega.column(i)
        w = psi.column(j)
        for a, ca in u.items():
            for m, cm in alg.unit.items():
                for b, cb in w.items():
                    out = out + Tensor3.basis(alg.field, n, a, m, b).scale(c * ca * cm * cb)
    return out


def abhybp_residue(inst: YbeInstance) -> Residue:
    """Exact defect tensors of the two weighted equations for (r, s)."""
    alg, maps, r, s = inst.alg, inst.maps, inst.r, inst.s
    first = (
        leg_product("13.12", r, r, alg, maps)
        - leg_product("12.23", r, r, alg, maps)
        + leg_product("23.13", s, r, alg, maps)
    )
    if not inst.lam.is_zero():
        first = first + embed_13(r, alg, maps).scale(inst.lam)
    second = (
        leg_product("13.12", s, r, alg, maps)
        - leg_product("12.23", s, s, alg, maps)
        + leg_product("23.13", s, s, alg, maps)
    )
    if not inst.gam.is_zero():
        second = second + embed_13(s, alg, maps).scale(inst.gam)
    return Residue(first, second)


def check_invariance(t: Tensor2, f: LinMap) -> bool:
    """Whether (f (x) f)(t) = t exactly."""
    if t.dim != f.dim:
        raise DimensionError("tensor and map dimensions differ")
    return t.apply_pair(f, f) == t


DEFAULT_CANDIDATE_BOUND = 2**24
DEFAULT_DIM_BOUND = 3


class _ResidueTables:
    """Raw integer residue evaluation over a prime field.

    The residue is bilinear in (r, s) plus a linear weight term, so we
    tabulate its value on all basis-tensor pairs once (through the same
    leg_product code path the public API uses) and then evaluate every
    candidate with plain modular integers.
    """

    def __init__(self, alg: AlgebraData, maps: StructureMaps, lam: Scalar, gam: Scalar):
        field = alg.field
        if not isinstance(field, PrimeField):
            raise FieldError("search requires a finite field")
        self.p = field.p
        n = alg.dim
        self.n = n
        cells = n * n
        self.cells = cells

        def entries3(t: Tensor3):
            return [((i * n + j) * n + k, c.value) for (i, j, k), c in t.items()]

        basis = [Tensor2.basis(field, n, i, j) for i in range(n) for j in range(n)]
        lp = leg_product

        # first residue: (rr) 13.12 - 12.23, (sr) 23.13, plus lambda embedding of r
        self.first_rr = {}
        self.first_sr = {}
        self.second_sr = {}
        self.second_ss = {}
        for a in range(cells):
            for b in range(cells):
                t = lp("13.12", basis[a], basis[b], alg, maps) - lp("12.23", basis[a], basis[b], alg, maps)
                e = entries3(t)
                if e:
                    self.first_rr[(a, b)] = e
                t = lp("23.13", basis[a], basis[b], alg, maps)
                e = entries3(t)
                if e:
                    self.first_sr[(a, b)] = e
                t = lp("13.12", basis[a], basis[b], alg, maps)
                e = entries3(t)
                if e:
                    self.second_sr[(a, b)] = e
                t = lp("23.13", basis[a], basis[b], alg, maps) - lp("12.23", basis[a], basis[b], alg, maps)
                e = entries3(t)
                if e:
                    self.second_ss[(a, b)] = e

        self.first_lin = {}
        self.second_lin = {}
        if not lam.is_zero():
            for a in range(cells):
                e = entries3(embed_13(basis[a], alg, maps).scale(lam))
                if e:
                    self.first_lin[a] = e
        if not gam.is_zero():
            for a in range(cells):
                e = entries3(embed_13(basis[a], alg, maps).scale(gam))
                if e:
                    self.second_lin[a] = e

    def is_solution(self, r: tuple[int, ...], s: tuple[int, ...]) -> bool:
        p = self.p
        size = self.n ** 3
        acc = [0] * size
        for (a, b), entries in self.first_rr.items():
            c = r[a] * r[b]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        for (a, b), entries in self.first_sr.items():
            c = s[a] * r[b]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        for a, entries in self.first_lin.items():
            c = r[a]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        if any(x % p for x in acc):
            return False
        acc = [0] * size
        for (a, b), entries in self.second_sr.items():
            c = s[a] * r[b]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        for (a, b), entries in self.second_ss.items():
            c = s[a] * s[b]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        for a, entries in self.second_lin.items():
            c = s[a]
            if c % p:
                for m, v in entries:
                    acc[m] += c * v
        return not any(x % p for x in acc)


def _digits(index: int, base: int, width: int) -> tuple[int, ...]:
    """Big-endian base-p digits, so ascending index = lexicographic order."""
    out = [0] * width
    for pos in range(width - 1, -1, -1):
        index, out[pos] = divmod(index, base)
    return tuple(out)


def _normalize_weight(weight, field: Field) -> tuple[Scalar, Scalar]:
    if isinstance(weight, Scalar):
        return weight, weight
    lam, gam = weight
    return lam, gam


def search_solutions(
    alg: AlgebraData,
    maps: StructureMaps,
    weight,
    mode: str = "diagonal",
    max_candidates: int = DEFAULT_CANDIDATE_BOUND,
    dim_bound: int = DEFAULT_DIM_BOUND,
):
    """Exhaustively enumerate weighted solutions over a prime field.

    ``mode="diagonal"`` sets s = r (the single-tensor equation; the two
    weights must then agree), ``mode="pairs"`` ranges over independent
    (r, s). Candidates are scanned in lexicographic order of the
    flattened coefficient grids, r before s, and the result order is the
    scan order, so repeated runs are identical regardless of the
    BIHOM_THREADS setting.
    """
    field = alg.field
    if not isinstance(field, PrimeField):
        raise FieldError("search requires a finite field")
    if mode not in ("diagonal", "pairs"):
        raise ValueError(f"mode must be diagonal or pairs, not {mode!r}")
    n = alg.dim
    if n > dim_bound:
        raise SearchBoundError(field.p ** (n * n), max_candidates, f"dim {n} exceeds bound {dim_bound}; {field.p}^{n * n}")
    lam, gam = _normalize_weight(weight, field)
    if lam.field is not field or gam.field is not field:
        raise FieldError("weights must live in the search field")
    if mode == "diagonal" and lam != gam:
        raise ValueError("diagonal mode needs equal weights")
    if (not lam.is_zero() or not gam.is_zero()) and alg.unit is None:
        raise HypothesisError("unit required for weighted equation")

    cells = n * n
    exponent = cells if mode == "diagonal" else 2 * cells
    total = field.p**exponent
    if total >= max_candidates:
        raise SearchBoundError(total, max_candidates, f"{field.p}^{exponent}")

    tables = _ResidueTables(alg, maps, lam, gam)

    def solutions_in(bounds: tuple[int, int]) -> list[int]:
        start, stop = bounds
        found = []
        if mode == "diagonal":
            for idx in range(start, stop):
                flat = _digits(idx, field.p, cells)
                if tables.is_solution(flat, flat):
                    found.append(idx)
        else:
            for idx in range(start, stop):
                flat = _digits(idx, field.p, 2 * cells)
                if tables.is_solution(flat[:cells], flat[cells:]):
                    found.append(idx)
        return found

    workers = thread_count()
    if workers > 1 and total > workers:
        step = (total + workers - 1) // workers
        chunks = [(k, min(k + step, total)) for k in range(0, total, step)]
    else:
        chunks = [(0, total)]
    hits = [idx for chunk in parallel_map(solutions_in, chunks) for idx in chunk]

    def tensor_of(flat: tuple[int, ...]) -> Tensor2:
        return Tensor2(
            field,
            tuple(tuple(field.scalar(flat[i * n + j]) for j in range(n)) for i in range(n)),
        )

    if mode == "diagonal":
        return [tensor_of(_digits(idx, field.p, cells)) for idx in hits]
    out = []
    for idx in hits:
        flat = _digits(idx, field.p, 2 * cells)
        out.append((tensor_of(flat[:cells]), tensor_of(flat[cells:])))
    return out


def candidate_count(p: int, dim: int, mode: str) -> int:
    cells = dim * dim
    return p ** (cells if mode == "diagonal" else 2 * cells)


THEOREMS: dict = {}
