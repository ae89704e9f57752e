"""The on-disk instance format: one self-describing JSON document.

Scalars are strings ("p/q" or "n" over the rationals, "k mod p" over a
prime field) so parsing and emission round-trip bit-exactly; numeric
literals are rejected. Unknown keys are rejected everywhere. Matrices
are row-major with the column convention of the rest of the package,
grids are indexed [i][j][k] for e_i e_j = sum_k c e_k, and a
comultiplication or derivation block stores, for each basis index j,
the coefficient grid of the image tensor of e_j.

Top-level keys:
    field, dim, mul, unit, maps, tensors, scalars, operators, bilinear,
    twistor, vectors, derivations, comultiplication, modules, tasks
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .fields import Field, FieldError, QQ, Scalar, field_from_name, parse_scalar
from .linalg import BilinearMap, LinMap, Tensor2, Tensor2Map, Vector
from .structures import AlgebraData, CoalgebraData, ModuleData, StructureMaps


class InstanceFormatError(ValueError):
    """A structural or scalar-level problem in an instance document."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


MAP_NAMES = ("alpha", "beta", "psi", "omega")
TOP_KEYS = (
    "field",
    "dim",
    "mul",
    "unit",
    "maps",
    "tensors",
    "scalars",
    "operators",
    "bilinear",
    "twistor",
    "vectors",
    "derivations",
    "comultiplication",
    "modules",
    "tasks",
)

TASK_PARAMS = {
    "check-algebra": set(),
    "check-coalgebra": set(),
    "check-module": {"module", "side"},
    "check-invariance": {"tensor", "map"},
    "check-ybp": set(),
    "check-rb-system": set(),
    "check-rb-operator": set(),
    "check-derivation": {"derivation"},
    "check-covariance": set(),
    "check-covariant-bialgebra": {"unital"},
    "check-twistor": set(),
    "check-dendriform": set(),
    "check-prelie": set(),
    "check-paired-module": {"module"},
    "check-prelie-module": {"module"},
}


@dataclass(eq=True)
class ModuleBlock:
    """One named module: action grids over the ambient algebra."""

    dim: int
    left: tuple | None
    right: tuple | None
    alpha: LinMap
    beta: LinMap
    operator: LinMap | None

    def to_module(self, alg_dim: int, field: Field) -> ModuleData:
        return ModuleData(field, alg_dim, self.dim, self.left, self.right, self.alpha, self.beta)


@dataclass(eq=True)
class InstanceFile:
    """A parsed instance document, structurally validated and exact."""

    field: Field
    dim: int
    mul: BilinearMap
    unit: Vector | None = None
    maps: dict = dc_field(default_factory=dict)
    tensors: dict = dc_field(default_factory=dict)
    scalars: dict = dc_field(default_factory=dict)
    operators: dict = dc_field(default_factory=dict)
    bilinear: dict = dc_field(default_factory=dict)
    twistor: dict | None = None
    vectors: dict = dc_field(default_factory=dict)
    derivations: dict = dc_field(default_factory=dict)
    comultiplication: dict | None = None
    modules: dict = dc_field(default_factory=dict)
    tasks: list = dc_field(default_factory=list)

    def algebra(self) -> AlgebraData:
        return AlgebraData(self.field, self.dim, self.mul, self.unit)

    def structure_maps(self) -> StructureMaps:
        ident = LinMap.identity(self.field, self.dim)
        return StructureMaps(
            self.maps.get("alpha", ident),
            self.maps.get("beta", ident),
            self.maps.get("psi", ident),
            self.maps.get("omega", ident),
        )

    def coalgebra(self) -> CoalgebraData:
        if self.comultiplication is None:
            raise InstanceFormatError("comultiplication", "block missing")
        return CoalgebraData(
            self.field,
            self.dim,
            self.comultiplication["delta"],
            self.comultiplication.get("counit"),
        )

    def scalar(self, name: str, default: Scalar | None = None) -> Scalar:
        if name in self.scalars:
            return self.scalars[name]
        if default is not None:
            return default
        raise InstanceFormatError("scalars", f"scalar {name!r} missing")


def _require_keys(data: dict, allowed, loc: str) -> None:
    if not isinstance(data, dict):
        raise InstanceFormatError(loc, f"expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise InstanceFormatError(loc, f"unknown keys {unknown}; allowed: {sorted(allowed)}")


def _scalar(value, field: Field, loc: str) -> Scalar:
    if not isinstance(value, str):
        raise InstanceFormatError(loc, f"scalars must be strings, got {value!r}")
    try:
        return parse_scalar(value, field)
    except FieldError as exc:
        raise InstanceFormatError(loc, str(exc)) from exc


def _vector(data, n: int, field: Field, loc: str) -> Vector:
    if not isinstance(data, list) or len(data) != n:
        raise InstanceFormatError(loc, f"expected a list of {n} scalars")
    return Vector(field, [_scalar(v, field, f"{loc}[{i}]") for i, v in enumerate(data)])


def _matrix(data, n: int, field: Field, loc: str) -> LinMap:
    if not isinstance(data, list) or len(data) != n:
        raise InstanceFormatError(loc, f"expected {n} rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise InstanceFormatError(f"{loc}[{i}]", f"expected {n} entries")
        rows.append([_scalar(v, field, f"{loc}[{i}][{j}]") for j, v in enumerate(row)])
    return LinMap(field, rows)


def _grid(data, shape: tuple[int, int, int], field: Field, loc: str):
    a, b, c = shape
    if not isinstance(data, list) or len(data) != a:
        raise InstanceFormatError(loc, f"expected {a} planes")
    out = []
    for i, plane in enumerate(data):
        if not isinstance(plane, list) or len(plane) != b:
            raise InstanceFormatError(f"{loc}[{i}]", f"expected {b} rows")
        rows = []
        for j, row in enumerate(plane):
            if not isinstance(row, list) or len(row) != c:
                raise InstanceFormatError(f"{loc}[{i}][{j}]", f"expected {c} entries")
            rows.append(tuple(_scalar(v, field, f"{loc}[{i}][{j}][{k}]") for k, v in enumerate(row)))
        out.append(tuple(rows))
    return tuple(out)


def _tensor2(data, n: int, field: Field, loc: str) -> Tensor2:
    if not isinstance(data, list) or len(data) != n:
        raise InstanceFormatError(loc, f"expected {n} rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise InstanceFormatError(f"{loc}[{i}]", f"expected {n} entries")
        rows.append([_scalar(v, field, f"{loc}[{i}][{j}]") for j, v in enumerate(row)])
    return Tensor2(field, rows)


def _tensor2map(data, n: int, field: Field, loc: str) -> Tensor2Map:
    if not isinstance(data, list) or len(data) != n:
        raise InstanceFormatError(loc, f"expected {n} basis images")
    return Tensor2Map(field, [_tensor2(plane, n, field, f"{loc}[{j}]") for j, plane in enumerate(data)])


def parse_instance(data: dict) -> InstanceFile:
    """Validate and build an InstanceFile from a decoded JSON object."""
    _require_keys(data, TOP_KEYS, "document")
    for key in ("field", "dim", "mul"):
        if key not in data:
            raise InstanceFormatError("document", f"required key {key!r} missing")

    if not isinstance(data["field"], str):
        raise InstanceFormatError("field", "field descriptor must be a string")
    try:
        field = field_from_name(data["field"])
    except FieldError as exc:
        raise InstanceFormatError("field", str(exc)) from exc

    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise InstanceFormatError("dim", f"dimension must be a positive integer, got {dim!r}")

    mul = BilinearMap(field, _grid(data["mul"], (dim, dim, dim), field, "mul"))
    unit = _vector(data["unit"], dim, field, "unit") if "unit" in data else None
    if unit is not None and unit.is_zero():
        raise InstanceFormatError("unit", "a declared unit must be nonzero")

    maps: dict = {}
    if "maps" in data:
        _require_keys(data["maps"], MAP_NAMES, "maps")
        for name in MAP_NAMES:
            if name in data["maps"]:
                maps[name] = _matrix(data["maps"][name], dim, field, f"maps.{name}")

    tensors: dict = {}
    if "tensors" in data:
        _require_keys(data["tensors"], ("r", "s", "u"), "tensors")
        for name, grid in data["tensors"].items():
            tensors[name] = _tensor2(grid, dim, field, f"tensors.{name}")

    scalars: dict = {}
    if "scalars" in data:
        _require_keys(data["scalars"], ("lambda", "gamma"), "scalars")
        for name, value in data["scalars"].items():
            scalars[name] = _scalar(value, field, f"scalars.{name}")

    operators: dict = {}
    if "operators" in data:
        _require_keys(data["operators"], ("R", "S"), "operators")
        for name, grid in data["operators"].items():
            operators[name] = _matrix(grid, dim, field, f"operators.{name}")

    bilinear: dict = {}
    if "bilinear" in data:
        _require_keys(data["bilinear"], ("xi", "zeta", "star", "prec", "succ"), "bilinear")
        for name, grid in data["bilinear"].items():
            bilinear[name] = BilinearMap(field, _grid(grid, (dim, dim, dim), field, f"bilinear.{name}"))

    twistor = None
    if "twistor" in data:
        _require_keys(data["twistor"], ("T", "companion"), "twistor")
        if "T" not in data["twistor"] or "companion" not in data["twistor"]:
            raise InstanceFormatError("twistor", "both T and companion are required")
        twistor = {
            "T": _matrix(data["twistor"]["T"], dim * dim, field, "twistor.T"),
            "companion": _matrix(data["twistor"]["companion"], dim**3, field, "twistor.companion"),
        }

    vectors: dict = {}
    if "vectors" in data:
        if not isinstance(data["vectors"], dict):
            raise InstanceFormatError("vectors", "expected an object")
        for name, coeffs in data["vectors"].items():
            vectors[name] = _vector(coeffs, dim, field, f"vectors.{name}")

    derivations: dict = {}
    if "derivations" in data:
        _require_keys(data["derivations"], ("delta1", "delta2"), "derivations")
        for name, grids in data["derivations"].items():
            derivations[name] = _tensor2map(grids, dim, field, f"derivations.{name}")

    comultiplication = None
    if "comultiplication" in data:
        _require_keys(data["comultiplication"], ("delta", "counit"), "comultiplication")
        if "delta" not in data["comultiplication"]:
            raise InstanceFormatError("comultiplication", "delta is required")
        comultiplication = {
            "delta": _tensor2map(data["comultiplication"]["delta"], dim, field, "comultiplication.delta")
        }
        if "counit" in data["comultiplication"]:
            comultiplication["counit"] = _vector(
                data["comultiplication"]["counit"], dim, field, "comultiplication.counit"
            )

    modules: dict = {}
    if "modules" in data:
        if not isinstance(data["modules"], dict):
            raise InstanceFormatError("modules", "expected an object")
        for name, block in data["modules"].items():
            loc = f"modules.{name}"
            _require_keys(block, ("dim", "left", "right", "alpha", "beta", "T"), loc)
            if "dim" not in block:
                raise InstanceFormatError(loc, "module dim is required")
            mdim = block["dim"]
            if not isinstance(mdim, int) or isinstance(mdim, bool) or mdim <= 0:
                raise InstanceFormatError(f"{loc}.dim", "must be a positive integer")
            left = _grid(block["left"], (dim, mdim, mdim), field, f"{loc}.left") if "left" in block else None
            right = _grid(block["right"], (mdim, dim, mdim), field, f"{loc}.right") if "right" in block else None
            ident = LinMap.identity(field, mdim)
            alpha = _matrix(block["alpha"], mdim, field, f"{loc}.alpha") if "alpha" in block else ident
            beta = _matrix(block["beta"], mdim, field, f"{loc}.beta") if "beta" in block else ident
            op = _matrix(block["T"], mdim, field, f"{loc}.T") if "T" in block else None
            modules[name] = ModuleBlock(mdim, left, right, alpha, beta, op)

    tasks: list = []
    if "tasks" in data:
        if not isinstance(data["tasks"], list):
            raise InstanceFormatError("tasks", "expected a list")
        for pos, task in enumerate(data["tasks"]):
            loc = f"tasks[{pos}]"
            if not isinstance(task, dict) or "task" not in task:
                raise InstanceFormatError(loc, "each task is an object with a 'task' key")
            name = task["task"]
            if name not in TASK_PARAMS:
                raise InstanceFormatError(loc, f"unknown task {name!r}; known: {sorted(TASK_PARAMS)}")
            _require_keys(task, {"task"} | TASK_PARAMS[name], loc)
            tasks.append(dict(task))

    return InstanceFile(
        field=field,
        dim=dim,
        mul=mul,
        unit=unit,
        maps=maps,
        tensors=tensors,
        scalars=scalars,
        operators=operators,
        bilinear=bilinear,
        twistor=twistor,
        vectors=vectors,
        derivations=derivations,
        comultiplication=comultiplication,
        modules=modules,
        tasks=tasks,
    )


def load_instance(path: str | Path) -> InstanceFile:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(str(path), f"invalid JSON: {exc}") from exc
    return parse_instance(data)


def _emit_vector(v: Vector) -> list[str]:
    return [str(c) for c in v.coeffs]


def _emit_matrix(m: LinMap) -> list[list[str]]:
    return [[str(c) for c in row] for row in m.entries]


def _emit_tensor2(t: Tensor2) -> list[list[str]]:
    return [[str(c) for c in row] for row in t.coeffs]


def _emit_grid(grid) -> list:
    return [[[str(c) for c in cell] for cell in row] for row in grid]


def _emit_tensor2map(m: Tensor2Map) -> list:
    return [_emit_tensor2(t) for t in m.components]


def emit_instance(inst: InstanceFile) -> dict:
    """Canonical JSON object: fixed key order, scalar strings, no numbers."""
    out: dict = {"field": str(inst.field), "dim": inst.dim, "mul": _emit_grid(inst.mul.table)}
    if inst.unit is not None:
        out["unit"] = _emit_vector(inst.unit)
    if inst.maps:
        out["maps"] = {name: _emit_matrix(inst.maps[name]) for name in MAP_NAMES if name in inst.maps}
    if inst.tensors:
        out["tensors"] = {
            name: _emit_tensor2(inst.tensors[name]) for name in ("r", "s", "u") if name in inst.tensors
        }
    if inst.scalars:
        out["scalars"] = {name: str(inst.scalars[name]) for name in ("lambda", "gamma") if name in inst.scalars}
    if inst.operators:
        out["operators"] = {name: _emit_matrix(inst.operators[name]) for name in ("R", "S") if name in inst.operators}
    if inst.bilinear:
        out["bilinear"] = {
            name: _emit_grid(inst.bilinear[name].table)
            for name in ("xi", "zeta", "star", "prec", "succ")
            if name in inst.bilinear
        }
    if inst.twistor is not None:
        out["twistor"] = {
            "T": _emit_matrix(inst.twistor["T"]),
            "companion": _emit_matrix(inst.twistor["companion"]),
        }
    if inst.vectors:
        out["vectors"] = {name: _emit_vector(inst.vectors[name]) for name in sorted(inst.vectors)}
    if inst.derivations:
        out["derivations"] = {
            name: _emit_tensor2map(inst.derivations[name])
            for name in ("delta1", "delta2")
            if name in inst.derivations
        }
    if inst.comultiplication is not None:
        block = {"delta": _emit_tensor2map(inst.comultiplication["delta"])}
        if inst.comultiplication.get("counit") is not None:
            block["counit"] = _emit_vector(inst.comultiplication["counit"])
        out["comultiplication"] = block
    if inst.modules:
        blocks = {}
        for name in sorted(inst.modules):
            mb = inst.modules[name]
            block: dict = {"dim": mb.dim}
            if mb.left is not None:
                block["left"] = _emit_grid(mb.left)
            if mb.right is not None:
                block["right"] = _emit_grid(mb.right)
            block["alpha"] = _emit_matrix(mb.alpha)
            block["beta"] = _emit_matrix(mb.beta)
            if mb.operator is not None:
                block["T"] = _emit_matrix(mb.operator)
            blocks[name] = block
        out["modules"] = blocks
    if inst.tasks:
        tasks = []
        for task in inst.tasks:
            ordered = {"task": task["task"]}
            for key in sorted(k for k in task if k != "task"):
                ordered[key] = task[key]
            tasks.append(ordered)
        out["tasks"] = tasks
    return out


def save_instance(inst: InstanceFile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(emit_instance(inst), indent=2) + "\n", encoding="utf-8")


def default_tasks(inst: InstanceFile) -> list[dict]:
    """Tasks derived from the declared blocks, in a fixed order."""
    tasks: list[dict] = [{"task": "check-algebra"}]
    if inst.comultiplication is not None:
        tasks.append({"task": "check-coalgebra"})
    for name in sorted(inst.modules):
        side = "bimodule" if inst.modules[name].right is not None else "left"
        tasks.append({"task": "check-module", "module": name, "side": side})
    if "r" in inst.tensors:
        tasks.append({"task": "check-ybp"})
    if "R" in inst.operators and "S" in inst.operators:
        tasks.append({"task": "check-rb-system"})
    elif "R" in inst.operators:
        tasks.append({"task": "check-rb-operator"})
    for name in ("delta1", "delta2"):
        if name in inst.derivations:
            tasks.append({"task": "check-derivation", "derivation": name})
    if "prec" in inst.bilinear and "succ" in inst.bilinear:
        tasks.append({"task": "check-dendriform"})
    if "star" in inst.bilinear:
        tasks.append({"task": "check-prelie"})
    if inst.twistor is not None:
        tasks.append({"task": "check-twistor"})
    return tasks
