"""Exact scalar arithmetic over the rationals and prime fields.

Every quantity in this package is a :class:`Scalar`: either a rational
number (arbitrary-precision, always in lowest terms with a positive
denominator) or a residue in a prime field F_p with 0 <= residue < p.
Equality is exact; there is no floating point anywhere.

Scalars of different field kinds never mix: adding a rational to an
F_5 residue raises :class:`FieldMismatchError` instead of coercing.

Serialization is string-based so that round-trips are bit-exact:
rationals render as ``"n"`` or ``"p/q"``, prime-field residues as
``"k mod p"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Union


class FieldError(ValueError):
    """Invalid scalar arithmetic (division by zero, bad modulus, ...)."""


class FieldMismatchError(FieldError):
    """Two operands belong to different fields."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.2 * 10^18."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
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


class Field:
    """Common interface of the two scalar fields."""

    kind: str

    def scalar(self, value) -> "Scalar":
        raise NotImplementedError

    def parse(self, text: str) -> "Scalar":
        raise NotImplementedError

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)


class RationalField(Field):
    """The field of rational numbers."""

    kind = "rational"

    _instance: "RationalField | None" = None

    def __new__(cls) -> "RationalField":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise FieldMismatchError("cannot reinterpret a scalar of another field as rational")
            return value
        if isinstance(value, Fraction):
            return Scalar(self, value)
        if isinstance(value, int):
            return Scalar(self, Fraction(value))
        if isinstance(value, tuple) and len(value) == 2:
            num, den = value
            if den == 0:
                raise FieldError("zero denominator")
            return Scalar(self, Fraction(num, den))
        raise FieldError(f"cannot build a rational scalar from {value!r}")

    def parse(self, text: str) -> "Scalar":
        body = text.strip()
        try:
            if "/" in body:
                num_s, den_s = body.split("/")
                num, den = int(num_s), int(den_s)
                if den == 0:
                    raise FieldError(f"zero denominator in {text!r}")
                return Scalar(self, Fraction(num, den))
            return Scalar(self, Fraction(int(body)))
        except ValueError as exc:
            raise FieldError(f"malformed rational scalar {text!r}") from exc

    def __repr__(self) -> str:
        return "QQ"

    def __str__(self) -> str:
        return "QQ"


QQ = RationalField()

_prime_fields: dict[int, "PrimeField"] = {}

MAX_PRIME = 2**31


class PrimeField(Field):
    """The prime field F_p, elements stored as residues 0 <= k < p."""

    kind = "prime"

    def __init__(self, p: int):
        self.p = p

    def scalar(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise FieldMismatchError("cannot reinterpret a scalar of another field in F_p")
            return value
        if isinstance(value, int):
            return Scalar(self, value % self.p)
        raise FieldError(f"cannot build an F_{self.p} scalar from {value!r}")

    def parse(self, text: str) -> "Scalar":
        body = text.strip()
        if "mod" in body:
            left, _, right = body.partition("mod")
            try:
                k, q = int(left), int(right)
            except ValueError as exc:
                raise FieldError(f"malformed prime-field scalar {text!r}") from exc
            if q != self.p:
                raise FieldMismatchError(f"scalar {text!r} has modulus {q}, expected {self.p}")
            return Scalar(self, k % self.p)
        try:
            return Scalar(self, int(body) % self.p)
        except ValueError as exc:
            raise FieldError(f"malformed prime-field scalar {text!r}") from exc

    def elements(self) -> Iterator["Scalar"]:
        """All p residues in ascending order."""
        for k in range(self.p):
            yield Scalar(self, k)

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __str__(self) -> str:
        return f"GF({self.p})"


def GF(p: int) -> PrimeField:
    """The prime field F_p; instances are interned so identity works."""
    field = _prime_fields.get(p)
    if field is None:
        if not isinstance(p, int) or p < 2 or p > MAX_PRIME:
            raise FieldError(f"prime-field modulus must be an integer in [2, 2^31], got {p!r}")
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        field = PrimeField(p)
        _prime_fields[p] = field
    return field


def field_from_name(name: str) -> Field:
    """Resolve a field descriptor string: ``"QQ"`` or ``"GF(p)"``."""
    body = name.strip()
    if body in ("QQ", "Q"):
        return QQ
    if body.startswith("GF(") and body.endswith(")"):
        try:
            p = int(body[3:-1])
        except ValueError as exc:
            raise FieldError(f"malformed field descriptor {name!r}") from exc
        return GF(p)
    raise FieldError(f"unknown field descriptor {name!r} (expected \"QQ\" or \"GF(p)\")")


ScalarValue = Union[Fraction, int]


class Scalar:
    """One exact field element. Immutable; arithmetic never coerces kinds."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: ScalarValue):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar):
            raise FieldMismatchError(f"expected a Scalar, got {other!r}")
        if other.field is not self.field:
            raise FieldMismatchError(
                f"mixed-field arithmetic between {self.field} and {other.field} is rejected"
            )

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        f = self.field
        if f.kind == "prime":
            return Scalar(f, (self.value + other.value) % f.p)
        return Scalar(f, self.value + other.value)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        f = self.field
        if f.kind == "prime":
            return Scalar(f, (self.value - other.value) % f.p)
        return Scalar(f, self.value - other.value)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        f = self.field
        if f.kind == "prime":
            return Scalar(f, (self.value * other.value) % f.p)
        return Scalar(f, self.value * other.value)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        f = self.field
        if other.value == 0:
            raise FieldError("division by zero")
        if f.kind == "prime":
            return Scalar(f, (self.value * pow(other.value, f.p - 2, f.p)) % f.p)
        return Scalar(f, self.value / other.value)

    def __neg__(self) -> "Scalar":
        f = self.field
        if f.kind == "prime":
            return Scalar(f, (-self.value) % f.p)
        return Scalar(f, -self.value)

    def inverse(self) -> "Scalar":
        return self.field.one / self

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field is other.field and self.value == other.value

    def __hash__(self) -> int:
        return hash((id(self.field), self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        if self.field.kind == "prime":
            return f"{self.value} mod {self.field.p}"
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self) -> str:
        return f"Scalar({self.field}, {self})"


def parse_scalar(text: str, field: Field) -> Scalar:
    """Parse a serialized scalar in the given field. Exact round-trip."""
    if not isinstance(text, str):
        raise FieldError(f"scalars must be strings, got {text!r}")
    return field.parse(text)
