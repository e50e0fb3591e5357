from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Self

type Rational = Fraction
type Scalar = int | Fraction


def isqrt_exact(x: int) -> int | None:
    if x < 0:
        raise ValueError(f"isqrt_exact expects a nonnegative integer, got {x}")
    s = math.isqrt(x)
    if s * s == x:
        return s
    return None


def is_integral(value: Scalar) -> bool:
    return Fraction(value).denominator == 1


def render_exact(value: Scalar) -> str:
    """Render an exact scalar as "p" or "p/q"; never a decimal."""
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class QPoly:
    """Polynomial with rational coefficients, lowest degree first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        trimmed = list(self.coefficients)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in trimmed))

    @classmethod
    def of(cls, coefficients: Iterable[Scalar]) -> Self:
        return cls(tuple(Fraction(c) for c in coefficients))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> Self:
        product = cls.of([1])
        for root in roots:
            product = product * cls.of([-Fraction(root), 1])
        return product

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self.coefficients):
            return self.coefficients[power]
        return Fraction(0)

    def __add__(self, other: "QPoly") -> "QPoly":
        size = max(len(self.coefficients), len(other.coefficients))
        return QPoly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly(())
        product = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            for j, y in enumerate(other.coefficients):
                product[i + j] += x * y
        return QPoly(tuple(product))

    def scale(self, factor: Scalar) -> "QPoly":
        return QPoly(tuple(c * factor for c in self.coefficients))


def poly_eval(p: QPoly, t: Scalar) -> Fraction:
    value = Fraction(0)
    for c in reversed(p.coefficients):
        value = value * t + c
    return value


def elem_symmetric(roots: Sequence[int], k: int) -> int:
    if not 0 <= k <= len(roots):
        raise ValueError(f"elementary symmetric index {k} out of range for {len(roots)} roots")
    # Coefficients of prod(1 + root * x), truncated at degree k.
    e = [1] + [0] * k
    for root in roots:
        for j in range(k, 0, -1):
            e[j] += root * e[j - 1]
    return e[k]


@dataclass(frozen=True)
class QMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows or not self.rows[0]:
            raise ValueError("QMatrix needs at least one row and one column")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise ValueError("QMatrix rows must all have the same length")

    @classmethod
    def of(cls, rows: Iterable[Iterable[Scalar]]) -> Self:
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def col_count(self) -> int:
        return len(self.rows[0])

    def apply(self, vector: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(vector) != self.col_count:
            raise ValueError(f"vector of length {len(vector)} does not match {self.col_count} columns")
        return tuple(sum((x * v for x, v in zip(row, vector, strict=True)), Fraction(0)) for row in self.rows)


@dataclass(frozen=True)
class UniqueSolution:
    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class ParametricSolution:
    """Pivot variables as affine functions of the free variables.

    `particular` is the solution with every free variable set to zero; `directions[f]` is the change of the
    full solution vector per unit of free variable `free_columns[f]`.
    """

    particular: tuple[Fraction, ...]
    free_columns: tuple[int, ...]
    directions: tuple[tuple[Fraction, ...], ...]

    def at(self, free_values: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(free_values) != len(self.free_columns):
            raise ValueError(f"expected {len(self.free_columns)} free values, got {len(free_values)}")
        point = list(self.particular)
        for value, direction in zip(free_values, self.directions, strict=True):
            point = [p + value * d for p, d in zip(point, direction, strict=True)]
        return tuple(point)


@dataclass(frozen=True)
class Inconsistent:
    row: int


type LinearOutcome = UniqueSolution | ParametricSolution | Inconsistent


def _reduce(m: QMatrix, rhs_columns: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form of [m | rhs_columns]; pivots are chosen in column order."""
    for column in rhs_columns:
        if len(column) != m.row_count:
            raise ValueError(f"right-hand side of length {len(column)} does not match {m.row_count} rows")
    grid = [list(row) + [Fraction(column[i]) for column in rhs_columns] for i, row in enumerate(m.rows)]
    pivots: list[int] = []
    pivot_row = 0
    for col in range(m.col_count):
        source = next((i for i in range(pivot_row, len(grid)) if grid[i][col] != 0), None)
        if source is None:
            continue
        grid[pivot_row], grid[source] = grid[source], grid[pivot_row]
        lead = grid[pivot_row][col]
        grid[pivot_row] = [x / lead for x in grid[pivot_row]]
        for i in range(len(grid)):
            factor = grid[i][col]
            if i != pivot_row and factor != 0:
                grid[i] = [x - factor * y for x, y in zip(grid[i], grid[pivot_row], strict=True)]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(grid):
            break
    return grid, pivots


def solve_linear(m: QMatrix, rhs: Sequence[Scalar]) -> LinearOutcome:
    grid, pivots = _reduce(m, [rhs])
    n = m.col_count
    for i in range(len(pivots), len(grid)):
        if grid[i][n] != 0:
            return Inconsistent(row=i)

    particular = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        particular[col] = grid[i][n]
    if len(pivots) == n:
        return UniqueSolution(values=tuple(particular))

    free_columns = tuple(col for col in range(n) if col not in pivots)
    directions: list[tuple[Fraction, ...]] = []
    for free in free_columns:
        direction = [Fraction(0)] * n
        direction[free] = Fraction(1)
        for i, col in enumerate(pivots):
            direction[col] = -grid[i][free]
        directions.append(tuple(direction))
    return ParametricSolution(particular=tuple(particular), free_columns=free_columns, directions=tuple(directions))


@dataclass(frozen=True)
class AffineForm:
    """constant + sum(coefficient * parameter) over named parameters."""

    constant: Fraction
    terms: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        merged: dict[str, Fraction] = {}
        for name, coefficient in self.terms:
            merged[name] = merged.get(name, Fraction(0)) + Fraction(coefficient)
        object.__setattr__(self, "constant", Fraction(self.constant))
        object.__setattr__(self, "terms", tuple(sorted((k, v) for k, v in merged.items() if v != 0)))

    @classmethod
    def const(cls, value: Scalar) -> Self:
        return cls(Fraction(value), ())

    @classmethod
    def var(cls, name: str, coefficient: Scalar = 1) -> Self:
        return cls(Fraction(0), ((name, Fraction(coefficient)),))

    def coefficient(self, name: str) -> Fraction:
        return dict(self.terms).get(name, Fraction(0))

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.terms)

    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other: "AffineForm | Scalar") -> "AffineForm":
        other_form = other if isinstance(other, AffineForm) else AffineForm.const(other)
        return AffineForm(self.constant + other_form.constant, self.terms + other_form.terms)

    def __radd__(self, other: Scalar) -> "AffineForm":
        return self + other

    def __neg__(self) -> "AffineForm":
        return self * -1

    def __sub__(self, other: "AffineForm | Scalar") -> "AffineForm":
        other_form = other if isinstance(other, AffineForm) else AffineForm.const(other)
        return self + (-other_form)

    def __rsub__(self, other: Scalar) -> "AffineForm":
        return AffineForm.const(other) - self

    def __mul__(self, factor: Scalar) -> "AffineForm":
        return AffineForm(self.constant * factor, tuple((name, c * factor) for name, c in self.terms))

    def __rmul__(self, factor: Scalar) -> "AffineForm":
        return self * factor

    def __truediv__(self, divisor: Scalar) -> "AffineForm":
        return self * (1 / Fraction(divisor))

    def at(self, values: Mapping[str, Scalar]) -> Fraction:
        missing = [name for name in self.parameters if name not in values]
        if missing:
            raise ValueError(f"missing values for parameters {missing}")
        return self.constant + sum((c * values[name] for name, c in self.terms), Fraction(0))

    def substitute(self, name: str, replacement: "AffineForm") -> "AffineForm":
        coefficient = self.coefficient(name)
        rest = AffineForm(self.constant, tuple((k, v) for k, v in self.terms if k != name))
        return rest + replacement * coefficient

    def solve_for(self, name: str) -> "AffineForm":
        """The value of `name` that makes this form vanish, in terms of the other parameters."""
        coefficient = self.coefficient(name)
        if coefficient == 0:
            raise ValueError(f"form {self.render()} does not depend on {name}")
        rest = AffineForm(self.constant, tuple((k, v) for k, v in self.terms if k != name))
        return rest * (-1 / coefficient)

    def render(self) -> str:
        parts = [f"{render_exact(c)}*{name}" for name, c in self.terms]
        if self.constant != 0 or not parts:
            parts.append(render_exact(self.constant))
        return " + ".join(parts).replace("+ -", "- ")


def solve_affine(
    m: QMatrix,
    constant_rhs: Sequence[Scalar],
    parameter_rhs: Mapping[str, Sequence[Scalar]],
) -> tuple[AffineForm, ...]:
    """Solve m·x = constant_rhs + sum(parameter * parameter_rhs[parameter]) with the parameters kept symbolic."""
    names = sorted(parameter_rhs)
    grid, pivots = _reduce(m, [constant_rhs, *(parameter_rhs[name] for name in names)])
    n = m.col_count
    if len(pivots) != n:
        raise ValueError(f"system has rank {len(pivots)} < {n}: no unique solution")
    for i in range(n, len(grid)):
        if any(x != 0 for x in grid[i][n:]):
            raise ValueError(f"system is inconsistent at row {i}")
    solution: list[AffineForm] = []
    for i in range(n):
        row = grid[i]
        solution.append(AffineForm(row[n], tuple((name, row[n + 1 + j]) for j, name in enumerate(names))))
    return tuple(solution)
