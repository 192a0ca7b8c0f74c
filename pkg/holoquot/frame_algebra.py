"""Exterior calculus over a declared orthonormal coframe.

A FrameAlgebra is an abstract chart: an ordered coframe e^0..e^{n-1}
(0-based internally, labelled for display), a structure 2-form for each
coframe element, and scalar generators with declared differentials. Forms
are sparse maps from increasing index tuples to normalized sympy scalars.
"""

import logging
import threading
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from types import MappingProxyType
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .errors import StructuralError
from .scalars import ZERO, as_expr, evaluate_many, generator_symbol, is_zero_exact, normalize

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]
Sampler = Callable[[np.random.Generator], Dict[str, float]]


def sort_sign(indices: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the permutation sorting ``indices``; 0 when an index repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    items = list(indices)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))


@dataclass(frozen=True)
class Generator:
    name: str
    symbol: sympy.Symbol
    positive: bool


class Point:
    """Numeric values for the generators of one algebra."""

    def __init__(self, values: Mapping[sympy.Symbol, float]):
        self.values = dict(values)

    def __getitem__(self, name: str) -> float:
        for sym, value in self.values.items():
            if str(sym) == name:
                return value
        raise KeyError(name)

    def as_dict(self) -> Dict[str, float]:
        return {str(k): float(v) for k, v in sorted(self.values.items(), key=lambda kv: str(kv[0]))}

    def __repr__(self) -> str:
        return f"Point({self.as_dict()})"


class FrameAlgebra:
    """Orthonormal coframe, structure equations and scalar generators.

    Declarations are accepted until ``freeze`` is called; afterwards the
    algebra is immutable and safe to share between threads.
    """

    def __init__(
        self,
        labels: Sequence[str],
        generators: Union[Mapping[str, bool], Sequence[str]] = (),
        name: str = "",
        sampler: Optional[Sampler] = None,
    ):
        if len(set(labels)) != len(labels) or not labels:
            raise StructuralError(f"coframe labels must be distinct and non-empty: {labels}")
        self.name = name
        self.labels: Tuple[str, ...] = tuple(labels)
        self.dim = len(self.labels)
        self.sampler = sampler
        self._generators: Dict[str, Generator] = {}
        self._structure: Dict[int, "Form"] = {}
        self._differentials: Dict[sympy.Symbol, "Form"] = {}
        self._d_cache: Dict[Index, "Form"] = {}
        self._d_lock = threading.Lock()
        self._frozen = False
        if isinstance(generators, Mapping):
            for gen_name, positive in generators.items():
                self.add_generator(gen_name, positive)
        else:
            for gen_name in generators:
                self.add_generator(gen_name)

    def __repr__(self) -> str:
        return f"FrameAlgebra({self.name or '?'}, dim={self.dim})"

    # ------------------------------------------------------------ declaring

    def _mutable(self):
        if self._frozen:
            raise StructuralError(f"algebra {self.name!r} is frozen")
        self._d_cache.clear()

    def add_generator(self, name: str, positive: bool = True) -> sympy.Symbol:
        self._mutable()
        if name in self._generators:
            raise StructuralError(f"generator {name!r} declared twice")
        symbol = generator_symbol(name, positive)
        self._generators[name] = Generator(name, symbol, positive)
        return symbol

    def declare_structure(self, label: Union[str, int], form: "Form") -> None:
        self._mutable()
        index = self.index_of(label)
        self._own(form, 2)
        self._structure[index] = form

    def declare_differential(self, name: str, form: "Form") -> None:
        self._mutable()
        self._own(form, 1)
        self._differentials[self.symbol(name)] = form

    def freeze(self) -> "FrameAlgebra":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _own(self, form: "Form", degree: int) -> None:
        if form.algebra is not self:
            raise StructuralError("form belongs to a different algebra")
        if form.degree != degree:
            raise StructuralError(f"expected a {degree}-form, got degree {form.degree}")

    # ------------------------------------------------------------ lookups

    def index_of(self, label: Union[str, int]) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.dim:
                raise StructuralError(f"coframe index {label} out of range for dim {self.dim}")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise StructuralError(f"unknown coframe label {label!r} in {self.name!r}") from None

    @property
    def generators(self) -> Tuple[Generator, ...]:
        return tuple(self._generators.values())

    def symbol(self, name: str) -> sympy.Symbol:
        try:
            return self._generators[name].symbol
        except KeyError:
            raise StructuralError(f"unknown generator {name!r} in {self.name!r}") from None

    def symbols(self, *names: str) -> Tuple[sympy.Symbol, ...]:
        return tuple(self.symbol(n) for n in names)

    def structure(self, label: Union[str, int]) -> "Form":
        return self._structure.get(self.index_of(label), self.zero(2))

    def differential(self, symbol: sympy.Symbol) -> "Form":
        if symbol in self._differentials:
            return self._differentials[symbol]
        if any(g.symbol == symbol for g in self._generators.values()):
            return self.zero(1)
        raise StructuralError(f"symbol {symbol} is not a generator of {self.name!r}")

    # ------------------------------------------------------------ forms

    def zero(self, degree: int) -> "Form":
        return Form(self, degree, {})

    def scalar(self, expr) -> "Form":
        return Form(self, 0, {(): expr})

    def e(self, *labels: Union[str, int]) -> "Form":
        """Basis form e^{i1}∧...∧e^{ik} (sign from reordering)."""
        indices = [self.index_of(label) for label in labels]
        sign, ordered = sort_sign(indices)
        if sign == 0:
            return self.zero(len(indices))
        return Form(self, len(indices), {ordered: sign})

    def form(self, degree: int, terms: Mapping[Index, object]) -> "Form":
        return Form(self, degree, terms)

    def one_form(self, coefficients: Sequence) -> "Form":
        if len(coefficients) != self.dim:
            raise StructuralError(f"need {self.dim} coefficients, got {len(coefficients)}")
        return Form(self, 1, {(i,): c for i, c in enumerate(coefficients)})

    def volume(self) -> "Form":
        return Form(self, self.dim, {tuple(range(self.dim)): 1})

    def vector(self, components: Sequence) -> "VectorField":
        return VectorField(self, components)

    def frame_vector(self, label: Union[str, int]) -> "VectorField":
        index = self.index_of(label)
        return VectorField(self, [1 if i == index else 0 for i in range(self.dim)])

    # ------------------------------------------------------------ d

    def d_scalar(self, expr) -> "Form":
        expr = as_expr(expr)
        acc: Dict[Index, list] = defaultdict(list)
        for sym in expr.free_symbols:
            differential = self.differential(sym)
            if differential.is_zero():
                continue
            partial = sympy.diff(expr, sym)
            for index, coeff in differential.items():
                acc[index].append(partial * coeff)
        return Form(self, 1, {k: sympy.Add(*v) for k, v in acc.items()})

    def d_basis(self, index: Index) -> "Form":
        with self._d_lock:
            cached = self._d_cache.get(index)
        if cached is not None:
            return cached
        result = self.zero(len(index) + 1)
        for j, i in enumerate(index):
            left = Form(self, j, {index[:j]: 1})
            right = Form(self, len(index) - j - 1, {index[j + 1:]: 1})
            term = left.wedge(self.structure(i)).wedge(right)
            result = result + (term if j % 2 == 0 else -term)
        with self._d_lock:
            return self._d_cache.setdefault(index, result)

    # ------------------------------------------------------------ sampling

    def default_sample(self, rng: np.random.Generator) -> Dict[str, float]:
        values = {}
        for gen in self.generators:
            values[gen.name] = rng.uniform(0.5, 2.0) if gen.positive else rng.uniform(-2.0, 2.0)
        return values

    def sample_points(self, count: int, seed: int = 0, sampler: Optional[Sampler] = None) -> List[Point]:
        rng = np.random.default_rng(seed)
        draw = sampler or self.sampler or self.default_sample
        points = []
        for _ in range(count):
            raw = draw(rng)
            points.append(Point({self.symbol(k): float(v) for k, v in raw.items()}))
        return points

    def point(self, **values: float) -> Point:
        return Point({self.symbol(k): float(v) for k, v in values.items()})

    # ------------------------------------------------------------ self-check

    def d_squared_residuals(self) -> Dict[str, "Form"]:
        """d(de^i) for every coframe element and d(dg) for every generator."""
        residuals = {}
        for i, label in enumerate(self.labels):
            residuals[f"d2 {label}"] = self.structure(i).d()
        for gen in self.generators:
            residuals[f"d2 {gen.name}"] = self.differential(gen.symbol).d()
        return residuals


class Form:
    """Graded sparse exterior form over a FrameAlgebra."""

    __slots__ = ("algebra", "degree", "_terms")

    def __init__(self, algebra: FrameAlgebra, degree: int, terms: Mapping[Index, object]):
        # degrees above dim are allowed and always empty
        if degree < 0:
            raise StructuralError(f"negative degree {degree}")
        cleaned = {}
        for index, coeff in terms.items():
            index = tuple(index)
            if len(index) != degree or any(b <= a for a, b in zip(index, index[1:])):
                raise StructuralError(f"index {index} is not an increasing {degree}-tuple")
            if index and not (0 <= index[0] and index[-1] < algebra.dim):
                raise StructuralError(f"index {index} out of range")
            value = normalize(coeff)
            if value != 0:
                cleaned[index] = value
        self.algebra = algebra
        self.degree = degree
        self._terms = MappingProxyType(dict(sorted(cleaned.items())))

    # ------------------------------------------------------------ basics

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> Mapping[Index, sympy.Expr]:
        return self._terms

    def coefficient(self, *labels) -> sympy.Expr:
        indices = [self.algebra.index_of(label) for label in labels]
        sign, ordered = sort_sign(indices)
        return sign * self._terms.get(ordered, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def scalar_value(self) -> sympy.Expr:
        if self.degree != 0:
            raise StructuralError("scalar_value needs a 0-form")
        return self._terms.get((), ZERO)

    def coefficients(self) -> List[sympy.Expr]:
        return list(self._terms.values())

    @property
    def free_symbols(self):
        return set().union(*(c.free_symbols for c in self._terms.values())) if self._terms else set()

    def _compatible(self, other: "Form", same_degree: bool = True) -> None:
        if not isinstance(other, Form):
            raise StructuralError(f"expected a Form, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise StructuralError(
                f"forms live on different algebras ({self.algebra.name!r} vs {other.algebra.name!r})"
            )
        if same_degree and other.degree != self.degree:
            raise StructuralError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __repr__(self) -> str:
        if not self._terms:
            return f"0[{self.degree}]"
        parts = []
        for index, coeff in self._terms.items():
            name = "^".join(self.algebra.labels[i] for i in index) or "1"
            parts.append(f"({coeff})*{name}")
        return " + ".join(parts)

    # ------------------------------------------------------------ linear

    def __add__(self, other: "Form") -> "Form":
        self._compatible(other)
        terms = dict(self._terms)
        for index, coeff in other.items():
            terms[index] = terms.get(index, ZERO) + coeff
        return Form(self.algebra, self.degree, terms)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.algebra, self.degree, {k: -v for k, v in self._terms.items()})

    def __mul__(self, scalar) -> "Form":
        if isinstance(scalar, (Form, VectorField)):
            return NotImplemented
        scalar = as_expr(scalar)
        return Form(self.algebra, self.degree, {k: scalar * v for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Form":
        return self * (1 / as_expr(scalar))

    def map(self, fn: Callable[[sympy.Expr], sympy.Expr]) -> "Form":
        return Form(self.algebra, self.degree, {k: fn(v) for k, v in self._terms.items()})

    def subs(self, mapping) -> "Form":
        return self.map(lambda c: c.subs(mapping))

    # ------------------------------------------------------------ algebra

    def wedge(self, other: "Form") -> "Form":
        self._compatible(other, same_degree=False)
        acc: Dict[Index, list] = defaultdict(list)
        for i_a, c_a in self._terms.items():
            for i_b, c_b in other._terms.items():
                sign, index = sort_sign(i_a + i_b)
                if sign:
                    acc[index].append(sign * c_a * c_b)
        return Form(self.algebra, self.degree + other.degree, {k: sympy.Add(*v) for k, v in acc.items()})

    def d(self) -> "Form":
        algebra = self.algebra
        acc: Dict[Index, list] = defaultdict(list)
        for index, coeff in self._terms.items():
            for (j,), c_j in algebra.d_scalar(coeff).items():
                sign, joined = sort_sign((j,) + index)
                if sign:
                    acc[joined].append(sign * c_j)
            if index:
                for joined, c_j in algebra.d_basis(index).items():
                    acc[joined].append(coeff * c_j)
        return Form(algebra, self.degree + 1, {k: sympy.Add(*v) for k, v in acc.items()})

    def hodge(self) -> "Form":
        n = self.algebra.dim
        terms = {}
        for index, coeff in self._terms.items():
            complement = tuple(i for i in range(n) if i not in index)
            sign, _ = sort_sign(index + complement)
            terms[complement] = sign * coeff
        return Form(self.algebra, n - self.degree, terms)

    def interior(self, vector: "VectorField") -> "Form":
        if vector.algebra is not self.algebra:
            raise StructuralError("vector field and form live on different algebras")
        if self.degree == 0:
            return Form(self.algebra, 0, {})
        acc: Dict[Index, list] = defaultdict(list)
        for index, coeff in self._terms.items():
            for position, i in enumerate(index):
                component = vector.components[i]
                if component == 0:
                    continue
                rest = index[:position] + index[position + 1:]
                sign = -1 if position % 2 else 1
                acc[rest].append(sign * component * coeff)
        return Form(self.algebra, self.degree - 1, {k: sympy.Add(*v) for k, v in acc.items()})

    def inner(self, other: "Form") -> sympy.Expr:
        self._compatible(other)
        return normalize(sympy.Add(*(c * other._terms[k] for k, c in self._terms.items() if k in other._terms)))

    def norm_sq(self) -> sympy.Expr:
        return normalize(sympy.Add(*(c * c for c in self._terms.values())))

    def codiff(self) -> "Form":
        """δ = (−1)^{n(k+1)+1} ∗d∗; −∗d∗ in dimension 8 and (−1)^k ∗d∗ in dimension 7."""
        if self.degree == 0:
            return Form(self.algebra, 0, {})
        n, k = self.algebra.dim, self.degree
        result = self.hodge().d().hodge()
        return result if (n * (k + 1) + 1) % 2 == 0 else -result

    def lie(self, vector: "VectorField") -> "Form":
        """Cartan formula d ι_X + ι_X d."""
        if self.degree == 0:
            return self.d().interior(vector)
        return self.interior(vector).d() + self.d().interior(vector)

    # ------------------------------------------------------------ numerics

    def evaluate(self, point: Point) -> Dict[Index, float]:
        keys = list(self._terms)
        values = evaluate_many([self._terms[k] for k in keys], point.values)
        return dict(zip(keys, values))

    def max_abs(self, point: Point) -> float:
        values = self.evaluate(point).values()
        return float(max((abs(v) for v in values), default=0.0))


class VectorField:
    """Components in the frame dual to the coframe."""

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: FrameAlgebra, components: Sequence):
        if len(components) != algebra.dim:
            raise StructuralError(f"vector field needs {algebra.dim} components, got {len(components)}")
        self.algebra = algebra
        self.components: Tuple[sympy.Expr, ...] = tuple(normalize(c) for c in components)

    def __repr__(self) -> str:
        return "VectorField(" + ", ".join(str(c) for c in self.components) + ")"

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.algebra, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.algebra, [a - b for a, b in zip(self.components, other.components)])

    def __mul__(self, scalar) -> "VectorField":
        scalar = as_expr(scalar)
        return VectorField(self.algebra, [scalar * c for c in self.components])

    __rmul__ = __mul__

    def flat(self) -> Form:
        return self.algebra.one_form(self.components)

    def norm_sq(self) -> sympy.Expr:
        return normalize(sympy.Add(*(c * c for c in self.components)))

    def apply(self, expr) -> sympy.Expr:
        """Directional derivative X(f) = ι_X df."""
        return self.algebra.d_scalar(expr).interior(self).scalar_value()

    def bracket(self, other: "VectorField") -> "VectorField":
        """θ^a([X,Y]) = X(Y^a) − Y(X^a) − dθ^a(X,Y)."""
        components = []
        for a in range(self.algebra.dim):
            structure = self.algebra.structure(a).interior(self).interior(other).scalar_value()
            components.append(
                self.apply(other.components[a]) - other.apply(self.components[a]) - structure
            )
        return VectorField(self.algebra, components)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)


class SymTensor:
    """Symmetric bilinear form in the orthonormal coframe."""

    def __init__(self, algebra: FrameAlgebra, matrix):
        matrix = sympy.ImmutableMatrix(matrix).applyfunc(normalize)
        if matrix.shape != (algebra.dim, algebra.dim):
            raise StructuralError(f"tensor shape {matrix.shape} does not match dim {algebra.dim}")
        self.algebra = algebra
        self.matrix = matrix

    @classmethod
    def identity(cls, algebra: FrameAlgebra) -> "SymTensor":
        return cls(algebra, sympy.eye(algebra.dim))

    @classmethod
    def zero(cls, algebra: FrameAlgebra) -> "SymTensor":
        return cls(algebra, sympy.zeros(algebra.dim, algebra.dim))

    def __getitem__(self, key) -> sympy.Expr:
        return self.matrix[key]

    def __add__(self, other: "SymTensor") -> "SymTensor":
        return SymTensor(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        return SymTensor(self.algebra, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "SymTensor":
        return SymTensor(self.algebra, self.matrix * as_expr(scalar))

    __rmul__ = __mul__

    def trace(self) -> sympy.Expr:
        return normalize(self.matrix.trace())

    def entries(self) -> List[sympy.Expr]:
        n = self.algebra.dim
        return [self.matrix[i, j] for i in range(n) for j in range(i, n)]

    def asymmetry(self) -> List[sympy.Expr]:
        n = self.algebra.dim
        return [normalize(self.matrix[i, j] - self.matrix[j, i]) for i in range(n) for j in range(i + 1, n)]

    def evaluate(self, point: Point) -> np.ndarray:
        n = self.algebra.dim
        flat = evaluate_many(list(self.matrix), point.values)
        return flat.reshape(n, n)


# ---------------------------------------------------------------- helpers


def wedge(*forms: Form) -> Form:
    if not forms:
        raise StructuralError("wedge needs at least one form")
    result = forms[0]
    for form in forms[1:]:
        result = result.wedge(form)
    return result


def basis_indices(dim: int, degree: int) -> List[Index]:
    return list(combinations(range(dim), degree))


def restrict_tangential(form: Form, normal: VectorField) -> Form:
    """Tangential part β − n♭∧ι_nβ along a unit normal."""
    return form - normal.flat().wedge(form.interior(normal))


@dataclass
class Reframing:
    """New coframe F = Mθ on the same generators, with the transfer of forms."""

    source: FrameAlgebra
    target: FrameAlgebra
    matrix: sympy.ImmutableMatrix
    inverse: sympy.ImmutableMatrix

    def _diagonal(self) -> bool:
        return self.matrix.is_diagonal()

    def push(self, form: Form) -> Form:
        """Rewrite a form given in θ in terms of the new coframe F (θ = M⁻¹F)."""
        if form.algebra is not self.source:
            raise StructuralError("form does not belong to the source algebra")
        target = self.target
        if self._diagonal():
            terms = {}
            for index, coeff in form.items():
                factor = sympy.Mul(*(self.inverse[i, i] for i in index))
                terms[index] = coeff * factor
            return Form(target, form.degree, terms)
        images = [
            target.one_form([self.inverse[i, j] for j in range(target.dim)]) for i in range(target.dim)
        ]
        result = target.zero(form.degree)
        for index, coeff in form.items():
            product = target.scalar(coeff)
            for i in index:
                product = product.wedge(images[i])
            result = result + product
        return result

    def push_vector(self, vector: VectorField) -> VectorField:
        components = [
            sympy.Add(*(self.matrix[i, j] * vector.components[j] for j in range(self.source.dim)))
            for i in range(self.source.dim)
        ]
        return VectorField(self.target, components)


def reframe(
    algebra: FrameAlgebra,
    matrix,
    labels: Optional[Sequence[str]] = None,
    name: Optional[str] = None,
    sampler: Optional[Sampler] = None,
) -> Reframing:
    """Algebra whose coframe is F = Mθ, with dF = dM∧θ + M dθ rewritten in F."""
    matrix = sympy.ImmutableMatrix(matrix)
    if matrix.shape != (algebra.dim, algebra.dim):
        raise StructuralError(f"reframing matrix must be {algebra.dim}x{algebra.dim}")
    inverse = sympy.ImmutableMatrix(matrix.inv()).applyfunc(normalize)
    target = FrameAlgebra(
        labels or algebra.labels,
        {g.name: g.positive for g in algebra.generators},
        name=name or f"{algebra.name}'",
        sampler=sampler or algebra.sampler,
    )
    reframing = Reframing(algebra, target, matrix, inverse)
    for gen in algebra.generators:
        target.declare_differential(gen.name, reframing.push(algebra.differential(gen.symbol)))
    for i in range(algebra.dim):
        d_row = algebra.zero(2)
        for j in range(algebra.dim):
            entry = matrix[i, j]
            if entry == 0:
                continue
            theta_j = algebra.e(j)
            d_row = d_row + algebra.d_scalar(entry).wedge(theta_j) + entry * algebra.structure(j)
        target.declare_structure(i, reframing.push(d_row))
    target.freeze()
    logger.debug("reframed %s into %s", algebra.name, target.name)
    return reframing


def eval_at(form: Form, point: Point) -> Dict[Index, float]:
    return form.evaluate(point)


def equals_exact(a: Form, b: Form) -> bool:
    """Equality through the normal form of every coefficient of a − b."""
    return all(is_zero_exact(c) for c in (a - b).coefficients())


def equals_numeric(a: Form, b: Form, points: Sequence[Point], tol: float = 1e-9) -> bool:
    difference = a - b
    return all(difference.max_abs(p) <= tol for p in points)
