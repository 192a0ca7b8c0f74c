"""Frame algebras as JSON documents.

Indices are 1-based in the document. Coefficients are strings in the prefix
grammar of ``scalars``. Output is written with sorted keys so that an export
is byte-stable.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from pydantic import BaseModel, ValidationError

from .errors import HoloquotError, ParseError, StructuralError
from .frame_algebra import Form, FrameAlgebra, VectorField, sort_sign
from .scalars import parse_prefix, to_prefix

logger = logging.getLogger(__name__)

Coefficient = Union[int, str]
Term = Tuple[Coefficient, List[int]]


class GeneratorDocument(BaseModel):
    positive: bool = True
    d: List[Term] = []


class FormDocument(BaseModel):
    degree: int
    terms: List[Term] = []


class AlgebraDocument(BaseModel):
    dim: int
    coframe: List[str]
    structure: Dict[str, List[Term]] = {}
    generators: Dict[str, GeneratorDocument] = {}
    orientation: List[int]
    name: Optional[str] = None
    forms: Dict[str, FormDocument] = {}
    vectors: Dict[str, List[Coefficient]] = {}


@dataclass
class ImportedAlgebra:
    algebra: FrameAlgebra
    forms: Dict[str, Form] = field(default_factory=dict)
    vectors: Dict[str, VectorField] = field(default_factory=dict)


# ------------------------------------------------------------------ export


def _terms(form: Form) -> List[list]:
    return [[to_prefix(coeff), [i + 1 for i in index]] for index, coeff in form.items()]


def algebra_document(
    algebra: FrameAlgebra,
    forms: Optional[Dict[str, Form]] = None,
    vectors: Optional[Dict[str, VectorField]] = None,
) -> AlgebraDocument:
    structure = {
        label: _terms(algebra.structure(i)) for i, label in enumerate(algebra.labels) if not algebra.structure(i).is_zero()
    }
    generators = {
        g.name: GeneratorDocument(positive=g.positive, d=_terms(algebra.differential(g.symbol)))
        for g in algebra.generators
    }
    exported_forms = {}
    for name, form in (forms or {}).items():
        if not isinstance(form, Form) or form.algebra is not algebra:
            continue
        try:
            exported_forms[name] = FormDocument(degree=form.degree, terms=_terms(form))
        except StructuralError as exc:
            logger.warning("form %s not exported: %s", name, exc.message)
    exported_vectors = {}
    for name, vector in (vectors or {}).items():
        if vector.algebra is algebra:
            exported_vectors[name] = [to_prefix(c) for c in vector.components]
    return AlgebraDocument(
        dim=algebra.dim,
        coframe=list(algebra.labels),
        structure=structure,
        generators=generators,
        orientation=list(range(1, algebra.dim + 1)),
        name=algebra.name or None,
        forms=exported_forms,
        vectors=exported_vectors,
    )


def dumps(document: AlgebraDocument) -> str:
    payload = document.model_dump(exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export_algebra(algebra: FrameAlgebra, forms=None, vectors=None) -> str:
    return dumps(algebra_document(algebra, forms, vectors))


def write(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


# ------------------------------------------------------------------ import


def _locate(text: str, needle: str) -> Tuple[int, int]:
    """Line and column of the first occurrence of a JSON string literal, or (1, 1)."""
    position = text.find(json.dumps(needle, ensure_ascii=False))
    if position < 0:
        return 1, 1
    line = text.count("\n", 0, position) + 1
    column = position - (text.rfind("\n", 0, position) + 1) + 1
    return line, column


class _Reader:
    def __init__(self, text: str, document: AlgebraDocument):
        self.text = text
        self.document = document
        self.dim = document.dim
        self.symbols: Dict[str, sympy.Symbol] = {}
        self.position: List[int] = []

    def fail(self, message: str, needle: str) -> ParseError:
        line, column = _locate(self.text, needle)
        return ParseError(message, line, column)

    def coefficient(self, value: Coefficient) -> sympy.Expr:
        text = str(value)
        line, column = _locate(self.text, text) if isinstance(value, str) else (1, 1)
        try:
            expr = parse_prefix(text, line, dict(self.symbols))
        except ParseError as exc:
            raise ParseError(exc.message.rsplit(" (line", 1)[0], line, column + exc.column) from None
        unknown = {str(s) for s in expr.free_symbols} - set(self.symbols)
        if unknown:
            raise ParseError(f"unknown generator {sorted(unknown)[0]!r}", line, column)
        return expr

    def term_map(self, terms: Sequence[Term], degree: int, owner: str) -> Dict[Tuple[int, ...], sympy.Expr]:
        out: Dict[Tuple[int, ...], sympy.Expr] = {}
        for coeff, indices in terms:
            if len(indices) != degree:
                raise self.fail(f"{owner}: expected {degree} indices, got {indices}", owner)
            if any(not 1 <= i <= self.dim for i in indices):
                raise self.fail(f"{owner}: index out of range in {indices}", owner)
            sign, ordered = sort_sign([self.position[i - 1] for i in indices])
            if sign == 0:
                continue
            out[ordered] = out.get(ordered, 0) + sign * self.coefficient(coeff)
        return out

    def build(self) -> ImportedAlgebra:
        doc = self.document
        if len(doc.coframe) != doc.dim:
            raise self.fail(f"dim is {doc.dim} but the coframe lists {len(doc.coframe)} labels", "coframe")
        if sorted(doc.orientation) != list(range(1, doc.dim + 1)):
            raise self.fail("orientation must be a permutation of 1..dim", "orientation")
        # coframe is reordered so that the declared orientation is e¹∧…∧eⁿ
        labels = [doc.coframe[i - 1] for i in doc.orientation]
        self.position = [0] * doc.dim
        for new, old in enumerate(doc.orientation):
            self.position[old - 1] = new

        try:
            algebra = FrameAlgebra(labels, {n: g.positive for n, g in doc.generators.items()}, name=doc.name or "")
        except StructuralError as exc:
            raise self.fail(exc.message, "coframe") from None
        self.symbols = {g.name: g.symbol for g in algebra.generators}
        for label, terms in doc.structure.items():
            if label not in labels:
                raise self.fail(f"structure given for unknown label {label!r}", label)
            algebra.declare_structure(label, algebra.form(2, self.term_map(terms, 2, label)))
        for name, gen in doc.generators.items():
            algebra.declare_differential(name, algebra.form(1, self.term_map(gen.d, 1, name)))
        algebra.freeze()

        forms = {
            name: algebra.form(entry.degree, self.term_map(entry.terms, entry.degree, name))
            for name, entry in doc.forms.items()
        }
        vectors = {}
        for name, components in doc.vectors.items():
            if len(components) != doc.dim:
                raise self.fail(f"vector {name!r} needs {doc.dim} components", name)
            values = [self.coefficient(c) for c in components]
            vectors[name] = algebra.vector([values[old - 1] for old in doc.orientation])
        return ImportedAlgebra(algebra, forms, vectors)


def loads(text: str) -> ImportedAlgebra:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    try:
        document = AlgebraDocument.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        needle = next((str(p) for p in reversed(first["loc"]) if isinstance(p, str)), "")
        line, column = _locate(text, needle) if needle else (1, 1)
        raise ParseError(f"{location}: {first['msg']}", line, column) from None
    try:
        return _Reader(text, document).build()
    except ParseError:
        raise
    except HoloquotError as exc:
        raise ParseError(exc.message) from None


def read(path: Union[str, Path]) -> ImportedAlgebra:
    path = Path(path)
    logger.debug("reading frame algebra from %s", path)
    return loads(path.read_text(encoding="utf-8"))
