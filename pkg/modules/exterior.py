# modules/exterior.py
"""
Exterior algebra over degree-1 generators with exact rational coefficients.

Monomials are IndexSets (strictly increasing tuples of generator indices);
a Form is a sparse map IndexSet -> Fraction with no zero entries. The
canonical basis order in every degree is lexicographic, and every operator
matrix in the engine is written in that order.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from modules.ratlin import Matrix
from utils import SymplHodgeError, format_fraction

IndexSet = Tuple[int, ...]


class ExteriorError(SymplHodgeError, ValueError):
    pass


class FormParseError(ExteriorError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def merge_sign(left: IndexSet, right: IndexSet) -> int:
    """Sign of the shuffle sorting left + right, or 0 if they share an index."""
    inversions = 0
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] == right[j]:
            return 0
        if left[i] < right[j]:
            i += 1
        else:
            inversions += len(left) - i
            j += 1
    return -1 if inversions % 2 else 1


def sort_sign(indices: Sequence[int]) -> Tuple[int, IndexSet]:
    """Sign of the permutation sorting indices, with the sorted IndexSet; sign 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a in range(len(indices)) for b in range(a + 1, len(indices))
                     if indices[a] > indices[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


def _term_key(item):
    return len(item[0]), item[0]


@dataclass(frozen=True)
class Form:
    ambient: int
    terms: Tuple[Tuple[IndexSet, Fraction], ...]

    # ---------------- CONSTRUCTORS ----------------
    @classmethod
    def from_terms(cls, ambient: int, terms: Union[Mapping[IndexSet, object], Iterable]) -> "Form":
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: Dict[IndexSet, Fraction] = {}
        for idx, coeff in items:
            idx = tuple(idx)
            if any(i < 0 or i >= ambient for i in idx):
                raise ExteriorError(f"Monomial {idx} outside {ambient} generators")
            sign, key = sort_sign(idx)
            if sign == 0:
                continue
            collected[key] = collected.get(key, Fraction(0)) + sign * Fraction(coeff)
        return cls(ambient, tuple(sorted(((k, v) for k, v in collected.items() if v != 0), key=_term_key)))

    @classmethod
    def zero(cls, ambient: int) -> "Form":
        return cls(ambient, ())

    @classmethod
    def one(cls, ambient: int) -> "Form":
        return cls(ambient, (((), Fraction(1)),))

    @classmethod
    def monomial(cls, ambient: int, indices: Sequence[int], coeff=1) -> "Form":
        return cls.from_terms(ambient, [(tuple(indices), coeff)])

    # ---------------- INSPECTION ----------------
    def as_dict(self) -> Dict[IndexSet, Fraction]:
        return dict(self.terms)

    def coefficient(self, indices: Sequence[int]) -> Fraction:
        sign, key = sort_sign(tuple(indices))
        if sign == 0:
            return Fraction(0)
        return sign * self.as_dict().get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> List[int]:
        return sorted({len(idx) for idx, _ in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous form; None for the zero form."""
        degrees = self.degrees
        if len(degrees) > 1:
            raise ExteriorError(f"Form is not homogeneous (degrees {degrees})")
        return degrees[0] if degrees else None

    def support(self) -> set:
        return {i for idx, _ in self.terms for i in idx}

    def homogeneous_part(self, k: int) -> "Form":
        return Form(self.ambient, tuple(t for t in self.terms if len(t[0]) == k))

    # ---------------- ARITHMETIC ----------------
    def _check(self, other: "Form"):
        if self.ambient != other.ambient:
            raise ExteriorError(f"Ambient mismatch: {self.ambient} vs {other.ambient} generators")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        return Form.from_terms(self.ambient, list(self.terms) + list(other.terms))

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, factor) -> "Form":
        factor = Fraction(factor)
        if factor == 0:
            return Form.zero(self.ambient)
        return Form(self.ambient, tuple((idx, c * factor) for idx, c in self.terms))

    def reindex(self, mapping: Mapping[int, int], ambient: int) -> "Form":
        """Move every generator i to mapping[i] inside a new ambient count."""
        return Form.from_terms(ambient, [(tuple(mapping[i] for i in idx), c) for idx, c in self.terms])


# ---------------- PRODUCTS ----------------
def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    terms = []
    for ia, ca in a.terms:
        for ib, cb in b.terms:
            sign = merge_sign(ia, ib)
            if sign:
                terms.append((tuple(sorted(ia + ib)), sign * ca * cb))
    return Form.from_terms(a.ambient, terms)


def wedge_all(forms: Sequence[Form], ambient: int) -> Form:
    result = Form.one(ambient)
    for f in forms:
        result = wedge(result, f)
    return result


def power(a: Form, r: int) -> Form:
    return wedge_all([a] * r, a.ambient)


def contract(i: int, a: Form) -> Form:
    """Interior product with the dual vector of generator i."""
    if i < 0 or i >= a.ambient:
        raise ExteriorError(f"Generator index {i} outside {a.ambient} generators")
    terms = []
    for idx, c in a.terms:
        if i in idx:
            p = idx.index(i)
            terms.append((idx[:p] + idx[p + 1:], -c if p % 2 else c))
    return Form.from_terms(a.ambient, terms)


# ---------------- BASES AND MATRICES ----------------
def basis_of_degree(k: int, ambient: int, support: Optional[Sequence[int]] = None) -> List[IndexSet]:
    """All degree-k monomials over support (default: every generator), lexicographic."""
    pool = sorted(range(ambient) if support is None else support)
    if k < 0 or k > len(pool):
        return []
    return list(combinations(pool, k))


def to_vector(form: Form, basis: Sequence[IndexSet]) -> Tuple[Fraction, ...]:
    position = {idx: n for n, idx in enumerate(basis)}
    vec = [Fraction(0)] * len(basis)
    for idx, c in form.terms:
        if idx not in position:
            raise ExteriorError(f"Monomial {idx} is not in the chosen basis")
        vec[position[idx]] = c
    return tuple(vec)


def from_vector(vector: Sequence, basis: Sequence[IndexSet], ambient: int) -> Form:
    return Form.from_terms(ambient, [(idx, c) for idx, c in zip(basis, vector) if c != 0])


def operator_matrix(f: Callable[[Form], Form], k: int, ambient: int,
                    source_support: Optional[Sequence[int]] = None,
                    target_support: Optional[Sequence[int]] = None,
                    target_degree: Optional[int] = None) -> Matrix:
    """
    Matrix of f from degree k to its target degree: columns follow the
    source basis and rows the target basis.
    """
    source = basis_of_degree(k, ambient, source_support)
    images = [f(Form.monomial(ambient, idx)) for idx in source]
    degrees = {d for img in images for d in img.degrees}
    if len(degrees) > 1:
        raise ExteriorError(f"Operator sends degree {k} to several degrees {sorted(degrees)}")
    if degrees:
        found = degrees.pop()
        if target_degree is not None and found != target_degree:
            raise ExteriorError(f"Operator lands in degree {found}, expected {target_degree}")
        target_degree = found
    elif target_degree is None:
        target_degree = k
    target = basis_of_degree(target_degree, ambient, target_support)
    return Matrix.from_columns([to_vector(img, target) for img in images], len(target))


# ---------------- TEXT FORMAT ----------------
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+^*]))")


class ExteriorAlgebra:
    """Named generators with the text grammar "3/2 e1^e3 + -1 e2^e4"."""

    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        if len(set(self.names)) != len(self.names):
            raise ExteriorError(f"Duplicate generator names in {self.names}")
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def ambient(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        if name not in self._index:
            raise ExteriorError(f"Unknown generator '{name}'")
        return self._index[name]

    def generator(self, name: str) -> Form:
        return Form.monomial(self.ambient, [self.index(name)])

    def monomial_name(self, idx: IndexSet) -> str:
        return "^".join(self.names[i] for i in idx) if idx else "1"

    def render(self, form: Form) -> str:
        if form.is_zero():
            return "0"
        parts = []
        for idx, c in form.terms:
            parts.append(format_fraction(c) if not idx else f"{format_fraction(c)} {self.monomial_name(idx)}")
        return " + ".join(parts)

    def _tokens(self, text: str):
        pos = 0
        tokens = []
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                stripped = len(text[pos:]) - len(text[pos:].lstrip())
                raise FormParseError(f"Unexpected character '{text[pos + stripped]}'", pos + stripped)
            kind = match.lastgroup
            start = match.start(kind)
            tokens.append((kind, match.group(kind), start))
            pos = match.end()
        return tokens

    def parse(self, text: str) -> Form:
        tokens = self._tokens(text)
        if not tokens:
            raise FormParseError("Empty form", 0)
        terms = []
        i = 0
        expect_term = True
        sign = 1
        while i < len(tokens):
            kind, value, pos = tokens[i]
            if kind == "op" and value in "+-":
                if value == "-":
                    sign = -sign
                expect_term = True
                i += 1
                continue
            if not expect_term:
                raise FormParseError(f"Expected '+' or '-' before '{value}'", pos)
            coeff = Fraction(1)
            if kind == "num":
                coeff = Fraction(value)
                i += 1
                if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                    i += 1
            indices: List[int] = []
            if i < len(tokens) and tokens[i][0] == "name":
                while True:
                    kind, value, pos = tokens[i]
                    if kind != "name":
                        raise FormParseError(f"Expected a generator name, got '{value}'", pos)
                    if value not in self._index:
                        raise FormParseError(f"Unknown generator '{value}'", pos)
                    indices.append(self._index[value])
                    i += 1
                    if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
                        i += 1
                        if i == len(tokens):
                            raise FormParseError("Dangling '^'", len(text))
                        continue
                    break
            elif kind != "num":
                raise FormParseError(f"Unexpected '{value}'", pos)
            s, key = sort_sign(indices)
            terms.append((key, sign * s * coeff))
            sign = 1
            expect_term = False
        if expect_term:
            raise FormParseError("Form ends with an operator", len(text))
        return Form.from_terms(self.ambient, terms)
