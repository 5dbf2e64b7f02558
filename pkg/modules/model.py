# modules/model.py
"""
Foliated cochain models.

A model is a finite presentation of the invariant forms of a foliated
manifold: degree-1 generators, d on each generator (extended as a graded
derivation), a subset of generators spanning the foliation directions, the
transverse symplectic form omega and optionally a contact generator eta.
Once the invariance rule holds, basic forms are exactly the forms supported
on transverse generators.
"""
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from modules.exterior import (ExteriorAlgebra, ExteriorError, Form, FormParseError, IndexSet,
                              basis_of_degree, contract, operator_matrix, power, wedge)
from modules.ratlin import Matrix
from modules.reports import CheckReport
from utils import SymplHodgeError, get_logger

logger = get_logger(__name__)


class ModelError(SymplHodgeError):
    pass


class ModelParseError(ModelError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


class ModelValidationError(ModelError):
    def __init__(self, rule: str, message: str = ""):
        super().__init__(f"{rule}: {message}" if message else rule)
        self.rule = rule


class UnknownModelError(ModelError):
    pass


# ---------------- COCHAIN MODEL ----------------
@dataclass(frozen=True)
class CochainModel:
    generators: Tuple[str, ...]
    diff_rules: Tuple[Tuple[int, Form], ...] = ()

    @cached_property
    def algebra(self) -> ExteriorAlgebra:
        return ExteriorAlgebra(self.generators)

    @property
    def ambient(self) -> int:
        return len(self.generators)

    @cached_property
    def _rules(self) -> Dict[int, Form]:
        return dict(self.diff_rules)

    def d_generator(self, i: int) -> Form:
        return self._rules.get(i, Form.zero(self.ambient))

    def d(self, form: Form) -> Form:
        """Leibniz extension: d(e_I) = sum_p (-1)^p e_{I<p} ^ d(e_{i_p}) ^ e_{I>p}."""
        n = self.ambient
        result = Form.zero(n)
        for idx, c in form.terms:
            for p, i in enumerate(idx):
                di = self._rules.get(i)
                if di is None:
                    continue
                piece = wedge(wedge(Form.monomial(n, idx[:p]), di), Form.monomial(n, idx[p + 1:]))
                result = result + piece.scale(-c if p % 2 else c)
        return result


# ---------------- GRADED COMPLEX ----------------
@dataclass(frozen=True)
class GradedComplex:
    ambient: int
    bases: Tuple[Tuple[IndexSet, ...], ...]
    differentials: Tuple[Matrix, ...]

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def dim(self, k: int) -> int:
        if k < 0 or k > self.top:
            return 0
        return len(self.bases[k])

    def dims(self) -> List[int]:
        return [self.dim(k) for k in range(self.top + 1)]

    def basis(self, k: int) -> Tuple[IndexSet, ...]:
        if k < 0 or k > self.top:
            return ()
        return self.bases[k]

    def basis_forms(self, k: int) -> List[Form]:
        return [Form.monomial(self.ambient, idx) for idx in self.basis(k)]

    def differential(self, k: int) -> Matrix:
        """Matrix of d from degree k to degree k + 1 (empty shapes outside the range)."""
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Matrix.zeros(self.dim(k + 1), self.dim(k))


def build_complex(model: CochainModel, support: Optional[Sequence[int]] = None) -> GradedComplex:
    n = model.ambient
    size = n if support is None else len(support)
    bases = tuple(tuple(basis_of_degree(k, n, support)) for k in range(size + 1))
    diffs = tuple(operator_matrix(model.d, k, n, support, support, target_degree=k + 1)
                  for k in range(size + 1))
    return GradedComplex(n, bases, diffs)


# ---------------- FOLIATED MODEL ----------------
@dataclass(frozen=True)
class FoliatedModel:
    name: str
    base: CochainModel
    foliation_dirs: Tuple[int, ...] = ()
    omega: Form = field(default=None)
    eta: Optional[int] = None

    @property
    def algebra(self) -> ExteriorAlgebra:
        return self.base.algebra

    @property
    def ambient(self) -> int:
        return self.base.ambient

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.base.generators

    @cached_property
    def transverse(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.ambient) if i not in self.foliation_dirs)

    @property
    def n(self) -> int:
        return len(self.transverse) // 2

    @property
    def is_contact(self) -> bool:
        return self.eta is not None

    def d(self, form: Form) -> Form:
        return self.base.d(form)

    def render(self, form: Form) -> str:
        return self.algebra.render(form)

    def parse(self, text: str) -> Form:
        return self.algebra.parse(text)

    def is_basic(self, form: Form) -> bool:
        return form.support() <= set(self.transverse)

    @cached_property
    def full_complex(self) -> GradedComplex:
        return build_complex(self.base)

    @cached_property
    def basic_complex(self) -> GradedComplex:
        return build_complex(self.base, self.transverse)

    @cached_property
    def volume(self) -> Form:
        return power(self.omega, self.n).scale(Fraction(1, factorial(self.n)))

    def inclusion_matrix(self, k: int) -> Matrix:
        """Basic degree-k forms into all degree-k forms, as a 0/1 matrix."""
        full = {idx: r for r, idx in enumerate(self.full_complex.basis(k))}
        cols = []
        for idx in self.basic_complex.basis(k):
            col = [0] * self.full_complex.dim(k)
            col[full[idx]] = 1
            cols.append(col)
        return Matrix.from_columns(cols, self.full_complex.dim(k))


def full_complex(m: FoliatedModel) -> GradedComplex:
    return m.full_complex


def basic_complex(m: FoliatedModel) -> GradedComplex:
    return m.basic_complex


# ---------------- VALIDATION ----------------
def validate_model(m: FoliatedModel) -> FoliatedModel:
    """Check every model rule in order; raise ModelValidationError on the first violation."""
    names = m.generators
    if not names:
        raise ModelValidationError("generators", "at least one generator is required")
    for i, di in m.base.diff_rules:
        if not di.is_zero() and di.degrees != [2]:
            raise ModelValidationError("d degree", f"d({names[i]}) must be a 2-form")
    for i in range(m.ambient):
        dd = m.d(m.base.d_generator(i))
        if not dd.is_zero():
            raise ModelValidationError(f"d²({names[i]}) ≠ 0", f"d(d {names[i]}) = {m.render(dd)}")

    if any(i < 0 or i >= m.ambient for i in m.foliation_dirs):
        raise ModelValidationError("foliation", "unknown foliation direction")
    if len(m.transverse) == 0 or len(m.transverse) % 2:
        raise ModelValidationError("transverse dimension",
                                   f"{len(m.transverse)} transverse generators, need a positive even count")

    omega = m.omega
    if omega is None or omega.is_zero() or omega.degrees != [2]:
        raise ModelValidationError("ω degree", "ω must be a nonzero 2-form")
    if not m.is_basic(omega):
        raise ModelValidationError("ω not transverse", "ω involves a foliation direction")
    for i in m.foliation_dirs:
        if not contract(i, omega).is_zero():
            raise ModelValidationError("ω not transverse", f"ι_{names[i]} ω ≠ 0")
    d_omega = m.d(omega)
    if not d_omega.is_zero():
        raise ModelValidationError("dω ≠ 0", f"dω = {m.render(d_omega)}")
    if power(omega, m.n).is_zero():
        raise ModelValidationError("ω^n = 0", f"ω is degenerate on the {2 * m.n} transverse generators")

    for i in m.foliation_dirs:
        for g in m.transverse:
            if not contract(i, m.base.d_generator(g)).is_zero():
                raise ModelValidationError("invariance", f"ι_{names[i]} d({names[g]}) ≠ 0")

    if m.eta is not None:
        if m.eta not in m.foliation_dirs:
            raise ModelValidationError("η in foliation", f"{names[m.eta]} is not a foliation direction")
        if len(m.foliation_dirs) != 1:
            raise ModelValidationError("η in foliation", "a contact model needs exactly one foliation direction")
        if m.base.d_generator(m.eta) != omega:
            raise ModelValidationError("dη ≠ ω", f"d{names[m.eta]} = {m.render(m.base.d_generator(m.eta))}")
    logger.debug("Model %s validated: %d generators, 2n = %d", m.name, m.ambient, 2 * m.n)
    return m


def validation_report(m: FoliatedModel) -> CheckReport:
    """Per-degree d² = 0 on both complexes and d commuting with the basic inclusion."""
    report = CheckReport(m.name, "validation")
    full, basic = m.full_complex, m.basic_complex
    for k in range(m.ambient + 1):
        d2_full = (full.differential(k + 1) @ full.differential(k)).is_zero()
        d2_basic = (basic.differential(k + 1) @ basic.differential(k)).is_zero()
        commutes = (m.inclusion_matrix(k + 1) @ basic.differential(k)) == (full.differential(k) @ m.inclusion_matrix(k))
        report.per_degree.append({"degree": k, "dim_forms": full.dim(k), "dim_basic": basic.dim(k),
                                  "d2_zero": d2_full, "basic_d2_zero": d2_basic, "inclusion_commutes": commutes})
        if not (d2_full and d2_basic and commutes):
            report.fail(f"degree {k}: d² = 0 {d2_full}, basic d² = 0 {d2_basic}, inclusion commutes {commutes}")
    report.details = dict(report.details, generators=list(m.generators),
                          foliation=[m.generators[i] for i in m.foliation_dirs],
                          transverse_dim=2 * m.n, contact=m.is_contact, omega=m.render(m.omega))
    return report


# ---------------- LOADING ----------------
_LINE = re.compile(r"^\s*(?P<key>[A-Za-z_]+)\s*:\s*(?P<value>.*?)\s*$")


def _parse_form(algebra: ExteriorAlgebra, text: str, line: int, column: int) -> Form:
    try:
        return algebra.parse(text)
    except FormParseError as e:
        raise ModelParseError(str(e), line, column + e.position) from e
    except ExteriorError as e:
        raise ModelParseError(str(e), line, column) from e


def _assemble(name: str, generators: Sequence[str], rules: Sequence[Tuple[str, str, int, int]],
              foliation: Sequence[str], eta: Optional[str], omega: Optional[Tuple[str, int, int]],
              foliation_pos=(0, 0), eta_pos=(0, 0)) -> FoliatedModel:
    try:
        algebra = ExteriorAlgebra(generators)
    except ExteriorError as e:
        raise ModelParseError(str(e), 1, 1) from e
    if not generators:
        raise ModelValidationError("generators", "at least one generator is required")
    diff: Dict[int, Form] = {}
    for gen, text, line, column in rules:
        if gen not in generators:
            raise ModelParseError(f"d rule for unknown generator '{gen}'", line, column)
        form = _parse_form(algebra, text, line, column)
        i = algebra.index(gen)
        diff[i] = diff[i] + form if i in diff else form
    for f in foliation:
        if f not in generators:
            raise ModelParseError(f"Unknown foliation direction '{f}'", *foliation_pos)
    if eta is not None and eta not in generators:
        raise ModelParseError(f"Unknown contact generator '{eta}'", *eta_pos)
    if omega is None:
        raise ModelParseError("Missing 'omega'")
    omega_form = _parse_form(algebra, *omega)
    base = CochainModel(tuple(generators), tuple(sorted((i, f) for i, f in diff.items() if not f.is_zero())))
    model = FoliatedModel(name, base, tuple(sorted(algebra.index(f) for f in set(foliation))),
                          omega_form, None if eta is None else algebra.index(eta))
    return validate_model(model)


def load_model(text: str, name: str = "model") -> FoliatedModel:
    """Parse the text (or JSON) model format and validate it."""
    if text.lstrip().startswith("{"):
        return load_model_json(text, name)
    generators: List[str] = []
    rules = []
    foliation: List[str] = []
    foliation_pos = (0, 0)
    eta = None
    eta_pos = (0, 0)
    omega = None
    seen_generators = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        match = _LINE.match(line)
        if not match:
            raise ModelParseError("Expected 'key: value'", lineno, len(line) - len(line.lstrip()) + 1)
        key = match.group("key").lower()
        value = match.group("value")
        column = match.start("value") + 1
        if key == "generators":
            if seen_generators:
                raise ModelParseError("Repeated 'generators' line", lineno, 1)
            generators = value.split()
            seen_generators = True
        elif key == "d":
            if "=" not in value:
                raise ModelParseError("Expected 'd: <generator> = <form>'", lineno, column)
            gen, rhs = value.split("=", 1)
            offset = column + len(gen) + 1 + (len(rhs) - len(rhs.lstrip()))
            rules.append((gen.strip(), rhs.strip(), lineno, offset))
        elif key == "foliation":
            foliation = value.split()
            foliation_pos = (lineno, column)
        elif key == "eta":
            eta = value.strip() or None
            eta_pos = (lineno, column)
        elif key == "omega":
            omega = (value, lineno, column)
        elif key == "name":
            name = value.strip() or name
        else:
            raise ModelParseError(f"Unknown key '{key}'", lineno, 1)
    if not seen_generators:
        raise ModelParseError("Missing 'generators'")
    return _assemble(name, generators, rules, foliation, eta, omega, foliation_pos, eta_pos)


def load_model_json(text: str, name: str = "model") -> FoliatedModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelParseError(e.msg, e.lineno, e.colno) from e
    if not isinstance(data, dict):
        raise ModelParseError("Model JSON must be an object")
    return model_from_dict(data, name)


def model_from_dict(data: Dict[str, Any], name: str = "model") -> FoliatedModel:
    generators = data.get("generators")
    if not isinstance(generators, list):
        raise ModelParseError("'generators' must be a list of names")
    rules = [(gen, str(rhs), 0, 0) for gen, rhs in (data.get("d") or {}).items()]
    omega = data.get("omega")
    return _assemble(data.get("name", name), [str(g) for g in generators], rules,
                     [str(f) for f in data.get("foliation") or []], data.get("eta"),
                     None if omega is None else (str(omega), 0, 0))


def model_to_dict(m: FoliatedModel) -> Dict[str, Any]:
    names = m.generators
    data: Dict[str, Any] = {
        "name": m.name,
        "generators": list(names),
        "d": {names[i]: m.render(f) for i, f in m.base.diff_rules},
        "foliation": [names[i] for i in m.foliation_dirs],
        "omega": m.render(m.omega),
    }
    if m.eta is not None:
        data["eta"] = names[m.eta]
    return data


def model_to_text(m: FoliatedModel) -> str:
    names = m.generators
    lines = [f"name: {m.name}", "generators: " + " ".join(names)]
    lines += [f"d: {names[i]} = {m.render(f)}" for i, f in m.base.diff_rules]
    if m.foliation_dirs:
        lines.append("foliation: " + " ".join(names[i] for i in m.foliation_dirs))
    if m.eta is not None:
        lines.append(f"eta: {names[m.eta]}")
    lines.append(f"omega: {m.render(m.omega)}")
    return "\n".join(lines) + "\n"


# ---------------- BOOTHBY-WANG ----------------
def boothby_wang_extend(base: FoliatedModel, name: Optional[str] = None, eta_name: str = "e0") -> FoliatedModel:
    """Adjoin eta in front of the base generators with d(eta) = omega and foliation {eta}."""
    if base.foliation_dirs:
        raise ModelError(f"Model '{base.name}' is already foliated; Boothby-Wang needs a symplectic base")
    if eta_name in base.generators:
        raise ModelError(f"Generator name '{eta_name}' is already used by '{base.name}'")
    ambient = base.ambient + 1
    shift = {i: i + 1 for i in range(base.ambient)}
    omega = base.omega.reindex(shift, ambient)
    rules = [(0, omega)] + [(i + 1, f.reindex(shift, ambient)) for i, f in base.base.diff_rules]
    cochain = CochainModel((eta_name,) + tuple(base.generators), tuple(rules))
    model = FoliatedModel(name or f"bw_{base.name}", cochain, (0,), omega, 0)
    return validate_model(model)


# ---------------- ZOO ----------------
ZOO_DEFAULTS = [
    ("heisenberg3", "generators: e1 e2 e3\nd: e3 = e1^e2\nfoliation: e3\neta: e3\nomega: e1^e2\n"),
    ("kodaira_thurston", "generators: e1 e2 e3 e4\nd: e4 = e1^e2\nomega: e1^e3 + e2^e4\n"),
    ("cosymplectic_t5", "generators: e1 e2 e3 e4 e5\nfoliation: e5\nomega: e1^e2 + e3^e4\n"),
]


def _torus_text(n: int) -> str:
    names = [f"e{i}" for i in range(1, 2 * n + 1)]
    omega = " + ".join(f"{names[2 * i]}^{names[2 * i + 1]}" for i in range(n))
    return f"generators: {' '.join(names)}\nomega: {omega}\n"


def _torus_contact_text(n: int) -> str:
    # every generator closed, so d(eta) = 0 can never equal omega
    names = [f"e{i}" for i in range(0, 2 * n + 1)]
    omega = " + ".join(f"{names[2 * i + 1]}^{names[2 * i + 2]}" for i in range(n))
    return f"generators: {' '.join(names)}\nfoliation: e0\neta: e0\nomega: {omega}\n"


_PARAM = re.compile(r"^(?P<family>torus|torus_contact)(?:(?P<dim>\d+)|\((?P<pdim>\d+)\)|2n\((?P<arg>\d+)\))$")


def zoo_names() -> List[str]:
    return ["torus2", "torus4", "torus6", "heisenberg3", "kodaira_thurston", "kt_contact5",
            "cosymplectic_t5", "bw_torus4"]


def zoo(name: str) -> FoliatedModel:
    """Builtin models; torus<2n> / torus2n(n) and torus_contact<2n+1> are parametric."""
    defaults = dict(ZOO_DEFAULTS)
    if name in defaults:
        return load_model(defaults[name], name)
    if name == "kt_contact5":
        return boothby_wang_extend(zoo("kodaira_thurston"), "kt_contact5")
    if name.startswith("bw_"):
        return boothby_wang_extend(zoo(name[3:]), name)
    match = _PARAM.match(name)
    if match:
        family = match.group("family")
        if match.group("arg") is not None:
            dim = 2 * int(match.group("arg")) + (1 if family == "torus_contact" else 0)
        else:
            dim = int(match.group("dim") or match.group("pdim"))
        if family == "torus" and dim >= 2 and dim % 2 == 0:
            return load_model(_torus_text(dim // 2), f"torus{dim}")
        if family == "torus_contact" and dim >= 3 and dim % 2 == 1:
            return load_model(_torus_contact_text(dim // 2), f"torus_contact{dim}")
    raise UnknownModelError(f"Unknown zoo model '{name}'")
