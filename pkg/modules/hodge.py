# modules/hodge.py
"""
Symplectic Hodge operators on the basic complex of a foliated model.

Sign conventions
----------------
Omega[a][b] is the coefficient of e_a ^ e_b in omega (transverse positions).
The flat map sends a vector X to sigma(., X), whose matrix is Omega, and the
sharp map is its inverse S = Omega^-1, so flat(sharp(alpha)) = alpha. The
pairing of 1-forms is B(e_a, e_b) = S[b][a]; for omega = x^y this gives
B(x, y) = 1. On k-forms B is the determinant of the k x k minor, and star is
the solution of beta ^ *alpha = B(beta, alpha) omega^n/n!.

With these choices *^2 = id, the Weil identity holds with the sign
(-1)^(k(k-1)/2), and *x = x on a Darboux plane. The codifferential is
delta = (-1)^k * d * on degree k, which makes [d, Lambda] = delta exact; the
opposite prefactor is available as delta(a, printed_sign=True).
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from modules.exterior import Form, IndexSet, contract, from_vector, operator_matrix, to_vector, wedge
from modules.model import FoliatedModel
from modules.ratlin import Matrix, SingularMatrixError, Subspace, determinant, inverse, kernel, solve
from modules.reports import CheckReport
from utils import SymplHodgeError, get_logger, make_rng, random_vector, resolve_seed

logger = get_logger(__name__)


class HodgeError(SymplHodgeError, ValueError):
    """Bad input to a Hodge operator (degree out of range, non-basic or non-primitive form)."""


class HodgeInconsistency(SymplHodgeError):
    """An identity that must hold on every model failed."""


# ---------------- FRAME ----------------
@dataclass(frozen=True)
class SymplecticFrame:
    transverse: Tuple[int, ...]
    omega: Form
    omega_matrix: Matrix
    sharp_matrix: Matrix
    volume: Form

    @classmethod
    def from_model(cls, m: FoliatedModel) -> "SymplecticFrame":
        t = m.transverse
        omega_matrix = Matrix.build([[m.omega.coefficient((a, b)) for b in t] for a in t], len(t))
        try:
            sharp = inverse(omega_matrix)
        except SingularMatrixError as e:
            raise HodgeError(f"ω is degenerate on the transverse generators of '{m.name}'") from e
        if omega_matrix @ sharp != Matrix.identity(len(t)):
            raise HodgeInconsistency("flat after sharp is not the identity")
        return cls(t, m.omega, omega_matrix, sharp, m.volume)

    @property
    def n(self) -> int:
        return len(self.transverse) // 2

    @cached_property
    def pairing_matrix(self) -> Matrix:
        """B on transverse 1-forms: P[a][b] = B(e_a, e_b) = S[b][a]."""
        return self.sharp_matrix.transpose()

    @property
    def top(self) -> IndexSet:
        return tuple(sorted(self.transverse))


# ---------------- OPERATORS ----------------
@dataclass(frozen=True)
class LinearOperator:
    """
    Degree-wise matrices on the basic bases. matrices[k] maps degree k to
    degree sign * k + shift: sign is 1 for L, Lambda, H, d, delta and -1 for star.
    """
    name: str
    shift: int
    matrices: Tuple[Matrix, ...]
    dims: Tuple[int, ...]
    sign: int = 1

    def target(self, k: int) -> int:
        return self.sign * k + self.shift

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def matrix(self, k: int) -> Matrix:
        if 0 <= k < len(self.matrices):
            return self.matrices[k]
        return Matrix.zeros(self.dim(self.target(k)), self.dim(k))

    def compose(self, other: "LinearOperator", name: Optional[str] = None) -> "LinearOperator":
        """self after other."""
        mats = tuple(self.matrix(other.target(k)) @ other.matrix(k) for k in range(len(self.dims)))
        return LinearOperator(name or f"{self.name}{other.name}", self.sign * other.shift + self.shift,
                              mats, self.dims, self.sign * other.sign)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        if (self.sign, self.shift) != (other.sign, other.shift):
            raise HodgeError(f"Cannot add {self.name} and {other.name}: different degree maps")
        mats = tuple(self.matrix(k) + other.matrix(k) for k in range(len(self.dims)))
        return LinearOperator(f"{self.name}+{other.name}", self.shift, mats, self.dims, self.sign)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return self + other.scale(-1)

    def scale(self, factor) -> "LinearOperator":
        return LinearOperator(self.name, self.shift, tuple(m.scale(factor) for m in self.matrices),
                              self.dims, self.sign)

    def commutator(self, other: "LinearOperator") -> "LinearOperator":
        result = self.compose(other) - other.compose(self)
        return LinearOperator(f"[{self.name},{other.name}]", result.shift, result.matrices, self.dims, result.sign)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.matrices)

    def failing_degrees(self, other: Optional["LinearOperator"] = None) -> List[int]:
        """Degrees where self differs from other (or from zero)."""
        if other is None:
            return [k for k in range(len(self.dims)) if not self.matrix(k).is_zero()]
        if (self.sign, self.shift) != (other.sign, other.shift):
            return list(range(len(self.dims)))
        return [k for k in range(len(self.dims)) if self.matrix(k) != other.matrix(k)]


class HodgeModule:
    """
    Hodge toolkit on the basic complex of a validated model:
    pairing B, star, delta, L / Lambda / H, primitivity, Lefschetz
    decomposition and the Weil identity.
    """

    delta_formula_sign = "(-1)^k"

    def __init__(self, model: FoliatedModel):
        self.model = model
        self.ambient = model.ambient
        self.frame = SymplecticFrame.from_model(model)
        self.n = self.frame.n
        self.size = 2 * self.n
        self.complex = model.basic_complex
        self._pairings: Dict[int, Matrix] = {}
        self._powers: Dict[int, LinearOperator] = {}
        self._primitives: Dict[int, Subspace] = {}

    # ---------------- BASES ----------------
    def basis(self, k: int) -> List[IndexSet]:
        return list(self.complex.basis(k))

    def dim(self, k: int) -> int:
        return comb(self.size, k) if 0 <= k <= self.size else 0

    @cached_property
    def dims(self) -> Tuple[int, ...]:
        return tuple(self.dim(k) for k in range(self.size + 1))

    def vector(self, form: Form, k: int) -> Tuple[Fraction, ...]:
        if not self.model.is_basic(form):
            raise HodgeError(f"{self.model.render(form)} is not a basic form")
        return to_vector(form.homogeneous_part(k), self.basis(k))

    def form(self, vector: Sequence, k: int) -> Form:
        return from_vector(vector, self.basis(k), self.ambient)

    def _operator(self, name: str, shift: int, build: Callable[[int], Matrix], sign: int = 1) -> LinearOperator:
        return LinearOperator(name, shift, tuple(build(k) for k in range(self.size + 1)), self.dims, sign)

    def identity(self) -> LinearOperator:
        return self._operator("1", 0, lambda k: Matrix.identity(self.dim(k)))

    def apply(self, op: LinearOperator, form: Form) -> Form:
        result = Form.zero(self.ambient)
        for k in form.degrees:
            vec = op.matrix(k).apply(self.vector(form, k))
            result = result + self.form(vec, op.target(k))
        return result

    # ---------------- PAIRING AND STAR ----------------
    def _positions(self, idx: IndexSet) -> List[int]:
        pos = {g: a for a, g in enumerate(self.frame.transverse)}
        return [pos[g] for g in idx]

    def pairing_matrix(self, k: int) -> Matrix:
        """Gram matrix G[I][J] = B(e_I, e_J), the determinant of the minor of the 1-form pairing."""
        if k not in self._pairings:
            p = self.frame.pairing_matrix
            basis = [self._positions(idx) for idx in self.basis(k)]
            rows = [[determinant(Matrix.build([[p.rows[a][b] for b in pj] for a in pi], len(pj)))
                     for pj in basis] for pi in basis]
            self._pairings[k] = Matrix.build(rows, len(basis))
        return self._pairings[k]

    def pairing_B(self, a: Form, b: Form) -> Fraction:
        if a.is_zero() or b.is_zero():
            return Fraction(0)
        if not (a.is_homogeneous() and b.is_homogeneous()) or a.degree != b.degree:
            raise HodgeError(f"B pairs forms of equal degree, got degrees {a.degrees} and {b.degrees}")
        k = a.degree
        va, vb = self.vector(a, k), self.vector(b, k)
        return sum((x * y for x, y in zip(va, self.pairing_matrix(k).apply(vb))), Fraction(0))

    def top_coefficient(self, form: Form) -> Fraction:
        return form.coefficient(self.frame.top)

    def wedge_pairing(self, k: int) -> Matrix:
        """W[I][J] = top coefficient of e_I ^ e_J, degree k against degree 2n - k."""
        left = self.complex.basis_forms(k)
        right = self.complex.basis_forms(self.size - k)
        return Matrix.build([[self.top_coefficient(wedge(x, y)) for y in right] for x in left], len(right))

    def _star_matrix(self, k: int) -> Matrix:
        # W X = v G, so X = v W^-1 G
        v = self.top_coefficient(self.frame.volume)
        return (inverse(self.wedge_pairing(k)) @ self.pairing_matrix(k)).scale(v)

    @cached_property
    def op_star(self) -> LinearOperator:
        return self._operator("*", self.size, self._star_matrix, sign=-1)

    def star(self, a: Form) -> Form:
        return self.apply(self.op_star, a)

    # ---------------- L, LAMBDA, H, d, delta ----------------
    @cached_property
    def op_L(self) -> LinearOperator:
        t = self.frame.transverse
        omega = self.frame.omega
        return self._operator("L", 2, lambda k: operator_matrix(
            lambda f: wedge(omega, f), k, self.ambient, t, t, target_degree=k + 2))

    def L_power(self, r: int) -> LinearOperator:
        if r < 0:
            raise HodgeError(f"Negative Lefschetz power {r}")
        if r not in self._powers:
            self._powers[r] = self.identity() if r == 0 else self.op_L.compose(self.L_power(r - 1), f"L^{r}")
        return self._powers[r]

    @cached_property
    def op_Lambda(self) -> LinearOperator:
        s = self.op_star
        result = s.compose(self.op_L).compose(s)
        return LinearOperator("Λ", result.shift, result.matrices, self.dims, result.sign)

    @cached_property
    def op_H(self) -> LinearOperator:
        return self._operator("H", 0, lambda k: Matrix.identity(self.dim(k)).scale(self.n - k))

    @cached_property
    def op_d(self) -> LinearOperator:
        return self._operator("d", 1, self.complex.differential)

    @cached_property
    def op_delta(self) -> LinearOperator:
        s = self.op_star
        sds = s.compose(self.op_d).compose(s)
        return LinearOperator("δ", sds.shift, tuple(m.scale(-1 if k % 2 else 1)
                                                    for k, m in enumerate(sds.matrices)), self.dims)

    def delta(self, a: Form, printed_sign: bool = False) -> Form:
        """Pointwise (-1)^k * d * a, with d taken from the model rules rather than the complex."""
        result = Form.zero(self.ambient)
        for k in a.degrees:
            part = self.star(self.model.d(self.star(a.homogeneous_part(k))))
            sign = -1 if k % 2 else 1
            result = result + part.scale(-sign if printed_sign else sign)
        return result

    def Lambda(self, a: Form) -> Form:
        return self.apply(self.op_Lambda, a)

    def op_Lambda_contractions(self) -> LinearOperator:
        """Lambda as the bivector contraction sum_{a<b} B(e_a, e_b) i_b i_a."""
        t = self.frame.transverse
        p = self.frame.pairing_matrix

        def contraction(f: Form) -> Form:
            out = Form.zero(self.ambient)
            for a in range(len(t)):
                for b in range(a + 1, len(t)):
                    if p.rows[a][b]:
                        out = out + contract(t[b], contract(t[a], f)).scale(p.rows[a][b])
            return out

        return self._operator("Λc", -2, lambda k: operator_matrix(
            contraction, k, self.ambient, t, t, target_degree=k - 2))

    # ---------------- PRIMITIVITY ----------------
    def primitive_subspace(self, k: int) -> Subspace:
        """Primitive basic k-forms: the kernel of Lambda, in basic-basis coordinates."""
        if k not in self._primitives:
            self._primitives[k] = kernel(self.op_Lambda.matrix(k))
        return self._primitives[k]

    def is_primitive(self, a: Form) -> bool:
        if a.is_zero():
            return True
        if not a.is_homogeneous():
            raise HodgeError("Primitivity needs a homogeneous form")
        k = a.degree
        if k > self.n:
            raise HodgeError(f"Primitivity is defined up to degree n = {self.n}, got degree {k}")
        by_lambda = self.Lambda(a).is_zero()
        by_power = self.apply(self.L_power(self.n - k + 1), a).is_zero()
        if by_lambda != by_power:
            raise HodgeInconsistency(f"Λ and L^{self.n - k + 1} disagree on {self.model.render(a)}")
        return by_lambda

    # ---------------- LEFSCHETZ DECOMPOSITION ----------------
    def _decomposition_system(self, k: int, reverse: bool):
        labels = []
        columns = []
        # L^r kills P^(k-2r) once r > n - (k-2r), so r runs from max(0, k-n)
        rs = [r for r in range(max(0, k - self.n), k // 2 + 1) if k - 2 * r <= self.n]
        for r in (reversed(rs) if reverse else rs):
            lr = self.L_power(r).matrix(k - 2 * r).scale(Fraction(1, factorial(r)))
            for v in self.primitive_subspace(k - 2 * r).rows:
                labels.append((r, v))
                columns.append(lr.apply(v))
        return labels, Matrix.from_columns(columns, self.dim(k))

    def lefschetz_decompose(self, a: Form, reverse: bool = False) -> List[Tuple[int, Form]]:
        """[(r, beta)] with beta primitive of degree k - 2r and a = sum L^r/r! beta; zero parts omitted."""
        if a.is_zero():
            return []
        if not a.is_homogeneous():
            raise HodgeError("Lefschetz decomposition needs a homogeneous form")
        k = a.degree
        labels, system = self._decomposition_system(k, reverse)
        if system.ncols != system.nrows or system.rank() != system.nrows:
            raise HodgeInconsistency(f"Lefschetz decomposition system in degree {k} is singular")
        coeffs = solve(system, self.vector(a, k))
        if coeffs is None:
            raise HodgeInconsistency(f"No Lefschetz decomposition for {self.model.render(a)}")
        parts: Dict[int, Form] = {}
        for (r, v), c in zip(labels, coeffs):
            if c:
                piece = self.form([c * x for x in v], k - 2 * r)
                parts[r] = parts[r] + piece if r in parts else piece
        return sorted(((r, f) for r, f in parts.items() if not f.is_zero()), key=lambda item: item[0])

    def recompose(self, parts: Sequence[Tuple[int, Form]]) -> Form:
        total = Form.zero(self.ambient)
        for r, beta in parts:
            total = total + self.apply(self.L_power(r), beta).scale(Fraction(1, factorial(r)))
        return total

    # ---------------- WEIL IDENTITY ----------------
    def weil_star(self, a: Form, r: int) -> Form:
        """*L^r a = (-1)^(k(k-1)/2) r!/(n-k-r)! L^(n-k-r) a for primitive a of degree k."""
        if not a.is_zero() and not self.is_primitive(a):
            raise HodgeError(f"{self.model.render(a)} is not primitive")
        k = a.degree or 0
        if r < 0 or r > self.n - k:
            raise HodgeError(f"r = {r} outside 0..{self.n - k}")
        sign = -1 if (k * (k - 1) // 2) % 2 else 1
        factor = Fraction(sign * factorial(r), factorial(self.n - k - r))
        return self.apply(self.L_power(self.n - k - r), a).scale(factor)

    # ---------------- RANDOM FORMS ----------------
    def random_form(self, rng, k: int, coefficient_range=(-3, 3)) -> Form:
        return self.form(random_vector(rng, self.dim(k), coefficient_range), k)

    def random_primitive(self, rng, k: int, coefficient_range=(-3, 3)) -> Form:
        prim = self.primitive_subspace(k)
        if prim.is_zero():
            return Form.zero(self.ambient)
        return self.form(prim.basis.apply(random_vector(rng, prim.dim, coefficient_range)), k)

    # ---------------- IDENTITY SUITE ----------------
    def identity_report(self, seed: Optional[int] = None, samples: int = 30,
                        coefficient_range=(-3, 3)) -> CheckReport:
        """Operator identities as exact matrix equalities, plus seeded random-form checks."""
        seed = resolve_seed(seed)
        rng = make_rng(seed)
        report = CheckReport(self.model.name, "hodge_identities", seed=seed)
        d, delta, L, Lam, H, star = (self.op_d, self.op_delta, self.op_L, self.op_Lambda,
                                     self.op_H, self.op_star)
        d_delta = d.compose(delta)
        checks = [
            ("**=1", star.compose(star), self.identity()),
            ("[Λ,L]=H", Lam.commutator(L), H),
            ("[H,Λ]=2Λ", H.commutator(Lam), Lam.scale(2)),
            ("[H,L]=-2L", H.commutator(L), L.scale(-2)),
            ("[d,Λ]=δ", d.commutator(Lam), delta),
            ("[δ,L]=d", delta.commutator(L), d),
            ("[dδ,L]=0", d_delta.commutator(L), None),
            ("[dδ,Λ]=0", d_delta.commutator(Lam), None),
            ("δδ=0", delta.compose(delta), None),
            ("dδ=-δd", d_delta, delta.compose(d).scale(-1)),
            ("Λ=Σι", self.op_Lambda_contractions(), Lam),
        ]
        rows = {k: {"degree": k} for k in range(self.size + 1)}
        for label, lhs, rhs in checks:
            bad = lhs.failing_degrees(rhs)
            for k in rows:
                rows[k][label] = k not in bad
            if bad:
                report.fail(f"{label} fails in degrees {bad}")
        for k in range(self.n + 1):
            lk = self.L_power(self.n - k).matrix(k)
            ok = lk.nrows == lk.ncols and lk.rank() == lk.nrows
            rows[k]["L^(n-k) iso"] = ok
            if not ok:
                report.fail(f"L^{self.n - k} is not invertible on basic {k}-forms")

        weil_bad = decomposition_bad = delta_bad = 0
        for _ in range(samples):
            for k in range(self.n + 1):
                a = self.random_primitive(rng, k, coefficient_range)
                for r in range(self.n - k + 1):
                    if self.weil_star(a, r) != self.star(self.apply(self.L_power(r), a)):
                        weil_bad += 1
                        report.witnesses.append(f"weil r={r}: {self.model.render(a)}")
            for k in range(self.size + 1):
                a = self.random_form(rng, k, coefficient_range)
                first = self.lefschetz_decompose(a)
                if self.recompose(first) != a or first != self.lefschetz_decompose(a, reverse=True):
                    decomposition_bad += 1
                    report.witnesses.append(f"decomposition: {self.model.render(a)}")
                if self.apply(delta, a) != self.delta(a):
                    delta_bad += 1
                    report.witnesses.append(f"δ paths: {self.model.render(a)}")
        report.details.update({
            "random_samples": samples,
            "weil_mismatches": weil_bad,
            "decomposition_mismatches": decomposition_bad,
            "delta_path_mismatches": delta_bad,
            "delta_sign": self.delta_formula_sign,
        })
        for label, count in (("Weil identity", weil_bad), ("Lefschetz decomposition", decomposition_bad),
                             ("δ evaluation paths", delta_bad)):
            if count:
                report.fail(f"{label}: {count} mismatches")
        report.per_degree = [rows[k] for k in sorted(rows)]
        logger.info("Hodge identities on %s: %s", self.model.name, report.status)
        return report
