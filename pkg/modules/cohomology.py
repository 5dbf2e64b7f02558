# modules/cohomology.py
"""
Cohomology of the basic and full complexes and the checkers built on them:
transverse s-Lefschetz, the symplectic dδ-lemma and the cross-checks tying
Lefschetz, harmonic and dδ conditions together.

Classes are handled in coordinates: each CohomologySpace picks representatives
from its cocycle basis and reads any cocycle off through the quotient map by
its coboundaries.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from modules.exterior import Form, IndexSet, from_vector, to_vector, wedge
from modules.hodge import HodgeModule
from modules.model import FoliatedModel, GradedComplex
from modules.ratlin import (Matrix, Subspace, contains, equal, image, intersect, kernel, quotient_coordinates,
                            solve, subspace_sum)
from modules.reports import CheckReport, PASS, SKIPPED
from utils import SymplHodgeError, get_logger, make_rng, random_vector, resolve_seed

logger = get_logger(__name__)

BASIC = "basic"
DERHAM = "derham"
DELTA = "delta"


class CohomologyError(SymplHodgeError, ValueError):
    """A form that is not a cocycle, or classes from different spaces."""


# ---------------- SPACES AND CLASSES ----------------
@dataclass(frozen=True)
class CohomologySpace:
    model: str
    kind: str
    degree: int
    ambient: int
    basis: Tuple[IndexSet, ...]
    cocycles: Subspace
    coboundaries: Subspace
    representatives: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def build(cls, model: str, kind: str, degree: int, ambient: int, basis: Sequence[IndexSet],
              cocycles: Subspace, coboundaries: Subspace) -> "CohomologySpace":
        if not contains(cocycles, coboundaries):
            raise CohomologyError(f"{kind} coboundaries are not cocycles in degree {degree}")
        q = quotient_coordinates(coboundaries)
        chosen: List[Tuple[Fraction, ...]] = []
        images: List[Tuple[Fraction, ...]] = []
        for row in cocycles.rows:
            img = q.apply(row)
            if not Subspace.span(images, q.nrows).contains_vector(img):
                chosen.append(row)
                images.append(img)
        return cls(model, kind, degree, ambient, tuple(basis), cocycles, coboundaries, tuple(chosen))

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @cached_property
    def _quotient(self) -> Matrix:
        return quotient_coordinates(self.coboundaries)

    @cached_property
    def _rep_images(self) -> Matrix:
        return Matrix.from_columns([self._quotient.apply(r) for r in self.representatives], self._quotient.nrows)

    def vector(self, form: Form) -> Tuple[Fraction, ...]:
        try:
            return to_vector(form.homogeneous_part(self.degree), self.basis)
        except ValueError as e:
            raise CohomologyError(str(e)) from e

    def form(self, vector: Sequence) -> Form:
        return from_vector(vector, self.basis, self.ambient)

    def representative_forms(self) -> List[Form]:
        return [self.form(r) for r in self.representatives]

    def is_cocycle(self, vector: Sequence) -> bool:
        return self.cocycles.contains_vector(vector)

    def is_exact(self, vector: Sequence) -> bool:
        return self.coboundaries.contains_vector(vector)

    def coordinates(self, vector: Sequence) -> Tuple[Fraction, ...]:
        """Class coordinates of a cocycle in the representative basis."""
        if not self.is_cocycle(vector):
            raise CohomologyError(f"Vector is not a {self.kind} cocycle in degree {self.degree}")
        coords = solve(self._rep_images, self._quotient.apply(vector))
        if coords is None:
            raise CohomologyError(f"Representatives of {self.kind} degree {self.degree} do not span")
        return coords

    def class_of(self, form: Form) -> "CohomologyClass":
        return CohomologyClass(self, self.coordinates(self.vector(form)))

    def basis_classes(self) -> List["CohomologyClass"]:
        return [CohomologyClass(self, tuple(Fraction(int(i == j)) for j in range(self.dim)))
                for i in range(self.dim)]

    def combine(self, coordinates: Sequence) -> Tuple[Fraction, ...]:
        """Representative vector of the class with the given coordinates."""
        total = [Fraction(0)] * len(self.basis)
        for c, rep in zip(coordinates, self.representatives):
            if c:
                total = [t + c * x for t, x in zip(total, rep)]
        return tuple(total)


@dataclass(frozen=True)
class CohomologyClass:
    space: CohomologySpace
    coordinates: Tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return self.space.degree

    @property
    def vector(self) -> Tuple[Fraction, ...]:
        return self.space.combine(self.coordinates)

    @property
    def form(self) -> Form:
        return self.space.form(self.vector)

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def _check(self, other: "CohomologyClass"):
        s, o = self.space, other.space
        if (s.model, s.kind, s.degree) != (o.model, o.kind, o.degree):
            raise CohomologyError("Classes live in different cohomology spaces")

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._check(other)
        return CohomologyClass(self.space, tuple(a + b for a, b in zip(self.coordinates, other.coordinates)))

    def scale(self, factor) -> "CohomologyClass":
        factor = Fraction(factor)
        return CohomologyClass(self.space, tuple(factor * c for c in self.coordinates))


@dataclass(frozen=True)
class PrimitiveCohomology:
    space: CohomologySpace
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def classes(self) -> List[CohomologyClass]:
        return [CohomologyClass(self.space, row) for row in self.subspace.rows]


@dataclass(frozen=True)
class HarmonicCohomology:
    space: CohomologySpace
    harmonic_forms: Subspace
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def is_full(self) -> bool:
        return self.subspace.dim == self.space.dim


# ---------------- REPORTS ----------------
@dataclass
class LefschetzReport:
    model: str
    n: int
    per_degree: List[Dict[str, Any]] = field(default_factory=list)
    max_s: int = -1
    max_s_surjective: int = -1
    witnesses: List[str] = field(default_factory=list)

    @property
    def hard_lefschetz(self) -> bool:
        return all(row["iso"] for row in self.per_degree)

    def to_check_report(self) -> CheckReport:
        report = CheckReport(self.model, "transverse_lefschetz", PASS, list(self.per_degree), self.max_s,
                             list(self.witnesses))
        report.details = {"max_s_surjective": self.max_s_surjective, "hard_lefschetz": self.hard_lefschetz}
        return report


@dataclass
class DdLemmaReport:
    model: str
    n: int
    per_degree: List[Dict[str, Any]] = field(default_factory=list)
    max_s: int = -1
    mirror_max_s: int = -1
    witnesses: List[str] = field(default_factory=list)

    def to_check_report(self) -> CheckReport:
        report = CheckReport(self.model, "dd_lemma", PASS, list(self.per_degree), self.max_s, list(self.witnesses))
        report.details = {"mirror_max_s": self.mirror_max_s}
        return report


def _max_s(ok_upto: Sequence[bool], n: int) -> int:
    """Largest s in 0..n-1 with ok_upto[s], or -1; the conditions are monotone in s."""
    best = -1
    for s in range(n):
        if ok_upto[s]:
            best = s
    return best


class CohomologyModule:
    def __init__(self, model: FoliatedModel):
        self.model = model
        self.n = model.n
        self.size = 2 * model.n
        self._spaces: Dict[Tuple[str, int], CohomologySpace] = {}
        self._lefschetz: Optional[LefschetzReport] = None
        self._dd: Optional[DdLemmaReport] = None

    @cached_property
    def hodge(self) -> HodgeModule:
        return HodgeModule(self.model)

    def render(self, form: Form) -> str:
        return self.model.render(form)

    def render_class(self, cls: CohomologyClass) -> str:
        return f"[{self.render(cls.form)}]"

    # ---------------- SPACES ----------------
    def _complex_space(self, kind: str, k: int, cx: GradedComplex) -> CohomologySpace:
        key = (kind, k)
        if key not in self._spaces:
            cocycles = kernel(cx.differential(k))
            coboundaries = image(cx.differential(k - 1))
            self._spaces[key] = CohomologySpace.build(self.model.name, kind, k, self.model.ambient,
                                                      cx.basis(k), cocycles, coboundaries)
        return self._spaces[key]

    def basic_cohomology(self, k: int) -> CohomologySpace:
        return self._complex_space(BASIC, k, self.model.basic_complex)

    def de_rham_cohomology(self, k: int) -> CohomologySpace:
        return self._complex_space(DERHAM, k, self.model.full_complex)

    def delta_homology(self, k: int) -> CohomologySpace:
        key = (DELTA, k)
        if key not in self._spaces:
            delta = self.hodge.op_delta
            cycles = kernel(delta.matrix(k))
            boundaries = image(delta.matrix(k + 1))
            self._spaces[key] = CohomologySpace.build(self.model.name, DELTA, k, self.model.ambient,
                                                      self.model.basic_complex.basis(k), cycles, boundaries)
        return self._spaces[key]

    def space(self, kind: str, k: int) -> CohomologySpace:
        return {BASIC: self.basic_cohomology, DERHAM: self.de_rham_cohomology,
                DELTA: self.delta_homology}[kind](k)

    def betti(self, kind: str = DERHAM) -> List[int]:
        top = self.model.ambient if kind == DERHAM else self.size
        return [self.space(kind, k).dim for k in range(top + 1)]

    def betti_report(self, kinds: Sequence[str] = (BASIC, DERHAM, DELTA)) -> CheckReport:
        report = CheckReport(self.model.name, "betti")
        top = self.model.ambient
        for k in range(top + 1):
            row: Dict[str, Any] = {"degree": k}
            for kind in kinds:
                if kind == DERHAM or k <= self.size:
                    row[kind] = self.space(kind, k).dim
            report.per_degree.append(row)
        return report

    # ---------------- INDUCED MAPS ----------------
    def induced_map(self, matrix: Matrix, source: CohomologySpace, target: CohomologySpace) -> Matrix:
        """Matrix of the map on classes induced by a cocycle-preserving form-level matrix."""
        columns = [target.coordinates(matrix.apply(rep)) for rep in source.representatives]
        return Matrix.from_columns(columns, target.dim)

    def lefschetz_map(self, k: int, power: int) -> Matrix:
        """[L^power]: H_B^k -> H_B^(k + 2 power)."""
        return self.induced_map(self.hodge.L_power(power).matrix(k), self.basic_cohomology(k),
                                self.basic_cohomology(k + 2 * power))

    def primitive_cohomology(self, r: int) -> PrimitiveCohomology:
        """PH_B^r = ker(L^(n-r+1) on H_B^r)."""
        if r < 0 or r > self.n:
            raise CohomologyError(f"Primitive cohomology is defined for 0 <= r <= n = {self.n}, got {r}")
        return PrimitiveCohomology(self.basic_cohomology(r), kernel(self.lefschetz_map(r, self.n - r + 1)))

    def harmonic_subspace(self, k: int) -> Subspace:
        """ker d ∩ ker δ on basic k-forms."""
        return intersect(kernel(self.hodge.op_d.matrix(k)), kernel(self.hodge.op_delta.matrix(k)))

    def harmonic_cohomology(self, k: int) -> HarmonicCohomology:
        space = self.basic_cohomology(k)
        forms = self.harmonic_subspace(k)
        return HarmonicCohomology(space, forms, Subspace.span([space.coordinates(v) for v in forms.rows], space.dim))

    def closed_primitive_forms(self, k: int) -> Subspace:
        return intersect(kernel(self.hodge.op_d.matrix(k)), self.hodge.primitive_subspace(k))

    # ---------------- TRANSVERSE LEFSCHETZ ----------------
    def transverse_lefschetz(self) -> LefschetzReport:
        if self._lefschetz is not None:
            return self._lefschetz
        report = LefschetzReport(self.model.name, self.n)
        iso_flags, surj_flags = [], []
        for k in range(self.n + 1):
            src, tgt = self.basic_cohomology(k), self.basic_cohomology(self.size - k)
            m = self.lefschetz_map(k, self.n - k)
            rank = m.rank()
            injective, surjective = rank == src.dim, rank == tgt.dim
            report.per_degree.append({"degree": k, "dim_source": src.dim, "dim_target": tgt.dim, "rank": rank,
                                      "injective": injective, "surjective": surjective,
                                      "iso": injective and surjective})
            if not injective:
                kv = kernel(m).rows[0]
                report.witnesses.append(f"k={k} kernel: {self.render_class(CohomologyClass(src, kv))}")
            if not surjective:
                im = image(m)
                for c in tgt.basis_classes():
                    if not im.contains_vector(c.coordinates):
                        report.witnesses.append(f"k={k} cokernel: {self.render_class(c)}")
                        break
            iso_flags.append(injective and surjective)
            surj_flags.append(surjective)
        report.max_s = _max_s([all(iso_flags[:s + 1]) for s in range(self.n)], self.n)
        report.max_s_surjective = _max_s([all(surj_flags[:s + 1]) for s in range(self.n)], self.n)
        logger.info("Transverse Lefschetz on %s: max_s = %d", self.model.name, report.max_s)
        self._lefschetz = report
        return report

    # ---------------- dδ-LEMMA ----------------
    def dd_subspaces(self, k: int) -> Tuple[Subspace, Subspace, Subspace]:
        """(Im d ∩ ker δ, Im dδ, Im δ ∩ ker d) on basic k-forms."""
        d, delta = self.hodge.op_d, self.hodge.op_delta
        a = intersect(image(d.matrix(k - 1)), kernel(delta.matrix(k)))
        b = image(d.matrix(k - 1) @ delta.matrix(k))
        c = intersect(image(delta.matrix(k + 1)), kernel(d.matrix(k)))
        return a, b, c

    def dd_lemma(self) -> DdLemmaReport:
        if self._dd is not None:
            return self._dd
        report = DdLemmaReport(self.model.name, self.n)
        eq_ab, eq_bc = {}, {}
        for k in range(self.size + 1):
            a, b, c = self.dd_subspaces(k)
            eq_ab[k], eq_bc[k] = equal(a, b), equal(b, c)
            report.per_degree.append({"degree": k, "dim_im_d_ker_delta": a.dim, "dim_im_d_delta": b.dim,
                                      "dim_im_delta_ker_d": c.dim, "first_equal": eq_ab[k],
                                      "second_equal": eq_bc[k]})
            if not eq_ab[k]:
                extra = next(v for v in a.rows if not b.contains_vector(v))
                report.witnesses.append(f"k={k} Im d ∩ ker δ ∌ Im dδ: {self.render(self.hodge.form(extra, k))}")
            if not eq_bc[k]:
                extra = next((v for v in c.rows if not b.contains_vector(v)), None)
                if extra is not None:
                    report.witnesses.append(f"k={k} Im δ ∩ ker d ≠ Im dδ: {self.render(self.hodge.form(extra, k))}")

        def holds(s: int) -> bool:
            return all(eq_ab[k] and eq_bc[k] for k in range(s + 1)) and eq_ab[s + 1]

        def mirror(s: int) -> bool:
            top = self.size
            return (all(eq_ab[k] and eq_bc[k] for k in range(top - s, top + 1))
                    and eq_bc[top - s - 1])

        report.max_s = _max_s([holds(s) for s in range(self.n)], self.n)
        report.mirror_max_s = _max_s([mirror(s) for s in range(self.n)], self.n)
        logger.info("dδ-lemma on %s: max_s = %d, mirror = %d", self.model.name, report.max_s, report.mirror_max_s)
        self._dd = report
        return report

    # ---------------- CROSS-CHECKS ----------------
    def harmonic_flatness_check(self) -> CheckReport:
        """Surjectivity of L^(n-k) for k <= s against the two harmonic-flatness statements, for every s."""
        report = CheckReport(self.model.name, "lefschetz_harmonic_flatness")
        lef = self.transverse_lefschetz()
        flat = {k: self.harmonic_cohomology(k).is_full for k in range(self.size + 1)}
        surj = {row["degree"]: row["surjective"] for row in lef.per_degree}
        iso = {row["degree"]: row["iso"] for row in lef.per_degree}
        for s in range(self.n):
            a = all(surj[k] for k in range(s + 1))
            b = (all(flat[k] for k in range(min(s + 2, self.size) + 1))
                 and all(flat[self.size - k] for k in range(s + 1)))
            c = all(flat[self.size - k] for k in range(s + 1))
            iso_s = all(iso[k] for k in range(s + 1))
            report.per_degree.append({"degree": s, "surjective": a, "statement_1": b, "statement_2": c,
                                      "iso": iso_s})
            if not (a == b == c):
                report.fail(f"s={s}: surjective={a}, statement 1={b}, statement 2={c}")
            if a != iso_s:
                report.details.setdefault("notes", []).append(
                    f"s={s}: surjective and isomorphism verdicts differ")
        report.max_s = lef.max_s_surjective
        return report

    def _decomposition_degrees(self, s: int) -> List[int]:
        return sorted(set(range(0, min(s + 2, self.size) + 1)) | set(range(max(self.size - s, 0), self.size + 1)))

    def primitive_decomposition_check(self, s: Optional[int] = None) -> CheckReport:
        """H_B^i = ⊕_r L^r PH_B^(i-2r) for i <= s+2 and i >= 2n-s, under transverse s-Lefschetz."""
        lef = self.transverse_lefschetz()
        s = lef.max_s if s is None else s
        report = CheckReport(self.model.name, "primitive_decomposition", max_s=s)
        if s < 0 or s > lef.max_s:
            report.status = SKIPPED
            report.details["reason"] = f"transverse {s}-Lefschetz does not hold (verified max_s = {lef.max_s})"
            logger.warning("Primitive decomposition check skipped on %s: %s", self.model.name,
                           report.details["reason"])
            return report
        for i in self._decomposition_degrees(s):
            target = self.basic_cohomology(i)
            pieces = []
            for r in range(i // 2 + 1):
                j = i - 2 * r
                if j > self.n:
                    continue
                ph = self.primitive_cohomology(j)
                lr = self.lefschetz_map(j, r)
                pieces.append((r, Subspace.span([lr.apply(v) for v in ph.subspace.rows], target.dim)))
            total = Subspace.zero(target.dim)
            for _, p in pieces:
                total = subspace_sum(total, p)
            dims = [p.dim for _, p in pieces]
            direct = sum(dims) == total.dim
            exhaustive = total.dim == target.dim
            report.per_degree.append({"degree": i, "dim_H": target.dim, "piece_dims": dims,
                                      "direct": direct, "exhaustive": exhaustive})
            if not (direct and exhaustive):
                report.fail(f"degree {i}: pieces {dims} against dim H = {target.dim}")
        return report

    def lefschetz_dd_equivalence_check(self) -> CheckReport:
        """Max-s from Lefschetz, the dδ-lemma and its high-degree mirror must coincide."""
        lef = self.transverse_lefschetz()
        dd = self.dd_lemma()
        report = CheckReport(self.model.name, "lefschetz_dd_equivalence", max_s=lef.max_s,
                             witnesses=lef.witnesses + dd.witnesses)
        report.details = {"lefschetz_max_s": lef.max_s, "dd_lemma_max_s": dd.max_s,
                          "mirror_max_s": dd.mirror_max_s}
        if not (lef.max_s == dd.max_s == dd.mirror_max_s):
            report.fail(f"max_s disagree: Lefschetz {lef.max_s}, dδ {dd.max_s}, mirror {dd.mirror_max_s}")
        return report

    def delta_homology_duality_check(self) -> CheckReport:
        """δ-homology in degree k is carried by star onto H_B^(2n-k)."""
        report = CheckReport(self.model.name, "delta_homology_duality")
        for k in range(self.size + 1):
            hd, hb = self.delta_homology(k), self.basic_cohomology(self.size - k)
            images = [hb.coordinates(self.hodge.op_star.matrix(k).apply(rep)) for rep in hd.representatives]
            carried = Subspace.span(images, hb.dim).dim == hd.dim == hb.dim
            report.per_degree.append({"degree": k, "dim_delta_homology": hd.dim,
                                      "dim_basic_dual": hb.dim, "star_bijective": carried})
            if not carried:
                report.fail(f"degree {k}: dims {hd.dim} vs {hb.dim}, star does not carry a basis to a basis")
        return report

    def harmonic_lefschetz_check(self) -> CheckReport:
        """L^k maps harmonic (n-k)-forms isomorphically onto harmonic (n+k)-forms."""
        report = CheckReport(self.model.name, "harmonic_lefschetz")
        for k in range(self.n + 1):
            src, tgt = self.harmonic_subspace(self.n - k), self.harmonic_subspace(self.n + k)
            lk = self.hodge.L_power(k).matrix(self.n - k)
            img = Subspace.span([lk.apply(v) for v in src.rows], tgt.ambient_dim)
            ok = img.dim == src.dim and equal(img, tgt)
            report.per_degree.append({"degree": self.n - k, "power": k, "dim_source": src.dim,
                                      "dim_target": tgt.dim, "iso": ok})
            if not ok:
                report.fail(f"L^{k} is not an isomorphism of harmonic forms in degree {self.n - k}")
        return report

    def exact_coexact_check(self, s: Optional[int] = None) -> CheckReport:
        lef = self.transverse_lefschetz()
        s = lef.max_s if s is None else s
        report = CheckReport(self.model.name, "exact_coexact", max_s=s)
        if s < 0 or s > lef.max_s:
            report.status = SKIPPED
            report.details["reason"] = f"transverse {s}-Lefschetz does not hold"
            return report
        top = self.size
        d, delta = self.hodge.op_d, self.hodge.op_delta
        for k in range(top + 1):
            a, _, c = self.dd_subspaces(k)
            row: Dict[str, Any] = {"degree": k}
            if k <= s + 2 or k >= top - s:
                row["a"] = contains(image(delta.matrix(k + 1)), a)
            if k <= s or k >= top - s - 2:
                row["b"] = contains(image(d.matrix(k - 1)), c)
            if k <= s or k >= top - s:
                row["c"] = equal(a, c)
            for part in ("a", "b", "c"):
                if row.get(part) is False:
                    report.fail(f"part {part} fails in degree {k}")
            report.per_degree.append(row)
        return report

    def harmonic_exact_spotcheck(self, seed: Optional[int] = None, samples: int = 30,
                                 coefficient_range=(-3, 3)) -> CheckReport:
        """Random harmonic exact forms: every Lefschetz component is exact."""
        seed = resolve_seed(seed)
        rng = make_rng(seed)
        lef = self.transverse_lefschetz()
        s = lef.max_s
        report = CheckReport(self.model.name, "harmonic_exact_components", max_s=s, seed=seed)
        if s < 0:
            report.status = SKIPPED
            report.details["reason"] = "transverse 0-Lefschetz does not hold"
            return report
        d = self.hodge.op_d
        for k in self._decomposition_degrees(s):
            a, _, _ = self.dd_subspaces(k)
            tried = bad = 0
            if not a.is_zero():
                for _ in range(samples):
                    vec = a.basis.apply(random_vector(rng, a.dim, coefficient_range))
                    form = self.hodge.form(vec, k)
                    tried += 1
                    for r, beta in self.hodge.lefschetz_decompose(form):
                        j = k - 2 * r
                        if not image(d.matrix(j - 1)).contains_vector(self.hodge.vector(beta, j)):
                            bad += 1
                            report.witnesses.append(f"k={k} r={r}: {self.render(form)}")
                            break
            report.per_degree.append({"degree": k, "samples": tried, "failures": bad})
            if bad:
                report.fail(f"{bad} harmonic exact forms in degree {k} with a non-exact component")
        return report

    def closed_primitive_check(self, s: Optional[int] = None) -> CheckReport:
        """Primitive classes in degree <= min(s+1, n) have closed primitive representatives."""
        lef = self.transverse_lefschetz()
        s = lef.max_s if s is None else s
        report = CheckReport(self.model.name, "closed_primitive_representatives", max_s=s)
        if s < 0:
            report.status = SKIPPED
            report.details["reason"] = "transverse 0-Lefschetz does not hold"
            return report
        for r in range(min(s + 1, self.n) + 1):
            ph = self.primitive_cohomology(r)
            space = ph.space
            reps = Subspace.span([space.coordinates(v) for v in self.closed_primitive_forms(r).rows], space.dim)
            ok = equal(reps, ph.subspace)
            report.per_degree.append({"degree": r, "dim_PH": ph.dim, "dim_closed_primitive_classes": reps.dim,
                                      "represented": ok})
            if not ok:
                report.fail(f"degree {r}: PH_B has dim {ph.dim}, closed primitive forms reach {reps.dim}")
        return report

    # ---------------- CUP PRODUCT ----------------
    def cup(self, a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
        sa, sb = a.space, b.space
        if sa.model != self.model.name or sb.model != self.model.name:
            raise CohomologyError(f"Cup product of classes from '{sa.model}' and '{sb.model}' "
                                  f"on model '{self.model.name}'")
        if sa.kind != sb.kind or sa.kind == DELTA:
            raise CohomologyError(f"Cup product needs two basic or two de Rham classes, got {sa.kind}, {sb.kind}")
        product = wedge(a.form, b.form)
        return self.space(sa.kind, sa.degree + sb.degree).class_of(product)

    def cup_well_defined(self, p: int, q: int, kind: str = DERHAM) -> bool:
        """Cocycle ^ coboundary is a coboundary for every basis pair in degrees (p, q)."""
        hp, hq = self.space(kind, p), self.space(kind, q)
        target = self.space(kind, p + q)
        for rep in hp.representatives:
            for bnd in hq.coboundaries.rows:
                prod = wedge(hp.form(rep), hq.form(bnd))
                if not target.is_exact(target.vector(prod)):
                    return False
        return True

    def cup_well_defined_report(self, kind: str = DERHAM) -> CheckReport:
        top = self.model.ambient if kind == DERHAM else self.size
        report = CheckReport(self.model.name, f"cup_well_defined_{kind}")
        for p in range(top + 1):
            bad = [q for q in range(top - p + 1) if not self.cup_well_defined(p, q, kind)]
            report.per_degree.append({"degree": p, "failing_q": bad})
            if bad:
                report.fail(f"cocycle in degree {p} times coboundary not exact in degrees {bad}")
        return report
