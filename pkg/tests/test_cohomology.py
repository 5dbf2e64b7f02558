import pytest
import sympy

from modules.cohomology import BASIC, DELTA, DERHAM, CohomologyError
from tests.conftest import ZOO_SAMPLE, get_cohomology, get_model


def sympy_betti(complex_):
    """Betti numbers from dense sympy ranks of the differential matrices."""
    ranks = {}
    for k in range(-1, complex_.top + 1):
        d = complex_.differential(k)
        entries = [x for row in d.rows for x in row]
        ranks[k] = sympy.Matrix(d.nrows, d.ncols, entries).rank() if entries else 0
    return [complex_.dim(k) - ranks[k] - ranks[k - 1] for k in range(complex_.top + 1)]


@pytest.mark.parametrize("name, betti, basic", [
    ("heisenberg3", [1, 2, 2, 1], [1, 2, 1]),
    ("kodaira_thurston", [1, 3, 4, 3, 1], [1, 3, 4, 3, 1]),
    ("torus4", [1, 4, 6, 4, 1], [1, 4, 6, 4, 1]),
    ("cosymplectic_t5", [1, 5, 10, 10, 5, 1], [1, 4, 6, 4, 1]),
    ("bw_torus4", [1, 4, 5, 5, 4, 1], [1, 4, 6, 4, 1]),
])
def test_betti_tables(name, betti, basic):
    coh = get_cohomology(name)
    assert coh.betti(DERHAM) == betti
    assert coh.betti(BASIC) == basic


def test_kt_contact5_first_betti():
    assert get_cohomology("kt_contact5").betti(DERHAM)[1] == 3


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_betti_agrees_with_sympy_oracle(name):
    m = get_model(name)
    coh = get_cohomology(name)
    assert coh.betti(DERHAM) == sympy_betti(m.full_complex)
    assert coh.betti(BASIC) == sympy_betti(m.basic_complex)


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_delta_homology_mirrors_basic(name):
    coh = get_cohomology(name)
    assert coh.betti(DELTA) == list(reversed(coh.betti(BASIC)))
    assert coh.delta_homology_duality_check().passed


def test_betti_report_rows():
    report = get_cohomology("heisenberg3").betti_report()
    assert report.per_degree[3] == {"degree": 3, DERHAM: 1}
    assert report.per_degree[1] == {"degree": 1, BASIC: 2, DERHAM: 2, DELTA: 2}


def test_class_of_rejects_non_cocycle():
    coh = get_cohomology("heisenberg3")
    m = coh.model
    with pytest.raises(CohomologyError):
        coh.de_rham_cohomology(1).class_of(m.parse("e3"))


def test_exact_product_is_zero_class():
    coh = get_cohomology("heisenberg3")
    m = coh.model
    h1 = coh.de_rham_cohomology(1)
    a, b = h1.class_of(m.parse("e1")), h1.class_of(m.parse("e2"))
    assert not a.is_zero()
    assert coh.cup(a, b).is_zero()


def test_cup_rejects_mixed_kinds():
    coh = get_cohomology("heisenberg3")
    m = coh.model
    a = coh.de_rham_cohomology(1).class_of(m.parse("e1"))
    b = coh.basic_cohomology(1).class_of(m.parse("e2"))
    with pytest.raises(CohomologyError):
        coh.cup(a, b)


@pytest.mark.parametrize("kind", [DERHAM, BASIC])
def test_cup_is_well_defined(kind):
    assert get_cohomology("kodaira_thurston").cup_well_defined_report(kind).passed


def test_kodaira_thurston_lefschetz():
    lef = get_cohomology("kodaira_thurston").transverse_lefschetz()
    assert lef.max_s == 0
    assert not lef.hard_lefschetz
    assert any(w.startswith("k=1 kernel") for w in lef.witnesses)
    row = lef.per_degree[1]
    assert row["dim_source"] == 3 and row["rank"] == 2


@pytest.mark.parametrize("name, expected", [
    ("torus2", 0), ("torus4", 1), ("heisenberg3", 0), ("kodaira_thurston", 0), ("kt_contact5", 0),
    ("bw_torus4", 1), ("cosymplectic_t5", 1),
])
def test_max_s_agree(name, expected):
    coh = get_cohomology(name)
    dd = coh.dd_lemma()
    assert coh.transverse_lefschetz().max_s == expected
    assert dd.max_s == expected
    assert dd.mirror_max_s == expected
    assert coh.lefschetz_dd_equivalence_check().passed


def test_dd_lemma_fails_at_one_on_kodaira_thurston():
    dd = get_cohomology("kodaira_thurston").dd_lemma()
    rows = {row["degree"]: row for row in dd.per_degree}
    assert rows[0]["first_equal"] and rows[0]["second_equal"] and rows[1]["first_equal"]
    assert not (rows[1]["second_equal"] and rows[2]["first_equal"])
    assert dd.witnesses


@pytest.mark.parametrize("name", ZOO_SAMPLE)
def test_cross_checks_pass(name):
    coh = get_cohomology(name)
    for report in (coh.harmonic_flatness_check(), coh.primitive_decomposition_check(), coh.harmonic_lefschetz_check(), coh.exact_coexact_check(),
                   coh.closed_primitive_check(), coh.harmonic_exact_spotcheck(seed=5, samples=5)):
        assert report.passed, (report.checker, report.details.get("failures"))


def test_decomposition_skipped_above_verified_s():
    report = get_cohomology("kodaira_thurston").primitive_decomposition_check(1)
    assert report.status == "skipped"
    assert report.passed


def test_primitive_cohomology():
    coh = get_cohomology("torus4")
    assert coh.primitive_cohomology(0).dim == 1
    assert coh.primitive_cohomology(1).dim == 4
    assert coh.primitive_cohomology(2).dim == 5
    with pytest.raises(CohomologyError):
        coh.primitive_cohomology(3)


def test_harmonic_cohomology_on_torus_is_full():
    coh = get_cohomology("torus4")
    assert all(coh.harmonic_cohomology(k).is_full for k in range(5))
