import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from polydiam import TIE, PolytopeAnalyzer, hypercube, regular_polygon
from polydiam.hrep import stacked


@pytest.fixture(scope="module")
def fitted_cube():
    return PolytopeAnalyzer(samples=10**5, facet_samples=10**4, seed=3).fit(hypercube(3))


def test_params_roundtrip():
    est = PolytopeAnalyzer(samples=5000, seed=9, lemmas=(2,))
    p = est.get_params()
    assert p["samples"] == 5000 and p["seed"] == 9 and p["lemmas"] == (2,)
    c = clone(est)
    assert c.get_params() == p and c is not est
    assert est.set_params(seed=4).seed == 4


def test_fit_attributes(fitted_cube):
    est = fitted_cube
    assert est.n_features_in_ == 3
    assert est.diameter_ == 3
    assert est.bound_.j_max_paper == 62
    assert (est.condition_.delta, est.condition_.det_star) == (1, 1)
    assert len(est.cone_stats_) == 8
    assert est.lemmas_hold()
    assert sum(s.volume for s in est.cone_stats_) == pytest.approx(4 / 3 * np.pi, rel=0.02)


def test_input_forms():
    H = hypercube(2)
    a = PolytopeAnalyzer(lemmas=()).fit(H)
    b = PolytopeAnalyzer(lemmas=()).fit((H.A, H.b))
    c = PolytopeAnalyzer(lemmas=()).fit(stacked(H))
    assert a.diameter_ == b.diameter_ == c.diameter_ == 2
    np.testing.assert_array_equal(a.graph_.points, c.graph_.points)


def test_no_lemmas_skips_sampling():
    est = PolytopeAnalyzer(lemmas=()).fit(regular_polygon(8))
    assert est.cone_volumes_ is None and est.verification_ is None
    assert est.lemmas_hold() and est.diameter_ == 4


def test_predict_transform(fitted_cube):
    C = np.array([[1.0, 2.0, 3.0], [-1.0, -0.5, -0.1], [1.0, 0.0, 0.0]])
    vals = fitted_cube.transform(C)
    assert vals.shape == (3, 8)
    pred = fitted_cube.predict(C)
    np.testing.assert_array_equal(fitted_cube.graph_.points[pred[0]], [1, 1, 1])
    np.testing.assert_array_equal(fitted_cube.graph_.points[pred[1]], [-1, -1, -1])
    assert pred[2] == TIE
    assert vals[0, pred[0]] == vals[0].max()


def test_predict_wrong_width(fitted_cube):
    with pytest.raises(ValueError):
        fitted_cube.predict(np.ones((2, 2)))


def test_not_fitted():
    est = PolytopeAnalyzer()
    for call in (lambda: est.predict([[1, 0]]), lambda: est.report(), est.lemmas_hold):
        with pytest.raises(NotFittedError):
            call()


def test_perturb_changes_b_only():
    est = PolytopeAnalyzer(lemmas=(), perturb=1e-3, seed=2).fit(hypercube(3))
    np.testing.assert_array_equal(est.hrep_.A, hypercube(3).A)
    d = est.hrep_.b - 1
    assert 0 < np.abs(d).max() <= 1e-3


def test_report_key_order(fitted_cube):
    rep = fitted_cube.report()
    keys = list(rep)
    assert keys[:4] == ["n", "m", "vertices", "edges"]
    assert keys[-1] == "cones"
    assert rep["exact_diameter"] == 3 and rep["hirsch_quantity"] == 3
    assert rep["all_passed"] is True
