import numpy as np
import pytest

from hardylab import converge, domains
from hardylab.errors import InapplicableError, ResolutionError

EPS = (0.04, 0.02, 0.01)


@pytest.fixture(scope="module")
def square_reports(square):
    return converge.shrink_eigenvalues(square, 1 / 400, EPS, 3)


def test_first_mode(square_reports):
    r = square_reports[0]
    i = EPS.index(0.01)
    assert r.lambda_U_eps[i] == pytest.approx(2 * np.pi ** 2 / 0.98 ** 2, rel=1e-3)
    assert r.diffs[i] == pytest.approx(0.806, rel=0.02)
    assert r.fitted_rate == pytest.approx(1.0, abs=0.1)


def test_empirical_constants(square_reports):
    # the inner square has side 1 - 2 eps, so the shift is lambda ((1 - 2 eps)^-2 - 1)
    eps = np.array(EPS)
    for rep, lam in zip(square_reports[:2], (2 * np.pi ** 2, 5 * np.pi ** 2)):
        exact = np.max(lam * ((1 - 2 * eps) ** -2 - 1) / eps)
        cn = converge.empirical_cn(rep)
        assert cn == pytest.approx(exact, rel=0.01)
        # leading order 4 lambda, up to the O(eps) correction
        assert cn == pytest.approx(4 * lam, rel=0.15)


def test_monotone_and_nested(square_reports):
    for r in square_reports:
        assert all(lu <= le for lu, le in zip(r.lambda_U, r.lambda_U_eps))
        # eps decreases along the series, so do the shifts
        assert list(r.diffs) == sorted(r.diffs, reverse=True)


def test_zero_eps(square):
    r = converge.shrink_eigenvalues(square, 1 / 32, (0.1, 0.0), 1)[0]
    assert r.diffs[1] == 0.0


def test_scaled_square_constant(square):
    big = domains.rectangle(2.0, 2.0)
    small_cn = converge.empirical_cn(converge.shrink_eigenvalues(square, 1 / 200, (0.04, 0.02, 0.01), 1)[0])
    big_cn = converge.empirical_cn(converge.shrink_eigenvalues(big, 1 / 200, (0.04, 0.02, 0.01), 1)[0])
    assert big_cn / small_cn == pytest.approx(1 / 8, rel=0.1)


def test_rate_mismatch(square_reports):
    r = square_reports[0]
    wide = converge.ConvergenceReport(r.n, r.eps, r.h, r.lambda_U, r.lambda_U_eps, r.diffs, r.fitted_rate, 4.0)
    with pytest.raises(InapplicableError):
        converge.empirical_cn(wide)


def test_resolution_error(square):
    with pytest.raises(ResolutionError):
        converge.shrink_eigenvalues(square, 1 / 16, (0.45,), 2)


def test_per_eps_spacing(square):
    reps = converge.shrink_eigenvalues(square, [0.04 / 4, 0.02 / 4], (0.04, 0.02), 1)
    assert reps[0].h == (0.01, 0.005)
    with pytest.raises(ValueError):
        converge.shrink_eigenvalues(square, [0.01], (0.04, 0.02), 1)


def test_csv_rows(square_reports):
    rows = square_reports[0].csv_rows("unit_square")
    assert len(rows[0]) == len(converge.CONVERGE_CSV_HEADER)
    assert np.isnan(rows[0][-1])
