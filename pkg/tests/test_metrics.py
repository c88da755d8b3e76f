import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from oracles import cosine_loops, covariance_loops, gram_loops, sml_loops
from scipy import linalg

from zsvariation.metrics import (
    GaussianStats,
    MetricError,
    clips,
    cms,
    fid,
    fid_from_embeddings,
    gaussian_stats,
    gram,
    matrix_sqrt_psd,
    sml,
)

rng = np.random.default_rng(20240611)


def random_psd(n, rank=None, rng=rng):
    a = rng.standard_normal((n, rank or n))
    return a @ a.T


# -- gram ---------------------------------------------------------------------

def test_gram_zero_map():
    np.testing.assert_array_equal(gram(np.zeros((3, 2, 2))), np.zeros((3, 3)))


def test_gram_hand_example():
    fm = np.array([[[2.0]], [[3.0]]])
    np.testing.assert_allclose(gram(fm), [[2.0, 3.0], [3.0, 4.5]], atol=1e-15)


def test_gram_matches_loops():
    fm = rng.standard_normal((4, 3, 3))
    np.testing.assert_allclose(gram(fm), gram_loops(fm.tolist()), atol=1e-9, rtol=0)


def test_gram_rejects_bad_input():
    with pytest.raises(MetricError):
        gram(np.array([[[np.nan]]]))
    with pytest.raises(MetricError):
        gram(np.ones((2, 2)))


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
maps = st.tuples(st.integers(1, 5), st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: arrays(np.float64, s, elements=finite)
)


@given(maps)
def test_gram_symmetric_psd(fm):
    g = gram(fm)
    assert np.abs(g - g.T).max() <= 1e-9
    scale = max(1.0, np.abs(g).max())
    assert np.linalg.eigvalsh(g).min() >= -1e-9 * scale


# -- sml ----------------------------------------------------------------------

def test_sml_identical_is_zero():
    g = gram(rng.standard_normal((3, 4, 4)))
    assert sml(g, [g, g, g]) == 0.0


def test_sml_hand_example():
    res = np.zeros((2, 2))
    target = -np.array([[1.0, 0.0], [0.0, 2.0]])
    assert sml(res, [target]) == pytest.approx(5.0, abs=1e-12)


def test_sml_matches_loops_n8():
    grams = [gram(rng.standard_normal((6, 3, 3))) for _ in range(9)]
    res, targets = grams[0], grams[1:]
    expected = sml_loops(res.tolist(), [t.tolist() for t in targets])
    assert sml(res, targets) == pytest.approx(expected, abs=1e-9)


def test_sml_errors():
    with pytest.raises(MetricError):
        sml(np.eye(2), [])
    with pytest.raises(MetricError):
        sml(np.eye(2), [np.eye(3)])


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10))
def test_sml_permutation_and_scaling(seed, s):
    r = np.random.default_rng(seed)
    feats = [r.standard_normal((3, 2, 2)) for _ in range(5)]
    res, targets = gram(feats[0]), [gram(f) for f in feats[1:]]
    base = sml(res, targets)
    assert sml(res, targets[::-1]) == pytest.approx(base, rel=1e-12, abs=1e-15)
    # scaling features by sqrt(s) scales every Gram by s and SML by s^2
    scaled = sml(gram(np.sqrt(s) * feats[0]), [gram(np.sqrt(s) * f) for f in feats[1:]])
    assert scaled == pytest.approx(s**2 * base, rel=1e-9)


# -- cms / clips --------------------------------------------------------------

def test_cms_examples():
    v = rng.standard_normal(7)
    assert cms(v, v) == pytest.approx(1.0, abs=1e-12)
    assert cms([1, 0, 0], [0, 3, 0]) == 0.0
    assert cms([1, 2, 2], [2, 1, 2]) == pytest.approx(8 / 9, abs=1e-12)


def test_cms_errors():
    with pytest.raises(MetricError):
        cms([0, 0], [1, 1])
    with pytest.raises(MetricError):
        cms([1, 2], [1, 2, 3])


vecs = st.integers(1, 12).flatmap(
    lambda n: st.tuples(arrays(np.float64, n, elements=finite), arrays(np.float64, n, elements=finite))
).filter(lambda ab: np.linalg.norm(ab[0]) > 1e-3 and np.linalg.norm(ab[1]) > 1e-3)


@given(vecs, st.floats(1e-3, 1e3))
def test_cms_properties(ab, k):
    a, b = ab
    c = cms(a, b)
    assert -1.0 <= c <= 1.0
    assert c == pytest.approx(cosine_loops(a.tolist(), b.tolist()), abs=1e-9)
    assert cms(k * a, b) == pytest.approx(c, abs=1e-9)
    assert cms(a, -a) == pytest.approx(-1.0, abs=1e-12)
    assert 0.0 <= clips(a, b) <= 100.0


def test_clips_examples():
    assert clips([1, 2, 3], [2, 4, 6]) == pytest.approx(100.0, abs=1e-9)
    assert clips([1, 2, 3], [-1, -2, -3]) == 0.0
    target = 0.2742
    img = [1.0, 0.0]
    txt = [target, np.sqrt(1 - target**2)]
    assert clips(img, txt) == pytest.approx(27.42, abs=1e-9)
    with pytest.raises(MetricError):
        clips([0, 0], [1, 0])


# -- gaussian stats -----------------------------------------------------------

def test_stats_hand_example():
    s = gaussian_stats([[0, 0], [2, 2]])
    np.testing.assert_allclose(s.mean, [1, 1])
    np.testing.assert_allclose(s.covariance, [[2, 2], [2, 2]])


def test_stats_degenerate_cloud():
    s = gaussian_stats(np.tile([3.0, -1.0, 2.0], (6, 1)))
    np.testing.assert_allclose(s.mean, [3, -1, 2])
    np.testing.assert_array_equal(s.covariance, np.zeros((3, 3)))


def test_stats_match_loops():
    x = rng.standard_normal((50, 4))
    mu, cov = covariance_loops(x.tolist())
    s = gaussian_stats(x)
    np.testing.assert_allclose(s.mean, mu, atol=1e-12)
    np.testing.assert_allclose(s.covariance, cov, atol=1e-9, rtol=0)


def test_stats_needs_two_rows():
    with pytest.raises(MetricError):
        gaussian_stats([[1.0, 2.0]])


# -- matrix sqrt --------------------------------------------------------------

def test_sqrt_simple():
    np.testing.assert_allclose(matrix_sqrt_psd(np.eye(4)), np.eye(4), atol=1e-14)
    np.testing.assert_allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 16, 64])
def test_sqrt_reconstruction(n):
    s = random_psd(n)
    r = matrix_sqrt_psd(s)
    assert np.linalg.norm(r @ r - s) / np.linalg.norm(s) < 1e-8
    np.testing.assert_array_equal(r, r.T)


def test_sqrt_rank_deficient_clamps():
    s = random_psd(8, rank=3)
    r = matrix_sqrt_psd(s)
    assert np.linalg.norm(r @ r - s) / np.linalg.norm(s) < 1e-8


def test_sqrt_rejects():
    with pytest.raises(MetricError):
        matrix_sqrt_psd([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(MetricError):
        matrix_sqrt_psd(np.diag([1.0, -1.0]))


# -- fid ----------------------------------------------------------------------

def test_fid_identical_zero():
    s = gaussian_stats(rng.standard_normal((40, 6)))
    assert fid(s, s) <= 1e-8


def test_fid_mean_shift():
    cov = random_psd(5)
    delta = rng.standard_normal(5)
    a = GaussianStats(np.zeros(5), cov)
    b = GaussianStats(delta, cov)
    assert fid(a, b) == pytest.approx(delta @ delta, abs=1e-6)


def test_fid_diagonal_closed_form():
    sa, sb = rng.uniform(0.1, 4, 7), rng.uniform(0.1, 4, 7)
    mu = rng.standard_normal(7)
    expected = np.sum(sa + sb - 2 * np.sqrt(sa * sb))
    assert fid(GaussianStats(mu, np.diag(sa)), GaussianStats(mu, np.diag(sb))) == pytest.approx(expected, abs=1e-6)


def test_fid_matches_scipy_sqrtm():
    # independent route: scipy's general (Schur) sqrtm of the non-symmetric product
    x, y = rng.standard_normal((60, 8)), rng.standard_normal((45, 8)) * 1.5 + 0.3
    a, b = gaussian_stats(x), gaussian_stats(y)
    covmean = linalg.sqrtm(a.covariance @ b.covariance).real
    d = a.mean - b.mean
    expected = d @ d + np.trace(a.covariance + b.covariance - 2 * covmean)
    assert fid(a, b) == pytest.approx(expected, abs=1e-6)
    assert fid_from_embeddings(x, y) == pytest.approx(expected, abs=1e-6)


def test_fid_symmetric_and_dim_check():
    a = gaussian_stats(rng.standard_normal((30, 10)))
    b = gaussian_stats(rng.standard_normal((30, 10)) + 1)
    assert fid(a, b) == pytest.approx(fid(b, a), abs=1e-6)
    with pytest.raises(MetricError):
        fid(a, gaussian_stats(rng.standard_normal((5, 3))))
