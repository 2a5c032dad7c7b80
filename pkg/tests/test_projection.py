import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import orthogonal_procrustes

from oracles import pairwise
from sdrclust.dataset import Dataset
from sdrclust.eigen import jacobi_eigh
from sdrclust.errors import ConfigError, DataError
from sdrclust.projection import classical_mds, lmds, pca_reduce, project


# ---------------------------------------------------------------- eigen solver


@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_jacobi_matches_numpy(m, seed):
    a = np.random.default_rng(seed).normal(size=(m, m))
    a = a + a.T
    w, v = jacobi_eigh(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a)[::-1], atol=1e-9 * max(1, np.abs(a).max()))
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, a, atol=1e-9 * max(1, np.abs(a).max()))
    np.testing.assert_allclose(v.T @ v, np.eye(m), atol=1e-10)


def test_jacobi_zero_matrix():
    w, v = jacobi_eigh(np.zeros((3, 3)))
    np.testing.assert_array_equal(w, 0.0)


# ---------------------------------------------------------------- classical MDS


def test_collinear_points():
    x = np.array([[0.0], [1.0], [3.0], [7.0]])
    y, w = classical_mds(pairwise(x), 2)
    np.testing.assert_allclose(pairwise(y), pairwise(x), atol=1e-9)
    assert abs(w[1]) < 1e-9


def test_unit_square():
    x = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    y, _ = classical_mds(pairwise(x), 2)
    np.testing.assert_allclose(pairwise(y), pairwise(x), atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_recovers_planar_configuration(seed):
    x = np.random.default_rng(seed).normal(size=(10, 2)) * 5
    d = pairwise(x)
    y, _ = classical_mds(d, 2)
    np.testing.assert_allclose(pairwise(y), d, rtol=1e-6, atol=1e-6 * d.max())


def test_rejects_non_distance_matrices():
    with pytest.raises(DataError, match="square"):
        classical_mds(np.zeros((2, 3)))
    with pytest.raises(DataError, match="symmetric"):
        classical_mds(np.array([[0, 1], [2, 0]], dtype=float))
    with pytest.raises(DataError, match="diagonal"):
        classical_mds(np.array([[1, 1], [1, 0]], dtype=float))


# ---------------------------------------------------------------- LMDS


def test_lmds_with_all_landmarks_recovers_distances(rng):
    x = rng.normal(size=(40, 2)) * 3
    p = lmds(x, n_landmarks=40)
    np.testing.assert_allclose(pairwise(p.coords), pairwise(x), rtol=1e-6, atol=1e-9)


def test_lmds_exact_for_planar_data_with_few_landmarks(rng):
    x = np.hstack([rng.normal(size=(500, 2)), np.zeros((500, 3))])
    p = lmds(x, n_landmarks=10)
    sub = rng.choice(500, 40, replace=False)
    np.testing.assert_allclose(pairwise(p.coords[sub]), pairwise(x[sub]), atol=1e-8)


def test_lmds_coincident_point(rng):
    x = rng.normal(size=(30, 2))
    x[7] = x[3]
    p = lmds(x, n_landmarks=30)
    np.testing.assert_allclose(p.coords[7], p.coords[3], atol=1e-9)
    assert len(set(p.landmark_indices)) == len(p.landmark_indices)


def test_lmds_separates_blobs(rng):
    silhouette_score = pytest.importorskip("sklearn.metrics").silhouette_score
    centers = np.eye(3, 10) * 20
    x = np.vstack([c + rng.normal(size=(100, 10)) for c in centers])
    labels = np.repeat(np.arange(3), 100)
    p = lmds(x)
    assert silhouette_score(p.coords, labels) > 0.5


def test_lmds_rotation_invariance(rng):
    x = rng.normal(size=(200, 4)) * [5, 3, 1, 0.5]
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    a = lmds(x, n_landmarks=30, seed=2).coords
    b = lmds(x @ q, n_landmarks=30, seed=2).coords
    r, _ = orthogonal_procrustes(b, a)
    assert np.abs(b @ r - a).max() <= 1e-6 * np.abs(a).max()


def test_lmds_deterministic(rng):
    x = rng.normal(size=(300, 5))
    assert lmds(x, seed=4).coords.tobytes() == lmds(x, seed=4).coords.tobytes()


def test_lmds_errors(rng):
    with pytest.raises(ConfigError):
        lmds(rng.normal(size=(10, 2)), n_landmarks=11)
    with pytest.raises(ConfigError):
        lmds(rng.normal(size=(10, 2)), target_dim=3)
    with pytest.raises(DataError, match="distinct landmarks"):
        lmds(np.ones((10, 2)), n_landmarks=5)


def test_project_dispatch(rng):
    d = Dataset(rng.normal(size=(50, 3)))
    for method in ("lmds", "cmds", "pca"):
        assert project(d, method).coords.shape == (50, 2)
    with pytest.raises(ConfigError):
        project(d, "tsne")


# ---------------------------------------------------------------- PCA


def test_pca_rank_one(rng):
    t = rng.normal(size=200)
    x = np.outer(t, [1.0, 2.0, -1.0]) + 4.0
    out, w = pca_reduce(Dataset(x), 0.8)
    assert out.n == 1
    assert out.meta["pca"]["variance_fraction_retained"] == pytest.approx(1.0)
    assert w[1] == pytest.approx(0.0, abs=1e-9 * w[0])


def test_pca_lossless_at_full_variance(rng):
    x = rng.normal(size=(100, 4)) @ rng.normal(size=(4, 4))
    out, _ = pca_reduce(Dataset(x), 1.0)
    assert out.n == 4
    np.testing.assert_allclose(pairwise(out.points[:20]), pairwise(x[:20]), atol=1e-9)


@given(st.floats(0.05, 1.0), st.integers(0, 1000))
def test_pca_retains_requested_share(frac, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(60, 8)) * rng.uniform(0.1, 5, 8)
    out, w = pca_reduce(Dataset(x), frac)
    info = out.meta["pca"]
    assert info["variance_fraction_retained"] >= frac - 1e-12
    k = info["n_components"]
    if k > 1:
        # one fewer component would fall short
        assert w[: k - 1].sum() / w.sum() < frac


def test_pca_errors():
    with pytest.raises(ConfigError):
        pca_reduce(Dataset(np.eye(3)), 0.0)
    with pytest.raises(DataError, match="constant"):
        pca_reduce(Dataset(np.ones((5, 2))), 0.8)
