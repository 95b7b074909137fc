import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from npcfactors import dgp, moments, pca, spectra
from npcfactors.errors import ConfigurationError, NumericalError, ValidationError


def _diag_system():
    return spectra.top_r_eigs(np.diag([4.0, 1.0]), 2)


def test_npc_exact_recovery(rand):
    lam = np.diag([2.0, 1.0])
    f = rand.standard_normal((30, 2))
    y = f @ lam.T
    eigen = spectra.top_r_eigs(lam @ lam.T, 2)
    np.testing.assert_allclose(pca.normalized_pcs(eigen, y), f, atol=1e-14)


def test_npc_zero_data_and_shapes():
    eigen = _diag_system()
    assert np.array_equal(pca.normalized_pcs(eigen, np.zeros((5, 2))), np.zeros((5, 2)))
    assert pca.normalized_pcs(eigen, np.array([2.0, 1.0])).shape == (1, 2)
    with pytest.raises(ValidationError):
        pca.normalized_pcs(eigen, np.zeros((5, 3)))


def test_npc_coefficients_rows(rand):
    a = rand.standard_normal((6, 6))
    eigen = spectra.top_r_eigs(a @ a.T, 3)
    y = rand.standard_normal((4, 6))
    np.testing.assert_allclose(y @ pca.npc_coefficients(eigen).T, pca.normalized_pcs(eigen, y))


def test_pc_loadings_diagonal():
    np.testing.assert_allclose(pca.pc_loadings(_diag_system()), [[2.0, 0.0], [0.0, 1.0]])


@given(n=st.integers(3, 12), r=st.integers(1, 3), seed=st.integers(0, 2**32 - 1))
def test_pc_loadings_gram_is_m(n, r, seed):
    a = np.random.default_rng(seed).standard_normal((n, n))
    eigen = spectra.top_r_eigs(a @ a.T + np.diag(np.arange(n, dtype=float)), r)
    ld = pca.pc_loadings(eigen)
    np.testing.assert_allclose(ld.T @ ld, np.diag(eigen.values), rtol=1e-10, atol=1e-9)
    np.testing.assert_allclose(eigen.vectors @ eigen.vectors.T, np.eye(r), atol=1e-10)
    proj = ld @ pca.npc_coefficients(eigen)
    np.testing.assert_allclose(proj @ proj, proj, atol=1e-10)


def test_population_npcs_improve_with_n(canonical):
    panel = dgp.simulate_panel(canonical, 1600, 500)
    errs = []
    for n in (400, 1600):
        lam = panel.loadings[:n]
        lim = pca.limit_objects(canonical, lam, panel.factors)
        est = pca.estimate_population(lam, canonical, panel.observations[:, :n], 2)
        f = pca.align_signs(est.factors, lim.f_infinity)
        errs.append(np.mean(np.sum((f - lim.f_infinity) ** 2, axis=1)))
    assert errs[1] < errs[0]


def test_pc_loadings_approach_limit(canonical):
    errs = []
    for n in (400, 1600):
        lam = dgp.draw_loadings(canonical, n)
        lim = pca.limit_objects(canonical, lam, np.zeros((1, 2)))
        ld = pca.pc_loadings(pca.population_eigen(lam, canonical, 2))
        errs.append(np.linalg.norm(ld[0] - lim.lambda_infinity[0]))
    assert errs[1] < errs[0] < 0.2


def test_population_eigen_paths_agree(canonical):
    # the matrix-free path above the cutoff against a dense solve
    n = pca.LANCZOS_MIN_DIM + 50
    lam = dgp.draw_loadings(canonical, n)
    gy = moments.population_covariances(lam, dgp.idio_covariance(canonical, n)).gamma_y
    ref = spectra.top_r_eigs(gy, 2)
    got = pca.population_eigen(lam, canonical, 2)
    np.testing.assert_allclose(got.values, ref.values, rtol=1e-12)
    np.testing.assert_allclose(got.vectors, ref.vectors, atol=1e-9)
    c = pca.population_eigen(lam, canonical, 2, which="c")
    np.testing.assert_allclose(c.values, spectra.top_r_eigs(lam @ lam.T, 2).values, rtol=1e-10)
    with pytest.raises(ValidationError):
        pca.population_eigen(lam, canonical, 2, which="e")


def test_canonical_limit_objects(canonical):
    panel = dgp.simulate_panel(canonical, 100, 20)
    lim = pca.limit_objects(canonical, panel.loadings, panel.factors)
    np.testing.assert_array_equal(lim.p_lambda, np.eye(2))
    np.testing.assert_allclose(lim.d_lambda, [2.0, 1.0], rtol=1e-14)
    np.testing.assert_array_equal(lim.f_infinity, panel.factors)
    np.testing.assert_array_equal(lim.lambda_infinity, panel.loadings)


def test_rotated_loadings_give_same_limit(canonical, rand):
    theta = 0.7
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    panel = dgp.simulate_panel(canonical, 200, 30)
    lam_r = panel.loadings @ rot
    f_r = panel.factors @ rot  # same observations: F R (Lambda R)' = F Lambda'
    gamma_r = rot.T @ canonical.gamma_lambda @ rot
    lim = pca.limit_objects(canonical, lam_r, f_r, gamma_lambda=gamma_r)
    # brute-force oracle: eigenvectors of R' D R are the columns of R' up to sign
    np.testing.assert_allclose(np.abs(lim.p_lambda), np.abs(rot.T), atol=1e-12)
    np.testing.assert_allclose(lim.f_infinity, panel.factors, atol=1e-12)
    np.testing.assert_allclose(lim.lambda_infinity, panel.loadings, atol=1e-12)


def test_limit_gram_converges(canonical):
    gaps = []
    for n in (200, 3200):
        lam = dgp.draw_loadings(canonical, n)
        lim = pca.limit_objects(canonical, lam, np.zeros((1, 2)))
        gram = moments.loadings_gram(lim.lambda_infinity)
        gaps.append(np.linalg.norm(gram - np.diag(lim.d_lambda), 2))
    assert gaps[1] < gaps[0]


def test_limit_objects_errors(canonical):
    lam = np.ones((5, 2))
    with pytest.raises(ConfigurationError, match="distinct"):
        pca.limit_objects(canonical, lam, np.ones((3, 2)), gamma_lambda=np.eye(2))
    with pytest.raises(ConfigurationError):
        pca.limit_objects(canonical, lam, np.ones((3, 2)), gamma_lambda=np.diag([1.0, -1.0]))
    with pytest.raises(ValidationError):
        pca.limit_objects(canonical, np.ones((5, 3)), np.ones((3, 2)))
    tied = dgp.ModelConfig(r=2, n_max=10, loading_half_widths=(1.0, 1.0))
    with pytest.raises(ConfigurationError):
        pca.limit_objects(tied, lam, np.ones((3, 2)))


def test_align_signs():
    target = np.array([[1.0, 2.0], [2.0, -1.0]])
    flipped = target * np.array([-1.0, 1.0])
    np.testing.assert_array_equal(pca.align_signs(flipped, target), target)


def test_noiseless_panel_spans_factors():
    cfg = dgp.ModelConfig(r=2, n_max=60, loading_half_widths=(2.0, 1.0), idio_sigma=0.0)
    panel = dgp.simulate_panel(cfg, 60, 40)
    est = pca.estimate_from_panel(panel.observations, 2)
    fh = est.factors
    proj = fh @ np.linalg.solve(fh.T @ fh, fh.T @ panel.factors)
    assert np.abs(proj - panel.factors).max() < 1e-8
    rel = np.linalg.norm(panel.observations - est.common) / np.linalg.norm(panel.observations)
    assert rel < 1e-6


def test_npc_sample_variance_identity(canonical):
    panel = dgp.simulate_panel(canonical, 200, 200)
    f = pca.estimate_from_panel(panel.observations, 2).factors
    np.testing.assert_allclose(f.T @ f / f.shape[0], np.eye(2), atol=1e-8)


def test_estimator_methods_agree(canonical):
    panel = dgp.simulate_panel(canonical, 650, 700)
    ref = pca.sample_eigen(panel.observations, 2, method="dense")
    for method in ("gram", "lanczos", "auto"):
        got = pca.sample_eigen(panel.observations, 2, method=method)
        np.testing.assert_allclose(got.values, ref.values, rtol=1e-10)
        np.testing.assert_allclose(got.vectors, ref.vectors, atol=1e-8)
    with pytest.raises(ValidationError):
        pca.sample_eigen(panel.observations, 2, method="svd")


def test_estimate_rank_bounds():
    with pytest.raises(ValidationError):
        pca.estimate_from_panel(np.ones((3, 5)), 4)
    with pytest.raises(ValidationError):
        pca.estimate_from_panel(np.ones((3, 5)), 0)
    with pytest.raises(ValidationError):
        pca.estimate_from_panel(np.ones((0, 5)), 1)


@pytest.mark.slow
def test_sample_npcs_improve_with_n_and_t(canonical):
    errs = []
    for n in (800, 3200):
        panel = dgp.simulate_panel(canonical, n, n)
        lim = pca.limit_objects(canonical, panel.loadings, panel.factors)
        f = pca.align_signs(pca.estimate_from_panel(panel.observations, 2).factors,
                            lim.f_infinity)
        errs.append(np.mean(np.sum((f - lim.f_infinity) ** 2, axis=1)))
    assert errs[1] < errs[0]


def test_rotation_h_exact(rand):
    f = rand.standard_normal((50, 2))
    np.testing.assert_allclose(pca.rotation_h(f, f), np.eye(2), atol=1e-12)
    rot = np.array([[0.6, -0.8], [0.8, 0.6]])
    np.testing.assert_allclose(pca.rotation_h(f @ rot.T, f), rot, atol=1e-12)


def test_rotation_h_singular(rand):
    f = np.column_stack([np.ones(10), np.ones(10)])
    with pytest.raises(NumericalError) as info:
        pca.rotation_h(rand.standard_normal((10, 2)), f)
    assert info.value.condition_number > pca.MAX_CONDITION
    with pytest.raises(ValidationError):
        pca.rotation_h(np.ones((4, 2)), np.ones((5, 2)))


def test_rotation_h_near_p_lambda(canonical):
    panel = dgp.simulate_panel(canonical, 1600, 1600)
    lim = pca.limit_objects(canonical, panel.loadings, panel.factors)
    h = pca.rotation_h(pca.estimate_from_panel(panel.observations, 2).factors, panel.factors)
    assert np.linalg.norm(h - lim.p_lambda, 2) < 0.1
