"""Smoke tests for the wdiscood Python module.

The heavy numerical validation lives in the C++ suites; these tests check
that the bindings expose the pipeline end to end: fit, project, score,
evaluate, persist, and map errors.
"""

import numpy as np
import pytest

import wdiscood as wd


@pytest.fixture(scope="module")
def bench():
    """Small residual-shift benchmark plus a fitted model."""
    train_x, train_y, id_test, ood = wd.generate_synth(
        d=16,
        c=4,
        n_per_class=300,
        class_mean_scale=5.0,
        within_noise=1.0,
        seed=3,
        ood_kind="mean_shift",
        shift_magnitude=8.0,
        shift_subspace="residual",
        n_ood=400,
    )
    model = wd.fit(train_x, train_y, n_disc=3, seed=3)
    return train_x, train_y, id_test, ood, model


def test_generate_shapes(bench):
    train_x, train_y, id_test, ood, _ = bench
    assert train_x.shape == (1200, 16)
    assert train_y.shape == (1200,)
    assert sorted(set(train_y.tolist())) == [0, 1, 2, 3]
    assert id_test.shape == (400, 16)
    assert ood.shape == (400, 16)


def test_model_properties(bench):
    *_, model = bench
    assert model.dim == 16
    assert model.n_classes == 4
    assert model.n_disc == 3
    assert model.discriminants.shape == (16, 3)
    fisher = model.fisher_values
    assert fisher.shape == (3,)
    assert np.all(np.diff(fisher) <= 0)  # descending
    assert "WldaModel" in repr(model)


def test_projections(bench):
    _, _, id_test, _, model = bench
    g = wd.project_wd(model, id_test)
    h = wd.project_wdr(model, id_test)
    assert g.shape == (400, 3)
    assert h.shape == (400, 16)
    # Residual-projected rows carry no discriminant component.
    leak = np.abs(h @ model.discriminants).max()
    assert leak <= 1e-8


def test_residual_shift_is_visible_to_wdr(bench):
    _, _, id_test, ood, model = bench
    auroc_h = wd.auroc(wd.score_wdr(model, id_test), wd.score_wdr(model, ood))
    auroc_g = wd.auroc(wd.score_wd(model, id_test), wd.score_wd(model, ood))
    assert auroc_h >= 0.99
    assert 0.35 <= auroc_g <= 0.65
    fused = wd.auroc(
        wd.score_wdiscood(model, id_test), wd.score_wdiscood(model, ood)
    )
    assert fused >= 0.95


def test_alpha_zero_matches_wd(bench):
    train_x, train_y, id_test, *_ = bench
    model0 = wd.fit(train_x, train_y, n_disc=3, alpha=0.0, seed=3)
    fused = wd.score_wdiscood(model0, id_test)
    only_g = wd.score_wd(model0, id_test)
    assert np.array_equal(fused, only_g)


def test_metrics_hand_cases():
    assert wd.auroc(np.array([2.0, 3.0]), np.array([0.0, 1.0])) == 1.0
    assert wd.auroc(np.array([0.8, 0.5]), np.array([0.5, 0.2])) == 0.875
    id_scores = np.arange(10.0, 0.0, -1.0)
    assert wd.fpr_at_tpr(id_scores, np.array([0.5, 1.5]), 0.95) == 0.5


def test_baselines_run(bench):
    train_x, train_y, id_test, ood, _ = bench
    maha = wd.fit_maha(train_x, train_y)
    knn = wd.fit_knn(train_x, k=5)
    pca = wd.fit_pca(train_x, 8)
    for scores in (
        wd.score_maha(maha, id_test),
        wd.score_knn(knn, id_test),
        wd.score_pr(pca, id_test),
    ):
        assert scores.shape == (400,)
        assert np.all(scores <= 1e-12)  # negated distances
    # OOD should look worse than ID to every baseline on this benchmark.
    assert wd.auroc(wd.score_maha(maha, id_test), wd.score_maha(maha, ood)) > 0.6


def test_logit_scorers():
    logits = np.array([[2.0, 0.0], [0.0, 0.0]])
    msp = wd.score_msp(logits)
    assert msp[1] == pytest.approx(0.5)
    energy = wd.score_energy(logits, temperature=1.0)
    assert energy[0] == pytest.approx(np.log(np.exp(2.0) + 1.0))
    assert np.array_equal(wd.score_maxlogit(logits), np.array([2.0, 0.0]))


def test_model_roundtrip(tmp_path, bench):
    _, _, id_test, _, model = bench
    path = str(tmp_path / "model.bin")
    wd.save_model(path, model)
    loaded = wd.load_model(path)
    assert np.array_equal(
        wd.score_wdiscood(loaded, id_test), wd.score_wdiscood(model, id_test)
    )


def test_features_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(31, 7))
    x[0, 0] = -0.0
    path = str(tmp_path / "x.fmat")
    wd.write_features(path, x)
    back = wd.read_features(path)
    assert back.dtype == np.float64
    assert np.array_equal(back, x)
    assert np.signbit(back[0, 0])


def test_errors_are_mapped(bench):
    train_x, train_y, id_test, _, model = bench
    with pytest.raises(wd.Error):
        wd.score_wd(model, id_test[:, :5])  # wrong width
    with pytest.raises(wd.Error):
        wd.fit(train_x, train_y[:-1])  # label length mismatch
    with pytest.raises(wd.Error):
        wd.fit_knn(train_x[:3], k=10)  # k larger than the bank
    with pytest.raises(wd.Error):
        wd.read_features("/nonexistent/features.fmat")
    with pytest.raises(wd.Error):
        wd.generate_synth(d=8, c=2, ood_kind="bogus")
