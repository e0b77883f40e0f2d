import numpy as np
import pytest

from amiscreen.classifiers import (
    ClassifierSpec,
    fit_adaboost,
    fit_decision_tree,
    fit_gaussian_nb,
    fit_gmm,
    fit_gradient_boosting,
    fit_knn,
    fit_lda,
    fit_logistic_regression,
    fit_qda,
    fit_random_forest,
    fit_svm,
    kkt_violations,
    penalized_loss,
)
from amiscreen.classifiers.boosting import ALPHA_CAP
from amiscreen.classifiers.svm import kernel_matrix, resolve_gamma
from amiscreen.errors import SingularCovarianceError
from amiscreen.synthetic import separable_blobs


class TestLogisticRegression:
    def test_perfect_separation_stays_finite_and_optimal(self):
        X = np.repeat([[0.0], [1.0]], 50, axis=0)
        y = np.repeat([0, 1], 50)
        spec = ClassifierSpec("LR", {
            "penalty": "l1", "C": 0.1, "tol": 1e-6, "max_iter": 50000,
            "fit_intercept": True, "class_weight": None,
        })
        model = fit_logistic_regression(X, y, spec)
        assert (model.predict(X) == y).all()
        assert np.isfinite(model.coef).all() and np.isfinite(model.intercept)
        # The analytic optimum of the penalized objective: coef = 2*log(4),
        # intercept = -log(4).
        assert model.coef[0] == pytest.approx(2 * np.log(4.0), abs=1e-4)
        assert model.intercept == pytest.approx(-np.log(4.0), abs=1e-4)

        # Oracle: coarse lattice over (coef, intercept) cannot beat the solver.
        fitted = penalized_loss(X, y, model.coef, model.intercept, C=0.1)
        lattice = min(
            penalized_loss(X, y, np.array([b1]), b0, C=0.1)
            for b1 in np.linspace(-10, 10, 101)
            for b0 in np.linspace(-10, 10, 101)
        )
        assert fitted <= lattice + 1e-6

    def test_single_class_gives_intercept_only(self):
        X = np.random.default_rng(0).normal(size=(12, 3))
        model = fit_logistic_regression(X, np.ones(12, dtype=int), ClassifierSpec("LR"))
        assert np.all(model.coef == 0.0)
        assert model.predict_proba(X)[:, 1].min() > 0.5
        assert (model.predict(X) == 1).all()

    def test_xor_is_not_linearly_separable(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        y = np.array([0, 0, 1, 1])
        model = fit_logistic_regression(
            X, y, ClassifierSpec("LR", {"C": 1.0, "tol": 1e-6, "max_iter": 20000})
        )
        assert (model.predict(X) == y).mean() <= 0.75

    def test_balanced_weights_shift_decision(self):
        rng = np.random.default_rng(1)
        X = np.concatenate([rng.normal(-1, 1, size=(90, 1)), rng.normal(1, 1, size=(10, 1))])
        y = np.array([0] * 90 + [1] * 10)
        plain = fit_logistic_regression(
            X, y, ClassifierSpec("LR", {"C": 1.0, "class_weight": None})
        )
        balanced = fit_logistic_regression(
            X, y, ClassifierSpec("LR", {"C": 1.0, "class_weight": "balanced"})
        )
        from amiscreen.evaluation import confusion, recall

        assert recall(confusion(y, balanced.predict(X))) >= recall(confusion(y, plain.predict(X)))


class TestGaussianNB:
    def test_far_blobs_match_true_bayes_rule(self):
        rng = np.random.default_rng(2)
        X = np.vstack([rng.normal(-5, 1, size=(50, 2)), rng.normal(5, 1, size=(50, 2))])
        y = np.array([0] * 50 + [1] * 50)
        model = fit_gaussian_nb(X, y)
        assert (model.predict(X) == y).all()
        # Oracle: with true means (+-5) and unit variances the Bayes rule is
        # sign of the summed coordinates.
        oracle = (X.sum(axis=1) > 0).astype(int)
        assert (model.predict(X) == oracle).all()

    def test_one_row_per_class_bisector(self):
        X = np.array([[0.0, 0.0], [2.0, 0.0]])
        y = np.array([0, 1])
        model = fit_gaussian_nb(X, y)
        assert model.predict(np.array([[0.9, 5.0]]))[0] == 0
        assert model.predict(np.array([[1.1, -3.0]]))[0] == 1

    def test_identical_class_distributions_recover_priors(self):
        X = np.zeros((10, 2))
        y = np.array([1] * 6 + [0] * 4)
        model = fit_gaussian_nb(X, y)
        proba = model.predict_proba(np.zeros((3, 2)))
        assert proba[:, 1] == pytest.approx(0.6, abs=1e-9)


class TestDecisionTree:
    def test_single_split_threshold_scan_oracle(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0, 1, size=60)
        y = (x > 0.5).astype(int)
        X = x.reshape(-1, 1)
        model = fit_decision_tree(X, y, ClassifierSpec("DT", {"max_depth": 1}))
        assert (model.predict(X) == y).all()
        lo = x[x <= 0.5].max()
        hi = x[x > 0.5].min()
        assert lo < model.tree.threshold[0] < hi

    def test_root_only_is_majority_class(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(30, 3))
        y = np.array([1] * 20 + [0] * 10)
        model = fit_decision_tree(X, y, ClassifierSpec("DT", {"max_depth": 0}))
        assert (model.predict(X) == 1).all()

    def test_pure_node_never_splits(self):
        X = np.arange(10, dtype=float).reshape(-1, 1)
        model = fit_decision_tree(X, np.ones(10, dtype=int), ClassifierSpec("DT"))
        assert len(model.tree.feature) == 1

    def test_structure_honors_limits(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(200, 5))
        y = rng.integers(0, 2, size=200)
        spec = ClassifierSpec("DT", {"max_depth": 4, "min_samples_leaf": 7})
        model = fit_decision_tree(X, y, spec)
        tree = model.tree
        assert tree.depth() <= 4
        leaf_sizes = tree.n_samples[tree.feature == -1]
        assert leaf_sizes.min() >= 7

    def test_entropy_criterion_also_separates(self):
        X, y = separable_blobs(80, 3, margin=2.0, seed=6)
        model = fit_decision_tree(X, y, ClassifierSpec("DT", {"criterion": "entropy"}))
        assert (model.predict(X) == y).all()


class TestRandomForest:
    def test_single_tree_ensemble_equals_its_tree(self):
        X, y = separable_blobs(60, 4, margin=2.0, seed=7)
        model = fit_random_forest(
            X, y, ClassifierSpec("RF", {"n_estimators": 1, "max_features": "sqrt"}, seed=7)
        )
        counts = model.trees[0].leaf_values(X)
        tree_pred = (counts[:, 1] > counts[:, 0]).astype(int)
        assert np.array_equal(model.predict(X), tree_pred)

    def test_many_trees_fit_separable(self):
        X, y = separable_blobs(120, 4, margin=2.0, seed=8)
        model = fit_random_forest(
            X, y, ClassifierSpec("RF", {"n_estimators": 200, "max_features": "sqrt"}, seed=8)
        )
        assert (model.predict(X) == y).all()

    def test_probabilities_are_vote_fractions(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, size=50)
        n_trees = 25
        model = fit_random_forest(
            X, y, ClassifierSpec("RF", {"n_estimators": n_trees, "max_features": "sqrt"}, seed=9)
        )
        proba = model.predict_proba(rng.normal(size=(30, 3)))
        votes = proba[:, 1] * n_trees
        assert np.abs(votes - np.round(votes)).max() < 1e-9

    def test_ccp_alpha_prunes(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(80, 3))
        y = rng.integers(0, 2, size=80)
        full = fit_random_forest(X, y, ClassifierSpec("RF", {"n_estimators": 5, "ccp_alpha": 0.0}, seed=1))
        pruned = fit_random_forest(X, y, ClassifierSpec("RF", {"n_estimators": 5, "ccp_alpha": 0.2}, seed=1))
        n_nodes = lambda m: sum((t.feature != -1).sum() for t in m.trees)
        assert n_nodes(pruned) < n_nodes(full)


class TestSVM:
    def test_two_point_analytic_solution(self):
        X = np.array([[-1.0, -1.0], [1.0, 1.0]])
        y = np.array([0, 1])
        model = fit_svm(X, y, ClassifierSpec("SVM", {"C": 10.0, "kernel": "linear"}))
        w = model.dual_coef @ model.support_vectors
        direction = np.array([1.0, 1.0]) / np.sqrt(2.0)
        cosine = w @ direction / np.linalg.norm(w)
        assert cosine > 1 - 1e-6
        # Both points are support vectors with equal multipliers 0.25.
        assert len(model.dual_coef) == 2
        assert np.abs(model.dual_coef) == pytest.approx([0.25, 0.25], abs=1e-8)
        assert abs(model.intercept) < 1e-8
        assert model.decision_function(X) == pytest.approx([-1.0, 1.0], abs=1e-6)

    def test_conflicting_duplicate_labels_stay_finite(self):
        X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
        y = np.array([0, 1, 1])
        model = fit_svm(X, y, ClassifierSpec("SVM", {"C": 1.0, "kernel": "linear"}))
        f = model.decision_function(X)
        assert np.isfinite(f).all()
        # The contradictory pair cannot both satisfy the margin: slack is used.
        t = np.where(y == 1, 1.0, -1.0)
        assert (t * f < 1.0 - 1e-9).any()

    def test_rbf_kernel_self_similarity_is_one(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(10, 4))
        K = kernel_matrix("rbf", resolve_gamma("scale", X), X, X)
        assert np.diag(K) == pytest.approx(np.ones(10), abs=1e-12)

    def test_kkt_conditions_on_random_separable_sets(self):
        for seed in range(4):
            X, y = separable_blobs(60, 3, margin=2.0, seed=seed)
            spec = ClassifierSpec("SVM", {"C": 1.0, "kernel": "linear"})
            model = fit_svm(X, y, spec)
            t = np.where(y == 1, 1.0, -1.0)
            K = kernel_matrix("linear", model.gamma_value, X, X)
            # Rebuild the full alpha vector from stored support vectors.
            alpha = np.zeros(len(y))
            sv_rows = {tuple(row): i for i, row in enumerate(X)}
            for coef, sv in zip(model.dual_coef, model.support_vectors):
                alpha[sv_rows[tuple(sv)]] = abs(coef)
            margins = t * (K @ (alpha * t) + model.intercept)
            assert kkt_violations(alpha, margins, 1.0).max() < 1e-6
            assert abs(np.sum(alpha * t)) < 1e-6
            assert alpha.min() >= 0.0 and alpha.max() <= 1.0 + 1e-12

    def test_single_class_constant(self):
        X = np.zeros((5, 2))
        model = fit_svm(X, np.ones(5, dtype=int), ClassifierSpec("SVM"))
        assert (model.predict(X) == 1).all()


class TestKNN:
    def _five_points(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([0, 0, 1, 1, 1])
        return X, y

    def test_exact_match_short_circuit(self):
        X, y = self._five_points()
        model = fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 3, "weights": "distance", "p": 2}))
        proba = model.predict_proba(X[2:3])
        assert proba[0, 1] == 1.0

    def test_k_equals_n_uniform_is_global_majority(self):
        X, y = self._five_points()
        model = fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 5, "weights": "uniform", "p": 2}))
        queries = np.array([[-10.0, -10.0], [10.0, 10.0], [0.0, 0.0]])
        assert (model.predict(queries) == 1).all()  # 3 of 5 training labels are 1

    def test_three_nearest_hand_table(self):
        X, y = self._five_points()
        model = fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 3, "weights": "uniform", "p": 2}))
        # Hand distances from (0.4, 0.1): A=0.412, B=0.608, C=0.985, D=2.477, E=3.897.
        proba = model.predict_proba(np.array([[0.4, 0.1]]))
        assert model.predict(np.array([[0.4, 0.1]]))[0] == 0
        assert proba[0].tolist() == pytest.approx([2 / 3, 1 / 3], abs=1e-12)

    def test_manhattan_changes_neighbors(self):
        # From the origin: the diagonal point is nearer in L2 (1.13 < 1.2)
        # but farther in L1 (1.6 > 1.2).
        X = np.array([[0.8, 0.8], [1.2, 0.0]])
        y = np.array([1, 0])
        q = np.array([[0.0, 0.0]])
        l2 = fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 1, "p": 2, "weights": "uniform"}))
        l1 = fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 1, "p": 1, "weights": "uniform"}))
        assert l2.predict(q)[0] == 1
        assert l1.predict(q)[0] == 0

    def test_k_larger_than_training_is_rejected(self):
        X, y = self._five_points()
        with pytest.raises(ValueError):
            fit_knn(X, y, ClassifierSpec("KNN", {"n_neighbors": 6}))


class TestGradientBoosting:
    def test_zero_learning_rate_is_prior_model(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(40, 3))
        y = np.array([1] * 25 + [0] * 15)
        model = fit_gradient_boosting(
            X, y, ClassifierSpec("GB", {"learning_rate": 0.0, "n_estimators": 5, "subsample": 1.0})
        )
        prior = 25 / 40
        proba = model.predict_proba(X)
        assert proba[:, 1] == pytest.approx(prior, abs=1e-12)

    def test_separable_reaches_full_accuracy_with_monotone_loss(self):
        X, y = separable_blobs(100, 3, margin=2.0, seed=13)
        model = fit_gradient_boosting(
            X, y, ClassifierSpec("GB", {
                "learning_rate": 0.1, "n_estimators": 100, "subsample": 1.0, "max_depth": 3,
            })
        )
        assert (model.predict(X) == y).all()
        losses = np.array(model.train_losses)
        assert np.all(np.diff(losses) <= 1e-12)

    def test_staged_prefix_property(self):
        X, y = separable_blobs(60, 3, margin=2.0, seed=14)
        short = fit_gradient_boosting(
            X, y, ClassifierSpec("GB", {"n_estimators": 10, "subsample": 0.8}, seed=5)
        )
        long = fit_gradient_boosting(
            X, y, ClassifierSpec("GB", {"n_estimators": 11, "subsample": 0.8}, seed=5)
        )
        assert short.decision_function(X) == pytest.approx(
            long.decision_function(X, n_stages=10), abs=0.0
        )


class TestAdaBoost:
    def test_perfect_first_stump_caps_and_halts(self):
        X, y = separable_blobs(50, 2, margin=2.0, seed=15)
        model = fit_adaboost(X, y, ClassifierSpec("AB", {"n_estimators": 20, "algorithm": "SAMME"}))
        assert len(model.stumps) == 1
        assert model.alphas == [ALPHA_CAP]
        assert (model.predict(X) == y).all()

    def test_error_exactly_half_yields_zero_weight_and_halt(self):
        X = np.zeros((2, 1))
        y = np.array([0, 1])
        model = fit_adaboost(X, y, ClassifierSpec("AB", {"n_estimators": 10, "algorithm": "SAMME"}))
        assert model.errors[0] == pytest.approx(0.5, abs=1e-15)
        assert model.alphas == [0.0]
        assert len(model.stumps) == 1

    def test_three_round_hand_trace(self):
        # One feature, eight points; the labels force three distinct stumps.
        X = np.arange(8, dtype=float).reshape(-1, 1)
        y = np.array([1, 1, 0, 0, 0, 0, 1, 1])
        model = fit_adaboost(
            X, y, ClassifierSpec("AB", {"n_estimators": 3, "learning_rate": 1.0, "algorithm": "SAMME"})
        )
        # Manual table: stump thresholds 1.5, 5.5, 1.5; errors 1/4, 1/6, 1/5.
        assert [t.threshold[0] for t in model.stumps] == [1.5, 5.5, 1.5]
        assert model.errors == pytest.approx([0.25, 1 / 6, 0.2], abs=1e-10)
        expected_alphas = [0.5 * np.log(3.0), 0.5 * np.log(5.0), 0.5 * np.log(4.0)]
        assert model.alphas == pytest.approx(expected_alphas, abs=1e-10)
        w1 = [1 / 12] * 6 + [1 / 4] * 2
        w2 = [1 / 4, 1 / 4, 0.05, 0.05, 0.05, 0.05, 0.15, 0.15]
        w3 = [0.15625, 0.15625, 0.125, 0.125, 0.125, 0.125, 0.09375, 0.09375]
        assert model.weight_history[0].tolist() == pytest.approx(w1, abs=1e-10)
        assert model.weight_history[1].tolist() == pytest.approx(w2, abs=1e-10)
        assert model.weight_history[2].tolist() == pytest.approx(w3, abs=1e-10)
        assert (model.predict(X) == y).all()

    def test_samme_r_fits_separable(self):
        X, y = separable_blobs(60, 3, margin=2.0, seed=16)
        model = fit_adaboost(X, y, ClassifierSpec("AB", {"n_estimators": 10, "algorithm": "SAMME.R"}))
        assert (model.predict(X) == y).all()

    def test_staged_training_error_non_increasing_on_separable_data(self):
        # A rotated separator keeps any single axis-aligned stump imperfect,
        # so boosting actually runs several rounds.
        X, y = separable_blobs(80, 2, margin=2.0, seed=17)
        rot = np.array([[np.cos(0.7), -np.sin(0.7)], [np.sin(0.7), np.cos(0.7)]])
        X = X @ rot
        model = fit_adaboost(X, y, ClassifierSpec("AB", {"n_estimators": 30, "algorithm": "SAMME"}))
        assert len(model.stumps) > 2
        t = np.where(y == 1, 1.0, -1.0)
        staged_errors = []
        decision = np.zeros(len(y))
        for stump, a in zip(model.stumps, model.alphas):
            counts = stump.leaf_values(X)
            h = np.where(counts[:, 1] > counts[:, 0], 1.0, -1.0)
            decision += a * h
            staged_errors.append(float((np.sign(decision) != t).mean()))
        assert all(b <= a + 1e-12 for a, b in zip(staged_errors, staged_errors[1:]))
        assert staged_errors[-1] == 0.0


class TestDiscriminants:
    def test_equal_covariance_makes_lda_equal_qda(self):
        rng = np.random.default_rng(17)
        base = rng.normal(size=(40, 3))
        X = np.vstack([base, base + np.array([3.0, 1.0, -1.0])])
        y = np.array([0] * 40 + [1] * 40)
        lda = fit_lda(X, y, ClassifierSpec("LDA", {"solver": "lsqr", "shrinkage": None}))
        qda = fit_qda(X, y, ClassifierSpec("QDA", {"reg_param": 0.0}))
        queries = rng.normal(size=(200, 3)) * 3
        assert np.array_equal(lda.predict(queries), qda.predict(queries))

    def test_gmm_single_component_equals_qda(self):
        rng = np.random.default_rng(18)
        X = np.vstack([rng.normal(-2, 1, size=(60, 2)), rng.normal(2, 1.5, size=(60, 2))])
        y = np.array([0] * 60 + [1] * 60)
        gmm = fit_gmm(X, y, ClassifierSpec("GMM", {"n_components": 1, "covariance_type": "full"}))
        qda = fit_qda(X, y, ClassifierSpec("QDA", {"reg_param": 0.0}))
        queries = rng.normal(0, 2, size=(100, 2))
        assert gmm.predict_proba(queries) == pytest.approx(qda.predict_proba(queries), abs=1e-6)

    def test_em_log_likelihood_is_monotone(self):
        rng = np.random.default_rng(19)
        X = np.vstack([
            rng.normal(-3, 1, size=(50, 2)),
            rng.normal(0, 1, size=(50, 2)),
            rng.normal(3, 1, size=(60, 2)),
        ])
        y = np.array([0] * 100 + [1] * 60)
        model = fit_gmm(X, y, ClassifierSpec("GMM", {"n_components": 2, "covariance_type": "full"}, seed=19))
        for history in model.em_log_likelihoods.values():
            assert np.all(np.diff(history) >= -1e-10)

    def test_every_covariance_type_fits(self):
        X, y = separable_blobs(80, 3, margin=2.0, seed=20)
        for cov_type in ("spherical", "tied", "diag", "full"):
            model = fit_gmm(X, y, ClassifierSpec("GMM", {"n_components": 2, "covariance_type": cov_type}, seed=20))
            assert (model.predict(X) == y).mean() > 0.95

    def test_lda_solvers_agree(self):
        rng = np.random.default_rng(21)
        X = np.vstack([rng.normal(-1, 1, size=(30, 4)), rng.normal(1, 1, size=(30, 4))])
        y = np.array([0] * 30 + [1] * 30)
        lsqr = fit_lda(X, y, ClassifierSpec("LDA", {"solver": "lsqr"}))
        eigen = fit_lda(X, y, ClassifierSpec("LDA", {"solver": "eigen"}))
        q = rng.normal(size=(50, 4))
        assert lsqr.predict_proba(q) == pytest.approx(eigen.predict_proba(q), abs=1e-8)

    def test_lda_projection_invariant_under_affine_maps(self):
        rng = np.random.default_rng(22)
        X = np.vstack([rng.normal(-1, 1, size=(40, 3)), rng.normal(1.5, 1, size=(40, 3))])
        y = np.array([0] * 40 + [1] * 40)
        base = fit_lda(X, y, ClassifierSpec("LDA", {"shrinkage": None}))
        proj_base = (X - X.mean(axis=0)) @ base.projection
        for _ in range(5):
            M = rng.normal(size=(3, 3)) + 3.0 * np.eye(3)
            c = rng.normal(size=3)
            Xt = X @ M + c
            mapped = fit_lda(Xt, y, ClassifierSpec("LDA", {"shrinkage": None}))
            proj_mapped = (Xt - Xt.mean(axis=0)) @ mapped.projection
            cosine = proj_base @ proj_mapped / (
                np.linalg.norm(proj_base) * np.linalg.norm(proj_mapped)
            )
            assert abs(cosine) > 1 - 1e-6

    def test_lda_shrinkage_handles_singular_pooled_covariance(self):
        X = np.zeros((20, 3))
        X[:, 0] = np.arange(20)
        y = np.array([0, 1] * 10)
        with pytest.raises(SingularCovarianceError):
            fit_lda(X, y, ClassifierSpec("LDA", {"shrinkage": None}))
        model = fit_lda(X, y, ClassifierSpec("LDA", {"shrinkage": 0.5}))
        assert np.isfinite(model.predict_proba(X)).all()

    def test_qda_singular_names_class(self):
        rng = np.random.default_rng(23)
        X = np.vstack([np.zeros((10, 2)), rng.normal(size=(10, 2))])
        y = np.array([0] * 10 + [1] * 10)
        with pytest.raises(SingularCovarianceError) as excinfo:
            fit_qda(X, y, ClassifierSpec("QDA", {"reg_param": 0.0}))
        assert excinfo.value.class_label == 0
        model = fit_qda(X, y, ClassifierSpec("QDA", {"reg_param": 0.1}))
        assert np.isfinite(model.predict_proba(X)).all()

    def test_ledoit_wolf_auto_shrinkage_fits(self):
        X, y = separable_blobs(60, 4, margin=2.0, seed=24)
        model = fit_lda(X, y, ClassifierSpec("LDA", {"shrinkage": "auto"}))
        assert (model.predict(X) == y).all()
