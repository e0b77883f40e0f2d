import numpy as np
import pytest

from amiscreen.classifiers import ClassifierSpec, fit
from amiscreen.errors import StratificationError
from amiscreen.model_selection import (
    PRESET_GRIDS,
    ParamGrid,
    cross_val_score,
    grid_search,
    make_folds,
)
from amiscreen.preprocessing import apply_scalers, fit_scalers
from amiscreen.synthetic import SyntheticSpec, generate_synthetic, separable_blobs


class TestMakeFolds:
    def test_225_rows_five_equal_folds(self):
        y = np.array([1] * 128 + [0] * 97)
        plan = make_folds(y, 5, seed=0)
        sizes = [plan.fold_rows(f).size for f in range(5)]
        assert sizes == [45] * 5

    def test_ten_rows_five_folds_one_of_each(self):
        y = np.array([1] * 5 + [0] * 5)
        plan = make_folds(y, 5, seed=1)
        for f in range(5):
            rows = plan.fold_rows(f)
            assert rows.size == 2
            assert y[rows].sum() == 1

    def test_seven_rows_two_folds(self):
        y = np.array([1] * 4 + [0] * 3)
        plan = make_folds(y, 2, seed=2)
        sizes = sorted(plan.fold_rows(f).size for f in range(2))
        assert sizes == [3, 4]
        # The 4-row class splits 2/2; the 3-row class splits 2/1.
        pos_counts = sorted(int(y[plan.fold_rows(f)].sum()) for f in range(2))
        assert pos_counts == [2, 2]

    def test_folds_partition_rows(self):
        y = np.random.default_rng(3).integers(0, 2, size=53)
        plan = make_folds(y, 4, seed=3)
        all_rows = np.concatenate([plan.fold_rows(f) for f in range(4)])
        assert sorted(all_rows.tolist()) == list(range(53))

    def test_fold_sizes_differ_by_at_most_one(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(20, 120))
            y = rng.integers(0, 2, size=n)
            k = int(rng.integers(2, 6))
            if min((y == 0).sum(), (y == 1).sum()) < k:
                continue
            plan = make_folds(y, k, seed=int(rng.integers(1000)))
            sizes = [plan.fold_rows(f).size for f in range(k)]
            assert max(sizes) - min(sizes) <= 1
            # Class ratio within one row of proportional.
            for f in range(k):
                rows = plan.fold_rows(f)
                expected = y.sum() * rows.size / n
                assert abs(int(y[rows].sum()) - expected) <= 1.0

    def test_small_class_rejected(self):
        y = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 1])
        with pytest.raises(StratificationError):
            make_folds(y, 5, seed=0)

    def test_plain_folds_skip_class_balance(self):
        y = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 1])
        plan = make_folds(y, 5, seed=0, stratify=False)
        sizes = [plan.fold_rows(f).size for f in range(5)]
        assert sizes == [2] * 5
        all_rows = np.concatenate([plan.fold_rows(f) for f in range(5)])
        assert sorted(all_rows.tolist()) == list(range(10))


class TestCrossValScore:
    def test_separable_data_scores_one(self):
        X, y = separable_blobs(60, 3, margin=2.0, seed=5)
        plan = make_folds(y, 5, seed=5)
        scores = cross_val_score(ClassifierSpec("LDA"), X, y, plan)
        assert scores.tolist() == [1.0] * 5

    def test_random_labels_score_near_half(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(225, 5))
        y = rng.integers(0, 2, size=225)
        plan = make_folds(y, 5, seed=7)
        scores = cross_val_score(ClassifierSpec("GNB"), X, y, plan)
        assert abs(scores.mean() - 0.5) <= 0.15

    def test_exactly_one_fit_per_fold(self, monkeypatch):
        import amiscreen.model_selection as ms

        calls = []
        original = ms.fit_fold_pipeline

        def counting(spec, X, y):
            calls.append(X.shape[0])
            return original(spec, X, y)

        monkeypatch.setattr(ms, "fit_fold_pipeline", counting)
        X, y = separable_blobs(50, 3, margin=2.0, seed=8)
        plan = make_folds(y, 5, seed=8)
        cross_val_score(ClassifierSpec("GNB"), X, y, plan)
        assert len(calls) == 5

    def test_fold_errors_carry_fold_index(self):
        X = np.zeros((40, 2))
        X[:, 0] = np.arange(40)
        y = np.array([0, 1] * 20)
        plan = make_folds(y, 4, seed=9)
        with pytest.raises(Exception, match="fold 0"):
            cross_val_score(ClassifierSpec("LDA", {"shrinkage": None}), X, y, plan)


class TestGridSearch:
    def _small_grid(self):
        return ParamGrid("KNN", {
            "n_neighbors": [3, 5],
            "weights": ["uniform", "distance"],
            "p": [1, 2],
        })

    def test_matches_independent_exhaustive_loop(self, small_dataset):
        X, y = small_dataset.X, small_dataset.y
        plan = make_folds(y, 5, seed=10)
        grid = self._small_grid()
        result = grid_search(grid, X, y, plan, seed=10)

        # Independent loop: same folds, same specs, hand-rolled pipeline.
        best_mean, best_params = -np.inf, None
        for params in grid.candidates():
            fold_scores = []
            for f in range(plan.n_folds):
                tr, te = plan.train_rows(f), plan.fold_rows(f)
                scalers = fit_scalers(X[tr])
                model = fit(apply_scalers(X[tr], scalers), y[tr], ClassifierSpec("KNN", params, 10))
                pred = model.predict(apply_scalers(X[te], scalers))
                fold_scores.append(float((pred == y[te]).mean()))
            mean = float(np.mean(fold_scores))
            if mean > best_mean:
                best_mean, best_params = mean, params
        assert result.best_mean_score == best_mean
        assert result.candidates[result.best_index].params == best_params

    def test_single_point_grid(self, small_dataset):
        grid = ParamGrid("QDA", {"reg_param": [0.3]})
        plan = make_folds(small_dataset.y, 5, seed=11)
        result = grid_search(grid, small_dataset.X, small_dataset.y, plan, seed=11)
        assert result.best_spec.hyperparameters == {"reg_param": 0.3}
        assert len(result.candidates) == 1

    def test_best_dominates_table(self, small_dataset):
        grid = ParamGrid("DT", {"criterion": ["gini", "entropy"], "max_depth": [2, 5]})
        plan = make_folds(small_dataset.y, 5, seed=12)
        result = grid_search(grid, small_dataset.X, small_dataset.y, plan, seed=12)
        assert all(result.best_mean_score >= c.mean_score for c in result.candidates)

    def test_failing_candidate_scores_minus_inf(self):
        # A 4-row class with n_neighbors=40 cannot fit: candidate fails,
        # the search survives and the other candidate wins.
        X, y = separable_blobs(48, 3, margin=2.0, seed=13)
        plan = make_folds(y, 4, seed=13)
        grid = ParamGrid("KNN", {"n_neighbors": [40, 3], "weights": ["uniform"], "p": [2]})
        result = grid_search(grid, X, y, plan, seed=13)
        assert result.candidates[0].mean_score == -np.inf
        assert result.candidates[0].error is not None
        assert result.best_spec.hyperparameters["n_neighbors"] == 3

    def test_refit_model_sees_all_rows(self, small_dataset):
        grid = ParamGrid("GNB", {})
        plan = make_folds(small_dataset.y, 5, seed=14)
        result = grid_search(grid, small_dataset.X, small_dataset.y, plan, seed=14)
        direct_scalers = fit_scalers(small_dataset.X)
        assert np.array_equal(result.refit_scalers.standardizer.mean, direct_scalers.standardizer.mean)

    def test_preset_grid_cardinalities(self):
        assert len(PRESET_GRIDS["SVM"].candidates()) == 18  # 3 * 3 * 2
        assert len(PRESET_GRIDS["GNB"].candidates()) == 1
        assert PRESET_GRIDS["GNB"].candidates() == [{}]
        assert len(PRESET_GRIDS["QDA"].candidates()) == 11
        assert len(PRESET_GRIDS["LR"].candidates()) == 432
        assert len(PRESET_GRIDS["KNN"].candidates()) == 48

    def test_no_leakage_from_scored_folds(self):
        # Poisoning the scored fold's rows must not change fitted parameters.
        X, y = separable_blobs(50, 3, margin=2.0, seed=15)
        plan = make_folds(y, 5, seed=15)
        captured = {}

        import amiscreen.model_selection as ms

        original = ms.fit_fold_pipeline

        def capture(spec, Xf, yf):
            scalers, model = original(spec, Xf, yf)
            captured.setdefault("means", []).append(scalers.standardizer.mean.copy())
            return scalers, model

        X_poisoned = X.copy()
        fold0 = plan.fold_rows(0)
        X_poisoned[fold0] = 1e9

        try:
            ms.fit_fold_pipeline = capture
            cross_val_score(ClassifierSpec("GNB"), X, y, plan)
            clean_mean = captured["means"][0]
            captured["means"] = []
            cross_val_score(ClassifierSpec("GNB"), X_poisoned, y, plan)
            poisoned_mean = captured["means"][0]
        finally:
            ms.fit_fold_pipeline = original
        assert np.array_equal(clean_mean, poisoned_mean)


def test_grid_rejects_unknown_axis():
    with pytest.raises(ValueError):
        ParamGrid("SVM", {"bogus": [1]})
