"""Feature reduction: chi-square scoring, recursive elimination over
logistic regression, principal-component loadings, and the unanimity vote
that intersects the three selectors' top-K lists.

Routing convention: the chi-square selector sees raw encoded values
(numeric columns quartile-binned), the other two see standardized values.
Ties break by ascending column index everywhere so reports are
deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .classifiers import ClassifierSpec, fit_logistic_regression
from .data import Dataset
from .preprocessing import fit_standardizer, transform_standardize

EIGENVALUE_NULL = 1e-12

# The production feature mask: the voted set the default pipeline trains on.
DEFAULT_FEATURE_MASK: tuple[str, ...] = (
    "New1a3", "New1a4", "New1a5", "New1a7",
    "New1b1", "New1b2", "New1b3",
    "New1c1",
    "New2a1", "New2a3", "New2a4", "New2a5", "New2a6", "New2a7",
    "New2b", "New2c",
    "New2d1", "New2d2", "New2d3", "New2d4",
)

_RFE_SPEC = ClassifierSpec(
    "LR",
    {"penalty": "l1", "C": 1.0, "tol": 1e-4, "max_iter": 5000, "fit_intercept": True},
)


@dataclass(frozen=True)
class RankedFeatures:
    selector: str  # CHS | RFE | PCA
    K: int
    features: tuple[str, ...]  # best first
    scores: tuple[float, ...]

    def __post_init__(self):
        if self.selector not in ("CHS", "RFE", "PCA"):
            raise ValueError(f"unknown selector {self.selector!r}")
        if len(self.features) != self.K or len(self.scores) != self.K:
            raise ValueError("features/scores must have exactly K entries")
        if len(set(self.features)) != len(self.features):
            raise ValueError("duplicate feature codes in ranking")


@dataclass(frozen=True)
class SelectionReport:
    per_k: dict[int, dict] = field(default_factory=dict)
    # per_k[K] = {"chs": RankedFeatures, "rfe": ..., "pca": ...,
    #             "voted": tuple of codes, "empty_vote": bool}

    def voted_sizes(self) -> dict[int, int]:
        return {k: len(v["voted"]) for k, v in sorted(self.per_k.items())}

    def to_dict(self) -> dict:
        out = {}
        for k, entry in sorted(self.per_k.items()):
            ranked = {
                key: [
                    {"feature": code, "score": float(score)}
                    for code, score in zip(entry[key].features, entry[key].scores)
                ]
                for key in ("chs", "rfe", "pca")
            }
            out[str(k)] = {**ranked, "voted": list(entry["voted"])}
        return out


def chi2_scores(X, y) -> np.ndarray:
    """Chi-square statistic of each feature's contingency table against y.

    Cells must be small non-negative integers (category indexes). Expected
    counts are row*column products over the table total; cells with zero
    expectation contribute nothing. A single-category feature scores 0.
    """
    X = np.asarray(X)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    if np.any(X < 0):
        raise ValueError("chi-square requires non-negative category values")
    if not np.all(X == np.floor(X)):
        raise ValueError("chi-square requires integral category values")

    n = X.shape[0]
    scores = np.zeros(X.shape[1])
    class_totals = np.array([(y == 0).sum(), (y == 1).sum()], dtype=float)
    for f in range(X.shape[1]):
        col = X[:, f].astype(int)
        categories = np.unique(col)
        if categories.size < 2:
            continue
        observed = np.zeros((categories.size, 2))
        for i, cat in enumerate(categories):
            mask = col == cat
            observed[i, 0] = (y[mask] == 0).sum()
            observed[i, 1] = (y[mask] == 1).sum()
        row_totals = observed.sum(axis=1)
        expected = np.outer(row_totals, class_totals) / n
        with np.errstate(invalid="ignore", divide="ignore"):
            terms = (observed - expected) ** 2 / expected
        scores[f] = terms[expected > 0].sum()
    return scores


def discretize_for_chi2(d: Dataset) -> np.ndarray:
    """Integer category matrix for chi-square: numeric columns are binned
    into quartiles, binary/ordinal columns pass through as integers."""
    X = np.asarray(d.X, dtype=float)
    out = np.empty_like(X)
    for c, spec in enumerate(d.schema):
        col = X[:, c]
        if spec.kind == "numeric":
            edges = np.quantile(col, [0.25, 0.5, 0.75])
            out[:, c] = np.searchsorted(edges, col, side="left")
        else:
            out[:, c] = col
    return out


def _top_k(scores: np.ndarray, K: int, codes: list[str], selector: str) -> RankedFeatures:
    if K < 1:
        raise ValueError("K must be at least 1")
    if K > scores.shape[0]:
        raise ValueError(f"K={K} exceeds the {scores.shape[0]} available features")
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    chosen = order[:K]
    return RankedFeatures(
        selector, K,
        tuple(codes[i] for i in chosen),
        tuple(float(scores[i]) for i in chosen),
    )


def select_k_best_chi2(X, y, K, codes: list[str]) -> RankedFeatures:
    return _top_k(chi2_scores(X, y), K, codes, "CHS")


def rfe_logreg(X, y, K, codes: list[str]) -> RankedFeatures:
    """Drop the smallest-|coefficient| feature one at a time until K remain.

    The kept features are reported best-first by the final model's
    coefficient magnitude; their recorded rank score is 1.
    """
    X = np.asarray(X, dtype=float)
    if K < 1:
        raise ValueError("K must be at least 1")
    if K > X.shape[1]:
        raise ValueError(f"K={K} exceeds the {X.shape[1]} available features")

    remaining = list(range(X.shape[1]))
    while len(remaining) > K:
        model = fit_logistic_regression(X[:, remaining], y, _RFE_SPEC)
        weakest = int(np.lexsort((np.arange(len(remaining)), np.abs(model.coef)))[0])
        remaining.pop(weakest)

    final = fit_logistic_regression(X[:, remaining], y, _RFE_SPEC)
    order = np.lexsort((np.arange(len(remaining)), -np.abs(final.coef)))
    kept = [remaining[i] for i in order]
    return RankedFeatures("RFE", K, tuple(codes[i] for i in kept), tuple([1.0] * K))


def pca_loading_select(X, K, codes: list[str]) -> RankedFeatures:
    """Rank features by their largest absolute loading on the top-K
    principal components of the covariance of (centered) X."""
    X = np.asarray(X, dtype=float)
    if K < 1:
        raise ValueError("K must be at least 1")
    if K > X.shape[1]:
        raise ValueError(f"K={K} exceeds the {X.shape[1]} available features")

    cov = np.cov(X, rowvar=False, bias=True)
    cov = np.atleast_2d(cov)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    live = eigvals >= EIGENVALUE_NULL  # rank-deficient directions carry no signal
    components = eigvecs[:, : K][:, live[:K]]
    if components.shape[1] == 0:
        scores = np.zeros(X.shape[1])
    else:
        scores = np.abs(components).max(axis=1)
    return _top_k(scores, K, codes, "PCA")


def majority_vote(selected: list, threshold: int | None = None) -> set:
    """Features chosen by at least ``threshold`` selectors (default: all).

    An empty result is returned with a warning, not an error.
    """
    sets = [set(s) for s in selected]
    if not sets:
        raise ValueError("at least one selector result is required")
    m = len(sets) if threshold is None else int(threshold)
    if not 1 <= m <= len(sets):
        raise ValueError(f"threshold must lie in [1, {len(sets)}]")
    counts: dict = {}
    for s in sets:
        for code in s:
            counts[code] = counts.get(code, 0) + 1
    voted = {code for code, c in counts.items() if c >= m}
    if not voted:
        warnings.warn("selector vote produced an empty feature set", stacklevel=2)
    return voted


def sweep_k(d: Dataset, Ks: list[int], vote_threshold: int | None = None) -> SelectionReport:
    """Run all three selectors at each K and intersect their choices."""
    codes = d.codes
    for K in Ks:
        if K > len(codes):
            raise ValueError(f"K={K} exceeds the {len(codes)} available features")

    X_categories = discretize_for_chi2(d)
    std = fit_standardizer(d.X)
    X_standardized = transform_standardize(d.X, std)

    per_k = {}
    for K in Ks:
        chs = select_k_best_chi2(X_categories, d.y, K, codes)
        rfe = rfe_logreg(X_standardized, d.y, K, codes)
        pca = pca_loading_select(X_standardized, K, codes)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            voted = majority_vote([chs.features, rfe.features, pca.features], vote_threshold)
        ordered = tuple(c for c in codes if c in voted)
        per_k[int(K)] = {
            "chs": chs,
            "rfe": rfe,
            "pca": pca,
            "voted": ordered,
            "empty_vote": len(ordered) == 0,
        }
    return SelectionReport(per_k)
