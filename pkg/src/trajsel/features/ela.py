"""Sample-based exploratory landscape analysis features.

Only groups that need no extra evaluations: y-distribution, linear and
quadratic meta-models, dispersion, information content, nearest-better
clustering and principal components.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform
from scipy.stats import gaussian_kde

SCHEMA_VERSION = "1"

DISP_QUANTILES = (0.02, 0.05, 0.10, 0.25)
IC_EPSILON = np.insert(10.0 ** np.linspace(-5, 15, 1000), 0, 0.0)

_SCHEMA = (
    ["ela_distr.skewness", "ela_distr.kurtosis", "ela_distr.number_of_peaks",
     "ela_meta.lin_simple.adj_r2", "ela_meta.lin_simple.intercept",
     "ela_meta.lin_simple.coef.min", "ela_meta.lin_simple.coef.max",
     "ela_meta.lin_simple.coef.max_by_min", "ela_meta.lin_w_interact.adj_r2",
     "ela_meta.quad_simple.adj_r2", "ela_meta.quad_simple.cond"]
    + [f"disp.{stat}_{int(round(q * 100)):02d}"
       for stat in ("ratio_mean", "ratio_median", "diff_mean", "diff_median")
       for q in DISP_QUANTILES]
    + ["ic.h_max", "ic.eps_s", "ic.eps_max", "ic.eps_ratio", "ic.m0",
       "nbc.nn_nb.sd_ratio", "nbc.nn_nb.mean_ratio", "nbc.nn_nb.cor",
       "nbc.dist_ratio.coeff_var", "nbc.nb_fitness.cor"]
    + [f"pca.{kind}.{space}" for kind in ("expl_var", "expl_var_PC1")
       for space in ("cov_x", "cor_x", "cov_init", "cor_init")]
)

# features whose neutral value is 1 when undefined; everything else falls back to 0
_RATIO_LIKE = {n for n in _SCHEMA if "ratio" in n or n.endswith(("max_by_min", ".cond"))}


def feature_schema() -> list[str]:
    return list(_SCHEMA)


@dataclass
class SampleSet:
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=float).ravel()
        n, d = self.X.shape
        if len(self.y) != n:
            raise ValueError("X and y have different numbers of rows")
        if n < d + 2:
            raise ValueError(f"need at least D+2 = {d + 2} samples, got {n}")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise ValueError("samples must be finite")


@dataclass
class FeatureVector:
    names: list[str]
    values: np.ndarray
    imputed: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values.tolist()))

    def __len__(self):
        return len(self.names)


# ----------------------------------------------------------------- groups

def _distribution(y):
    n = len(y)
    dev = y - y.mean()
    s2 = np.sum(dev ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        skew = np.sqrt(n) * np.sum(dev ** 3) / s2 ** 1.5 * (1 - 1 / n) ** 1.5
        kurt = n * np.sum(dev ** 4) / s2 ** 2 * (1 - 1 / n) ** 2 - 3
    return {"ela_distr.skewness": skew, "ela_distr.kurtosis": kurt,
            "ela_distr.number_of_peaks": _number_of_peaks(y)}


def _number_of_peaks(y):
    if np.ptp(y) == 0:
        return np.nan
    kde = gaussian_kde(y)
    pad = 3 * kde.covariance_factor() * np.std(y, ddof=1)
    pos = np.linspace(y.min() - pad, y.max() + pad, 512)
    dens = kde(pos)
    n = len(dens)
    mins = [i for i in range(1, n - 2) if dens[i] < dens[i - 1] and dens[i] < dens[i + 1]]
    cuts = [0] + mins + [n]
    peaks = 0
    for a, nxt in zip(cuts[:-1], cuts[1:]):
        b = nxt - 1
        if b <= a:
            continue
        if dens[a:b].mean() + abs(pos[a] - pos[b]) > 0.1:
            peaks += 1
    return float(peaks)


def _lstsq(F, y):
    """Least squares with intercept; returns (intercept, coefs, R^2)."""
    A = np.column_stack([np.ones(len(y)), F])
    beta, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ beta
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else np.nan
    return beta[0], beta[1:], r2


def _adj(r2, n, p):
    return 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)


def _meta(X, y):
    n, d = X.shape
    icpt, coef, r2 = _lstsq(X, y)
    acoef = np.abs(coef)
    iu = np.triu_indices(d, 1)
    inter = np.column_stack([X, X[:, iu[0]] * X[:, iu[1]]])
    _, _, r2i = _lstsq(inter, y)
    _, qcoef, r2q = _lstsq(np.column_stack([X, X ** 2]), y)
    aq = np.abs(qcoef[d:])
    with np.errstate(invalid="ignore", divide="ignore"):
        return {
            "ela_meta.lin_simple.adj_r2": _adj(r2, n, d),
            "ela_meta.lin_simple.intercept": icpt,
            "ela_meta.lin_simple.coef.min": acoef.min(),
            "ela_meta.lin_simple.coef.max": acoef.max(),
            "ela_meta.lin_simple.coef.max_by_min": acoef.max() / acoef.min(),
            "ela_meta.lin_w_interact.adj_r2": _adj(r2i, n, inter.shape[1]),
            "ela_meta.quad_simple.adj_r2": _adj(r2q, n, 2 * d),
            "ela_meta.quad_simple.cond": aq.max() / aq.min(),
        }


def _dispersion(X, y, D):
    full = D[np.triu_indices(len(y), 1)]
    full = full[full != 0]
    mean_all, med_all = full.mean(), np.median(full)
    out = {}
    stats = {}
    for q, thr in zip(DISP_QUANTILES, np.quantile(y, DISP_QUANTILES)):
        idx = np.flatnonzero(y <= thr)
        sub = D[np.ix_(idx, idx)][np.triu_indices(len(idx), 1)]
        sub = sub[sub != 0]
        stats[q] = (sub.mean(), np.median(sub)) if len(sub) else (np.nan, np.nan)
    for q in DISP_QUANTILES:
        tag = f"{int(round(q * 100)):02d}"
        m, md = stats[q]
        out[f"disp.ratio_mean_{tag}"] = m / mean_all
        out[f"disp.ratio_median_{tag}"] = md / med_all
        out[f"disp.diff_mean_{tag}"] = m - mean_all
        out[f"disp.diff_median_{tag}"] = md - med_all
    return out


def _dedup(X, y):
    """Collapse repeated points to one row with the mean value, keeping first-seen order."""
    _, first, inverse = np.unique(X, axis=0, return_index=True, return_inverse=True)
    if len(first) == len(X):
        return X, y
    inverse = inverse.ravel()
    sums = np.bincount(inverse, weights=y)
    counts = np.bincount(inverse)
    order = np.argsort(first, kind="stable")
    return X[first[order]], (sums / counts)[order]


def _nn_tour(D, start=0):
    n = len(D)
    visited = np.zeros(n, dtype=bool)
    perm = [start]
    steps = []
    visited[start] = True
    cur = start
    for _ in range(n - 1):
        row = np.where(visited, np.inf, D[cur])
        nxt = int(np.argmin(row))
        steps.append(row[nxt])
        visited[nxt] = True
        perm.append(nxt)
        cur = nxt
    return np.array(perm), np.array(steps)


def _information_content(X, y):
    X, y = _dedup(X, y)
    D = squareform(pdist(X))
    perm, dist = _nn_tour(D)
    ratio = np.diff(y[perm]) / dist
    eps = IC_EPSILON
    psi = np.where(np.abs(ratio)[None, :] < eps[:, None], 0, np.sign(ratio)[None, :]).astype(int)
    a, b = psi[:, :-1], psi[:, 1:]
    m = a.shape[1]
    H = np.zeros(len(eps))
    for p, q in ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)):
        prob = np.sum((a == p) & (b == q), axis=1) / m
        with np.errstate(divide="ignore", invalid="ignore"):
            H -= np.where(prob > 0, prob * np.log(prob) / np.log(6), 0.0)
    M = np.empty(len(eps))
    n_sym = psi.shape[1]
    for k, row in enumerate(psi):
        nz = row[row != 0]
        M[k] = np.count_nonzero(np.diff(nz)) / (n_sym - 1)
    settled = eps[H < 0.05]
    m0 = M[0]
    informative = eps[M > 0.5 * m0]
    with np.errstate(divide="ignore"):
        return {
            "ic.h_max": H.max(),
            "ic.eps_s": np.log10(settled.min()) if len(settled) else np.nan,
            "ic.eps_max": np.median(eps[H == H.max()]),
            "ic.eps_ratio": np.log10(informative.max()) if len(informative) else np.nan,
            "ic.m0": m0,
        }


def _pearson(a, b):
    a = a - a.mean()
    b = b - b.mean()
    den = np.sqrt(np.sum(a * a) * np.sum(b * b))
    return np.sum(a * b) / den if den > 0 else np.nan


def _nbc(X, y, D):
    n = len(y)
    k = int(np.ceil(0.05 * n))
    Dn = D.copy()
    np.fill_diagonal(Dn, np.inf)
    order = np.argsort(Dn, axis=1, kind="stable")
    near = Dn[np.arange(n), order[:, 0]]
    nb_dist = np.full(n, np.nan)
    nb_idx = np.full(n, -1)
    for i in range(n):
        better = np.flatnonzero(y < y[i])
        if len(better) == 0:
            # the best point: fall back to equal values beyond the k-neighbourhood
            outside = np.setdiff1d(np.arange(n), np.append(order[i, :k - 1], i))
            better = outside[y[outside] == y[i]]
            if len(better) == 0:
                continue
        j = better[np.argmin(D[i, better])]
        nb_idx[i], nb_dist[i] = j, D[i, j]
    indeg = np.bincount(nb_idx[nb_idx >= 0], minlength=n).astype(float)
    nb_dist = np.where(np.isnan(nb_dist), near, nb_dist)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = near / nb_dist
        return {
            "nbc.nn_nb.sd_ratio": np.std(near, ddof=1) / np.std(nb_dist, ddof=1),
            "nbc.nn_nb.mean_ratio": near.mean() / nb_dist.mean(),
            "nbc.nn_nb.cor": _pearson(near, nb_dist),
            "nbc.dist_ratio.coeff_var": np.nanstd(ratio, ddof=1) / np.nanmean(ratio),
            "nbc.nb_fitness.cor": _pearson(indeg, y),
        }


def _pca_pair(A):
    ev = np.sort(np.linalg.eigvalsh(np.cov(A, rowvar=False)))[::-1]
    ev = np.maximum(ev, 0.0)
    share = np.cumsum(ev) / ev.sum()
    k = int(np.argmax(share >= 0.9 - 1e-12)) + 1
    return k / A.shape[1], ev[0] / ev.sum()


def _pca(X, y):
    init = np.column_stack([X, y])
    out = {}
    for space, A in (("cov_x", X), ("cov_init", init)):
        out[space] = _pca_pair(A)
    for space, A in (("cor_x", X), ("cor_init", init)):
        sd = A.std(axis=0, ddof=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            Z = (A - A.mean(axis=0)) / sd
        out[space] = _pca_pair(Z) if np.all(np.isfinite(Z)) else (np.nan, np.nan)
    res = {}
    for space in ("cov_x", "cor_x", "cov_init", "cor_init"):
        res[f"pca.expl_var.{space}"] = out[space][0]
        res[f"pca.expl_var_PC1.{space}"] = out[space][1]
    return res


def compute_features(s: SampleSet) -> FeatureVector:
    """All schema features for one sample set, with undefined values imputed."""
    if not isinstance(s, SampleSet):
        s = SampleSet(*s)
    X, y = s.X, s.y
    D = squareform(pdist(X))
    raw = {}
    raw.update(_distribution(y))
    if np.ptp(y) > 0:
        raw.update(_meta(X, y))
    raw.update(_dispersion(X, y, D))
    raw.update(_information_content(X, y))
    raw.update(_nbc(X, y, D))
    raw.update(_pca(X, y))
    values, imputed = [], []
    for name in _SCHEMA:
        v = raw.get(name, np.nan)
        v = float(v) if v is not None else np.nan
        if not np.isfinite(v):
            imputed.append(name)
            v = 1.0 if name in _RATIO_LIKE else 0.0
        values.append(v)
    return FeatureVector(list(_SCHEMA), np.array(values), imputed)
