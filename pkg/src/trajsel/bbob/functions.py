"""The 24 noiseless BBOB functions.

Each builder returns a ``BbobFunction`` whose ``values(X)`` evaluates a batch
of row vectors. Transformations follow the legacy C conventions: matrices act
on column vectors (``z = M @ x``), so batches use ``X @ M.T``.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rng import compute_fopt, compute_rotation, compute_xopt, gauss, unif


@dataclass(frozen=True)
class BbobFunction:
    function_id: int
    dimension: int
    x_opt: np.ndarray
    f_opt: float
    raw: Callable[[np.ndarray], np.ndarray]

    def values(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.raw(X) + self.f_opt


# ---------------------------------------------------------------- transforms

def t_osz(x):
    """Oscillation transform, elementwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos, neg = x > 0, x < 0
    with np.errstate(divide="ignore"):
        lp = np.log(np.where(pos, x, 1.0)) / 0.1
        ln = np.log(np.where(neg, -x, 1.0)) / 0.1
    out = np.where(pos, np.exp(lp + 0.49 * (np.sin(lp) + np.sin(0.79 * lp))) ** 0.1, out)
    out = np.where(neg, -np.exp(ln + 0.49 * (np.sin(0.55 * ln) + np.sin(0.31 * ln))) ** 0.1, out)
    return out


def t_asy(X, beta):
    d = X.shape[-1]
    expo = 1.0 + beta * np.arange(d) / (d - 1) * np.sqrt(np.maximum(X, 0.0))
    return np.where(X > 0, np.abs(X) ** expo, X)


def lam(alpha, d):
    """Diagonal of the conditioning matrix, ``alpha ** (i / (2 (d - 1)))``."""
    return np.sqrt(alpha) ** (np.arange(d) / (d - 1))


def boundary_penalty(X):
    return np.sum(np.maximum(np.abs(X) - 5.0, 0.0) ** 2, axis=1)


def rastrigin(Z):
    d = Z.shape[1]
    return 10.0 * (d - np.sum(np.cos(2 * np.pi * Z), axis=1)) + np.sum(Z * Z, axis=1)


def rosenbrock(Z):
    return np.sum(100.0 * (Z[:, :-1] ** 2 - Z[:, 1:]) ** 2 + (Z[:, :-1] - 1.0) ** 2, axis=1)


def _seed(fid, iid):
    return fid + 10000 * iid


def _scaled_pair(rseed, d, alpha):
    """``rot(rseed + 1e6) @ diag(lam) @ rot(rseed)``."""
    r1 = compute_rotation(rseed + 1000000, d)
    r2 = compute_rotation(rseed, d)
    return r1 @ np.diag(lam(alpha, d)) @ r2, r1, r2


# ------------------------------------------------------------ separable 1-5

def f1(iid, d):
    rs = _seed(1, iid)
    xo = compute_xopt(rs, d)
    return xo, lambda X: np.sum((X - xo) ** 2, axis=1)


def f2(iid, d):
    rs = _seed(2, iid)
    xo = compute_xopt(rs, d)
    w = 1e6 ** (np.arange(d) / (d - 1))
    return xo, lambda X: t_osz(X - xo) ** 2 @ w


def f3(iid, d):
    rs = _seed(3, iid)
    xo = compute_xopt(rs, d)
    cond = lam(10.0, d)
    return xo, lambda X: rastrigin(cond * t_asy(t_osz(X - xo), 0.2))


def f4(iid, d):
    rs = _seed(3, iid)
    xo = compute_xopt(rs, d)
    xo[::2] = np.abs(xo[::2])
    base = lam(10.0, d)
    even = (np.arange(d) % 2) == 0

    def raw(X):
        Z = t_osz(X - xo)
        fac = np.where((Z > 0) & even, 10.0 * base, base)
        return rastrigin(fac * Z) + 100.0 * boundary_penalty(X)
    return xo, raw


def f5(iid, d):
    rs = _seed(5, iid)
    xo = 5.0 * np.where(compute_xopt(rs, d) > 0, 1.0, -1.0)
    s = np.sign(xo) * lam(100.0, d)

    def raw(X):
        Z = np.where(X * xo < 25.0, X, xo)
        return np.sum(5.0 * np.abs(s) - s * Z, axis=1)
    return xo, raw


# ------------------------------------------------------ low conditioning 6-9

def f6(iid, d):
    rs = _seed(6, iid)
    xo = compute_xopt(rs, d)
    M, _, _ = _scaled_pair(rs, d, 10.0)

    def raw(X):
        Z = (X - xo) @ M.T
        Z = np.where(Z * xo > 0, 100.0 * Z, Z)
        return t_osz(np.sum(Z * Z, axis=1)) ** 0.9
    return xo, raw


def f7(iid, d):
    rs = _seed(7, iid)
    xo = compute_xopt(rs, d)
    r1 = compute_rotation(rs + 1000000, d)
    r2 = compute_rotation(rs, d)
    A = np.diag(lam(10.0, d)) @ r2
    w = 100.0 ** (np.arange(d) / (d - 1))

    def raw(X):
        Zh = (X - xo) @ A.T
        z1 = Zh[:, 0].copy()
        Zt = np.where(np.abs(Zh) > 0.5, np.floor(Zh + 0.5), np.floor(10.0 * Zh + 0.5) / 10.0)
        Z = Zt @ r1.T
        val = np.maximum(np.abs(z1) * 1e-4, (Z * Z) @ w)
        return 0.1 * val + boundary_penalty(X)
    return xo, raw


def f8(iid, d):
    rs = _seed(8, iid)
    xo = 0.75 * compute_xopt(rs, d)
    fac = max(1.0, np.sqrt(d) / 8.0)
    return xo, lambda X: rosenbrock(fac * (X - xo) + 1.0)


def f9(iid, d):
    rs = _seed(9, iid)
    fac = max(1.0, np.sqrt(d) / 8.0)
    R = compute_rotation(rs, d)
    M = fac * R
    xo = np.linalg.solve(M, np.full(d, 0.5))
    return xo, lambda X: rosenbrock(X @ M.T + 0.5)


# ----------------------------------------------------- high conditioning 10-14

def f10(iid, d):
    rs = _seed(10, iid)
    xo = compute_xopt(rs, d)
    R = compute_rotation(rs + 1000000, d)
    w = 1e6 ** (np.arange(d) / (d - 1))
    return xo, lambda X: t_osz((X - xo) @ R.T) ** 2 @ w


def f11(iid, d):
    rs = _seed(11, iid)
    xo = compute_xopt(rs, d)
    R = compute_rotation(rs + 1000000, d)
    w = np.ones(d)
    w[0] = 1e6
    return xo, lambda X: t_osz((X - xo) @ R.T) ** 2 @ w


def f12(iid, d):
    rs = _seed(12, iid)
    xo = compute_xopt(rs + 1000000, d)
    R = compute_rotation(rs + 1000000, d)
    w = np.full(d, 1e6)
    w[0] = 1.0
    return xo, lambda X: (t_asy((X - xo) @ R.T, 0.5) @ R.T) ** 2 @ w


def f13(iid, d):
    rs = _seed(13, iid)
    xo = compute_xopt(rs, d)
    M, _, _ = _scaled_pair(rs, d, 10.0)

    def raw(X):
        Z = (X - xo) @ M.T
        return Z[:, 0] ** 2 + 100.0 * np.sqrt(np.sum(Z[:, 1:] ** 2, axis=1))
    return xo, raw


def f14(iid, d):
    rs = _seed(14, iid)
    xo = compute_xopt(rs, d)
    R = compute_rotation(rs + 1000000, d)
    e = 2.0 + 4.0 * np.arange(d) / (d - 1)
    return xo, lambda X: np.sqrt(np.sum(np.abs((X - xo) @ R.T) ** e, axis=1))


# ------------------------------------------- multimodal, adequate structure

def f15(iid, d):
    rs = _seed(15, iid)
    xo = compute_xopt(rs, d)
    M, r1, _ = _scaled_pair(rs, d, 10.0)
    return xo, lambda X: rastrigin(t_asy(t_osz((X - xo) @ r1.T), 0.2) @ M.T)


_WK = 0.5 ** np.arange(12)
_WB = 3.0 ** np.arange(12)
_WF0 = float(np.sum(_WK * np.cos(np.pi * _WB)))


def f16(iid, d):
    rs = _seed(16, iid)
    xo = compute_xopt(rs, d)
    r1 = compute_rotation(rs + 1000000, d)
    r2 = compute_rotation(rs, d)
    M = r1 @ np.diag(0.1 ** (np.arange(d) / (d - 1))) @ r2

    def raw(X):
        Z = t_osz((X - xo) @ r1.T) @ M.T
        s = np.cos(2 * np.pi * (Z[..., None] + 0.5) * _WB) @ _WK
        val = 10.0 * (np.sum(s, axis=1) / d - _WF0) ** 3
        return val + 10.0 / d * boundary_penalty(X)
    return xo, raw


def _schaffers(fid, cond):
    def build(iid, d):
        rs = _seed(fid, iid)
        xo = compute_xopt(rs, d)
        r1 = compute_rotation(rs + 1000000, d)
        r2 = compute_rotation(rs, d)
        M = np.diag(lam(cond, d)) @ r2

        def raw(X):
            Z = t_asy((X - xo) @ r1.T, 0.5) @ M.T
            s = Z[:, :-1] ** 2 + Z[:, 1:] ** 2
            tot = np.sum(s ** 0.25 * (1.0 + np.sin(50.0 * s ** 0.1) ** 2), axis=1)
            return (tot / (d - 1)) ** 2 + 10.0 * boundary_penalty(X)
        return xo, raw
    return build


f17 = _schaffers(17, 10.0)


def f18(iid, d):
    # f18 shares the random stream of f17 and only differs in conditioning
    rs = _seed(17, iid)
    xo = compute_xopt(rs, d)
    r1 = compute_rotation(rs + 1000000, d)
    r2 = compute_rotation(rs, d)
    M = np.diag(lam(1000.0, d)) @ r2

    def raw(X):
        Z = t_asy((X - xo) @ r1.T, 0.5) @ M.T
        s = Z[:, :-1] ** 2 + Z[:, 1:] ** 2
        tot = np.sum(s ** 0.25 * (1.0 + np.sin(50.0 * s ** 0.1) ** 2), axis=1)
        return (tot / (d - 1)) ** 2 + 10.0 * boundary_penalty(X)
    return xo, raw


def f19(iid, d):
    rs = _seed(19, iid)
    fac = max(1.0, np.sqrt(d) / 8.0)
    M = fac * compute_rotation(rs, d)
    xo = np.linalg.solve(M, np.full(d, 0.5))

    def raw(X):
        Z = X @ M.T + 0.5
        s = 100.0 * (Z[:, :-1] ** 2 - Z[:, 1:]) ** 2 + (1.0 - Z[:, :-1]) ** 2
        return 10.0 + 10.0 * np.sum(s / 4000.0 - np.cos(s), axis=1) / (d - 1)
    return xo, raw


# ------------------------------------------- multimodal, weak structure

def f20(iid, d):
    rs = _seed(20, iid)
    sign = np.where(unif(d, rs) - 0.5 < 0, -1.0, 1.0)
    xo = 0.5 * 4.2096874637 * sign
    shift = 2.0 * np.abs(xo)
    cond = lam(10.0, d)

    def raw(X):
        Xh = 2.0 * sign * X
        Zh = Xh.copy()
        Zh[:, 1:] += 0.25 * (Xh[:, :-1] - shift[:-1])
        Z = 100.0 * (cond * (Zh - shift) + shift)
        pen = np.sum(np.maximum(np.abs(Z) - 500.0, 0.0) ** 2, axis=1)
        s = np.sum(Z * np.sin(np.sqrt(np.abs(Z))), axis=1)
        return 0.01 * (pen + 418.9828872724339 - s / d)
    return xo, raw


def _gallagher(fid, npeaks, b, c, top_cond):
    def build(iid, d):
        rs = _seed(fid, iid)
        R = compute_rotation(rs, d)
        perm = np.argsort(unif(npeaks - 1, rs), kind="stable")
        conds = np.empty(npeaks)
        conds[0] = top_cond
        conds[1:] = 1000.0 ** (perm / (npeaks - 2))
        heights = np.empty(npeaks)
        heights[0] = 10.0
        heights[1:] = 1.1 + 8.0 * np.arange(npeaks - 1) / (npeaks - 2)
        scales = np.empty((npeaks, d))
        for i in range(npeaks):
            p = np.argsort(unif(d, rs + 1000 * i), kind="stable")
            scales[i] = conds[i] ** (p / (d - 1) - 0.5)
        u = unif(d * npeaks, rs).reshape(npeaks, d)
        raw_local = b * u - c
        xo = 0.8 * raw_local[0]
        local = raw_local @ R.T
        local[0] *= 0.8

        def raw(X):
            T = X @ R.T
            diff = T[:, None, :] - local[None, :, :]
            q = np.sum(scales[None] * diff * diff, axis=2)
            g = np.max(heights * np.exp(-0.5 / d * q), axis=1)
            return t_osz(10.0 - g) ** 2 + boundary_penalty(X)
        return xo, raw
    return build


f21 = _gallagher(21, 101, 10.0, 5.0, np.sqrt(1000.0))
f22 = _gallagher(22, 21, 9.8, 4.9, 1000.0)


def f23(iid, d):
    rs = _seed(23, iid)
    xo = compute_xopt(rs, d)
    M, _, _ = _scaled_pair(rs, d, 100.0)
    p2 = 2.0 ** np.arange(1, 33)
    expo = 10.0 / d ** 1.2

    def raw(X):
        Z = (X - xo) @ M.T
        t = Z[..., None] * p2
        s = np.sum(np.abs(t - np.floor(t + 0.5)) / p2, axis=2)
        prod = np.prod((1.0 + np.arange(1, d + 1) * s) ** expo, axis=1)
        return 10.0 / d ** 2 * (prod - 1.0) + boundary_penalty(X)
    return xo, raw


def f24(iid, d):
    rs = _seed(24, iid)
    mu0 = 2.5
    s = 1.0 - 1.0 / (2.0 * np.sqrt(d + 20.0) - 8.2)
    mu1 = -np.sqrt((mu0 ** 2 - 1.0) / s)
    sign = np.where(gauss(d, rs) < 0, -1.0, 1.0)
    xo = 0.5 * mu0 * sign
    M, _, _ = _scaled_pair(rs, d, 100.0)

    def raw(X):
        Xh = 2.0 * sign * X
        Z = (Xh - mu0) @ M.T
        s1 = np.sum((Xh - mu0) ** 2, axis=1)
        s2 = np.sum((Xh - mu1) ** 2, axis=1)
        val = np.minimum(s1, d + s * s2) + 10.0 * (d - np.sum(np.cos(2 * np.pi * Z), axis=1))
        return val + 1e4 * boundary_penalty(X)
    return xo, raw


BUILDERS = {i: globals()[f"f{i}"] for i in range(1, 25)}


def build(function_id: int, instance_id: int, dimension: int) -> BbobFunction:
    xo, raw = BUILDERS[function_id](instance_id, dimension)
    xo = np.asarray(xo, dtype=float)
    xo.setflags(write=False)
    return BbobFunction(function_id, dimension, xo, compute_fopt(function_id, instance_id), raw)
