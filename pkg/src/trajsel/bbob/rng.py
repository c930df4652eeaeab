"""Legacy BBOB random streams and instance transformations.

These reproduce the generators of the original C benchmark code bit for bit,
which is what makes instance ids portable across implementations.
"""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def _unif(n: int, seed: int) -> tuple:
    seed = abs(int(seed))
    if seed < 1:
        seed = 1
    akt = seed
    table = [0] * 32
    for i in range(39, -1, -1):
        tmp = akt // 127773
        akt = 16807 * (akt - tmp * 127773) - 2836 * tmp
        if akt < 0:
            akt += 2147483647
        if i < 32:
            table[i] = akt
    rand = table[0]
    out = []
    for _ in range(n):
        tmp = akt // 127773
        akt = 16807 * (akt - tmp * 127773) - 2836 * tmp
        if akt < 0:
            akt += 2147483647
        tmp = rand // 67108865
        rand = table[tmp]
        table[tmp] = akt
        r = rand / 2.147483647e9
        out.append(r if r != 0.0 else 1e-99)
    return tuple(out)


def unif(n: int, seed: int) -> np.ndarray:
    """n uniform numbers in (0, 1) from the shuffled Park-Miller stream."""
    return np.array(_unif(int(n), int(seed)))


def gauss(n: int, seed: int) -> np.ndarray:
    """n standard normal numbers via Box-Muller on ``unif(2n, seed)``."""
    u = unif(2 * n, seed)
    g = np.sqrt(-2.0 * np.log(u[:n])) * np.cos(2.0 * np.pi * u[n:])
    g[g == 0.0] = 1e-99
    return g


def compute_xopt(seed: int, dim: int) -> np.ndarray:
    x = 8.0 * np.floor(1e4 * unif(dim, seed)) / 1e4 - 4.0
    x[x == 0.0] = -1e-5
    return x


def compute_fopt(function_id: int, instance_id: int) -> float:
    if function_id == 4:
        rseed = 3
    elif function_id == 18:
        rseed = 17
    else:
        rseed = function_id
    rseed += 10000 * instance_id
    g1 = gauss(1, rseed)[0]
    g2 = gauss(1, rseed + 1)[0]
    # round half up, as in the C code
    val = np.floor(100.0 * 100.0 * g1 / g2 + 0.5) / 100.0
    return float(min(1000.0, max(-1000.0, val)))


def compute_rotation(seed: int, dim: int) -> np.ndarray:
    """Orthogonal matrix R, applied as ``R @ x``.

    Column-major reshape followed by Gram-Schmidt over columns.
    """
    b = gauss(dim * dim, seed).reshape(dim, dim).T.copy()
    for i in range(dim):
        for j in range(i):
            b[:, i] -= (b[:, i] @ b[:, j]) * b[:, j]
        b[:, i] /= np.sqrt(b[:, i] @ b[:, i])
    return b
