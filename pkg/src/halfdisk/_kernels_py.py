"""NumPy fallback for the compiled kernels; selected when the extension is
missing.  Same contracts as halfdisk._kernels."""

import numpy as np


def linking_sum(x1, x2):
    x1 = np.ascontiguousarray(x1, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    r1 = np.roll(x1, -1, axis=0)
    total = 0.0
    n2 = x2.shape[0]
    for i in range(n2):
        p2, q2 = x2[i], x2[(i + 1) % n2]
        a = x1 - p2
        b = x1 - q2
        c = r1 - q2
        d = r1 - p2
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        nc = np.linalg.norm(c, axis=1)
        nd = np.linalg.norm(d, axis=1)
        p = np.einsum("ij,ij->i", a, np.cross(b, c))
        ab = np.einsum("ij,ij->i", a, b)
        bc = np.einsum("ij,ij->i", b, c)
        ca = np.einsum("ij,ij->i", c, a)
        ad = np.einsum("ij,ij->i", a, d)
        dc = np.einsum("ij,ij->i", d, c)
        d1 = na * nb * nc + ab * nc + bc * na + ca * nb
        d2 = na * nd * nc + ad * nc + dc * na + ca * nd
        total += np.sum(np.arctan2(p, d1) + np.arctan2(p, d2))
    return float(total / (2.0 * np.pi))


def min_pairwise_dist(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        return float("inf")
    # chunk to bound the temporary (n, m) distance block
    best = np.inf
    step = max(1, int(2_000_000 / max(1, b.shape[0])))
    for start in range(0, a.shape[0], step):
        blk = a[start:start + step]
        d2 = np.sum((blk[:, None, :] - b[None, :, :]) ** 2, axis=2)
        best = min(best, float(d2.min()))
    return float(np.sqrt(best))
