# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: polyline linking sum and point-cloud separation."""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, sqrt

cnp.import_array()


def linking_sum(double[:, ::1] x1, double[:, ::1] x2):
    """Gauss linking number of two closed polylines in R^3.

    Rows are vertices; the closing edge last->first is implicit.  Uses the
    exact solid angle subtended by segment pairs, so the result is an integer
    up to floating-point roundoff whenever the polylines are disjoint.
    """
    cdef Py_ssize_t n1 = x1.shape[0]
    cdef Py_ssize_t n2 = x2.shape[0]
    cdef Py_ssize_t i, j, i2, j2, k
    cdef double a[3]
    cdef double b[3]
    cdef double c[3]
    cdef double d[3]
    cdef double cr[3]
    cdef double na, nb, nc, nd, p, d1, d2, ab, bc, ca, ad, dc, total
    total = 0.0
    for i in range(n2):
        i2 = (i + 1) % n2
        for j in range(n1):
            j2 = (j + 1) % n1
            for k in range(3):
                a[k] = x1[j, k] - x2[i, k]
                b[k] = x1[j, k] - x2[i2, k]
                c[k] = x1[j2, k] - x2[i2, k]
                d[k] = x1[j2, k] - x2[i, k]
            cr[0] = b[1] * c[2] - b[2] * c[1]
            cr[1] = b[2] * c[0] - b[0] * c[2]
            cr[2] = b[0] * c[1] - b[1] * c[0]
            p = a[0] * cr[0] + a[1] * cr[1] + a[2] * cr[2]
            na = sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])
            nb = sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2])
            nc = sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2])
            nd = sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
            ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
            bc = b[0] * c[0] + b[1] * c[1] + b[2] * c[2]
            ca = c[0] * a[0] + c[1] * a[1] + c[2] * a[2]
            ad = a[0] * d[0] + a[1] * d[1] + a[2] * d[2]
            dc = d[0] * c[0] + d[1] * c[1] + d[2] * c[2]
            d1 = na * nb * nc + ab * nc + bc * na + ca * nb
            d2 = na * nd * nc + ad * nc + dc * na + ca * nd
            total += atan2(p, d1) + atan2(p, d2)
    return total / (2.0 * np.pi)


def min_pairwise_dist(double[:, ::1] a, double[:, ::1] b):
    """Minimum Euclidean distance between two point clouds (rows = points)."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t dim = a.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double best = -1.0
    cdef double acc, diff
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for k in range(dim):
                diff = a[i, k] - b[j, k]
                acc += diff * diff
            if best < 0.0 or acc < best:
                best = acc
    return sqrt(best) if best >= 0.0 else float("inf")
