# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernel: directed max-min distance between point sets.

For each point of ``a`` find the distance to the nearest point of ``b``;
return the largest such distance. The inner loop carries an early exit:
once a row's running minimum falls at or below the best max found so far,
that row can no longer raise the result and is abandoned.
"""

from libc.math cimport INFINITY, sqrt


def directed_max_min_distance(double[:, ::1] a, double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t i, j
    cdef double best = 0.0
    cdef double dmin, d, dx, dy, dz

    if n == 0 or m == 0:
        raise ValueError("point sets must be non-empty")

    for i in range(n):
        dmin = INFINITY
        for j in range(m):
            dx = a[i, 0] - b[j, 0]
            dy = a[i, 1] - b[j, 1]
            dz = a[i, 2] - b[j, 2]
            d = dx * dx + dy * dy + dz * dz
            if d < dmin:
                dmin = d
                if dmin <= best:
                    break
        if dmin > best:
            best = dmin
    return sqrt(best)
