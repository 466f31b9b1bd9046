# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Must stay numerically identical to ``_kernels_py``."""
import numpy as np

from libc.math cimport NAN, sqrt

cdef double DISK_TOL = 1e-12


cdef inline double _reduced(double a, double b, double e0, double small,
                            double big, double ka, double kb) noexcept nogil:
    cdef double a2 = a * a
    cdef double b2 = b * b
    return e0 + small * a2 + (big - ka) * b2 + (ka - kb) * a2 * b2 + ka * b2 * b2


def reduced_surface(double[::1] xs, double[::1] ys, double e0, double small,
                    double big, double ka, double kb):
    cdef Py_ssize_t nx = xs.shape[0]
    cdef Py_ssize_t ny = ys.shape[0]
    cdef Py_ssize_t i, j
    cdef double x, y
    out = np.empty((ny, nx), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(ny):
            y = ys[i]
            for j in range(nx):
                x = xs[j]
                if x * x + y * y <= 1.0 + DISK_TOL:
                    o[i, j] = _reduced(x, y, e0, small, big, ka, kb)
                else:
                    o[i, j] = NAN
    return out


def reduced_surface_argmin(double[::1] xs, double[::1] ys, double e0, double small,
                           double big, double ka, double kb):
    cdef Py_ssize_t nx = xs.shape[0]
    cdef Py_ssize_t ny = ys.shape[0]
    cdef Py_ssize_t i, j, bi = -1, bj = -1
    cdef double x, y, v
    cdef double best = 0.0
    with nogil:
        for i in range(ny):
            y = ys[i]
            for j in range(nx):
                x = xs[j]
                if x * x + y * y <= 1.0 + DISK_TOL:
                    v = _reduced(x, y, e0, small, big, ka, kb)
                    if bi < 0 or v < best:
                        best = v
                        bi = i
                        bj = j
    if bi < 0:
        return -1, -1, NAN
    return int(bi), int(bj), best


def ed_coupling_triplets(long long[:, ::1] atoms, long long[:, ::1] lookup,
                         long long cut1, long long cut2, double c1, double c2):
    cdef Py_ssize_t n_atoms = atoms.shape[0]
    cdef long long s1 = cut2 + 1
    cdef long long s0 = (cut1 + 1) * s1
    cdef Py_ssize_t cap = 4 * n_atoms * s0
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.float64)
    cdef long long[::1] r = rows
    cdef long long[::1] c = cols
    cdef double[::1] v = vals
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t a, b
    cdef long long n1, n2, n3, m1, m2, src, dst
    cdef double amp
    with nogil:
        for a in range(n_atoms):
            n1 = atoms[a, 0]
            n2 = atoms[a, 1]
            n3 = atoms[a, 2]
            for m1 in range(cut1 + 1):
                for m2 in range(cut2 + 1):
                    src = a * s0 + m1 * s1 + m2
                    # |1> -> |3> with one photon of mode 1 created or destroyed
                    if n1 > 0 and c1 != 0.0:
                        b = lookup[n1 - 1, n2]
                        amp = c1 * sqrt(<double>(n1 * (n3 + 1)))
                        if m1 < cut1:
                            dst = b * s0 + (m1 + 1) * s1 + m2
                            r[k] = dst; c[k] = src; v[k] = amp * sqrt(<double>(m1 + 1)); k += 1
                        if m1 > 0:
                            dst = b * s0 + (m1 - 1) * s1 + m2
                            r[k] = dst; c[k] = src; v[k] = amp * sqrt(<double>m1); k += 1
                    # |2> -> |3> with mode 2
                    if n2 > 0 and c2 != 0.0:
                        b = lookup[n1, n2 - 1]
                        amp = c2 * sqrt(<double>(n2 * (n3 + 1)))
                        if m2 < cut2:
                            dst = b * s0 + m1 * s1 + m2 + 1
                            r[k] = dst; c[k] = src; v[k] = amp * sqrt(<double>(m2 + 1)); k += 1
                        if m2 > 0:
                            dst = b * s0 + m1 * s1 + m2 - 1
                            r[k] = dst; c[k] = src; v[k] = amp * sqrt(<double>m2); k += 1
    return rows[:k], cols[:k], vals[:k]
