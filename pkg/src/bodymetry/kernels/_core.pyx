# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled geometry kernels.

Twin of ``pure.py``: every floating-point expression matches the numpy
fallback operand for operand (the extension is built with -ffp-contract=off)
so the two backends stay bit-identical. See pure.py for the contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor

cnp.import_array()


def slice_faces(cnp.float64_t[::1] axis_vals,
                cnp.float64_t[::1] u,
                cnp.float64_t[::1] v,
                faces,
                double level):
    cdef cnp.int32_t[:, ::1] f = np.ascontiguousarray(faces, dtype=np.int32)
    cdef Py_ssize_t nf = f.shape[0]
    if nf == 0:
        return np.empty((0, 4)), np.empty((0, 2))

    seg_arr = np.empty((nf, 4))
    loose_arr = np.empty((3 * nf, 2))
    cdef cnp.float64_t[:, ::1] seg = seg_arr
    cdef cnp.float64_t[:, ::1] loose = loose_arr

    cdef Py_ssize_t i, k, ia, ib, nseg = 0, nloose = 0, count
    cdef double a, b, t
    cdef double cu[3]
    cdef double cv[3]
    cdef bint ca, cb

    for i in range(nf):
        count = 0
        for k in range(3):
            ia = f[i, k]
            ib = f[i, (k + 1) % 3]
            a = axis_vals[ia]
            b = axis_vals[ib]
            ca = a < level
            cb = b < level
            if ca != cb:
                t = (level - a) / (b - a)
                cu[count] = u[ia] + t * (u[ib] - u[ia])
                cv[count] = v[ia] + t * (v[ib] - v[ia])
                count += 1
        if count == 2:
            seg[nseg, 0] = cu[0]
            seg[nseg, 1] = cv[0]
            seg[nseg, 2] = cu[1]
            seg[nseg, 3] = cv[1]
            nseg += 1
        elif count > 0:
            for k in range(count):
                loose[nloose, 0] = cu[k]
                loose[nloose, 1] = cv[k]
                nloose += 1
    return seg_arr[:nseg].copy(), loose_arr[:nloose].copy()


def hull_indices(pts):
    cdef cnp.float64_t[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    order_arr = np.lexsort((pts[:, 1], pts[:, 0])).astype(np.int64)
    if n == 1:
        return order_arr
    cdef cnp.int64_t[::1] order = order_arr

    stack_arr = np.empty(2 * n, dtype=np.int64)
    cdef cnp.int64_t[::1] stack = stack_arr
    cdef Py_ssize_t i, idx, o, a2, top = 0, lower_len
    cdef double cross

    for i in range(n):
        idx = order[i]
        while top >= 2:
            o = stack[top - 2]
            a2 = stack[top - 1]
            cross = (p[a2, 0] - p[o, 0]) * (p[idx, 1] - p[o, 1]) - \
                    (p[a2, 1] - p[o, 1]) * (p[idx, 0] - p[o, 0])
            if cross <= 0.0:
                top -= 1
            else:
                break
        stack[top] = idx
        top += 1
    lower_len = top - 1                      # drop the last point of the chain

    top = lower_len
    cdef Py_ssize_t base = lower_len
    for i in range(n - 1, -1, -1):
        idx = order[i]
        while top >= base + 2:
            o = stack[top - 2]
            a2 = stack[top - 1]
            cross = (p[a2, 0] - p[o, 0]) * (p[idx, 1] - p[o, 1]) - \
                    (p[a2, 1] - p[o, 1]) * (p[idx, 0] - p[o, 0])
            if cross <= 0.0:
                top -= 1
            else:
                break
        stack[top] = idx
        top += 1
    top -= 1                                 # drop the duplicated first point

    if top == 0:                             # all points identical
        return np.asarray([order[0]], dtype=np.int64)
    return stack_arr[:top].copy()


def rasterize(cnp.float64_t[::1] px,
              cnp.float64_t[::1] py,
              cnp.float64_t[::1] pz,
              faces,
              Py_ssize_t height,
              Py_ssize_t width,
              cnp.float64_t[:, ::1] zbuf):
    cdef cnp.int32_t[:, ::1] f = np.ascontiguousarray(faces, dtype=np.int32)
    cdef Py_ssize_t nf = f.shape[0]
    cdef Py_ssize_t i, j, row, col, col0, col1, row0, row1, tmpi
    cdef double x0, x1, x2, y0, y1, y2, z0, z1, z2
    cdef double area2, xmin, xmax, ymin, ymax
    cdef double cx, cy, e0, e1, e2, zsum, zp, tswap
    cdef double d0x, d0y, d1x, d1y, d2x, d2y
    cdef bint tl0, tl1, tl2, cov0, cov1, cov2

    for i in range(nf):
        x0 = px[f[i, 0]]; y0 = py[f[i, 0]]; z0 = pz[f[i, 0]]
        x1 = px[f[i, 1]]; y1 = py[f[i, 1]]; z1 = pz[f[i, 1]]
        x2 = px[f[i, 2]]; y2 = py[f[i, 2]]; z2 = pz[f[i, 2]]

        area2 = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
        if area2 == 0.0:
            continue
        if area2 < 0.0:
            tswap = x1; x1 = x2; x2 = tswap
            tswap = y1; y1 = y2; y2 = tswap
            tswap = z1; z1 = z2; z2 = tswap

        xmin = x0
        if x1 < xmin: xmin = x1
        if x2 < xmin: xmin = x2
        xmax = x0
        if x1 > xmax: xmax = x1
        if x2 > xmax: xmax = x2
        ymin = y0
        if y1 < ymin: ymin = y1
        if y2 < ymin: ymin = y2
        ymax = y0
        if y1 > ymax: ymax = y1
        if y2 > ymax: ymax = y2

        col0 = <Py_ssize_t>ceil(xmin - 0.5)
        if col0 < 0: col0 = 0
        col1 = <Py_ssize_t>floor(xmax - 0.5)
        if col1 > width - 1: col1 = width - 1
        row0 = <Py_ssize_t>ceil(ymin - 0.5)
        if row0 < 0: row0 = 0
        row1 = <Py_ssize_t>floor(ymax - 0.5)
        if row1 > height - 1: row1 = height - 1
        if col1 < col0 or row1 < row0:
            continue

        d0x = x2 - x1; d0y = y2 - y1
        d1x = x0 - x2; d1y = y0 - y2
        d2x = x1 - x0; d2y = y1 - y0
        tl0 = (d0y < 0.0) or (d0y == 0.0 and d0x > 0.0)
        tl1 = (d1y < 0.0) or (d1y == 0.0 and d1x > 0.0)
        tl2 = (d2y < 0.0) or (d2y == 0.0 and d2x > 0.0)

        for row in range(row0, row1 + 1):
            cy = row + 0.5
            for col in range(col0, col1 + 1):
                cx = col + 0.5
                e0 = d0x * (cy - y1) - d0y * (cx - x1)
                cov0 = (e0 > 0.0) or (e0 == 0.0 and tl0)
                if not cov0:
                    continue
                e1 = d1x * (cy - y2) - d1y * (cx - x2)
                cov1 = (e1 > 0.0) or (e1 == 0.0 and tl1)
                if not cov1:
                    continue
                e2 = d2x * (cy - y0) - d2y * (cx - x0)
                cov2 = (e2 > 0.0) or (e2 == 0.0 and tl2)
                if not cov2:
                    continue
                zsum = e0 + e1 + e2
                zp = (e0 * z0 + e1 * z1 + e2 * z2) / zsum
                if zp > zbuf[row, col]:
                    zbuf[row, col] = zp
