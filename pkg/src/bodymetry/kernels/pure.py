"""Pure-numpy geometry kernels.

These are the fallback twins of the compiled kernels in ``_core.pyx``. Both
backends must produce bit-identical outputs for identical inputs, so every
floating-point expression here is written exactly as in the Cython source
(same operand order, float64 throughout, no reassociation). Reductions whose
result depends on summation order (perimeters, pixel counts) live in the
shared callers, never in a backend.
"""

from __future__ import annotations

import numpy as np

# Cap on elements of the per-chunk barycentric grid; bounds rasterizer memory.
_RASTER_CHUNK_BUDGET = 4_000_000


def slice_faces(axis_vals, u, v, faces, level):
    """Intersect faces with the plane ``axis == level``.

    axis_vals, u, v: per-vertex float64 arrays; (axis, u, v) is a permutation
    of the mesh coordinates. faces: (F, 3) int32. An edge (a, b) crosses the
    plane iff ``(a < level) != (b < level)`` (half-open, so a slice exactly at
    a vertex ring counts edges arriving from below only).

    Returns ``(segments, loose)``: segments is (S, 4) float64 rows
    ``[u0, v0, u1, v1]`` from faces crossed in exactly two edges, in face
    order with edges in (0-1, 1-2, 2-0) order; loose is (L, 2) crossing
    points from degenerate faces (1 or 3 crossings).
    """
    faces = np.ascontiguousarray(faces)
    if faces.size == 0:
        return np.empty((0, 4)), np.empty((0, 2))

    a_lo = axis_vals[faces]                    # (F, 3) edge-start axis values
    a_hi = a_lo[:, [1, 2, 0]]
    crossing = (a_lo < level) != (a_hi < level)

    u_lo = u[faces]
    v_lo = v[faces]
    u_hi = u_lo[:, [1, 2, 0]]
    v_hi = v_lo[:, [1, 2, 0]]

    with np.errstate(divide="ignore", invalid="ignore"):
        t = (level - a_lo) / (a_hi - a_lo)
        pu = u_lo + t * (u_hi - u_lo)
        pv = v_lo + t * (v_hi - v_lo)

    counts = crossing.sum(axis=1)
    rows, cols = np.nonzero(crossing)          # row-major: face order, edge order
    pair_rows = counts[rows] == 2

    pu_sel = pu[rows[pair_rows], cols[pair_rows]]
    pv_sel = pv[rows[pair_rows], cols[pair_rows]]
    segments = np.empty((pu_sel.size // 2, 4))
    segments[:, 0] = pu_sel[0::2]
    segments[:, 1] = pv_sel[0::2]
    segments[:, 2] = pu_sel[1::2]
    segments[:, 3] = pv_sel[1::2]

    loose_rows = ~pair_rows
    loose = np.column_stack((pu[rows[loose_rows], cols[loose_rows]],
                             pv[rows[loose_rows], cols[loose_rows]]))
    return segments, loose


def hull_indices(pts):
    """Indices of the 2D convex hull of ``pts`` (N, 2), counter-clockwise
    starting from the lexicographically smallest point. Collinear points are
    excluded (strict turns). Degenerate inputs (all points equal, N < 3)
    return what is left of the chain."""
    n = pts.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    if n == 1:
        return order.astype(np.int64)

    xs = pts[:, 0]
    ys = pts[:, 1]

    def _cross(o, a, b):
        return (xs[a] - xs[o]) * (ys[b] - ys[o]) - (ys[a] - ys[o]) * (xs[b] - xs[o])

    lower = []
    for idx in order:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], idx) <= 0.0:
            lower.pop()
        lower.append(idx)
    upper = []
    for idx in order[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], idx) <= 0.0:
            upper.pop()
        upper.append(idx)
    hull = lower[:-1] + upper[:-1]
    if not hull:                               # all points identical
        hull = [order[0]]
    return np.asarray(hull, dtype=np.int64)


def _top_left(dx, dy):
    # Left edges descend in pixel space (dy < 0 after the CCW fix-up);
    # top edges are horizontal running right.
    return (dy < 0.0) | ((dy == 0.0) & (dx > 0.0))


def rasterize(px, py, pz, faces, height, width, zbuf):
    """Depth rasterization with pixel-center sampling and a top-left fill rule.

    px, py: vertex positions in pixel coordinates (x right, y down); pz:
    per-vertex depth (larger = nearer camera). Updates ``zbuf`` (H, W,
    prefilled with -inf) in place, keeping the maximum depth per pixel.
    """
    faces = np.ascontiguousarray(faces)
    if faces.size == 0:
        return

    x = px[faces].copy()                       # (F, 3)
    y = py[faces].copy()
    z = pz[faces].copy()

    area2 = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - \
            (y[:, 1] - y[:, 0]) * (x[:, 2] - x[:, 0])
    flip = area2 < 0.0
    for arr in (x, y, z):
        swapped = arr[flip][:, [0, 2, 1]]
        arr[flip] = swapped
    keep = area2 != 0.0
    x, y, z = x[keep], y[keep], z[keep]
    if x.shape[0] == 0:
        return

    # Pixel (i, j) has its center at (j + 0.5, i + 0.5).
    col0 = np.maximum(np.ceil(x.min(axis=1) - 0.5), 0.0).astype(np.int64)
    col1 = np.minimum(np.floor(x.max(axis=1) - 0.5), width - 1).astype(np.int64)
    row0 = np.maximum(np.ceil(y.min(axis=1) - 0.5), 0.0).astype(np.int64)
    row1 = np.minimum(np.floor(y.max(axis=1) - 0.5), height - 1).astype(np.int64)
    nonempty = (col1 >= col0) & (row1 >= row0)
    x, y, z = x[nonempty], y[nonempty], z[nonempty]
    col0, col1 = col0[nonempty], col1[nonempty]
    row0, row1 = row0[nonempty], row1[nonempty]
    nfaces = x.shape[0]
    if nfaces == 0:
        return

    bw = col1 - col0 + 1
    bh = row1 - row0 + 1
    order = np.argsort(bw * bh, kind="stable")

    start = 0
    while start < nfaces:
        wmax = hmax = 1
        stop = start
        while stop < nfaces:
            f = order[stop]
            w_try = max(wmax, int(bw[f]))
            h_try = max(hmax, int(bh[f]))
            count = stop - start + 1
            if count * w_try * h_try > _RASTER_CHUNK_BUDGET and count > 1:
                break
            wmax, hmax = w_try, h_try
            stop += 1
        sel = order[start:stop]
        start = stop
        _raster_chunk(x[sel], y[sel], z[sel], col0[sel], row0[sel],
                      col1[sel], row1[sel], wmax, hmax, zbuf)


def _raster_chunk(x, y, z, col0, row0, col1, row1, wmax, hmax, zbuf):
    n = x.shape[0]
    jj = col0[:, None] + np.arange(wmax)[None, :]          # (n, wmax)
    ii = row0[:, None] + np.arange(hmax)[None, :]          # (n, hmax)
    cx = (jj + 0.5)[:, None, :]                            # (n, 1, wmax)
    cy = (ii + 0.5)[:, :, None]                            # (n, hmax, 1)

    def edge(ax, ay, bx, by):
        dx = bx - ax
        dy = by - ay
        e = dx[:, None, None] * (cy - ay[:, None, None]) - \
            dy[:, None, None] * (cx - ax[:, None, None])
        tl = _top_left(dx, dy)
        return (e > 0.0) | ((e == 0.0) & tl[:, None, None]), e

    in0, e0 = edge(x[:, 1], y[:, 1], x[:, 2], y[:, 2])
    in1, e1 = edge(x[:, 2], y[:, 2], x[:, 0], y[:, 0])
    in2, e2 = edge(x[:, 0], y[:, 0], x[:, 1], y[:, 1])

    inside = in0 & in1 & in2
    inside &= (jj <= col1[:, None])[:, None, :]
    inside &= (ii <= row1[:, None])[:, :, None]
    if not inside.any():
        return

    zsum = e0 + e1 + e2
    with np.errstate(divide="ignore", invalid="ignore"):
        zpix = (e0 * z[:, 0, None, None] + e1 * z[:, 1, None, None] +
                e2 * z[:, 2, None, None]) / zsum

    iy = np.broadcast_to(ii[:, :, None], inside.shape)[inside]
    ix = np.broadcast_to(jj[:, None, :], inside.shape)[inside]
    np.maximum.at(zbuf, (iy, ix), zpix[inside])
