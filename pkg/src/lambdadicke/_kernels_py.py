"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same three functions with the same argument order and
must return identical results (tests compare them element by element).
"""
import numpy as np

DISK_TOL = 1e-12


def _reduced(a, b, e0, small, big, ka, kb):
    a2 = a * a
    b2 = b * b
    return e0 + small * a2 + (big - ka) * b2 + (ka - kb) * a2 * b2 + ka * b2 * b2


def reduced_surface(xs, ys, e0, small, big, ka, kb):
    """Reduced mean-field energy on the grid ``ys x xs``; NaN outside the unit disk."""
    x = np.asarray(xs, dtype=float)[None, :]
    y = np.asarray(ys, dtype=float)[:, None]
    inside = x * x + y * y <= 1.0 + DISK_TOL
    out = _reduced(x, y, e0, small, big, ka, kb)
    return np.where(inside, out, np.nan)


def reduced_surface_argmin(xs, ys, e0, small, big, ka, kb):
    """Return ``(i, j, value)`` of the first minimum in row-major order."""
    surf = reduced_surface(xs, ys, e0, small, big, ka, kb)
    if np.all(np.isnan(surf)):
        return -1, -1, float("nan")
    flat = int(np.nanargmin(surf))
    i, j = divmod(flat, surf.shape[1])
    return i, j, float(surf[i, j])


def ed_coupling_triplets(atoms, lookup, cut1, cut2, c1, c2):
    """Off-diagonal Hamiltonian entries, one per connected pair of basis states.

    Only transitions that move a particle *up* into level 3 are generated; the
    caller mirrors them to obtain the Hermitian matrix.
    """
    atoms = np.asarray(atoms, dtype=np.int64)
    lookup = np.asarray(lookup, dtype=np.int64)
    s1 = cut2 + 1
    s0 = (cut1 + 1) * s1
    n_atoms = atoms.shape[0]
    a_idx, m1, m2 = np.meshgrid(
        np.arange(n_atoms), np.arange(cut1 + 1), np.arange(cut2 + 1), indexing="ij"
    )
    a_idx, m1, m2 = a_idx.ravel(), m1.ravel(), m2.ravel()
    n1, n2, n3 = atoms[a_idx, 0], atoms[a_idx, 1], atoms[a_idx, 2]
    src = a_idx * s0 + m1 * s1 + m2

    rows, cols, vals = [], [], []
    if c1 != 0.0:
        ok = n1 > 0
        b = np.where(ok, lookup[np.maximum(n1 - 1, 0), n2], 0)
        amp = c1 * np.sqrt((n1 * (n3 + 1)).astype(float))
        up = ok & (m1 < cut1)
        down = ok & (m1 > 0)
        _collect(rows, cols, vals, src, b * s0 + (m1 + 1) * s1 + m2, amp * np.sqrt(m1 + 1.0), up)
        _collect(rows, cols, vals, src, b * s0 + (m1 - 1) * s1 + m2, amp * np.sqrt(m1.astype(float)), down)
    if c2 != 0.0:
        ok = n2 > 0
        b = np.where(ok, lookup[n1, np.maximum(n2 - 1, 0)], 0)
        amp = c2 * np.sqrt((n2 * (n3 + 1)).astype(float))
        up = ok & (m2 < cut2)
        down = ok & (m2 > 0)
        _collect(rows, cols, vals, src, b * s0 + m1 * s1 + m2 + 1, amp * np.sqrt(m2 + 1.0), up)
        _collect(rows, cols, vals, src, b * s0 + m1 * s1 + m2 - 1, amp * np.sqrt(m2.astype(float)), down)

    if not rows:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), np.empty(0)
    # restore the per-source ordering of the compiled loop
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    order = np.argsort(_loop_rank(c, r, s0, s1), kind="stable")
    return r[order], c[order], v[order]


def _collect(rows, cols, vals, src, dst, val, mask):
    rows.append(dst[mask])
    cols.append(src[mask])
    vals.append(val[mask])


def _loop_rank(src, dst, s0, s1):
    # Within one source state the compiled loop emits: mode-1 up, mode-1 down,
    # mode-2 up, mode-2 down.  Encode that as a secondary key.
    src_m1 = (src % s0) // s1
    src_m2 = src % s1
    dst_m1 = (dst % s0) // s1
    dst_m2 = dst % s1
    slot = np.where(
        dst_m1 > src_m1, 0, np.where(dst_m1 < src_m1, 1, np.where(dst_m2 > src_m2, 2, 3))
    )
    return src * 4 + slot
