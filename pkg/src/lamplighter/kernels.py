"""Hot integer kernels, each with a numba and a pure-numpy implementation.

The backend is chosen once from ``LAMPLIGHTER_BACKEND`` (``numba`` or
``numpy``); numba is used when importable unless the variable says otherwise.
Both backends must agree bit for bit, the test suite runs them side by side.

Kernels
-------
rank_mod_p
    Rank of a sparse integer matrix modulo a prime p < 2^31 after substituting
    a root of unity for z.  Rows are stored in sliding windows of width
    ``cap``: a row's support always lies in [lead, lead + cap), which keeps
    banded elimination at O(n * cap^2).
fwht
    In-place integer Walsh-Hadamard transform along axis 0.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_requested = os.environ.get("LAMPLIGHTER_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"LAMPLIGHTER_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numpy" if (_requested == "numpy" or numba is None) else "numba"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --------------------------------------------------------------------------
# residues
# --------------------------------------------------------------------------

@_njit
def _residues_nb(coeffs, powers, p):
    nnz, d = coeffs.shape
    out = np.empty(nnz, dtype=np.int64)
    for e in range(nnz):
        acc = 0
        for k in range(d):
            c = coeffs[e, k] % p
            if c:
                acc = (acc + c * powers[k]) % p
        out[e] = acc
    return out


def _residues_np(coeffs, powers, p):
    c = coeffs % p
    acc = np.zeros(c.shape[0], dtype=np.int64)
    for k in range(c.shape[1]):
        acc = (acc + c[:, k] * powers[k]) % p
    return acc


# --------------------------------------------------------------------------
# windowed elimination mod p
# --------------------------------------------------------------------------

@_njit
def _inv_mod(a, p):
    # Fermat; p prime
    r = 1
    e = p - 2
    b = a % p
    while e:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


@_njit
def _rank_windows_nb(rows, cols, vals, nrows, ncols, cap, p):
    buf = np.zeros((nrows, cap), dtype=np.int64)
    lead = np.full(nrows, ncols, dtype=np.int64)
    for e in range(rows.shape[0]):
        r = rows[e]
        if vals[e] != 0 and cols[e] < lead[r]:
            lead[r] = cols[e]
    for e in range(rows.shape[0]):
        r = rows[e]
        v = vals[e]
        if v != 0:
            buf[r, cols[e] - lead[r]] = v
    # a row may have become zero only if all its values vanished mod p
    rank = 0
    for j in range(ncols):
        piv = -1
        for r in range(nrows):
            if lead[r] == j:
                if piv < 0:
                    piv = r
                else:
                    # eliminate column j from row r using the pivot row
                    f = (buf[r, 0] * _inv_mod(buf[piv, 0], p)) % p
                    for t in range(cap):
                        q = buf[piv, t]
                        if q:
                            buf[r, t] = (buf[r, t] - f * q) % p
                    s = 1
                    while s < cap and buf[r, s] == 0:
                        s += 1
                    if s == cap:
                        lead[r] = ncols
                    else:
                        for t in range(cap - s):
                            buf[r, t] = buf[r, t + s]
                        for t in range(cap - s, cap):
                            buf[r, t] = 0
                        lead[r] = j + s
        if piv >= 0:
            rank += 1
            lead[piv] = -1
            if rank == nrows:
                break
    return rank


def _rank_windows_np(rows, cols, vals, nrows, ncols, cap, p):
    buf = np.zeros((nrows, cap), dtype=np.int64)
    keep = vals != 0
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    lead = np.full(nrows, ncols, dtype=np.int64)
    np.minimum.at(lead, rows, cols)
    buf[rows, cols - lead[rows]] = vals
    idx = np.arange(cap)
    rank = 0
    for j in range(ncols):
        hits = np.flatnonzero(lead == j)
        if hits.size == 0:
            continue
        piv, others = hits[0], hits[1:]
        rank += 1
        lead[piv] = -1
        if others.size:
            inv = pow(int(buf[piv, 0]), p - 2, p)
            f = (buf[others, 0] * inv) % p
            block = (buf[others] - f[:, None] * buf[piv][None, :]) % p
            nz = block != 0
            any_nz = nz.any(axis=1)
            shift = np.where(any_nz, nz.argmax(axis=1), cap)
            src = idx[None, :] + shift[:, None]
            valid = src < cap
            shifted = np.where(valid, np.take_along_axis(block, np.minimum(src, cap - 1), axis=1), 0)
            buf[others] = shifted
            lead[others] = np.where(any_nz, j + shift, ncols)
        if rank == nrows:
            break
    return rank


def window_cap(rows, cols, nrows, ncols) -> int:
    """Smallest window width that elimination (in row order) can never exceed.

    At column j every live row has lead >= j and right end <= R(j), the
    largest original right end over rows whose original lead is <= j.
    """
    if rows.size == 0:
        return 1
    left = np.full(nrows, ncols, dtype=np.int64)
    right = np.full(nrows, -1, dtype=np.int64)
    np.minimum.at(left, rows, cols)
    np.maximum.at(right, rows, cols)
    live = right >= 0
    left, right = left[live], right[live]
    reach = np.full(ncols, -1, dtype=np.int64)
    np.maximum.at(reach, left, right)
    reach = np.maximum.accumulate(reach)
    j = np.arange(ncols)
    return int(max(1, (reach - j + 1).max()))


def rank_mod_p(rows, cols, coeffs, powers, nrows, ncols, p, cap=None, backend=None):
    """Rank mod p of the matrix with entries sum_k coeffs[e, k] * powers[k].

    ``coeffs`` is an int64 array (nnz, D) with |entries| < 2^62 and ``powers``
    holds the residues of z^k.  Entries at repeated (row, col) are not summed;
    callers pass each position once.
    """
    backend = backend or BACKEND
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    powers = np.ascontiguousarray(powers, dtype=np.int64)
    if cap is None:
        cap = window_cap(rows, cols, nrows, ncols)
    if backend == "numba":
        vals = _residues_nb(np.ascontiguousarray(coeffs, dtype=np.int64), powers, p)
        return int(_rank_windows_nb(rows, cols, vals, nrows, ncols, cap, p))
    vals = _residues_np(np.asarray(coeffs, dtype=np.int64), powers, p)
    return int(_rank_windows_np(rows, cols, vals, nrows, ncols, cap, p))


def rank_from_residues(rows, cols, vals, nrows, ncols, p, cap=None, backend=None):
    """As :func:`rank_mod_p` but with entries already reduced mod p."""
    backend = backend or BACKEND
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    vals = np.ascontiguousarray(vals, dtype=np.int64)
    if cap is None:
        cap = window_cap(rows, cols, nrows, ncols)
    if backend == "numba":
        return int(_rank_windows_nb(rows, cols, vals, nrows, ncols, cap, p))
    return int(_rank_windows_np(rows, cols, vals, nrows, ncols, cap, p))


# --------------------------------------------------------------------------
# Walsh-Hadamard
# --------------------------------------------------------------------------

@_njit
def _fwht_nb(a):
    n = a.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                for k in range(a.shape[1]):
                    x = a[j, k]
                    y = a[j + h, k]
                    a[j, k] = x + y
                    a[j + h, k] = x - y
        h *= 2
    return a


def _fwht_np(a):
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(n // (2 * h), 2, h, -1)
        x = v[:, 0].copy()
        v[:, 0] += v[:, 1]
        v[:, 1] = x - v[:, 1]
        h *= 2
    return a


def fwht(a, backend=None):
    """Unnormalised Walsh-Hadamard transform along axis 0 (length 2^m).

    int64 input uses the selected backend; object arrays (big integers) always
    take the numpy path.
    """
    backend = backend or BACKEND
    a = np.array(a, copy=True)
    if a.ndim == 1:
        return fwht(a[:, None], backend)[:, 0]
    n = a.shape[0]
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    if a.dtype == np.int64 and backend == "numba":
        return _fwht_nb(a)
    return _fwht_np(a)
