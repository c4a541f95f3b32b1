"""Hot loops with a numba path and a pure numpy/scipy fallback.

Set ``CCBLOCKADE_NUMBA=0`` in the environment to force the fallback (it is
also used automatically when numba cannot be imported). Both paths are kept
importable side by side so tests and ``benchmarks/bench_kernels.py`` can
compare them.

Vectorisation convention: column stacking, ``vec(rho)[j * d + i] = rho[i, j]``.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("CCBLOCKADE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def _triplets(mat):
    mat = np.asarray(mat, dtype=complex)
    r, c = np.nonzero(mat)
    return r.astype(np.int64), c.astype(np.int64), mat[r, c]


def _effective_hamiltonian(h, jumps):
    heff = np.asarray(h, dtype=complex).copy()
    for j in jumps:
        heff -= 0.5j * (j.conj().T @ j)
    return heff


# -- Liouvillian assembly -----------------------------------------------------


def liouvillian_scipy(h, jumps):
    """Reference assembly from sparse Kronecker products."""
    d = h.shape[0]
    eye = sp.identity(d, dtype=complex, format="csr")
    heff = sp.csr_matrix(_effective_hamiltonian(h, jumps))
    out = -1j * sp.kron(eye, heff) + 1j * sp.kron(heff.conj(), eye)
    for j in jumps:
        js = sp.csr_matrix(j)
        out = out + sp.kron(js.conj(), js)
    out = out.tocsr()
    out.sum_duplicates()
    out.sort_indices()
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _assemble_coo(d, hr, hc, hv, jr, jc, jv, jstart):
        nh = hr.size
        nj = 0
        for k in range(jstart.size - 1):
            n = jstart[k + 1] - jstart[k]
            nj += n * n
        total = 2 * nh * d + nj
        rows = np.empty(total, np.int64)
        cols = np.empty(total, np.int64)
        vals = np.empty(total, np.complex128)
        p = 0
        for e in range(nh):
            r = hr[e]
            c = hc[e]
            v = hv[e]
            left = -1j * v
            right = 1j * np.conj(v)
            for j in range(d):
                rows[p] = j * d + r
                cols[p] = j * d + c
                vals[p] = left
                p += 1
                rows[p] = r * d + j
                cols[p] = c * d + j
                vals[p] = right
                p += 1
        for k in range(jstart.size - 1):
            for e1 in range(jstart[k], jstart[k + 1]):
                cv1 = np.conj(jv[e1])
                for e2 in range(jstart[k], jstart[k + 1]):
                    rows[p] = jr[e1] * d + jr[e2]
                    cols[p] = jc[e1] * d + jc[e2]
                    vals[p] = cv1 * jv[e2]
                    p += 1
        return rows, cols, vals


def liouvillian_numba(h, jumps):
    d = h.shape[0]
    hr, hc, hv = _triplets(_effective_hamiltonian(h, jumps))
    parts = [_triplets(j) for j in jumps]
    jstart = np.zeros(len(parts) + 1, dtype=np.int64)
    for k, part in enumerate(parts):
        jstart[k + 1] = jstart[k] + part[0].size
    if parts:
        jr = np.concatenate([q[0] for q in parts])
        jc = np.concatenate([q[1] for q in parts])
        jv = np.concatenate([q[2] for q in parts])
    else:
        jr = jc = np.zeros(0, dtype=np.int64)
        jv = np.zeros(0, dtype=complex)
    rows, cols, vals = _assemble_coo(d, hr, hc, hv, jr, jc, jv, jstart)
    out = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, d * d))
    out.sum_duplicates()
    out.eliminate_zeros()
    out.sort_indices()
    return out


def assemble_liouvillian(h, jumps):
    if USE_NUMBA:
        return liouvillian_numba(h, jumps)
    return liouvillian_scipy(h, jumps)


# -- optimality-condition scan ------------------------------------------------
#
# On the conic I(K, D) = 14K^2 + 28KD + 12D^2 - kappa^2 = 0 the Kerr value is
# an explicit function of D on two branches; R is scanned along each.


def conic_kerr(delta, kappa, branch):
    """Root ``K`` of I(K, delta) = 0; branch +1 / -1 picks the sign of the square root.

    Uses the cancellation-free form of the quadratic formula.
    """
    delta = np.asarray(delta, dtype=float)
    b = 28.0 * delta
    c = 12.0 * delta**2 - kappa**2
    root = np.sqrt(b * b - 56.0 * c)
    # plus branch: (-b + root) / 28, minus branch: (-b - root) / 28
    big_plus = b < 0
    q = np.where(big_plus, -b + root, -b - root) / 2.0
    first = q / 14.0
    second = np.where(q != 0.0, c / np.where(q != 0.0, q, 1.0), 0.0)
    if branch > 0:
        return np.where(big_plus, first, second)
    return np.where(big_plus, second, first)


def residual_r(hop, kerr, delta, kappa):
    return (
        4 * hop**2 * kerr
        + 8 * kerr**3
        + 28 * kerr**2 * delta
        + 28 * kerr * delta**2
        + 8 * delta**3
        - 7 * kerr * kappa**2
        - 6 * delta * kappa**2
    )


def residual_i(kerr, delta, kappa):
    return 14 * kerr**2 + 28 * kerr * delta + 12 * delta**2 - kappa**2


def conic_scan_numpy(hop, kappa, deltas, branch):
    k = conic_kerr(deltas, kappa, branch)
    return k, residual_r(hop, k, deltas, kappa)


if HAVE_NUMBA:

    @njit(cache=True)
    def _conic_kerr_scalar(delta, kappa, branch):
        b = 28.0 * delta
        c = 12.0 * delta * delta - kappa * kappa
        root = np.sqrt(b * b - 56.0 * c)
        if b < 0:
            q = (-b + root) / 2.0
            first = q / 14.0
            second = c / q
            return first if branch > 0 else second
        q = (-b - root) / 2.0
        first = q / 14.0
        second = c / q if q != 0.0 else 0.0
        return second if branch > 0 else first

    @njit(cache=True)
    def _r_scalar(hop, k, d, kappa):
        return (
            4 * hop * hop * k
            + 8 * k**3
            + 28 * k * k * d
            + 28 * k * d * d
            + 8 * d**3
            - 7 * k * kappa * kappa
            - 6 * d * kappa * kappa
        )

    @njit(cache=True)
    def _conic_scan(hop, kappa, deltas, branch):
        n = deltas.size
        ks = np.empty(n)
        rs = np.empty(n)
        for i in range(n):
            k = _conic_kerr_scalar(deltas[i], kappa, branch)
            ks[i] = k
            rs[i] = _r_scalar(hop, k, deltas[i], kappa)
        return ks, rs

    @njit(cache=True)
    def _conic_bisect(hop, kappa, branch, lo, hi, ftol):
        flo = _r_scalar(hop, _conic_kerr_scalar(lo, kappa, branch), lo, kappa)
        fhi = _r_scalar(hop, _conic_kerr_scalar(hi, kappa, branch), hi, kappa)
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            fmid = _r_scalar(hop, _conic_kerr_scalar(mid, kappa, branch), mid, kappa)
            if fmid == 0.0 or abs(fmid) <= ftol:
                return mid
            if (fmid > 0) == (flo > 0):
                lo = mid
                flo = fmid
            else:
                hi = mid
                fhi = fmid
        return lo if abs(flo) <= abs(fhi) else hi


def conic_scan_numba(hop, kappa, deltas, branch):
    return _conic_scan(float(hop), float(kappa), np.ascontiguousarray(deltas, dtype=float), int(branch))


def conic_scan(hop, kappa, deltas, branch):
    if USE_NUMBA:
        return conic_scan_numba(hop, kappa, deltas, branch)
    return conic_scan_numpy(hop, kappa, deltas, branch)


def conic_bisect_python(hop, kappa, branch, lo, hi, ftol):
    from ._roots import bisect

    def f(x):
        k = float(conic_kerr(x, kappa, branch))
        return float(residual_r(hop, k, x, kappa))

    return bisect(f, lo, hi, ftol=ftol, max_iter=400)


def conic_bisect(hop, kappa, branch, lo, hi, ftol):
    if USE_NUMBA:
        return float(_conic_bisect(float(hop), float(kappa), int(branch), float(lo), float(hi), float(ftol)))
    return conic_bisect_python(hop, kappa, branch, lo, hi, ftol)
