"""Exact sparse residuals for iterative refinement.

Every float64 is a dyadic rational, so ``b - A x`` can be formed without
rounding by writing the entries of ``A`` and ``x`` as Python integers times
a common power of two. The result is rounded to float64 only once, at the
end. The iterate itself is kept in the same fixed-point form so corrections
far below double precision still accumulate.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

# fixed-point exponent of the iterate: values above ~1e-160 keep full double precision
ITERATE_EXP = -600


def to_fixed(x: np.ndarray, exp: int) -> np.ndarray:
    """Object array of ints ``k`` with ``x == k * 2**exp`` (bits below ``2**exp`` truncated)."""
    mant, ex = np.frexp(np.asarray(x, dtype=float))
    ints = (mant * 2.0**53).astype(np.int64).tolist()
    shifts = (ex - 53 - exp).tolist()
    return np.array([k << s if s >= 0 else k >> -s for k, s in zip(ints, shifts)], dtype=object)


def to_float(k: np.ndarray, exp: int) -> np.ndarray:
    out = np.empty(len(k))
    for i, v in enumerate(k.tolist()):
        drop = max(v.bit_length() - 62, 0)
        out[i] = math.ldexp(float(v >> drop), exp + drop)
    return out


class FixedVector:
    """Complex vector stored exactly as fixed-point integers."""

    def __init__(self, n: int):
        self.re = to_fixed(np.zeros(n), ITERATE_EXP)
        self.im = to_fixed(np.zeros(n), ITERATE_EXP)

    def add(self, c: np.ndarray) -> None:
        self.re = self.re + to_fixed(c.real, ITERATE_EXP)
        self.im = self.im + to_fixed(c.imag, ITERATE_EXP)

    def value(self) -> np.ndarray:
        return to_float(self.re, ITERATE_EXP) + 1j * to_float(self.im, ITERATE_EXP)


class ExactOperator:
    """Sparse complex matrix with exact ``b - A x`` for ``x`` a ``FixedVector``."""

    def __init__(self, a: sp.spmatrix):
        a = sp.csr_matrix(a)
        a.sort_indices()
        re, im = a.data.real, a.data.imag
        mags = np.abs(np.concatenate([re, im]))
        mags = mags[mags > 0]
        self.exp = int(np.frexp(mags)[1].min()) - 53 if mags.size else 0
        self.re = to_fixed(re, self.exp)
        self.im = to_fixed(im, self.exp)
        self.cols = a.indices
        counts = np.diff(a.indptr)
        self.empty = counts == 0
        # reduceat needs in-range starts; empty rows are zeroed afterwards
        self.starts = np.minimum(a.indptr[:-1], max(a.nnz - 1, 0))
        self.shape = a.shape

    def residual(self, b: np.ndarray, x: FixedVector) -> np.ndarray:
        exp = self.exp + ITERATE_EXP
        br = to_fixed(b.real, exp)
        bi = to_fixed(b.imag, exp)
        if len(self.re):
            xr, xi = x.re[self.cols], x.im[self.cols]
            sr = np.add.reduceat(self.re * xr - self.im * xi, self.starts)
            si = np.add.reduceat(self.re * xi + self.im * xr, self.starts)
            sr[self.empty] = 0
            si[self.empty] = 0
            br = br - sr
            bi = bi - si
        return to_float(br, exp) + 1j * to_float(bi, exp)
