import numpy as np

from .errors import RootNotFoundError


def bisect(f, lo, hi, ftol=0.0, max_iter=200):
    """Plain bisection on a sign-changing bracket.

    Stops when ``|f| <= ftol`` or the bracket can no longer shrink in floating
    point; returns the endpoint with the smaller ``|f|``.
    """
    lo, hi = float(lo), float(hi)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise RootNotFoundError(f"no sign change on [{lo}, {hi}]", interval=(lo, hi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0 or abs(fmid) <= ftol:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return lo if abs(flo) <= abs(fhi) else hi
