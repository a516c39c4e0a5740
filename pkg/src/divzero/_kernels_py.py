"""Pure-Python polynomial kernels.

Every kernel takes and returns plain ``dict`` term maps
``{exponent tuple: Scalar}`` with zero coefficients pruned.  The compiled
module ``_kernels`` exports the same functions with the same semantics.
"""

from __future__ import annotations

from math import comb

from gmpy2 import mpq

from .scalar import Scalar

BACKEND = "python"

_Z = mpq(0)


def _finish(acc_re: dict, acc_im: dict) -> dict:
    out = {}
    make = Scalar._make
    for e, re in acc_re.items():
        im = acc_im.get(e, _Z)
        if re or im:
            out[e] = make(re, im)
    for e, im in acc_im.items():
        if im and e not in acc_re:
            out[e] = make(_Z, im)
    return out


def add(a: dict, b: dict, scale: Scalar | None = None) -> dict:
    """Return ``a + scale*b``."""
    out = dict(a)
    for e, c in b.items():
        if scale is not None:
            c = c * scale
        prev = out.get(e)
        if prev is None:
            out[e] = c
        else:
            s = prev + c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def scale(a: dict, c: Scalar) -> dict:
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def mul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    acc_re: dict = {}
    acc_im: dict = {}
    b_items = [(e, v.re, v.im) for e, v in b.items()]
    for ea, va in a.items():
        ar, ai = va.re, va.im
        for eb, br, bi in b_items:
            e = tuple([x + y for x, y in zip(ea, eb)])
            if ai or bi:
                r = ar * br - ai * bi
                i = ar * bi + ai * br
                if i:
                    acc_im[e] = acc_im.get(e, _Z) + i
            else:
                r = ar * br
            acc_re[e] = acc_re.get(e, _Z) + r
    return _finish(acc_re, acc_im)


def _shift_rows(d: int, k: int) -> list:
    """Coefficients of (x - k)^d as [(power, int coeff), ...]."""
    if k == 0:
        return [(d, 1)]
    return [(m, comb(d, m) * (-k) ** (d - m)) for m in range(d + 1)]


def translate(a: dict, k: tuple) -> dict:
    """Substitute ``x_i -> x_i - k_i`` simultaneously (exponents >= 0)."""
    if not any(k):
        return dict(a)
    n = len(k)
    cache: dict = {}
    acc_re: dict = {}
    acc_im: dict = {}
    for e, v in a.items():
        partial = [((), 1)]
        for axis in range(n):
            key = (e[axis], k[axis])
            rows = cache.get(key)
            if rows is None:
                rows = cache[key] = _shift_rows(e[axis], k[axis])
            if len(rows) == 1:
                p, w = rows[0]
                partial = [(pe + (p,), pw * w) for pe, pw in partial]
            else:
                partial = [(pe + (p,), pw * w) for pe, pw in partial for p, w in rows]
        vr, vi = v.re, v.im
        for pe, w in partial:
            acc_re[pe] = acc_re.get(pe, _Z) + vr * w
            if vi:
                acc_im[pe] = acc_im.get(pe, _Z) + vi * w
    return _finish(acc_re, acc_im)


def evaluate(a: dict, point: tuple) -> Scalar:
    """Exact evaluation at a point of Scalars (non-negative exponents)."""
    n = len(point)
    powers: list = [dict() for _ in range(n)]
    tot_re = _Z
    tot_im = _Z
    for e, v in a.items():
        mr, mi = v.re, v.im
        for axis in range(n):
            d = e[axis]
            if d == 0:
                continue
            cache = powers[axis]
            pw = cache.get(d)
            if pw is None:
                pw = cache[d] = point[axis] ** d
            mr, mi = mr * pw.re - mi * pw.im, mr * pw.im + mi * pw.re
        tot_re += mr
        tot_im += mi
    return Scalar._make(tot_re, tot_im)
