# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled polynomial kernels.

Same API and semantics as :mod:`divzero._kernels_py`.  ``mul`` and
``translate`` run an exact machine-integer fast path: every coefficient is
written over a common denominator, numerators are 64-bit integers and
every product and sum is overflow-checked.  Exponents are packed into one
64-bit key.  Any overflow, large coefficient or large exponent falls back to
the pure-Python kernel, so results are always exact.
"""

from libc.stdlib cimport free, malloc, qsort, realloc

from gmpy2 cimport __mpz_struct, import_gmpy2, mpq as mpq_t_obj

import gmpy2

from . import _kernels_py as _py
from .scalar import Scalar

import_gmpy2()

BACKEND = "cython"

ctypedef long long i64

cdef extern from *:
    bint _add_ovf "__builtin_saddll_overflow"(i64 a, i64 b, i64 *res)
    bint _mul_ovf "__builtin_smulll_overflow"(i64 a, i64 b, i64 *res)

cdef struct Term:
    i64 key
    i64 re
    i64 im

# exponents are packed in 10-bit fields; inputs must satisfy |e| < 256
cdef enum:
    FIELD = 10
    OFF = 256
    MASK = 1023
    MAX_AXES = 6

cdef i64 SMALL = (<i64> 1) << 62

_mpq = gmpy2.mpq
_make = Scalar._make
_ZERO = gmpy2.mpq(0)

add = _py.add
scale = _py.scale
evaluate = _py.evaluate


cdef inline bint _small_mpz(__mpz_struct *z, i64 *out):
    cdef int size = z._mp_size
    cdef unsigned long long limb
    if size == 0:
        out[0] = 0
        return True
    if size > 1 or size < -1:
        return False
    limb = <unsigned long long> z._mp_d[0]
    if limb >= SMALL:
        return False
    out[0] = <i64> limb if size > 0 else -(<i64> limb)
    return True


cdef inline bint _small_mpq(object x, i64 *num, i64 *den):
    cdef mpq_t_obj q = <mpq_t_obj> x
    if not _small_mpz(&q.q[0]._mp_num, num):
        return False
    return _small_mpz(&q.q[0]._mp_den, den)


cdef i64 _gcd(i64 a, i64 b):
    if a < 0:
        a = -a
    while b:
        a, b = b, a % b
    return a


cdef int _cmp_term(const void *x, const void *y) noexcept nogil:
    cdef i64 a = (<Term *> x).key
    cdef i64 b = (<Term *> y).key
    return (a > b) - (a < b)


cdef class _Loaded:
    """A term map written as packed keys and integer numerators over ``den``."""
    cdef Term *terms
    cdef Py_ssize_t size
    cdef i64 den
    cdef int n

    def __dealloc__(self):
        if self.terms is not NULL:
            free(self.terms)


cdef _Loaded _load(dict a, bint nonneg):
    """Return ``None`` when the fast path does not apply."""
    cdef Py_ssize_t m = len(a)
    cdef _Loaded out = _Loaded()
    cdef i64 num, den, d = 1, g, f, key
    cdef int n = -1, axis
    cdef Py_ssize_t idx = 0
    cdef object e, v
    cdef long ex
    out.terms = <Term *> malloc(max(m, 1) * sizeof(Term))
    if out.terms is NULL:
        raise MemoryError()
    # pass 1: common denominator
    for v in a.values():
        for part in (v.re, v.im):
            if not _small_mpq(part, &num, &den):
                return None
            if den != 1:
                g = _gcd(d, den)
                if _mul_ovf(d, den // g, &d) or d >= SMALL:
                    return None
    # pass 2: numerators and packed keys
    for e, v in a.items():
        if n < 0:
            n = len(e)
            if n > MAX_AXES:
                return None
        key = 0
        for axis in range(n):
            ex = e[axis]
            if ex >= OFF or ex < -OFF or (nonneg and ex < 0):
                return None
            key |= (<i64> (ex + OFF)) << (FIELD * axis)
        out.terms[idx].key = key
        _small_mpq(v.re, &num, &den)
        if _mul_ovf(num, d // den, &f):
            return None
        out.terms[idx].re = f
        _small_mpq(v.im, &num, &den)
        if _mul_ovf(num, d // den, &f):
            return None
        out.terms[idx].im = f
        idx += 1
    out.size = m
    out.den = d
    out.n = n
    return out


cdef dict _emit(Term *buf, Py_ssize_t count, int n, i64 offset, object den):
    """Sort, merge equal keys, and build the output term map."""
    cdef dict out = {}
    cdef Py_ssize_t i = 0, j
    cdef i64 key, re, im
    cdef int axis
    if count == 0:
        return out
    qsort(buf, count, sizeof(Term), _cmp_term)
    while i < count:
        key = buf[i].key
        re = buf[i].re
        im = buf[i].im
        j = i + 1
        while j < count and buf[j].key == key:
            if _add_ovf(re, buf[j].re, &re) or _add_ovf(im, buf[j].im, &im):
                return None
            j += 1
        i = j
        if re or im:
            exp = tuple([((key >> (FIELD * axis)) & MASK) - offset for axis in range(n)])
            out[exp] = _make(_mpq(re, den) if re else _ZERO, _mpq(im, den) if im else _ZERO)
    return out


def mul(dict a, dict b):
    if not a or not b:
        return {}
    cdef _Loaded la = _load(a, False)
    if la is None:
        return _py.mul(a, b)
    cdef _Loaded lb = _load(b, False)
    if lb is None:
        return _py.mul(a, b)
    cdef Py_ssize_t count = la.size * lb.size
    cdef Term *buf = <Term *> malloc(count * sizeof(Term))
    if buf is NULL:
        raise MemoryError()
    cdef Py_ssize_t p, q, k = 0
    cdef Term *x
    cdef Term *y
    cdef i64 t1, t2, t3, t4
    cdef bint bad = False
    cdef dict out
    for p in range(la.size):
        x = &la.terms[p]
        for q in range(lb.size):
            y = &lb.terms[q]
            buf[k].key = x.key + y.key
            if x.im == 0 and y.im == 0:
                if _mul_ovf(x.re, y.re, &t1):
                    bad = True
                    break
                buf[k].re = t1
                buf[k].im = 0
            else:
                if (_mul_ovf(x.re, y.re, &t1) or _mul_ovf(x.im, y.im, &t2)
                        or _mul_ovf(x.re, y.im, &t3) or _mul_ovf(x.im, y.re, &t4)
                        or _add_ovf(t1, -t2, &t1) or _add_ovf(t3, t4, &t3)):
                    bad = True
                    break
                buf[k].re = t1
                buf[k].im = t3
            k += 1
        if bad:
            break
    if bad:
        free(buf)
        return _py.mul(a, b)
    try:
        # summed keys carry offset 2 * OFF in every field
        out = _emit(buf, count, la.n, 2 * OFF, int(la.den) * int(lb.den))
    finally:
        free(buf)
    if out is None:
        return _py.mul(a, b)
    return out


cdef i64 *_binomial_row(long e, i64 k, bint *ok):
    """Coefficients of ``(x - k)^e`` indexed by power; overflow clears ``ok``."""
    cdef i64 *row = <i64 *> malloc((e + 1) * sizeof(i64))
    cdef long m, t
    cdef i64 c
    if row is NULL:
        ok[0] = False
        return NULL
    # Pascal expansion of (x + s)^e with s = -k, coefficient of x^m is C(e,m) s^(e-m)
    for m in range(e + 1):
        row[m] = 0
    row[0] = 1
    for t in range(1, e + 1):
        for m in range(t, 0, -1):
            # row[m] = row[m-1] + s * row[m]
            if _mul_ovf(-k, row[m], &c) or _add_ovf(row[m - 1], c, &row[m]):
                ok[0] = False
                return row
        if _mul_ovf(-k, row[0], &row[0]):
            ok[0] = False
            return row
    return row


def translate(dict a, tuple k):
    cdef int n = len(k)
    if not any(k):
        return dict(a)
    cdef _Loaded la = _load(a, True)
    if la is None or la.n != n:
        return _py.translate(a, k)
    cdef i64 shifts[MAX_AXES]
    cdef int axis
    for axis in range(n):
        if k[axis] >= SMALL or k[axis] <= -SMALL:
            return _py.translate(a, k)
        shifts[axis] = k[axis]
    cdef Py_ssize_t cap = 64, count = 0, p, start, end, q
    cdef Term *buf = <Term *> malloc(cap * sizeof(Term))
    cdef Term *tmp
    cdef bint ok = True
    cdef long ex, m
    cdef i64 *row
    cdef i64 c, cre, cim, field_key, base
    cdef dict out
    if buf is NULL:
        raise MemoryError()
    try:
        for p in range(la.size):
            # seed one partial term, then expand axis by axis in place
            start = count
            if count + 1 > cap:
                cap *= 2
                tmp = <Term *> realloc(buf, cap * sizeof(Term))
                if tmp is NULL:
                    raise MemoryError()
                buf = tmp
            base = la.terms[p].key
            buf[count].key = 0
            buf[count].re = la.terms[p].re
            buf[count].im = la.terms[p].im
            count += 1
            for axis in range(n):
                ex = ((base >> (FIELD * axis)) & MASK) - OFF
                if ex == 0:
                    continue
                if shifts[axis] == 0:
                    field_key = (<i64> ex) << (FIELD * axis)
                    for q in range(start, count):
                        buf[q].key += field_key
                    continue
                row = _binomial_row(ex, shifts[axis], &ok)
                if not ok:
                    free(row)
                    break
                end = count
                while count + (end - start) * ex > cap:
                    cap *= 2
                tmp = <Term *> realloc(buf, cap * sizeof(Term))
                if tmp is NULL:
                    free(row)
                    raise MemoryError()
                buf = tmp
                # powers m >= 1 are appended; power 0 rescales in place
                for m in range(1, ex + 1):
                    c = row[m]
                    if c == 0:
                        continue
                    field_key = (<i64> m) << (FIELD * axis)
                    for q in range(start, end):
                        if _mul_ovf(buf[q].re, c, &cre) or _mul_ovf(buf[q].im, c, &cim):
                            ok = False
                            break
                        buf[count].key = buf[q].key + field_key
                        buf[count].re = cre
                        buf[count].im = cim
                        count += 1
                    if not ok:
                        break
                if ok:
                    c = row[0]
                    for q in range(start, end):
                        if _mul_ovf(buf[q].re, c, &buf[q].re) or _mul_ovf(buf[q].im, c, &buf[q].im):
                            ok = False
                            break
                free(row)
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            return _py.translate(a, k)
        out = _emit(buf, count, n, 0, int(la.den))
    finally:
        free(buf)
    if out is None:
        return _py.translate(a, k)
    return out
