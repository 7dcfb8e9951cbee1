# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 versions of the kernels in ``_pykernels``.

Every addition and multiplication is overflow-checked. On overflow the
function raises ``OverflowError`` and the caller falls back to the exact
Python-int implementation, so results are never silently wrapped.
"""

from cpython cimport array
import array

cdef extern from *:
    """
    static inline int qs_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int qs_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    """
    int qs_add(long long a, long long b, long long *r) nogil
    int qs_mul(long long a, long long b, long long *r) nogil

cdef array.array _I64 = array.array('q', [])


cdef inline array.array _buf(object seq):
    # array('q', ...) raises OverflowError for out-of-range ints
    return array.array('q', seq)


cdef inline array.array _zeros(Py_ssize_t n):
    return array.clone(_I64, n, zero=True)


def convolve(a, b, Py_ssize_t n):
    cdef array.array aa = _buf(a)
    cdef array.array bb = _buf(b)
    cdef array.array out = _zeros(n)
    cdef long long[::1] av = aa
    cdef long long[::1] bv = bb
    cdef long long[::1] ov = out
    cdef Py_ssize_t la = av.shape[0], lb = bv.shape[0]
    cdef Py_ssize_t i, j, stop
    cdef long long ai, prod
    cdef int bad = 0
    with nogil:
        for i in range(min(la, n)):
            ai = av[i]
            if ai == 0:
                continue
            stop = min(lb, n - i)
            for j in range(stop):
                if bv[j] == 0:
                    continue
                if qs_mul(ai, bv[j], &prod) or qs_add(ov[i + j], prod, &ov[i + j]):
                    bad = 1
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in convolve")
    return out.tolist()


def multisum_accumulate(steps, node_depth, node_value, term_node, term_row,
                        term_off, term_len, term_coef, Py_ssize_t nrows,
                        Py_ssize_t width, Py_ssize_t dlen):
    cdef array.array st = _buf(steps)
    cdef array.array nd = _buf(node_depth)
    cdef array.array nv = _buf(node_value)
    cdef array.array tn = _buf(term_node)
    cdef array.array tr = _buf(term_row)
    cdef array.array to = _buf(term_off)
    cdef array.array tl = _buf(term_len)
    cdef array.array tc = _buf(term_coef)
    cdef long long[::1] stv = st
    cdef long long[::1] ndv = nd
    cdef long long[::1] nvv = nv
    cdef long long[::1] tnv = tn
    cdef long long[::1] trv = tr
    cdef long long[::1] tov = to
    cdef long long[::1] tlv = tl
    cdef long long[::1] tcv = tc
    cdef Py_ssize_t r = stv.shape[0]
    cdef array.array stack_buf = _zeros((r + 1) * dlen)
    cdef array.array rows_buf = _zeros(nrows * width)
    cdef long long[::1] S = stack_buf
    cdef long long[::1] R = rows_buf
    cdef Py_ssize_t nnodes = ndv.shape[0], nterms = tnv.shape[0]
    cdef Py_ssize_t node, t = 0, k, i, d, base, pbase, rbase, off
    cdef long long v, c, x, prod
    cdef int bad = 0
    S[0] = 1
    with nogil:
        for node in range(nnodes):
            k = ndv[node]
            v = nvv[node]
            base = (k + 1) * dlen
            if v == 0:
                pbase = k * dlen
                for i in range(dlen):
                    S[base + i] = S[pbase + i]
            else:
                d = stv[k] * v
                for i in range(d, dlen):
                    if qs_add(S[base + i], S[base + i - d], &S[base + i]):
                        bad = 1
                        break
                if bad:
                    break
            while t < nterms and tnv[t] == node:
                rbase = trv[t] * width + tov[t]
                c = tcv[t]
                for i in range(tlv[t]):
                    x = S[base + i]
                    if x == 0:
                        continue
                    if qs_mul(c, x, &prod) or qs_add(R[rbase + i], prod, &R[rbase + i]):
                        bad = 1
                        break
                if bad:
                    break
                t += 1
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in multisum_accumulate")
    flat = rows_buf.tolist()
    return [flat[m * width:(m + 1) * width] for m in range(nrows)]


def inverse_euler(coeffs, long long bound=0):
    # Only the bounded, small-exponent regime is handled natively.
    if bound <= 0 or bound > 8:
        raise OverflowError("unbounded inverse Euler is delegated to Python ints")
    cdef array.array gb = _buf(coeffs)
    cdef long long[::1] g = gb
    cdef Py_ssize_t n = g.shape[0] - 1
    cdef array.array ab = _zeros(n + 1)
    cdef long long[::1] a = ab
    cdef Py_ssize_t m, k, rep
    cdef long long am, cnt
    cdef int bad = 0, over = 0
    with nogil:
        for m in range(1, n + 1):
            am = g[m]
            if am == 0:
                continue
            if am > bound or am < -bound:
                over = 1
                break
            a[m] = am
            cnt = am if am > 0 else -am
            for rep in range(cnt):
                if am > 0:
                    k = n
                    while k >= m:
                        if g[k - m] != 0 and qs_add(g[k], -g[k - m], &g[k]):
                            bad = 1
                            break
                        k -= 1
                else:
                    for k in range(m, n + 1):
                        if g[k - m] != 0 and qs_add(g[k], g[k - m], &g[k]):
                            bad = 1
                            break
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in inverse_euler")
    if over:
        return None
    return ab.tolist()
