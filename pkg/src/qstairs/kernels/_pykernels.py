"""Pure-Python kernels over lists of Python ints.

This module is the reference implementation and the fallback. The compiled
module ``_ckernels`` exposes the same functions over int64 buffers and raises
``OverflowError`` whenever a value would leave the int64 range; the dispatcher
in ``qstairs.kernels`` then re-runs the call here.
"""

from __future__ import annotations


def convolve(a, b, n):
    """First ``n`` coefficients of the Cauchy product of ``a`` and ``b``."""
    out = [0] * n
    lb = len(b)
    for i in range(min(len(a), n)):
        ai = a[i]
        if not ai:
            continue
        stop = min(lb, n - i)
        for j in range(stop):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def multisum_accumulate(steps, node_depth, node_value, term_node, term_row,
                        term_off, term_len, term_coef, nrows, width, dlen):
    """Accumulate a pruned multi-index q-hypergeometric sum.

    Nodes arrive in depth-first order; a node at depth ``k`` with value ``v``
    fixes index ``k`` to ``v``. Each node carries the series
    ``1 / prod_{r<=k} (q^{d_r}; q^{d_r})_{idx_r}`` truncated to ``dlen`` terms,
    obtained from its left sibling by one geometric division, or copied from
    its parent when ``v == 0``. Terms attached to a node add
    ``coef * q^off * series[:len]`` into row ``term_row``.
    """
    r = len(steps)
    stack = [None] * (r + 1)
    stack[0] = [1] + [0] * (dlen - 1)
    rows = [[0] * width for _ in range(nrows)]
    t = 0
    nterms = len(term_node)
    for node in range(len(node_depth)):
        k = node_depth[node]
        v = node_value[node]
        if v == 0:
            cur = stack[k][:]
        else:
            cur = stack[k + 1]
            d = steps[k] * v
            for i in range(d, dlen):
                cur[i] += cur[i - d]
        stack[k + 1] = cur
        while t < nterms and term_node[t] == node:
            row = rows[term_row[t]]
            off = term_off[t]
            c = term_coef[t]
            for i in range(term_len[t]):
                x = cur[i]
                if x:
                    row[off + i] += c * x
            t += 1
    return rows


def inverse_euler(coeffs, bound=0):
    """Exponents ``a_1..a_N`` with ``prod (1-q^m)^(-a_m)`` equal to ``coeffs``.

    ``coeffs[0]`` must be 1. Returns a list indexed by ``m`` (entry 0 is 0).
    With ``bound > 0`` the peeling stops early and returns ``None`` as soon as
    some ``|a_m|`` exceeds ``bound``.
    """
    n = len(coeffs) - 1
    g = list(coeffs)
    a = [0] * (n + 1)
    for m in range(1, n + 1):
        am = g[m]
        if not am:
            continue
        if bound and abs(am) > bound:
            return None
        a[m] = am
        _times_one_minus_power(g, m, am, n)
    return a


def _times_one_minus_power(g, m, p, n):
    # g <- g * (1 - q^m)^p, in place, up to index n
    if p > 0:
        binom = 1
        src = g[:]
        for t in range(1, min(p, n // m) + 1):
            binom = binom * (p - t + 1) // t
            c = -binom if t % 2 else binom
            sh = t * m
            for k in range(sh, n + 1):
                if src[k - sh]:
                    g[k] += c * src[k - sh]
    else:
        q = -p
        if q == 1:
            for k in range(m, n + 1):
                g[k] += g[k - m]
            return
        src = g[:]
        binom = 1
        for t in range(1, n // m + 1):
            binom = binom * (q + t - 1) // t
            sh = t * m
            for k in range(sh, n + 1):
                if src[k - sh]:
                    g[k] += binom * src[k - sh]
