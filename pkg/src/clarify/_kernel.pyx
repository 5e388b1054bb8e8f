# cython: language_level=3
"""Compiled scoring scan over a packed case base.

Must stay bit-identical to the Python fallback in ``_pack.scan_py``: same
operations in the same order on IEEE doubles, no fused multiply-add, no
reassociation. Column kinds: 0 numeric, 1 symbolic, 2 flag, 3 text.
"""

from libc.math cimport fabs


def scan(double[::1] out_totals,
         unsigned char[::1] out_ok,
         Py_ssize_t n_cases,
         int[::1] kinds,
         double[::1] weights,
         unsigned char[::1] q_present,
         double[::1] q_vals,
         int[::1] q_codes,
         double[::1] spans,
         long long[::1] col_offsets,
         int[::1] lut_offsets,
         unsigned char[::1] presence,
         double[::1] values,
         int[::1] codes,
         double[::1] luts,
         bint penalize):
    cdef Py_ssize_t i, j, m = kinds.shape[0]
    cdef double num, den, s, w
    cdef long long off
    cdef int kind
    cdef unsigned char p, qp
    for i in range(n_cases):
        num = 0.0
        den = 0.0
        for j in range(m):
            off = col_offsets[j]
            if off >= 0:
                p = presence[off + i]
            else:
                p = 0
            qp = q_present[j]
            if qp and p:
                kind = kinds[j]
                w = weights[j]
                if kind == 0:
                    s = 1.0 - fabs(q_vals[j] - values[off + i]) / spans[j]
                elif kind == 1:
                    s = luts[lut_offsets[j] + codes[off + i]]
                elif kind == 2:
                    s = 1.0 if values[off + i] == q_vals[j] else 0.0
                else:
                    s = 1.0 if codes[off + i] == q_codes[j] else 0.0
                num += w * s
                den += w
            elif qp or p:
                if penalize:
                    w = weights[j]
                    num += w * 0.0
                    den += w
        if den == 0.0:
            out_ok[i] = 0
            out_totals[i] = 0.0
        else:
            out_ok[i] = 1
            out_totals[i] = num / den
