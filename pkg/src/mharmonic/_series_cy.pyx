# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the hypergeometric series hot loops.

Mirrors ``_series_py`` exactly: same functions, same summation order
(Kahan-compensated, shell-by-total-degree with the three-consecutive
sub-tolerance rule and geometric tail extrapolation).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, hypot, lgamma as _lgamma, log

BACKEND_NAME = "cython"

cdef double _RATIO_CAP = 0.98
cdef double _LOG_TINY = -745.0


cdef inline double _cap(double x) noexcept:
    return x if x < 700.0 else 700.0


def f21_series(double a, double b, double c, z, double tol, long max_terms):
    cdef double complex zz = z
    cdef double complex term = 1.0
    cdef double s_re = 0.0, s_im = 0.0, c_re = 0.0, c_im = 0.0
    cdef double v_re, v_im, t_re, t_im, num, scale, absz = abs(zz), ratio, tail
    cdef long j = 0
    cdef int below = 0
    while j < max_terms:
        v_re = term.real + c_re
        t_re = s_re + v_re
        c_re = v_re - (t_re - s_re)
        s_re = t_re
        v_im = term.imag + c_im
        t_im = s_im + v_im
        c_im = v_im - (t_im - s_im)
        s_im = t_im
        num = (a + j) * (b + j)
        if num == 0.0:
            return complex(s_re, s_im), j + 1, 0.0, True
        term = term * num / ((c + j) * (j + 1.0)) * zz
        j += 1
        scale = max(1.0, hypot(s_re, s_im))
        if abs(term) <= tol * scale:
            below += 1
            if below >= 3:
                ratio = absz if absz < _RATIO_CAP else _RATIO_CAP
                tail = abs(term) / max(1.0 - ratio, 0.02)
                return complex(s_re, s_im), j, tail, True
        else:
            below = 0
    return complex(s_re, s_im), j, abs(term), False


def f21_log_series(double a, double b, long m, w, logw,
                   double psi1, double psim1, double psiam, double psibm,
                   double tol, long max_terms):
    cdef double complex ww = w
    cdef double complex lw = logw
    cdef double complex term, bracket, contrib
    cdef double s_re = 0.0, s_im = 0.0, c_re = 0.0, c_im = 0.0
    cdef double v_re, v_im, t_re, t_im, scale, absw = abs(ww), ratio, tail, crit
    cdef double pa = psiam, pb = psibm, p1 = psi1, pm = psim1, base = 1.0
    cdef long k = 0, i
    cdef int below = 0
    for i in range(m):
        base *= (i + 1.0)
    term = 1.0 / base
    while k < max_terms:
        bracket = lw + (pa + pb - p1 - pm)
        contrib = term * bracket
        v_re = contrib.real + c_re
        t_re = s_re + v_re
        c_re = v_re - (t_re - s_re)
        s_re = t_re
        v_im = contrib.imag + c_im
        t_im = s_im + v_im
        c_im = v_im - (t_im - s_im)
        s_im = t_im
        term = term * (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0)) * ww
        pa += 1.0 / (a + m + k)
        pb += 1.0 / (b + m + k)
        p1 += 1.0 / (k + 1.0)
        pm += 1.0 / (k + m + 1.0)
        k += 1
        scale = max(1.0, hypot(s_re, s_im))
        crit = abs(term) * (abs(bracket) + 1.0)
        if crit <= tol * scale:
            below += 1
            if below >= 3:
                ratio = absw if absw < _RATIO_CAP else _RATIO_CAP
                tail = crit / max(1.0 - ratio, 0.02)
                return complex(s_re, s_im), k, tail, True
        else:
            below = 0
    return complex(s_re, s_im), k, abs(term), False


cdef _poch_tables(double p, long kmax):
    cdef cnp.ndarray[double, ndim=1] logs = np.empty(kmax + 1)
    cdef cnp.ndarray[double, ndim=1] signs = np.empty(kmax + 1)
    cdef double acc = 0.0, sgn = 1.0, f
    cdef long k
    logs[0] = 0.0
    signs[0] = 1.0
    for k in range(kmax):
        f = p + k
        if f == 0.0 or sgn == 0.0:
            sgn = 0.0
            acc = _LOG_TINY
        else:
            acc += log(fabs(f))
            sgn = sgn * (1.0 if f > 0.0 else -1.0)
        logs[k + 1] = acc
        signs[k + 1] = sgn
    return logs, signs


cdef _pow_tables(x, long kmax):
    cdef double r = abs(complex(x))
    k = np.arange(kmax + 1, dtype=float)
    if r == 0.0:
        logs = np.full(kmax + 1, _LOG_TINY)
        logs[0] = 0.0
        return logs, np.ones(kmax + 1, dtype=complex)
    return k * np.log(r), np.exp(1j * k * np.angle(complex(x)))


def f1_shells(double a, double b1, double b2, double c, x, y,
              double tol, long max_degree):
    la_, sa_ = _poch_tables(a, max_degree)
    lb1_, sb1_ = _poch_tables(b1, max_degree)
    lb2_, sb2_ = _poch_tables(b2, max_degree)
    lc_, sc_ = _poch_tables(c, max_degree)
    lx_, px_ = _pow_tables(x, max_degree)
    ly_, py_ = _pow_tables(y, max_degree)
    lf_ = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1, dtype=float)))))
    cdef double[:] la = la_, sa = sa_, lb1 = lb1_, sb1 = sb1_, lb2 = lb2_, sb2 = sb2_
    cdef double[:] lc = lc_, sc = sc_, lx = lx_, ly = ly_, lf = lf_
    cdef double complex[:] px = px_, py = py_

    cdef double s_re = 0.0, s_im = 0.0, c_re = 0.0, c_im = 0.0
    cdef double v_re, v_im, t_re, t_im, sabs, mag, sgn, scale, prev_abs = -1.0, ratio, tail
    cdef double complex term, shell_sum
    cdef long d = 0, j, k
    cdef int below = 0
    while d <= max_degree:
        shell_sum = 0.0
        sabs = 0.0
        for j in range(d + 1):
            k = d - j
            sgn = sa[d] * sb1[j] * sb2[k] * sc[d]
            if sgn == 0.0:
                continue
            mag = exp(_cap(la[d] + lb1[j] + lb2[k] - lc[d] - lf[j] - lf[k] + lx[j] + ly[k]))
            term = mag * sgn * px[j] * py[k]
            shell_sum += term
            sabs += abs(term)
        v_re = shell_sum.real + c_re
        t_re = s_re + v_re
        c_re = v_re - (t_re - s_re)
        s_re = t_re
        v_im = shell_sum.imag + c_im
        t_im = s_im + v_im
        c_im = v_im - (t_im - s_im)
        s_im = t_im
        scale = max(1.0, hypot(s_re, s_im))
        if sabs <= tol * scale:
            below += 1
            if below >= 3:
                ratio = sabs / prev_abs if (prev_abs > 0.0 and sabs / prev_abs < _RATIO_CAP) else (0.5 if prev_abs <= 0.0 else _RATIO_CAP)
                tail = sabs * ratio / (1.0 - ratio)
                return complex(s_re, s_im), d + 1, tail, True
        else:
            below = 0
        if sabs > 0.0:
            prev_abs = sabs
        d += 1
    return complex(s_re, s_im), d, (prev_abs if prev_abs > 0.0 else 0.0), False


def f3_shells(double a, double ap, double b, double bp, double c, x, y,
              double tol, long max_degree):
    la_, sa_ = _poch_tables(a, max_degree)
    lap_, sap_ = _poch_tables(ap, max_degree)
    lb_, sb_ = _poch_tables(b, max_degree)
    lbp_, sbp_ = _poch_tables(bp, max_degree)
    lc_, sc_ = _poch_tables(c, max_degree)
    lx_, px_ = _pow_tables(x, max_degree)
    ly_, py_ = _pow_tables(y, max_degree)
    lf_ = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1, dtype=float)))))
    cdef double[:] la = la_, sa = sa_, lap = lap_, sap = sap_, lb = lb_, sb = sb_
    cdef double[:] lbp = lbp_, sbp = sbp_, lc = lc_, sc = sc_, lx = lx_, ly = ly_, lf = lf_
    cdef double complex[:] px = px_, py = py_

    cdef double s_re = 0.0, s_im = 0.0, c_re = 0.0, c_im = 0.0
    cdef double v_re, v_im, t_re, t_im, sabs, mag, sgn, scale, prev_abs = -1.0, ratio, tail
    cdef double complex term, shell_sum
    cdef long d = 0, j, k
    cdef int below = 0
    while d <= max_degree:
        shell_sum = 0.0
        sabs = 0.0
        for j in range(d + 1):
            k = d - j
            sgn = sa[j] * sap[k] * sb[j] * sbp[k] * sc[d]
            if sgn == 0.0:
                continue
            mag = exp(_cap(la[j] + lap[k] + lb[j] + lbp[k] - lc[d] - lf[j] - lf[k] + lx[j] + ly[k]))
            term = mag * sgn * px[j] * py[k]
            shell_sum += term
            sabs += abs(term)
        v_re = shell_sum.real + c_re
        t_re = s_re + v_re
        c_re = v_re - (t_re - s_re)
        s_re = t_re
        v_im = shell_sum.imag + c_im
        t_im = s_im + v_im
        c_im = v_im - (t_im - s_im)
        s_im = t_im
        scale = max(1.0, hypot(s_re, s_im))
        if sabs <= tol * scale:
            below += 1
            if below >= 3:
                ratio = sabs / prev_abs if (prev_abs > 0.0 and sabs / prev_abs < _RATIO_CAP) else (0.5 if prev_abs <= 0.0 else _RATIO_CAP)
                tail = sabs * ratio / (1.0 - ratio)
                return complex(s_re, s_im), d + 1, tail, True
        else:
            below = 0
        if sabs > 0.0:
            prev_abs = sabs
        d += 1
    return complex(s_re, s_im), d, (prev_abs if prev_abs > 0.0 else 0.0), False


def fd1_shells(double a, double ap, double b1, double b2, double c,
               x1, x2, y1, y2, double tol, long max_degree):
    la_, sa_ = _poch_tables(a, max_degree)
    lap_, sap_ = _poch_tables(ap, max_degree)
    lb1_, sb1_ = _poch_tables(b1, max_degree)
    lb2_, sb2_ = _poch_tables(b2, max_degree)
    lc_, sc_ = _poch_tables(c, max_degree)
    lx1_, px1_ = _pow_tables(x1, max_degree)
    lx2_, px2_ = _pow_tables(x2, max_degree)
    ly1_, py1_ = _pow_tables(y1, max_degree)
    ly2_, py2_ = _pow_tables(y2, max_degree)
    lf_ = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1, dtype=float)))))
    cdef double[:] la = la_, sa = sa_, lap = lap_, sap = sap_
    cdef double[:] lb1 = lb1_, sb1 = sb1_, lb2 = lb2_, sb2 = sb2_
    cdef double[:] lc = lc_, sc = sc_, lf = lf_
    cdef double[:] lx1 = lx1_, lx2 = lx2_, ly1 = ly1_, ly2 = ly2_
    cdef double complex[:] px1 = px1_, px2 = px2_, py1 = py1_, py2 = py2_

    cdef double s_re = 0.0, s_im = 0.0, c_re = 0.0, c_im = 0.0
    cdef double v_re, v_im, t_re, t_im, sabs, mag, sgn, scale, prev_abs = -1.0, ratio, tail
    cdef double complex term, shell_sum
    cdef long d = 0, i1, i2, j1, j2
    cdef int below = 0
    while d <= max_degree:
        shell_sum = 0.0
        sabs = 0.0
        for i1 in range(d + 1):
            for i2 in range(d - i1 + 1):
                for j1 in range(d - i1 - i2 + 1):
                    j2 = d - i1 - i2 - j1
                    sgn = sa[i1 + i2] * sap[j1 + j2] * sb1[i1 + j1] * sb2[i2 + j2] * sc[d]
                    if sgn == 0.0:
                        continue
                    mag = exp(_cap(la[i1 + i2] + lap[j1 + j2] + lb1[i1 + j1] + lb2[i2 + j2]
                                   - lc[d] - lf[i1] - lf[i2] - lf[j1] - lf[j2]
                                   + lx1[i1] + lx2[i2] + ly1[j1] + ly2[j2]))
                    term = mag * sgn * px1[i1] * px2[i2] * py1[j1] * py2[j2]
                    shell_sum += term
                    sabs += abs(term)
        v_re = shell_sum.real + c_re
        t_re = s_re + v_re
        c_re = v_re - (t_re - s_re)
        s_re = t_re
        v_im = shell_sum.imag + c_im
        t_im = s_im + v_im
        c_im = v_im - (t_im - s_im)
        s_im = t_im
        scale = max(1.0, hypot(s_re, s_im))
        if sabs <= tol * scale:
            below += 1
            if below >= 3:
                ratio = sabs / prev_abs if (prev_abs > 0.0 and sabs / prev_abs < _RATIO_CAP) else (0.5 if prev_abs <= 0.0 else _RATIO_CAP)
                tail = sabs * ratio / (1.0 - ratio)
                return complex(s_re, s_im), d + 1, tail, True
        else:
            below = 0
        if sabs > 0.0:
            prev_abs = sabs
        d += 1
    return complex(s_re, s_im), d, (prev_abs if prev_abs > 0.0 else 0.0), False


def f21_pos_grid(double a, double b, double c, cnp.ndarray[double, ndim=1] t,
                 double w_switch, double psi_am, double psi_bm, double psi_m1,
                 double tol, long max_terms):
    """Grid 2F1 for positive parameters with integer gap; see the Python twin."""
    cdef long m = <long>(c - a - b + 0.5)
    cdef long npts = t.shape[0], i, j, k
    cdef cnp.ndarray[double, ndim=1] out = np.empty(npts)
    cdef double tt, s, term, w, logw, finite, pref1, pref2, pa, pb, p1, pm
    cdef double bracket, ssum, base
    cdef bint ok = True
    pref1 = exp(_lgamma(m) + _lgamma(c) - _lgamma(a + m) - _lgamma(b + m)) if m >= 1 else 0.0
    pref2 = exp(_lgamma(c) - _lgamma(a) - _lgamma(b)) * (1.0 if m % 2 == 0 else -1.0)
    base = 1.0
    for j in range(m):
        base *= (j + 1.0)
    base = 1.0 / base
    for i in range(npts):
        tt = t[i]
        if 1.0 - tt >= w_switch:
            s = 1.0
            term = 1.0
            j = 0
            while j < max_terms:
                term = term * ((a + j) * (b + j) / ((c + j) * (j + 1.0))) * tt
                s += term
                j += 1
                if j > 4 and term <= tol * (s if s > 1.0 else 1.0):
                    break
            else:
                ok = False
            out[i] = s
        else:
            w = 1.0 - tt
            logw = log(w if w > 1e-300 else 1e-300)
            finite = 0.0
            term = 1.0
            for k in range(m):
                finite += term
                if k + 1 < m:
                    term = term * ((a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k))) * w
            finite *= pref1
            pa = psi_am
            pb = psi_bm
            p1 = -0.5772156649015328606
            pm = psi_m1
            term = base
            ssum = 0.0
            k = 0
            while k < max_terms:
                bracket = logw + (pa + pb - p1 - pm)
                ssum += term * bracket
                term = term * ((a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0))) * w
                pa += 1.0 / (a + m + k)
                pb += 1.0 / (b + m + k)
                p1 += 1.0 / (k + 1.0)
                pm += 1.0 / (k + m + 1.0)
                k += 1
                if k > 4 and fabs(term) * (fabs(bracket) + 1.0) <= tol:
                    break
            else:
                ok = False
            out[i] = finite - pref2 * (w ** m) * ssum
    return out, ok
