"""Pure-Python/numpy backend for the hypergeometric series hot loops.

The compiled backend in ``_series_cy`` exports the same four functions with
identical semantics; parity is enforced by the test suite.  All series are
summed with compensated (Kahan) accumulation, multivariable ones shell by
total degree, declaring convergence after three consecutive shells whose
absolute sum falls below ``tol * max(1, |S|)``.  The reported tail estimate
is the geometric extrapolation of the last shell.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

_RATIO_CAP = 0.98  # geometric tail extrapolation is meaningless past this
_LOG_TINY = -745.0


def _kahan_add(s, carry, value):
    value = value + carry
    new = s + value
    carry = value - (new - s)
    return new, carry


def f21_series(a, b, c, z, tol, max_terms):
    """Raw Gauss series sum_j (a)_j (b)_j / ((c)_j j!) z^j.

    Returns ``(value, terms_used, tail_estimate, converged)``.  The caller
    guarantees that c is not a non-positive integer reached before the
    series terminates; terminating series (a or b a non-positive integer)
    stop exactly with tail 0.
    """
    z = complex(z)
    s_re = s_im = c_re = c_im = 0.0
    term = 1.0 + 0.0j
    absz = abs(z)
    j = 0
    below = 0
    while j < max_terms:
        s_re, c_re = _kahan_add(s_re, c_re, term.real)
        s_im, c_im = _kahan_add(s_im, c_im, term.imag)
        num = (a + j) * (b + j)
        if num == 0.0:
            return complex(s_re, s_im), j + 1, 0.0, True
        term = term * num / ((c + j) * (j + 1.0)) * z
        j += 1
        scale = max(1.0, math.hypot(s_re, s_im))
        if abs(term) <= tol * scale:
            below += 1
            if below >= 3:
                ratio = min(absz, _RATIO_CAP)
                tail = abs(term) / max(1.0 - ratio, 0.02)
                return complex(s_re, s_im), j, tail, True
        else:
            below = 0
    return complex(s_re, s_im), j, abs(term), False


def f21_log_series(a, b, m, w, logw, psi1, psim1, psiam, psibm, tol, max_terms):
    """Logarithmic part of the z->1 connection formula for F(a,b;a+b+m;z).

    Sums sum_k (a+m)_k (b+m)_k / (k! (k+m)!) w^k
            * [logw - psi(k+1) - psi(k+m+1) + psi(a+m+k) + psi(b+m+k)]
    with w = 1-z; the digamma values are advanced by the recurrence
    psi(x+1) = psi(x) + 1/x from the supplied starting values.
    """
    w = complex(w)
    logw = complex(logw)
    s_re = s_im = c_re = c_im = 0.0
    base = 1.0 / math.gamma(m + 1.0)
    term = base + 0.0j
    pa, pb, p1, pm = psiam, psibm, psi1, psim1
    k = 0
    below = 0
    absw = abs(w)
    while k < max_terms:
        bracket = logw + (pa + pb - p1 - pm)
        contrib = term * bracket
        s_re, c_re = _kahan_add(s_re, c_re, contrib.real)
        s_im, c_im = _kahan_add(s_im, c_im, contrib.imag)
        term = term * (a + m + k) * (b + m + k) / ((k + 1.0) * (k + m + 1.0)) * w
        pa += 1.0 / (a + m + k)
        pb += 1.0 / (b + m + k)
        p1 += 1.0 / (k + 1.0)
        pm += 1.0 / (k + m + 1.0)
        k += 1
        scale = max(1.0, math.hypot(s_re, s_im))
        if abs(term) * (abs(bracket) + 1.0) <= tol * scale:
            below += 1
            if below >= 3:
                ratio = min(absw, _RATIO_CAP)
                tail = abs(term) * (abs(bracket) + 1.0) / max(1.0 - ratio, 0.02)
                return complex(s_re, s_im), k, tail, True
        else:
            below = 0
    return complex(s_re, s_im), k, abs(term), False


def _log_poch_table(p, kmax):
    """log|(p)_k| and sign of (p)_k for k = 0..kmax."""
    logs = np.empty(kmax + 1)
    signs = np.empty(kmax + 1)
    logs[0] = 0.0
    signs[0] = 1.0
    acc = 0.0
    sgn = 1.0
    for k in range(kmax):
        f = p + k
        if f == 0.0 or sgn == 0.0:
            sgn = 0.0
            acc = _LOG_TINY
        else:
            acc += math.log(abs(f))
            sgn *= math.copysign(1.0, f)
        logs[k + 1] = acc
        signs[k + 1] = sgn
    return logs, signs


def _pow_tables(x, kmax):
    """log|x|^k and unit-modulus phase x^k/|x|^k, safe for x = 0."""
    k = np.arange(kmax + 1, dtype=float)
    r = abs(x)
    if r == 0.0:
        logs = np.full(kmax + 1, _LOG_TINY)
        logs[0] = 0.0
        phases = np.ones(kmax + 1, dtype=complex)
        return logs, phases
    logs = k * math.log(r)
    phases = np.exp(1j * k * np.angle(complex(x)))
    return logs, phases


def _shell_driver(shell_eval, tol, max_degree):
    """Common shell loop: Kahan accumulation, 3-shell rule, geometric tail."""
    s_re = s_im = c_re = c_im = 0.0
    below = 0
    prev_abs = None
    d = 0
    while d <= max_degree:
        contrib, sabs = shell_eval(d)
        s_re, c_re = _kahan_add(s_re, c_re, contrib.real)
        s_im, c_im = _kahan_add(s_im, c_im, contrib.imag)
        scale = max(1.0, math.hypot(s_re, s_im))
        if sabs <= tol * scale:
            below += 1
            if below >= 3:
                if prev_abs and prev_abs > 0.0:
                    ratio = min(sabs / prev_abs, _RATIO_CAP)
                else:
                    ratio = 0.5
                tail = sabs * ratio / (1.0 - ratio)
                return complex(s_re, s_im), d + 1, tail, True
        else:
            below = 0
        prev_abs = sabs if sabs > 0.0 else prev_abs
        d += 1
    return complex(s_re, s_im), d, prev_abs if prev_abs else 0.0, False


def f1_shells(a, b1, b2, c, x, y, tol, max_degree):
    """Appell F1 double series by total-degree shells."""
    la, sa = _log_poch_table(a, max_degree)
    lb1, sb1 = _log_poch_table(b1, max_degree)
    lb2, sb2 = _log_poch_table(b2, max_degree)
    lc, sc = _log_poch_table(c, max_degree)
    lfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1)))))
    lx, px = _pow_tables(x, max_degree)
    ly, py = _pow_tables(y, max_degree)

    def shell(d):
        j = np.arange(d + 1)
        k = d - j
        logs = la[d] + lb1[j] + lb2[k] - lc[d] - lfact[j] - lfact[k] + lx[j] + ly[k]
        signs = sa[d] * sb1[j] * sb2[k] * sc[d]
        mags = np.where(signs == 0.0, 0.0, np.exp(np.minimum(logs, 700.0)))
        terms = mags * signs * px[j] * py[k]
        return complex(terms.sum()), float(np.abs(terms).sum())

    return _shell_driver(shell, tol, max_degree)


def f3_shells(a, ap, b, bp, c, x, y, tol, max_degree):
    """Appell F3 double series by total-degree shells."""
    la, sa = _log_poch_table(a, max_degree)
    lap, sap = _log_poch_table(ap, max_degree)
    lb, sb = _log_poch_table(b, max_degree)
    lbp, sbp = _log_poch_table(bp, max_degree)
    lc, sc = _log_poch_table(c, max_degree)
    lfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1)))))
    lx, px = _pow_tables(x, max_degree)
    ly, py = _pow_tables(y, max_degree)

    def shell(d):
        j = np.arange(d + 1)
        k = d - j
        logs = la[j] + lap[k] + lb[j] + lbp[k] - lc[d] - lfact[j] - lfact[k] + lx[j] + ly[k]
        signs = sa[j] * sap[k] * sb[j] * sbp[k] * sc[d]
        mags = np.where(signs == 0.0, 0.0, np.exp(np.minimum(logs, 700.0)))
        terms = mags * signs * px[j] * py[k]
        return complex(terms.sum()), float(np.abs(terms).sum())

    return _shell_driver(shell, tol, max_degree)


def fd1_shells(a, ap, b1, b2, c, x1, x2, y1, y2, tol, max_degree):
    """Four-variable FD1 series by total-degree shells.

    Term at (i1,i2,j1,j2):
        (a)_{i1+i2} (a')_{j1+j2} (b1)_{i1+j1} (b2)_{i2+j2} / (c)_{i1+i2+j1+j2}
        * x1^i1 x2^i2 y1^j1 y2^j2 / (i1! i2! j1! j2!)
    """
    la, sa = _log_poch_table(a, max_degree)
    lap, sap = _log_poch_table(ap, max_degree)
    lb1, sb1 = _log_poch_table(b1, max_degree)
    lb2, sb2 = _log_poch_table(b2, max_degree)
    lc, sc = _log_poch_table(c, max_degree)
    lfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, max_degree + 1)))))
    lx1, px1 = _pow_tables(x1, max_degree)
    lx2, px2 = _pow_tables(x2, max_degree)
    ly1, py1 = _pow_tables(y1, max_degree)
    ly2, py2 = _pow_tables(y2, max_degree)

    def shell(d):
        i1, i2, j1 = np.mgrid[0 : d + 1, 0 : d + 1, 0 : d + 1]
        keep = i1 + i2 + j1 <= d
        i1 = i1[keep]
        i2 = i2[keep]
        j1 = j1[keep]
        j2 = d - i1 - i2 - j1
        logs = (
            la[i1 + i2]
            + lap[j1 + j2]
            + lb1[i1 + j1]
            + lb2[i2 + j2]
            - lc[d]
            - lfact[i1]
            - lfact[i2]
            - lfact[j1]
            - lfact[j2]
            + lx1[i1]
            + lx2[i2]
            + ly1[j1]
            + ly2[j2]
        )
        signs = sa[i1 + i2] * sap[j1 + j2] * sb1[i1 + j1] * sb2[i2 + j2] * sc[d]
        mags = np.where(signs == 0.0, 0.0, np.exp(np.minimum(logs, 700.0)))
        terms = mags * signs * px1[i1] * px2[i2] * py1[j1] * py2[j2]
        return complex(terms.sum()), float(np.abs(terms).sum())

    return _shell_driver(shell, tol, max_degree)


def f21_pos_grid(a, b, c, t, w_switch, psi_am, psi_bm, psi_m1, tol, max_terms):
    """F(a,b;c;t) on 0 <= t <= 1 with a,b > 0 and c-a-b = m a positive integer.

    Direct series where 1-t >= w_switch (all terms positive), logarithmic
    connection closer to 1.  The digamma seeds are psi(a+m), psi(b+m),
    psi(m+1).  Returns an array; raises no errors (caller checks budget via
    the returned flag)."""
    t = np.asarray(t, dtype=float)
    m = int(round(c - a - b))
    out = np.empty_like(t)
    ok = True
    far = (1.0 - t) >= w_switch
    if far.any():
        tt = t[far]
        s = np.ones_like(tt)
        term = np.ones_like(tt)
        j = 0
        while j < max_terms:
            term = term * ((a + j) * (b + j) / ((c + j) * (j + 1.0))) * tt
            s += term
            j += 1
            if j > 4 and term.max() <= tol * max(1.0, s.max()):
                break
        else:
            ok = False
        out[far] = s
    near = ~far
    if near.any():
        w = 1.0 - t[near]
        logw = np.log(np.maximum(w, 1e-300))
        finite = np.zeros_like(w)
        pref1 = math.exp(
            math.lgamma(m) + math.lgamma(c) - math.lgamma(a + m) - math.lgamma(b + m)
        )
        term = np.ones_like(w)
        for k in range(m):
            finite += term
            if k + 1 < m:
                term = term * ((a + k) * (b + k) / ((k + 1.0) * (1.0 - m + k))) * w
        finite *= pref1
        pref2 = ((-1.0) ** m) * math.exp(
            math.lgamma(c) - math.lgamma(a) - math.lgamma(b)
        ) * w**m
        pa, pb, p1, pm = psi_am, psi_bm, -0.5772156649015328606, psi_m1
        term = np.full_like(w, 1.0 / math.gamma(m + 1.0))
        ssum = np.zeros_like(w)
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
            if k > 4 and (np.abs(term) * (np.abs(bracket) + 1.0)).max() <= tol:
                break
        else:
            ok = False
        out[near] = finite - pref2 * ssum
    return out, ok
