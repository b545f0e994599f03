# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels. Call-compatible with ``_pykernels``."""
import numpy as np

from libc.math cimport exp, log, sin, cos, sqrt, fabs, atan2, hypot, M_PI

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double EPS = 1e-16
cdef int MAX_ITER = 5000


cdef inline double complex cexp_(double complex z) nogil:
    cdef double r = exp(z.real)
    return r * cos(z.imag) + 1j * r * sin(z.imag)


cdef inline double complex clog_(double complex z) nogil:
    return log(hypot(z.real, z.imag)) + 1j * atan2(z.imag, z.real)


cdef inline double cabs_(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef double complex _ei_series_c(double complex z) nogil:
    cdef double complex term = z
    cdef double complex total = z
    cdef int n = 1
    while n < MAX_ITER:
        n += 1
        term = term * z * (n - 1) / (<double>n * n)
        total = total + term
        if cabs_(term) <= EPS * cabs_(total):
            break
    return EULER_GAMMA + clog_(z) + total


cdef double complex _ei_asym_c(double complex z) nogil:
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef double complex nxt
    cdef int k = 0
    while k < 200:
        k += 1
        nxt = term * k / z
        if cabs_(nxt) >= cabs_(term):
            break
        term = nxt
        total = total + term
        if cabs_(term) <= EPS * cabs_(total):
            break
    return cexp_(z) / z * total


cdef double complex _e1_cf_c(double complex w) nogil:
    cdef double tiny = 1e-300
    cdef double complex b = w + 1.0
    cdef double complex c = 1.0 / tiny
    cdef double complex d = 1.0 / b
    cdef double complex h = d
    cdef double complex delta
    cdef double an
    cdef int i
    for i in range(1, MAX_ITER):
        an = -(<double>i) * i
        b = b + 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h = h * delta
        if cabs_(delta - 1.0) < EPS:
            break
    return h * cexp_(-w)


cdef double _ei_series_r(double x) nogil:
    cdef double term = x
    cdef double total = x
    cdef int n = 1
    while n < MAX_ITER:
        n += 1
        term = term * x * (n - 1) / (<double>n * n)
        total += term
        if fabs(term) <= EPS * fabs(total):
            break
    return EULER_GAMMA + log(fabs(x)) + total


cdef double _ei_asym_r(double x) nogil:
    cdef double term = 1.0
    cdef double total = 1.0
    cdef double nxt
    cdef int k = 0
    while k < 200:
        k += 1
        nxt = term * k / x
        if fabs(nxt) >= fabs(term):
            break
        term = nxt
        total += term
        if fabs(term) <= EPS * fabs(total):
            break
    return exp(x) / x * total


cdef double _e1_cf_r(double w) nogil:
    cdef double tiny = 1e-300
    cdef double b = w + 1.0
    cdef double c = 1.0 / tiny
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double delta, an
    cdef int i
    for i in range(1, MAX_ITER):
        an = -(<double>i) * i
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return h * exp(-w)


cdef double _ei_r(double x) nogil:
    if x < -1.0:
        return -_e1_cf_r(-x)
    if x <= 40.0:
        return _ei_series_r(x)
    return _ei_asym_r(x)


cdef double complex _ei_c(double complex z) nogil:
    cdef double u = z.real
    cdef double v = z.imag
    cdef double r = cabs_(z)
    cdef double complex val
    if r < 2.0:
        return _ei_series_c(z)
    if u > 0.0 and fabs(v) < u:
        if r <= 40.0:
            return _ei_series_c(z)
        return _ei_asym_c(z)
    val = -_e1_cf_c(-z)
    if v > 0.0:
        val = val + 1j * M_PI
    elif v < 0.0:
        val = val - 1j * M_PI
    return val


cdef double _si(double x) nogil:
    cdef double term, total, x2
    cdef int n
    if x <= 4.0:
        term = x
        total = x
        x2 = x * x
        n = 0
        while fabs(term) > EPS * fabs(total) and n < 200:
            n += 1
            term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0))
            total += term / (2.0 * n + 1.0)
        return total - M_PI / 2
    return _e1_cf_c(1j * x).imag


def ei(double x):
    if x == 0.0:
        raise ValueError("Ei is singular at 0")
    return _ei_r(x)


def ei_complex(z):
    cdef double complex zc = complex(z)
    if zc == 0:
        raise ValueError("Ei is singular at 0")
    return complex(_ei_c(zc))


def si(double x):
    return _si(x)


def si_array(x):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _si(xv[i])
    return out.reshape(np.shape(x))


def li_array(x):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _ei_r(log(xv[i]))
    return out.reshape(np.shape(x))


def riemann_principal(x):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double t, lx
    with nogil:
        for i in range(xv.shape[0]):
            t = xv[i]
            if t < 2.0:
                ov[i] = 0.0
            else:
                lx = log(t)
                ov[i] = t / lx * _ei_r(lx)
    return out.reshape(np.shape(x))


def term_sum(x, a, alpha):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float).ravel()
    cdef const double[::1] alv = np.ascontiguousarray(alpha, dtype=float).ravel()
    out = np.zeros(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double lx, s, ph, aj, alj, prev_a, xa
    cdef Py_ssize_t nz = av.shape[0]
    c1_arr = np.empty(nz)
    c2_arr = np.empty(nz)
    cdef double[::1] c1 = c1_arr
    cdef double[::1] c2 = c2_arr
    for j in range(nz):
        c1[j] = 2.0 * av[j] / (av[j] * av[j] + alv[j] * alv[j])
        c2[j] = 2.0 * alv[j] / (av[j] * av[j] + alv[j] * alv[j])
    with nogil:
        for i in range(xv.shape[0]):
            lx = log(xv[i])
            s = 0.0
            prev_a = -1.0
            xa = 0.0
            for j in range(av.shape[0]):
                aj = av[j]
                alj = alv[j]
                # runs of equal real part share x^a
                if aj != prev_a:
                    xa = exp(aj * lx)
                    prev_a = aj
                ph = alj * lx
                s += xa * (c1[j] * cos(ph) + c2[j] * sin(ph))
            ov[i] = -s / lx
    return out.reshape(np.shape(x))


def li_rho_sum(x, a, alpha):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float).ravel()
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=float).ravel()
    cdef const double[::1] alv = np.ascontiguousarray(alpha, dtype=float).ravel()
    out = np.zeros(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double lx, s
    cdef double complex z
    with nogil:
        for i in range(xv.shape[0]):
            lx = log(xv[i])
            s = 0.0
            for j in range(av.shape[0]):
                z = av[j] * lx + 1j * (alv[j] * lx)
                s += 2.0 * _ei_c(z).real
            ov[i] = s
    return out.reshape(np.shape(x))


def numerov(f, double h):
    cdef const double[::1] fv = np.ascontiguousarray(f, dtype=float)
    cdef Py_ssize_t n = fv.shape[0]
    psi = np.zeros(n)
    cdef double[::1] p = psi
    cdef double c = h * h / 12.0
    cdef int nodes = 0
    cdef int last_sign = 1
    cdef int s
    cdef Py_ssize_t i, k
    if n < 2:
        return psi, 0
    p[1] = h
    with nogil:
        for i in range(1, n - 1):
            p[i + 1] = (2.0 * p[i] * (1.0 + 5.0 * c * fv[i])
                        - p[i - 1] * (1.0 - c * fv[i - 1])) / (1.0 - c * fv[i + 1])
            if fabs(p[i + 1]) > 1e200:
                for k in range(i + 2):
                    p[k] *= 1e-200
            if i + 1 < n - 1 and p[i + 1] != 0.0:
                s = 1 if p[i + 1] > 0 else -1
                if s != last_sign:
                    nodes += 1
                    last_sign = s
    return psi, nodes
