# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: gamma rejection sampling and Gaussian KDE evaluation.

Must stay call-for-call identical to ``_fastpath_py``: the sampler consumes
the underlying bit stream in exactly the same (normal, uniform) order, so
both backends produce bit-identical draws from the same seed.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport exp, log, pow, sqrt
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal, random_standard_uniform

cnp.import_array()

cdef const char *_CAPSULE_NAME = "BitGenerator"


cdef double _gamma_accept(bitgen_t *rng, double d, double c) noexcept nogil:
    # Marsaglia-Tsang squeeze for shape >= 1 (d = shape - 1/3, c = 1/sqrt(9d)).
    cdef double x, v, u
    while True:
        x = random_standard_normal(rng)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = random_standard_uniform(rng)
        if u < 1.0 - 0.0331 * x * x * x * x:
            return d * v
        if log(u) < 0.5 * x * x + d * (1.0 - v + log(v)):
            return d * v


def standard_gamma(generator, double alpha, Py_ssize_t n):
    """Draw ``n`` standard gamma variates with shape ``alpha``.

    ``generator`` is a ``numpy.random.Generator``; its bit stream is
    advanced exactly as by the pure-Python implementation.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")

    cdef bint boost = alpha < 1.0
    cdef double shape = alpha + 1.0 if boost else alpha
    cdef double d = shape - 1.0 / 3.0
    cdef double c = 1.0 / sqrt(9.0 * d)
    cdef double inv_alpha = 1.0 / alpha
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] view = out
    cdef bitgen_t *rng
    cdef Py_ssize_t i
    cdef double g

    bit_generator = generator.bit_generator
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, _CAPSULE_NAME):
        raise ValueError("generator does not expose a BitGenerator capsule")
    rng = <bitgen_t *> PyCapsule_GetPointer(capsule, _CAPSULE_NAME)

    with bit_generator.lock, nogil:
        for i in range(n):
            g = _gamma_accept(rng, d, c)
            if boost:
                g = g * pow(random_standard_uniform(rng), inv_alpha)
            view[i] = g
    return out


def kde_gaussian(double[::1] samples, double[::1] support, double bandwidth):
    """Evaluate a Gaussian kernel density estimate on ``support``."""
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    cdef Py_ssize_t n = samples.shape[0]
    cdef Py_ssize_t m = support.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    cdef double[::1] dens = out
    cdef double inv_h = 1.0 / bandwidth
    cdef double norm = 1.0 / (n * bandwidth * sqrt(2.0 * np.pi))
    cdef Py_ssize_t i, j
    cdef double t, acc

    with nogil:
        for j in range(m):
            acc = 0.0
            for i in range(n):
                t = (support[j] - samples[i]) * inv_h
                acc += exp(-0.5 * t * t)
            dens[j] = acc * norm
    return out
