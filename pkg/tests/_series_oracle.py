"""Independent truncated-series reference for the modified Bessel functions.

Terms are computed explicitly as (z^2/4)^m / m! / m! (one float power,
exact integer factorials converted individually) and summed with
math.fsum -- a different arithmetic route from the library's
recurrence-and-accumulate evaluation, so agreement is meaningful.
Term magnitudes stay inside float range for z <= 50 because the series
has converged long before the power overflows.
"""

import math


def i0_series_reference(z: float, max_terms: int = 200) -> float:
    q = z * z / 4.0
    terms = [1.0]
    running = 1.0
    for m in range(1, max_terms):
        fact = float(math.factorial(m))
        term = q ** m / fact / fact
        terms.append(term)
        running += term
        if term <= 1e-22 * running:
            break
    return math.fsum(terms)


def i1_series_reference(z: float, max_terms: int = 200) -> float:
    if z == 0.0:
        return 0.0
    q = z * z / 4.0
    half = z / 2.0
    terms = []
    running = 0.0
    for m in range(max_terms):
        term = half * q ** m / float(math.factorial(m)) / float(math.factorial(m + 1))
        terms.append(term)
        running += term
        if m > 0 and term <= 1e-22 * running:
            break
    return math.fsum(terms)
