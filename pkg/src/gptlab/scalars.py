"""Scalar modes and tolerances.

Every system carries a scalar mode: "exact" (Fraction arithmetic, no
rounding) or "float" (double precision with a global tolerance).  Vectors
and matrices are numpy arrays: dtype=object holding Fractions in exact
mode, float64 in float mode.
"""

import os
from fractions import Fraction

import numpy as np

from .errors import InvalidParameter, MixedScalarMode

EXACT = "exact"
FLOAT = "float"

#: tolerance for canonical-form matching of effect vectors under maps
MATCH_TOL = 1e-6
#: ambiguity guard factor for float-mode nearest-match snapping
SNAP_AMBIGUITY_FACTOR = 10.0


def float_eps():
    """Float-mode tolerance for rank/sign decisions (GPTLAB_EPS overrides)."""
    return float(os.environ.get("GPTLAB_EPS", "1e-9"))


def check_mode(mode):
    if mode not in (EXACT, FLOAT):
        raise InvalidParameter("unknown scalar mode %r" % (mode,))
    return mode


def join_modes(*modes):
    """Common mode of several objects; rejects mixing."""
    ms = set(modes)
    if len(ms) != 1:
        raise MixedScalarMode("mixed scalar modes: %s" % sorted(ms))
    return check_mode(ms.pop())


def as_vector(values, mode):
    """Build a 1-d array in the given mode."""
    if mode == EXACT:
        return np.array([Fraction(v) for v in values], dtype=object)
    return np.asarray([float(v) for v in values], dtype=float)


def as_matrix(rows, mode):
    """Build a 2-d array in the given mode."""
    if mode == EXACT:
        return np.array([[Fraction(v) for v in row] for row in rows],
                        dtype=object)
    return np.asarray([[float(v) for v in row] for row in rows], dtype=float)


def zeros_vector(n, mode):
    if mode == EXACT:
        return np.array([Fraction(0)] * n, dtype=object)
    return np.zeros(n, dtype=float)


def identity_matrix(n, mode):
    if mode == EXACT:
        m = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
        for i in range(n):
            m[i, i] = Fraction(1)
        return m
    return np.eye(n)


def is_zero(x, mode, eps=None):
    if mode == EXACT:
        return x == 0
    return abs(x) <= (float_eps() if eps is None else eps)


def vec_is_zero(v, mode, eps=None):
    return all(is_zero(x, mode, eps) for x in v)


def vec_eq(a, b, mode, tol=None):
    if len(a) != len(b):
        return False
    if mode == EXACT:
        return all(x == y for x, y in zip(a, b))
    t = float_eps() if tol is None else tol
    return bool(np.max(np.abs(np.asarray(a) - np.asarray(b))) <= t)


def mat_eq(a, b, mode, tol=None):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if mode == EXACT:
        return all(x == y for x, y in zip(a.flat, b.flat))
    t = float_eps() if tol is None else tol
    return bool(np.max(np.abs(a - b)) <= t)


def parse_scalar(text, mode):
    """Parse a scalar from JSON: ``"p/q"`` strings in exact mode, numbers
    in either mode."""
    if mode == EXACT:
        if isinstance(text, str):
            return Fraction(text)
        if isinstance(text, int):
            return Fraction(text)
        raise InvalidParameter("exact mode requires integers or 'p/q' "
                               "strings, got %r" % (text,))
    return float(text)


def format_scalar(x, mode):
    """Serialize a scalar: rationals as 'p/q', floats with 17 digits."""
    if mode == EXACT:
        f = Fraction(x)
        return "%d/%d" % (f.numerator, f.denominator)
    return format(float(x), ".17g")


def vector_key(v, mode, tol=MATCH_TOL):
    """Hashable key for set-equality of vectors; float mode quantizes."""
    if mode == EXACT:
        return tuple(v)
    return tuple(int(round(float(x) / tol)) for x in v)
