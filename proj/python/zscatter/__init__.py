"""Forward/inverse scattering for the 2x2 Zakharov-Shabat system.

Thin wrapper over the compiled module: structured results cross the boundary
as JSON text and are decoded to plain dictionaries here.
"""

import json as _json

try:
    from . import _core  # installed wheel layout
except ImportError:  # build-tree layout: extension sits beside the package dir
    import _core

InputError = _core.InputError
NumericalError = _core.NumericalError
ContractViolation = _core.ContractViolation

riccati_series = _core.riccati_series

__all__ = [
    "scatter",
    "spectrum",
    "reconstruct",
    "roundtrip",
    "classify",
    "schrodinger_orders",
    "riccati_series",
    "InputError",
    "NumericalError",
    "ContractViolation",
]


def _encode(potential):
    if isinstance(potential, str):
        return potential
    return _json.dumps(potential)


def scatter(potential, ks):
    """Scattering records on a grid of spectral values.

    Returns a list of entries ``{"k": [re, im], "data": {...} | None,
    "error": str}``; complex values are ``[re, im]`` pairs.
    """
    return _json.loads(_core.scatter(_encode(potential), [complex(k) for k in ks]))


def spectrum(potential, re_lo, re_hi, im_lo, im_hi):
    """Discrete eigenvalues with norming data in an upper-half-plane box."""
    return _json.loads(_core.spectrum(_encode(potential), re_lo, re_hi, im_lo, im_hi))


def reconstruct(data, xs):
    """Rebuild the potential pair from discrete scattering data at ``xs``."""
    return _json.loads(_core.reconstruct(_encode(data), list(xs)))


def roundtrip(potential, re_lo, re_hi, im_lo, im_hi):
    """Forward spectrum, reconstruct, re-scatter, and compare."""
    return _json.loads(_core.roundtrip(_encode(potential), re_lo, re_hi, im_lo, im_hi))


def classify(potential, sample_points=None, tol=1e-10):
    """Name of the reduction tying r to q, probed at real sample points."""
    if sample_points is None:
        return _core.classify(_encode(potential), tol=tol)
    return _core.classify(_encode(potential), list(sample_points), tol)


def schrodinger_orders(potential):
    """Infinity orders of the scalar second-order form coefficients."""
    return _json.loads(_core.schrodinger_orders(_encode(potential)))
