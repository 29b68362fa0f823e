"""Backend selection for the flux-system stepper.

The compiled ``_dopri`` extension is used when it imports; otherwise, or
when the environment variable ``NLIOUVILLE_PURE_PYTHON`` is set to a
non-empty value other than ``0``, the pure-Python ``_dopri_py`` module is
used. Both expose the same ``integrate_flux`` signature.
"""

import os

from nliouville import _dopri_py
from nliouville._dopri_py import (
    STATUS_MAX_STEPS,
    STATUS_NONFINITE,
    STATUS_OK,
    STATUS_STEP_UNDERFLOW,
)

__all__ = [
    "BACKEND",
    "integrate_flux",
    "available_backends",
    "get_backend",
    "STATUS_OK",
    "STATUS_MAX_STEPS",
    "STATUS_NONFINITE",
    "STATUS_STEP_UNDERFLOW",
]

try:
    from nliouville import _dopri as _compiled
except ImportError:
    _compiled = None

_force_py = os.environ.get("NLIOUVILLE_PURE_PYTHON", "") not in ("", "0")

if _compiled is not None and not _force_py:
    BACKEND = "cython"
    integrate_flux = _compiled.integrate_flux
else:
    BACKEND = "python"
    integrate_flux = _dopri_py.integrate_flux


def available_backends():
    """Names of the stepper implementations importable in this install."""
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_backend(name):
    """Return the ``integrate_flux`` callable for ``name`` ('cython' or 'python')."""
    if name == "python":
        return _dopri_py.integrate_flux
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled stepper nliouville._dopri is not built")
        return _compiled.integrate_flux
    raise ValueError(f"unknown backend {name!r}")
