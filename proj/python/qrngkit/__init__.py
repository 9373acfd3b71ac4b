"""Randomness-distillation toolkit for a phase-fluctuation QRNG.

Thin Python face of the C++ core: noise-model fitting, source simulation,
min-entropy evaluation, Toeplitz / Trevisan extraction and the statistical
test battery.
"""

from qrngkit._core import *  # noqa: F401,F403
from qrngkit import _core as core  # noqa: F401

__all__ = [name for name in dir(core) if not name.startswith("_")]
