"""Spin-qubit dephasing under Uhrig dynamic decoupling.

Bath parameters, pulse sequences, dephasing envelopes, coherence times,
magnetometer sensitivity, and a Monte Carlo validation oracle. Thin wrapper
around the C++ core.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
