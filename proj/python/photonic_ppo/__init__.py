"""Photonic PPO: truncated Fock-space policy circuits trained with PPO.

The heavy lifting lives in the C++ core; this package exposes the simulator
gates, the policy circuits, the CartPole environment, the PPO primitives and
the experiment harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __all__  # noqa: F401
