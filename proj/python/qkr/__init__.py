"""Quantum kicked rotor simulations: laser-kicked molecular rotation,
dynamical localization, and coherent control."""

from qkr._core import *  # noqa: F401,F403
from qkr._core import __version__  # noqa: F401
