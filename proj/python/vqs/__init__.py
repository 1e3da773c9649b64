"""Vacuum-coupled quantum systems: kernels, master equation, EOM and decoherence."""

from ._vqs import *  # noqa: F401,F403
from ._vqs import __version__, run, preset_text, experiments  # noqa: F401
