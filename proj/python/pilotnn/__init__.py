"""Pilot-aided channel estimation and nearest-neighbor decoding for
bandlimited fading channels.

Thin re-export of the compiled extension: spectra and interpolation error
variances, fading synthesis, Wiener interpolator weights, rate lower bounds,
two-user pre-log regions and verdicts, physical-scenario sizing, and the
config-driven experiment runner.
"""

try:
    from pilotnn._core import *  # noqa: F401,F403  installed layout
except ImportError:
    from _core import *  # noqa: F401,F403  in-tree build on sys.path
