"""Oblique-incidence scattering by a doubly-connected penetrable cylinder.

Nystrom boundary integral solver for the reduced two-dimensional transmission
and impedance problem, with a manufactured-solution verification harness.
"""

__version__ = "0.1.0"
