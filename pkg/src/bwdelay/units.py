"""Natural-unit conventions used throughout the simulator.

Everything is expressed in units of the electron mass m: energies and momenta
in m, lengths and pulse separations in the reduced Compton wavelength 1/m.
The coupling enters only through the fine-structure constant.
"""

import math

ALPHA = 1.0 / 137.035999
"""Fine-structure constant; the squared charge in natural units."""

ELEMENTARY_CHARGE = math.sqrt(ALPHA)
"""Positron charge e = sqrt(alpha) in Gaussian-like natural units."""
