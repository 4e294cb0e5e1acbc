"""Physical constants shared across the toolkit (SI units)."""

SPEED_OF_LIGHT = 299792458.0
"""Speed of light in vacuum, m/s."""

BOLTZMANN_CONSTANT = 1.380649e-23
"""Boltzmann constant, J/K."""

REFERENCE_TEMPERATURE = 290.0
"""Standard noise reference temperature, K."""
