"""Lagrange and Markov spectra of horseshoes modelled as subshifts of finite type."""

__version__ = "0.1.0"
