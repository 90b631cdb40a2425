"""Exact F_p bookkeeping for the Boekstedt and circle-Tate spectral sequences
of BP<n>-like spectra."""

__version__ = "0.1.0"
