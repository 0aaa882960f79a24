"""Exact and numerical experiments with orthogonal polynomials:
identity checks against exact oracles, multiple sums, zeros and spectra,
positivity scans and polynomials attached to multiple zeta values."""

__version__ = "0.1.0"
