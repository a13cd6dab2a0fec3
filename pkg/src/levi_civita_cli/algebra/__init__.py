"""Exact arithmetic substrate: Gaussian rationals, rational matrices and exponential polynomials."""
