"""Negative Latin and Latin square type partial difference sets in Z4^{2k} x Z2^{4l-4k}."""
from .lift import GroupShape, PdsCandidate, apply_phi, build_d, pds_params
from .verify import brute_force_verify, expected_eigenvalues, fast_spectrum, spectral_verify, verify_both

__all__ = [
    "GroupShape",
    "PdsCandidate",
    "apply_phi",
    "brute_force_verify",
    "build_d",
    "expected_eigenvalues",
    "fast_spectrum",
    "pds_params",
    "spectral_verify",
    "verify_both",
]
