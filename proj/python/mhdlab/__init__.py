"""Pseudo-spectral laboratory for inviscid resistive isentropic MHD on the periodic box."""

from ._mhdlab import (  # noqa: F401
    Grid3,
    SpectralField,
    cross_margin,
    dealiased_product,
    decay_fit,
    default_diophantine_w,
    dot_margin,
    lambda_pow,
    mode_eigenvalues,
    run_decay,
)
