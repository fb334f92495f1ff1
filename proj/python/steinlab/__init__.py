"""Python surface of the steinlab C++ core."""

from ._steinlab import (
    bessel_j,
    bessel_jprime_first_zero,
    f1_report,
    f2_report,
    f3_report,
    fig_series,
    khat,
    kl_gaussian,
    lower_gamma,
    matern_khat,
    meanfield_run,
    slsi_check,
    slsi_constants,
    spectral_q,
    svgd_run,
    upper_gamma,
)

__all__ = [
    "bessel_j",
    "bessel_jprime_first_zero",
    "f1_report",
    "f2_report",
    "f3_report",
    "fig_series",
    "khat",
    "kl_gaussian",
    "lower_gamma",
    "matern_khat",
    "meanfield_run",
    "slsi_check",
    "slsi_constants",
    "spectral_q",
    "svgd_run",
    "upper_gamma",
]
