"""Physical constants in the unit system used throughout: time in ps, energy in ueV."""

# hbar = 6.582119569e-16 eV*s expressed in ueV*ps, so phase = splitting * delay / HBAR_UEV_PS
HBAR_UEV_PS = 658.2119569

# Gaussian FWHM -> standard deviation (2*sqrt(2*ln 2), truncated)
FWHM_TO_SIGMA = 1.0 / 2.35482
