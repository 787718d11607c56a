from src.ncp.fischer_burmeister import (
    FBCoefficients,
    fb_coefficients,
    fb_coefficients_array,
    fb_phi,
    fb_phi_array,
    phi_vec,
    psi_vec,
)

__all__ = [
    "FBCoefficients",
    "fb_coefficients",
    "fb_coefficients_array",
    "fb_phi",
    "fb_phi_array",
    "phi_vec",
    "psi_vec",
]
