"""Multiscale reduction of the lattice sine-Gordon equation to a discrete NLS equation."""
from .lattice_sg import (Field2D, PlaneWave, SGParams, SingularStepError, background_shift,
                         dispersion, group_velocity, linear_residual, sg_evolve, sg_quad_step)
from .multiscale import (GridFunction1D, GridFunction2D, StirlingCache, coeff_P,
                         difference_transform, forward_difference, shift_one_scale,
                         shift_two_scale, slow_order, stirling_first, stirling_second,
                         two_scale_system_oracle)
from .reduction import (Envelope, Envelope2D, HarmonicFields, NLSCoeffs, ReductionConfig,
                        build_ansatz, compute_S, extract_envelope, harmonic_fields,
                        nls_coefficients, nls_evolve, nls_step, residual_order2,
                        select_wavenumber, substitute_wide_stencil, validate_reduction)

__version__ = "0.1.0"
