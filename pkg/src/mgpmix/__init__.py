"""Multivariate generalized Pareto mixture models with arbitrary extreme directions."""

from .density import (MgpPoint, density_oracle, face_log_density, face_mass, face_masses,
                      log_density, log_density_dense)
from .errors import (BadAlpha, BadMass, BadVariogram, EmptyColumnError, MgpError,
                     NegativeInput, NotPositiveDefinite, QuadratureFailure,
                     RejectionBudgetExceeded, RowSumError, ToleranceNotReached, ValidationError)
from .model import (DuplicateSignatureWarning, HueslerReiss, Logistic, MixtureModel,
                    chi_positive, extreme_directions, signatures, validate)
from .simulate import (SampleBatch, SimulationConfig, boxcox_transform, sample_batch,
                       sample_extremal_function, sample_extremal_functions, sample_one)
from .stdf import face_weights, factor_stdf, mixture_stdf

__version__ = "0.1.0"
