# Copyright (c) 2026 The fracfield developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""
:mod:`pyfracfield` -- spectral toolkit for fractional critical equations
========================================================================

This package builds upon the ``fracfield`` module and provides fields on
periodic grids, the fractional Laplacian as a Fourier multiplier, the
dilation and translation group, critical nonlinearities, constrained
variational solvers, profile decomposition of field sequences and the
weighted harmonic extension to a half-space.

The package logger ``pyfracfield`` is quiet by default (level WARNING).
"""
import logging

from pyfracfield._errors import DegenerateFieldError
from pyfracfield._errors import DilationRangeError
from pyfracfield._errors import ExtractionError
from pyfracfield._errors import FieldFileError
from pyfracfield._errors import FracFieldError
from pyfracfield._errors import IntegrationError
from pyfracfield._errors import ManifestError
from pyfracfield._errors import NonZeroMeanError
from pyfracfield._errors import ParameterError
from pyfracfield._errors import SolverError
from pyfracfield._grid import Field
from pyfracfield._grid import GridSpec
from pyfracfield._grid import SpectralField
from pyfracfield._grid import bump
from pyfracfield._grid import integrate
from pyfracfield._grid import lp_norm
from pyfracfield._grid import to_field
from pyfracfield._grid import to_spectral
from pyfracfield._grid import zero_mean
from pyfracfield._fractional import FracParams
from pyfracfield._fractional import d_inner
from pyfracfield._fractional import dnorm_sq
from pyfracfield._fractional import frac_laplacian
from pyfracfield._fractional import inverse_frac_laplacian
from pyfracfield._fractional import sharp_sobolev_constant
from pyfracfield._fractional import sobolev_constant
from pyfracfield._fractional import sobolev_quotient
from pyfracfield._group import GroupElement
from pyfracfield._group import UnitarityDefect
from pyfracfield._group import apply
from pyfracfield._group import compose
from pyfracfield._group import identity
from pyfracfield._group import inverse
from pyfracfield._group import max_level
from pyfracfield._group import pull_back
from pyfracfield._group import separation
from pyfracfield._group import unitarity_defect
from pyfracfield._nonlinearity import AdditivityDefect
from pyfracfield._nonlinearity import CriticalPower
from pyfracfield._nonlinearity import LogCosPower
from pyfracfield._nonlinearity import Nonlinearity
from pyfracfield._nonlinearity import PowerLaw
from pyfracfield._nonlinearity import additivity_defect
from pyfracfield._nonlinearity import derivative_selfsim_residual
from pyfracfield._nonlinearity import growth_constant
from pyfracfield._nonlinearity import make_nonlinearity
from pyfracfield._nonlinearity import nonlinearity_kinds
from pyfracfield._nonlinearity import phi
from pyfracfield._nonlinearity import phi_dilation_invariance
from pyfracfield._nonlinearity import phi_gradient
from pyfracfield._nonlinearity import positivity_witness
from pyfracfield._nonlinearity import selfsim_residual
from pyfracfield._variational import GroundState
from pyfracfield._variational import LevelsReport
from pyfracfield._variational import PathMax
from pyfracfield._variational import Residual
from pyfracfield._variational import SolverConfig
from pyfracfield._variational import SolverResult
from pyfracfield._variational import energy
from pyfracfield._variational import energy_gradient
from pyfracfield._variational import ground_state
from pyfracfield._variational import level_threshold
from pyfracfield._variational import levels
from pyfracfield._variational import maximize_S
from pyfracfield._variational import minimize_quotient
from pyfracfield._variational import mountain_pass_level
from pyfracfield._variational import nehari_residual
from pyfracfield._variational import path_energy
from pyfracfield._variational import path_max
from pyfracfield._variational import path_scan
from pyfracfield._variational import path_value
from pyfracfield._variational import pohozaev_residual
from pyfracfield._variational import quotient
from pyfracfield._variational import stated_level_threshold
from pyfracfield._profiles import DecompositionReport
from pyfracfield._profiles import ExtractConfig
from pyfracfield._profiles import ExtractedProfile
from pyfracfield._profiles import LocatedMass
from pyfracfield._profiles import NormBudget
from pyfracfield._profiles import PhiBudget
from pyfracfield._profiles import PlantedProfile
from pyfracfield._profiles import classify_levels
from pyfracfield._profiles import cocompactness_indicator
from pyfracfield._profiles import extract
from pyfracfield._profiles import locate_mass
from pyfracfield._profiles import synthesize
from pyfracfield._extension import ExtensionGrid
from pyfracfield._extension import energy_identity_residual
from pyfracfield._extension import extend
from pyfracfield._extension import extend_by_kernel
from pyfracfield._extension import extension_profile
from pyfracfield._extension import extension_profile_slope
from pyfracfield._extension import kappa
from pyfracfield._extension import neumann_trace_residual
from pyfracfield._extension import poisson_beta
from pyfracfield._extension import poisson_kernel
from pyfracfield._fieldfile import MANIFEST_NAME
from pyfracfield._fieldfile import StoredField
from pyfracfield._fieldfile import StoredSequence
from pyfracfield._fieldfile import git_blob_hash
from pyfracfield._fieldfile import load_field
from pyfracfield._fieldfile import load_sequence
from pyfracfield._fieldfile import make_report
from pyfracfield._fieldfile import report_scalars
from pyfracfield._fieldfile import save_field
from pyfracfield._fieldfile import save_sequence
from pyfracfield._fieldfile import write_csv
from pyfracfield._fieldfile import write_report

__version__ = '0.3'
__all__ = [
    'AdditivityDefect',
    'additivity_defect',
    'apply',
    'bump',
    'classify_levels',
    'cocompactness_indicator',
    'compose',
    'CriticalPower',
    'DecompositionReport',
    'DegenerateFieldError',
    'derivative_selfsim_residual',
    'DilationRangeError',
    'dnorm_sq',
    'd_inner',
    'energy',
    'energy_gradient',
    'energy_identity_residual',
    'extend',
    'extend_by_kernel',
    'ExtensionGrid',
    'extension_profile',
    'extension_profile_slope',
    'extract',
    'ExtractConfig',
    'ExtractedProfile',
    'ExtractionError',
    'Field',
    'FieldFileError',
    'FracFieldError',
    'FracParams',
    'frac_laplacian',
    'git_blob_hash',
    'GridSpec',
    'GroundState',
    'ground_state',
    'GroupElement',
    'growth_constant',
    'identity',
    'integrate',
    'IntegrationError',
    'inverse',
    'inverse_frac_laplacian',
    'kappa',
    'levels',
    'LevelsReport',
    'level_threshold',
    'load_field',
    'load_sequence',
    'LocatedMass',
    'locate_mass',
    'LogCosPower',
    'lp_norm',
    'make_nonlinearity',
    'make_report',
    'ManifestError',
    'MANIFEST_NAME',
    'maximize_S',
    'max_level',
    'minimize_quotient',
    'mountain_pass_level',
    'nehari_residual',
    'neumann_trace_residual',
    'Nonlinearity',
    'nonlinearity_kinds',
    'NonZeroMeanError',
    'NormBudget',
    'ParameterError',
    'PathMax',
    'path_energy',
    'path_max',
    'path_scan',
    'path_value',
    'phi',
    'PhiBudget',
    'phi_dilation_invariance',
    'phi_gradient',
    'PlantedProfile',
    'pohozaev_residual',
    'poisson_beta',
    'poisson_kernel',
    'positivity_witness',
    'PowerLaw',
    'pull_back',
    'quotient',
    'report_scalars',
    'Residual',
    'save_field',
    'save_sequence',
    'selfsim_residual',
    'separation',
    'sharp_sobolev_constant',
    'sobolev_constant',
    'sobolev_quotient',
    'SolverConfig',
    'SolverError',
    'SolverResult',
    'SpectralField',
    'stated_level_threshold',
    'StoredField',
    'StoredSequence',
    'synthesize',
    'to_field',
    'to_spectral',
    'UnitarityDefect',
    'unitarity_defect',
    'write_csv',
    'write_report',
    'zero_mean',
]

_logger = logging.getLogger(__name__)
if not _logger.handlers:
    _handler = logging.StreamHandler()
    _handler.setFormatter(
        logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))
    _logger.addHandler(_handler)
    _logger.setLevel(logging.WARNING)
    del _handler
