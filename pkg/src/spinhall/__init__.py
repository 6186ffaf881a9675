"""Spin-dependent beam shifts of a Gaussian probe reflected from a
glass / atomic-vapor / glass cavity driven by four coherent control fields."""

__version__ = "0.1.0"

from .errors import (BrewsterSingularity, DegenerateBrightState,
                     DegenerateInterface, InvalidAngle, NoMinimumInWindow,
                     NoSignChange, ParseError, QuadratureNotConverged,
                     ResonantDenominator, SingularDenominator, SpinHallError,
                     ValidationError)
from .medium import (Configuration, ControlField, ControlFieldSet,
                     EffectiveCouplings, MediumParams, classify,
                     coherence_ratio, effective_couplings, permittivity,
                     refractive_index, susceptibility)
from .multilayer import (LayerStack, ReflectionPair, WaveGeometry,
                         fresnel_interface, reflection_coefficients,
                         stack_reflection, stack_reflection_derivative,
                         wave_geometry)
from .shifts import (BeamParams, GridSpec, ShiftResult, angular_shift,
                     shift_from_beam_integral, spatial_shift)
from .sweep import (ScanContext, SweepGrid, SweepTable, find_brewster,
                    find_sign_flip, find_transparency_windows,
                    max_shift_vs_detuning, shift_vs_density, sweep)
from .config import RunConfig, RunManifest, load_config, write_config

__all__ = [name for name in dir() if not name.startswith("_")]
