"""Dynamics of three-dimensional generalized Henon maps.

x' = y, y' = z, z' = B x + A z + C y + f(y, z)

Fixed-point classification (saddle charts), Lyapunov spectra and diagrams,
homoclinic detection and separatrix tracing.
"""
__version__ = "0.1.0"

from .errors import HenonAtlasError  # noqa: E402
from .mapcore import (  # noqa: E402
    ORIGIN, HenonMap, PolyNonlinearity, RawHenonMap, RawPolynomial, State,
    companion_params, diagonal_fixed_points, henon2d_normalize, inverse_step, jacobian,
    shift_to_origin, step,
)
from .presets import PRESETS, get_preset  # noqa: E402
from .spectrum import (  # noqa: E402
    RegionLabel, boundary_curves, classify_point, figure8_region_test, lorenz_region_test,
    saddle_chart, saddle_value, solve_characteristic,
)
from .lyapunov import (  # noqa: E402
    AttractorClass, LyapunovConfig, classify_attractor, lyapunov_spectrum, pseudohyperbolic_flag,
)
from .manifold import (  # noqa: E402
    TraceConfig, stable_plane_distance, trace_separatrix, trace_stable_separatrix,
    unstable_direction,
)
from .sweep import SweepSpec, export_csv, render_ppm, run_sweep  # noqa: E402

__all__ = [
    "__version__", "HenonAtlasError", "ORIGIN", "HenonMap", "PolyNonlinearity", "RawHenonMap",
    "RawPolynomial", "State", "companion_params", "diagonal_fixed_points", "henon2d_normalize",
    "inverse_step", "jacobian", "shift_to_origin", "step", "PRESETS", "get_preset",
    "RegionLabel", "boundary_curves", "classify_point", "figure8_region_test",
    "lorenz_region_test", "saddle_chart", "saddle_value", "solve_characteristic",
    "AttractorClass", "LyapunovConfig", "classify_attractor", "lyapunov_spectrum",
    "pseudohyperbolic_flag", "TraceConfig", "stable_plane_distance", "trace_separatrix",
    "trace_stable_separatrix", "unstable_direction", "SweepSpec", "export_csv", "render_ppm",
    "run_sweep",
]
