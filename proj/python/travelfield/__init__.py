"""Traveling Gaussian random field simulation.

Thin python face over the C++ core: scenario execution, extended-grid
planning, spectra, Gaussian synthesis, and the periodogram estimator. Configs
are plain dicts with the same schema the CLI reads.
"""

try:
    from ._core import (  # noqa: F401
        __version__,
        discretize_spectrum,
        periodogram3,
        plan_extended_grid,
        preset,
        preset_names,
        run_check,
        run_scenario,
        simulate_spatial_circulant,
    )
except ImportError:  # build-tree layout: _core.so sits directly on sys.path
    from _core import (  # noqa: F401
        __version__,
        discretize_spectrum,
        periodogram3,
        plan_extended_grid,
        preset,
        preset_names,
        run_check,
        run_scenario,
        simulate_spatial_circulant,
    )

__all__ = [
    "__version__",
    "discretize_spectrum",
    "periodogram3",
    "plan_extended_grid",
    "preset",
    "preset_names",
    "run_check",
    "run_scenario",
    "simulate_spatial_circulant",
]
