"""Monte Carlo estimators: tube volumes, Minkowski dimensions, oscillations and zeta values."""
from .dimension import MinkowskiEstimate, OscillationReport, detect_log_periodicity, estimate_minkowski
from .sampling import SHARD, map_samples, sample_distances, shard_rng
from .tube import EmpiricalTubeData, ambient_q, default_grid, log_grid, mc_tube_volume, tube_data_from_function
from .zetanum import (Omega, QuadratureResult, TrendResult, ZetaEstimate, mc_distance_zeta, relative_zeta,
                      shell_trend, tube_zeta_quadrature)

__all__ = [name for name in dir() if not name.startswith("_")]
