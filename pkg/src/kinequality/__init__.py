"""Inequality indices, kinetic exchange wealth models and heavy-tail fits."""
from .analytic import gk_circle_arc, gk_exponential, gk_lognormal, gk_power
from .errors import (
    DatasetFormatError, EmptySampleError, NegativeValueError, NumericError,
    ValidationError, ZeroTotalError,
)
from .fitting import (
    LogHistogram, LognormalFit, PowerLawTailFit, RescaledSample, collapse_distance,
    fit_lognormal, fit_powerlaw_tail, log_binned_histogram, rescale_by_mean,
)
from .kinetic import (
    AgentPopulation, CCMParams, CCParams, SimulationSchedule, SteadyStateSample,
    cc_trade, ccm_trade, run_steady_state, sample_saving, sweep_delta, sweep_lambda,
)
from .metrics import IndexReport, LorenzCurve, build_lorenz, gini, indices_report, kolkata
from .pipeline import (
    Dataset, GKRecord, GKScatter, LinearFit, fit_gk_line, load_dataset,
    scatter_from_datasets,
)

__version__ = "0.1.0"
