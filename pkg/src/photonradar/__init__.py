"""Time-correlated photon-pair radar: simulation and detection engine.

Synthesizes correlated signal/idler time-tag streams through a configurable
free-space channel and recovers target range, velocity and depth by
cross-correlating the streams over a delay/Doppler/dilation hypothesis grid.
"""

from .channel import ChannelConfig, Target, propagate, radiant_angle, survival_probability
from .correlator import (
    Correlogram,
    HypothesisGrid,
    Peak,
    ccf_direct,
    ccf_fft,
    cell_significance,
    export_correlogram_csv,
    find_peak,
    read_correlogram_binary,
    search,
    write_correlogram_binary,
)
from .errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    FitError,
    PhotonRadarError,
)
from .estimator import (
    C_AIR,
    C_VACUUM,
    Kinematics,
    dilation_delta,
    doppler_scale,
    invert_doppler_scale,
    lorentz_gamma,
    range_from_delay,
    relativistic_doppler,
    velocity_from_doppler,
    velocity_from_scale,
)
from .identify import (
    Classification,
    DepthProfile,
    classify,
    correlogram_width,
    depth_from_width,
    depth_profile,
)
from .jam import JamScenario, jam_table, sj_classical, sj_entangled, sj_entangled_log2
from .pipeline import PipelineResult, render_report, run_scenario, write_artifacts
from .rangemodel import RateFit, fit_rates, max_range, rate_at, read_rate_csv
from .scenario import (
    DetectionReport,
    Scenario,
    bundled_scenario_names,
    bundled_scenario_path,
    load_bundled,
    load_scenario,
)
from .source import DetectorConfig, SourceConfig, apply_detector, generate_pairs
from .timetag import BinnedTrain, TimeTagStream, bin_stream, coincidence_count, from_tags

__version__ = "0.1.0"
