from .config import ScenarioConfig, AnalysisOptions, SweepOptions, ConfigError, load_config, load_preset, with_overrides, get_preset_names
from .runner import ScenarioResult, EXIT_OK, EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_INVARIANT, run_scenario, run_tuning, run_frequency_response, run_demo, run_sweeps, export_sweep
