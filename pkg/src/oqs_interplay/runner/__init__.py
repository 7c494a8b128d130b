from .config import ConfigError, RunSpec, parse_config
from .figures import figure_specs
from .output import read_csv, write_csv, write_plot
from .run import SimulationError, run
