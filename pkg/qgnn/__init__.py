from .utils import seed_everything, default_qgnn_config, load_config
from .graph import Graph, load_graph
from .pipeline import run_experiment, main
