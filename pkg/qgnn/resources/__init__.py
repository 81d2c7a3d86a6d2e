from .estimator import (
    CLASSICAL_VARIANTS,
    PRESET_SCENARIOS,
    QUANTUM_MODELS,
    REGIMES,
    ResourceProfile,
    ScenarioInputs,
    TradeoffReport,
    block_depth,
    component_overview,
    encoding_depth,
    estimate_classical,
    estimate_quantum,
    estimate_quantum_lgc,
    estimate_quantum_sgc,
    log_factor,
    preset_inputs,
    regime_ancillas,
    tradeoff_report,
)
