"""Leading-order resource estimates for the quantum SGC / LGC pipelines and
their classical baselines.

Every constant is 1 and every logarithm is base 2, so the numbers compare
regimes with each other rather than count gates.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

LOGGER = logging.getLogger(__name__)

REGIMES = ("min-depth", "moderate", "min-qubits")
QUANTUM_MODELS = ("sgc", "lgc")
CLASSICAL_VARIANTS = ("sgc", "gcn", "lgc")


@dataclass
class ScenarioInputs:
    """Problem size and precision targets of one scenario.

    `n_anc` / `n_anc_prime` are the ancilla budgets of data encoding and
    block-encoding; they are only needed for the custom regime.
    """

    N: int
    C: int
    s: int = 4
    d: float = 4.0
    K: int = 2
    edges: Optional[float] = None
    eps1: float = 1e-3
    eps2: float = 1e-3
    eps: float = 1e-2
    delta: float = 1e-2
    n_anc: Optional[int] = None
    n_anc_prime: Optional[int] = None

    def __post_init__(self):
        if self.N < 2 or self.C < 1 or self.s < 2 or self.K < 1:
            raise ValueError(f"Need N >= 2, C >= 1, s >= 2 and K >= 1, got N={self.N}, C={self.C}, s={self.s}, "
                             f"K={self.K}")
        if self.d <= 0:
            raise ValueError(f"Average degree must be positive, got {self.d}")
        for name in ("eps1", "eps2", "eps", "delta"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if self.edges is not None and not math.isclose(self.edges, self.N * self.d, rel_tol=1e-9):
            raise ValueError(f"|E| = {self.edges} is inconsistent with N*d = {self.N * self.d}")
        if self.n_anc is not None and not self.min_encoding_ancillas <= self.n_anc <= self.N * self.C:
            raise ValueError(
                f"n_anc={self.n_anc} outside [{self.min_encoding_ancillas}, {self.N * self.C}]"
            )
        if self.n_anc_prime is not None and not self.min_block_ancillas <= self.n_anc_prime <= self.block_size:
            raise ValueError(
                f"n_anc'={self.n_anc_prime} outside [{self.min_block_ancillas}, {self.block_size:g}]"
            )

    @property
    def num_edges(self) -> float:
        return self.N * self.d if self.edges is None else self.edges

    @property
    def block_size(self) -> float:
        """B = N log N * s log s, the sequential depth of the block-encoding."""
        return self.N * math.log2(self.N) * self.s * math.log2(self.s)

    @property
    def min_encoding_ancillas(self) -> int:
        return math.ceil(math.log2(self.N * self.C))

    @property
    def min_block_ancillas(self) -> int:
        return math.ceil(math.log2(self.N))


@dataclass
class ResourceProfile:
    regime: str
    model: str
    depth: Optional[float] = None
    qubits: Optional[float] = None
    qubits_exact: Optional[float] = None
    n_anc: Optional[int] = None
    n_anc_prime: Optional[int] = None
    total_time: Optional[float] = None
    cost_time: Optional[float] = None
    classical_time: Optional[float] = None
    classical_space: Optional[float] = None
    terms: Dict[str, float] = field(default_factory=dict)
    formulas: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def log_factor(n, size) -> float:
    """log n for an ancilla budget n, with two adjustments: budgets up to
    log(size) count as 1, and the factor is capped at n / log(size) so that
    extra ancillas never raise the estimate."""
    floor = math.log2(size)
    if n <= floor:
        return 1.0
    return min(math.log2(n), n / floor)


def encoding_depth(inputs: ScenarioInputs, n_anc) -> float:
    size = inputs.N * inputs.C
    return size * math.log2(1 / inputs.eps1) * log_factor(n_anc, size) / n_anc


def block_depth(inputs: ScenarioInputs, n_anc_prime) -> float:
    size = inputs.block_size
    return size * math.log2(1 / inputs.eps2) * log_factor(n_anc_prime, size) / n_anc_prime


def regime_ancillas(inputs: ScenarioInputs, regime):
    """(n_anc, n_anc', leading qubit count) of a regime preset."""
    nc, b = inputs.N * inputs.C, inputs.block_size
    lo, lo_prime = inputs.min_encoding_ancillas, inputs.min_block_ancillas
    if regime == "min-qubits":
        return lo, lo_prime, math.log2(nc)
    if regime == "min-depth":
        return nc, math.ceil(b), nc + b
    if regime == "moderate":
        n_anc = min(nc, max(lo, math.ceil(math.sqrt(nc))))
        n_prime = min(math.ceil(b), max(lo_prime, math.ceil(math.sqrt(b))))
        return n_anc, n_prime, math.sqrt(nc) + math.sqrt(b)
    if regime == "custom":
        if inputs.n_anc is None or inputs.n_anc_prime is None:
            raise ValueError("The custom regime needs both n_anc and n_anc_prime")
        return inputs.n_anc, inputs.n_anc_prime, None
    raise ValueError(f"Unknown regime {regime}, expected one of {REGIMES + ('custom',)}")


def _quantum_profile(inputs: ScenarioInputs, regime, model, terms, formulas, n_anc, n_prime, leading):
    depth = sum(terms.values())
    exact = math.log2(inputs.N * inputs.C) + n_anc + n_prime
    repetitions = math.log2(1 / inputs.delta)
    return ResourceProfile(
        regime=regime,
        model=model,
        depth=depth,
        qubits=exact if leading is None else leading,
        qubits_exact=exact,
        n_anc=n_anc,
        n_anc_prime=n_prime,
        total_time=depth * repetitions / inputs.eps ** 2,
        cost_time=depth * repetitions,
        terms=terms,
        formulas=formulas,
    )


def estimate_quantum_sgc(inputs: ScenarioInputs, regime="min-qubits") -> ResourceProfile:
    """Depth of state preparation plus K/2 times the adjacency block-encoding."""
    n_anc, n_prime, leading = regime_ancillas(inputs, regime)
    terms = {
        "encoding": encoding_depth(inputs, n_anc),
        "block_encoding": inputs.K / 2 * block_depth(inputs, n_prime),
    }
    formulas = {
        "depth": "NC log(1/eps1) log(n_anc)/n_anc + (K/2) N logN s logs log(1/eps2) log(n_anc')/n_anc'",
        "qubits": "log(NC) + n_anc + n_anc'",
    }
    return _quantum_profile(inputs, regime, "sgc", terms, formulas, n_anc, n_prime, leading)


def estimate_quantum_lgc(inputs: ScenarioInputs, regime="min-qubits") -> ResourceProfile:
    """QSVT of degree K: K block-encoding calls plus K signal rotations over n_anc' wires."""
    n_anc, n_prime, leading = regime_ancillas(inputs, regime)
    terms = {
        "encoding": encoding_depth(inputs, n_anc),
        "block_encoding": inputs.K * block_depth(inputs, n_prime),
        "qsvt_rotations": inputs.K * n_prime,
    }
    formulas = {
        "depth": "NC log(1/eps1) log(n_anc)/n_anc + K N logN s logs log(1/eps2) log(n_anc')/n_anc' + K n_anc'",
        "qubits": "log(NC) + n_anc + n_anc'",
    }
    return _quantum_profile(inputs, regime, "lgc", terms, formulas, n_anc, n_prime, leading)


def estimate_classical(inputs: ScenarioInputs, variant="sgc") -> ResourceProfile:
    n, c, k = inputs.N, inputs.C, inputs.K
    nd = inputs.num_edges
    if variant == "sgc":
        time, space = nd * c + n * c ** 2, nd + n * c + c ** 2
        formulas = {"time": "NdC + NC^2", "space": "Nd + NC + C^2"}
    elif variant == "gcn":
        time, space = k * (n * c ** 2 + nd * c), nd + k * c ** 2 + k * n * c
        formulas = {"time": "K(NC^2 + NdC)", "space": "Nd + KC^2 + KNC"}
    elif variant == "lgc":
        time, space = k * nd * c + n * c ** 2, nd + k * n * c + c ** 2
        formulas = {"time": "K NdC + NC^2", "space": "Nd + KNC + C^2"}
    else:
        raise ValueError(f"Unknown classical variant {variant}, expected one of {CLASSICAL_VARIANTS}")
    return ResourceProfile(regime="classical", model=variant, classical_time=float(time),
                           classical_space=float(space), formulas=formulas)


def estimate_quantum(inputs: ScenarioInputs, model="sgc", regime="min-qubits") -> ResourceProfile:
    if model == "sgc":
        return estimate_quantum_sgc(inputs, regime)
    if model == "lgc":
        return estimate_quantum_lgc(inputs, regime)
    raise ValueError(f"Unknown quantum model {model}, expected one of {QUANTUM_MODELS}")


def component_overview(inputs: ScenarioInputs) -> List[dict]:
    """Technique, ancilla range and minimum-qubit depth of every pipeline component."""
    nc, b = inputs.N * inputs.C, inputs.block_size
    lo, lo_prime = inputs.min_encoding_ancillas, inputs.min_block_ancillas
    return [
        {"component": "data encoding", "technique": "ancilla-assisted state preparation",
         "ancillas": f"{lo}..{nc}", "depth": encoding_depth(inputs, lo)},
        {"component": "block-encoding", "technique": "1-sparse decomposition with LCU",
         "ancillas": f"{lo_prime}..{b:g}", "depth": block_depth(inputs, lo_prime)},
        {"component": "feature transformation", "technique": "PQC on the feature register",
         "ancillas": "0", "depth": math.log2(max(inputs.C, 2))},
        {"component": "polynomial filter", "technique": "QSVT", "ancillas": "1",
         "depth": inputs.K * block_depth(inputs, lo_prime)},
        {"component": "cost evaluation", "technique": "modified Hadamard test", "ancillas": "1",
         "depth": math.log2(1 / inputs.delta) / inputs.eps ** 2},
    ]


@dataclass
class TradeoffReport:
    inputs: ScenarioInputs
    model: str
    profiles: List[ResourceProfile]
    classical: ResourceProfile
    flags: Dict[str, Dict[str, bool]]

    def rows(self) -> List[dict]:
        """One flat row per regime plus the classical baseline (csv / text form)."""
        out = []
        for profile in self.profiles:
            out.append({
                "regime": profile.regime, "model": profile.model, "depth": profile.depth,
                "qubits": profile.qubits, "total_time": profile.total_time,
                "classical_time": self.classical.classical_time, "classical_space": self.classical.classical_space,
                **self.flags[profile.regime],
            })
        out.append({
            "regime": "classical", "model": self.classical.model, "depth": None, "qubits": None,
            "total_time": None, "classical_time": self.classical.classical_time,
            "classical_space": self.classical.classical_space,
            "qubits_below_classical_space": None, "depth_below_classical_time": None,
        })
        return out

    def to_dict(self) -> dict:
        return {
            "inputs": asdict(self.inputs),
            "model": self.model,
            "profiles": [p.to_dict() for p in self.profiles],
            "classical": self.classical.to_dict(),
            "flags": self.flags,
            "components": component_overview(self.inputs),
        }


def tradeoff_report(inputs: ScenarioInputs, model="sgc") -> TradeoffReport:
    profiles = [estimate_quantum(inputs, model, regime) for regime in REGIMES]
    classical = estimate_classical(inputs, model)
    flags = {
        p.regime: {
            "qubits_below_classical_space": bool(p.qubits < classical.classical_space),
            "depth_below_classical_time": bool(p.depth < classical.classical_time),
        }
        for p in profiles
    }
    LOGGER.info("Trade-off report for N=%d, C=%d (%s)", inputs.N, inputs.C, model)
    return TradeoffReport(inputs, model, profiles, classical, flags)


PRESET_SCENARIOS = {
    "sgc-large": dict(N=2 ** 20, C=2 ** 7, s=4, d=10, K=2),
    "lgc-large": dict(N=2 ** 16, C=2 ** 6, s=4, d=10, K=2),
    "medium": dict(N=1024, C=4, s=4, d=4, K=2),
    "tiny": dict(N=4, C=2, s=2, d=1, K=2),
}


def preset_inputs(name, **overrides) -> ScenarioInputs:
    if name not in PRESET_SCENARIOS:
        raise ValueError(f"Unknown preset {name}, expected one of {sorted(PRESET_SCENARIOS)}")
    return ScenarioInputs(**{**PRESET_SCENARIOS[name], **overrides})
