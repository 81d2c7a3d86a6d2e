import logging
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Tuple

import numpy as np
import torch

from qgnn.sim import Circuit, RegisterLayout, StateVector

LOGGER = logging.getLogger(__name__)

BLOCK_NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """Unitary circuit whose all-zero ancilla block is A / alpha.

    `ancilla_registers` are flagged: they may end nonzero and are
    post-selected on |0>. `workspace_registers` are returned to |0> exactly
    in every branch and may be shared between encodings by name.
    """

    circuit: Circuit
    data_registers: Tuple[str, ...]
    ancilla_registers: Tuple[str, ...] = ()
    workspace_registers: Tuple[str, ...] = ()
    alpha: float = 1.0
    epsilon: float = 0.0
    label: str = ""

    def __post_init__(self):
        for field_name in ("data_registers", "ancilla_registers", "workspace_registers"):
            object.__setattr__(self, field_name, tuple(getattr(self, field_name)))
        names = self.data_registers + self.ancilla_registers + self.workspace_registers
        if len(set(names)) != len(names):
            raise ValueError(f"Register roles overlap in {names}")
        for name in names:
            if name not in self.layout:
                raise ValueError(f"Register {name} is not part of the circuit layout {self.layout.names}")
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise ValueError(f"Subnormalization must be positive and finite, got {self.alpha}")

    def __repr__(self):
        return (
            f"BlockEncoding({self.label or 'unnamed'}, data={list(self.data_registers)}, "
            f"ancillas={list(self.ancilla_registers)}, alpha={self.alpha:.6g}, qubits={self.layout.num_qubits})"
        )

    @property
    def layout(self) -> RegisterLayout:
        return self.circuit.layout

    @property
    def zero_registers(self) -> Tuple[str, ...]:
        return self.ancilla_registers + self.workspace_registers

    @property
    def data_dim(self) -> int:
        return 1 << sum(self.layout.size(name) for name in self.data_registers)

    def num_ancilla_qubits(self) -> int:
        return sum(self.layout.size(name) for name in self.zero_registers)

    def embedded(self, layout: RegisterLayout, rename: Mapping[str, str] = None):
        """Same encoding acting inside a larger `layout`."""
        rename = dict(rename or {})

        def move(names: Iterable[str]):
            return tuple(rename.get(name, name) for name in names)

        return replace(
            self,
            circuit=self.circuit.remap(layout, rename),
            data_registers=move(self.data_registers),
            ancilla_registers=move(self.ancilla_registers),
            workspace_registers=move(self.workspace_registers),
        )

    def inverse(self):
        return replace(self, circuit=self.circuit.inverse(), label=f"{self.label}^-1")


def extract_encoded_block(be: BlockEncoding) -> torch.Tensor:
    """(<0|_anc x I) U (|0>_anc x I), simulated column by column over the data registers."""
    return be.circuit.restricted_unitary(list(be.data_registers))


def encoded_matrix(be: BlockEncoding) -> torch.Tensor:
    return be.alpha * extract_encoded_block(be)


def workspace_residual(be: BlockEncoding) -> float:
    """Largest probability mass left outside |0> on the workspace registers,
    over all data basis inputs with zeroed ancillas."""
    if not be.workspace_registers:
        return 0.0
    layout = be.layout
    idx = torch.as_tensor(layout.basis_indices(list(be.data_registers)))
    psi = torch.zeros((layout.dim, len(idx)), dtype=torch.complex128)
    psi[idx, torch.arange(len(idx))] = 1
    out = be.circuit.run_batch(psi)
    worst = 0.0
    for column in range(len(idx)):
        state = StateVector(layout, out[:, column])
        kept = state.marginal(list(be.workspace_registers))[0]
        worst = max(worst, 1.0 - float(kept))
    return worst


def check_block_norm(be: BlockEncoding):
    block = extract_encoded_block(be)
    norm = float(torch.linalg.matrix_norm(block, ord=2))
    if norm > 1 + BLOCK_NORM_TOL:
        raise RuntimeError(f"Encoded block of {be.label} has spectral norm {norm:.12f} > 1")
    return norm


def fresh_register_name(base, taken) -> str:
    """`base` itself if free, otherwise the first free `base.<n>`."""
    base = base.split(".")[0]
    if base not in taken:
        return base
    n = 1
    while f"{base}.{n}" in taken:
        n += 1
    return f"{base}.{n}"
