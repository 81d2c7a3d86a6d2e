import weakref
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import torch

from qgnn.sim.register import Wire

DTYPE = torch.complex128
UNITARY_TOL = 1e-10
MAX_BLOCK_QUBITS = 10

# Blocks already checked for unitarity, keyed by id (derived blocks inherit the check).
# An entry is dropped when its block is collected.
_VERIFIED = {}


def _mark_verified(block):
    key = id(block)

    def _forget(ref):
        if _VERIFIED.get(key) is ref:
            del _VERIFIED[key]

    _VERIFIED[key] = weakref.ref(block, _forget)


def _is_verified(block):
    ref = _VERIFIED.get(id(block))
    return ref is not None and ref() is block


def as_block(matrix) -> torch.Tensor:
    if isinstance(matrix, torch.Tensor):
        return matrix.to(DTYPE)
    return torch.as_tensor(np.asarray(matrix), dtype=DTYPE)


def is_unitary(matrix, atol=UNITARY_TOL) -> bool:
    block = as_block(matrix)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        return False
    eye = torch.eye(block.shape[0], dtype=DTYPE)
    return bool(torch.max(torch.abs(block @ block.conj().T - eye)) <= atol)


def _wires(wires) -> Tuple[Wire, ...]:
    return tuple((str(name), int(bit)) for name, bit in wires)


@dataclass(frozen=True, eq=False)
class GateOp:
    """A (multi-)controlled unitary on named wires.

    Either `block` holds the dense 2^m x 2^m unitary, or `perm` holds a basis
    permutation x -> perm[x] of the targets (the sparse form used by
    oracles and permutation matrices).
    """

    targets: Tuple[Wire, ...]
    block: Optional[torch.Tensor] = None
    controls: Tuple[Wire, ...] = ()
    control_values: Tuple[int, ...] = ()
    perm: Optional[np.ndarray] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "targets", _wires(self.targets))
        object.__setattr__(self, "controls", _wires(self.controls))
        values = tuple(int(v) for v in self.control_values) or (1,) * len(self.controls)
        object.__setattr__(self, "control_values", values)
        if len(self.controls) != len(self.control_values):
            raise ValueError(
                f"{len(self.controls)} controls but {len(self.control_values)} control values"
            )
        if any(v not in (0, 1) for v in self.control_values):
            raise ValueError(f"Control values must be 0 or 1, got {self.control_values}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"Repeated target wire in {self.targets}")
        if len(set(self.controls)) != len(self.controls) or set(self.controls) & set(self.targets):
            raise ValueError(f"Wire collision between controls {self.controls} and targets {self.targets}")
        dim = 1 << len(self.targets)
        if (self.block is None) == (self.perm is None):
            raise ValueError("A gate needs exactly one of a dense block or a permutation")
        if self.block is not None:
            if len(self.targets) > MAX_BLOCK_QUBITS:
                raise ValueError(f"Dense blocks are limited to {MAX_BLOCK_QUBITS} qubits")
            block = as_block(self.block)
            if tuple(block.shape) != (dim, dim):
                raise ValueError(
                    f"Block of shape {tuple(block.shape)} does not match {len(self.targets)} target wires"
                )
            if not _is_verified(block):
                if not is_unitary(block):
                    raise ValueError(f"Gate block {self.label or ''} is not unitary within {UNITARY_TOL}")
                _mark_verified(block)
            object.__setattr__(self, "block", block)
        else:
            perm = np.asarray(self.perm, dtype=np.int64)
            if perm.shape != (dim,) or not np.array_equal(np.sort(perm), np.arange(dim)):
                raise ValueError(f"Permutation over {len(self.targets)} wires is not a bijection")
            object.__setattr__(self, "perm", perm)

    @classmethod
    def permutation(cls, perm, targets, controls=(), control_values=(), label=""):
        return cls(targets=targets, perm=perm, controls=controls, control_values=control_values, label=label)

    @property
    def wires(self):
        return self.controls + self.targets

    def matrix(self) -> torch.Tensor:
        if self.block is not None:
            return self.block
        dim = len(self.perm)
        out = torch.zeros((dim, dim), dtype=DTYPE)
        out[torch.as_tensor(self.perm), torch.arange(dim)] = 1
        return out

    def inverse(self):
        if self.block is not None:
            block = self.block.conj().T.resolve_conj()
            _mark_verified(block)
            return GateOp(self.targets, block=block, controls=self.controls,
                          control_values=self.control_values, label=self.label + "^-1")
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return GateOp.permutation(inv, self.targets, self.controls, self.control_values, self.label + "^-1")

    def controlled(self, wires: Sequence[Wire], values: Sequence[int] = ()):
        values = tuple(values) or (1,) * len(wires)
        return GateOp(self.targets, block=self.block, perm=self.perm,
                      controls=_wires(wires) + self.controls,
                      control_values=tuple(values) + self.control_values, label=self.label)

    def renamed(self, mapping):
        def move(wires):
            return tuple((mapping.get(name, name), bit) for name, bit in wires)

        return GateOp(move(self.targets), block=self.block, perm=self.perm, controls=move(self.controls),
                      control_values=self.control_values, label=self.label)


# Standard blocks.

def hadamard():
    return as_block(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def pauli_x():
    return as_block(np.array([[0, 1], [1, 0]]))


def pauli_z():
    return as_block(np.array([[1, 0], [0, -1]]))


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return as_block(np.array([[c, -s], [s, c]]))


def rz(theta):
    return as_block(np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]))


def rzz(theta):
    phase = np.exp(-0.5j * theta)
    return as_block(np.diag([phase, np.conj(phase), np.conj(phase), phase]))


def swap_perm(width):
    """Basis permutation exchanging two registers of `width` qubits each."""
    dim = 1 << width
    idx = np.arange(dim * dim)
    hi, lo = idx // dim, idx % dim
    return lo * dim + hi


def xor_perm(width, pattern):
    return np.arange(1 << width) ^ int(pattern)


def block_diagonal(blocks):
    """Uniformly controlled unitary: block `b` acts when the control register holds b."""
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    dim = blocks[0].shape[0]
    out = np.zeros((dim * len(blocks), dim * len(blocks)), dtype=complex)
    for b, block in enumerate(blocks):
        out[b * dim:(b + 1) * dim, b * dim:(b + 1) * dim] = block
    return out


def bits_of(value, width):
    return tuple((int(value) >> (width - 1 - b)) & 1 for b in range(width))
