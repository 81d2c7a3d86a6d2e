import os
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

# A wire is addressed by (register name, bit index); bit 0 is the most
# significant bit of its register.
Wire = Tuple[str, int]

DEFAULT_MAX_QUBITS = 26


def max_qubits():
    return int(os.getenv("QGNN_MAX_QUBITS", DEFAULT_MAX_QUBITS))


def num_qubits_for(dim):
    """Smallest register width holding `dim` basis states (at least one qubit)."""
    if dim < 1:
        raise ValueError(f"Register dimension must be positive, got {dim}")
    return max(1, int(np.ceil(np.log2(dim))))


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers over a big-endian qubit line.

    Registers are concatenated in order; wire 0 of the layout is the most
    significant bit of the full basis index.
    """

    registers: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "registers", tuple((str(n), int(s)) for n, s in self.registers))
        names = [name for name, _ in self.registers]
        if len(set(names)) != len(names):
            raise ValueError(f"Register names must be unique, got {names}")
        for name, size in self.registers:
            if size < 1:
                raise ValueError(f"Register {name} must hold at least one qubit, got {size}")
        limit = max_qubits()
        if self.num_qubits > limit:
            raise ValueError(
                f"Layout needs {self.num_qubits} qubits, above the limit of {limit} (QGNN_MAX_QUBITS)"
            )

    @classmethod
    def of(cls, *registers):
        return cls(tuple(registers))

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.registers]

    @property
    def num_qubits(self) -> int:
        return sum(size for _, size in self.registers)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def __contains__(self, name):
        return any(n == name for n, _ in self.registers)

    def size(self, name) -> int:
        for n, s in self.registers:
            if n == name:
                return s
        raise KeyError(f"Unknown register {name}")

    def offset(self, name) -> int:
        start = 0
        for n, s in self.registers:
            if n == name:
                return start
            start += s
        raise KeyError(f"Unknown register {name}")

    def positions(self, name) -> List[int]:
        start = self.offset(name)
        return list(range(start, start + self.size(name)))

    def qubits(self, *names) -> List[Wire]:
        return [(name, b) for name in names for b in range(self.size(name))]

    def index(self, wire: Wire) -> int:
        name, bit = wire
        size = self.size(name)
        if not 0 <= bit < size:
            raise ValueError(f"Bit {bit} out of range for register {name} of size {size}")
        return self.offset(name) + bit

    def indices(self, wires: Iterable[Wire]) -> List[int]:
        return [self.index(w) for w in wires]

    def with_register(self, name, size):
        if name in self:
            raise ValueError(f"Register {name} already present")
        return RegisterLayout(self.registers + ((name, size),))

    def union(self, *others):
        """Merge layouts by register name, keeping first-seen order and the widest size."""
        sizes: Dict[str, int] = {}
        for layout in (self,) + others:
            for name, size in layout.registers:
                sizes[name] = max(size, sizes.get(name, 0))
        return RegisterLayout(tuple(sizes.items()))

    def basis_indices(self, registers: Sequence[str], fixed=None) -> np.ndarray:
        """Full-layout indices of every basis state of `registers` (big-endian
        over the given order) with all other registers at `fixed` (default 0)."""
        fixed = fixed or {}
        n = self.num_qubits
        base = 0
        for name, value in fixed.items():
            base |= int(value) << (n - self.offset(name) - self.size(name))
        grid = np.zeros(1, dtype=np.int64) + base
        for name in registers:
            size = self.size(name)
            shift = n - self.offset(name) - size
            values = np.arange(1 << size, dtype=np.int64) << shift
            grid = (grid[:, None] + values[None, :]).reshape(-1)
        return grid

    def split_index(self, index) -> Dict[str, int]:
        n = self.num_qubits
        out = {}
        for name, size in self.registers:
            shift = n - self.offset(name) - size
            out[name] = (int(index) >> shift) & ((1 << size) - 1)
        return out
