"""Gate-level Gaussian circuits and the FFT-style compiler for the Gaussian Fourier transform.

A circuit is a sequence of layers; gates inside one layer touch disjoint
modes, so the number of layers is the circuit depth. Evaluating a circuit
multiplies the per-gate symplectic matrices in execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .states import CorrelatedSpec, CovarianceState, reduced_state, vacuum_state
from .symplectic import gft_symplectic, rotation

__all__ = [
    "PhaseRotation", "BeamSplitter", "TwoModeSqueeze", "Swap", "Gate", "GaussianCircuit",
    "gft_symplectic", "compile_gft", "compile_perfect_shuffle", "circuit_to_symplectic",
    "prepare_correlated_circuit", "prepared_state", "run_on_state", "perfect_shuffle_map", "bit_swap_map",
    "dumps", "loads",
]


@dataclass(frozen=True)
class PhaseRotation:
    mode: int
    theta: float

    @property
    def modes(self) -> tuple:
        return (self.mode,)


@dataclass(frozen=True)
class BeamSplitter:
    """Passive two-mode mixer.

    With a mixing angle ``theta`` the mode pair transforms by
    ``[[cos, -sin], [sin, cos]]`` (times I_2 per block). ``theta=None`` is the
    balanced two-mode Fourier block ``[[I, I], [I, -I]] / sqrt(2)``.
    """

    mode_i: int
    mode_j: int
    theta: Union[float, None] = None

    @property
    def modes(self) -> tuple:
        return (self.mode_i, self.mode_j)


@dataclass(frozen=True)
class TwoModeSqueeze:
    """Two-mode squeezer with gain G = cosh^2 r; one arm of a squeezed vacuum is thermal with G - 1 photons."""

    mode_i: int
    mode_j: int
    gain: float

    def __post_init__(self):
        if not self.gain >= 1.0:
            raise ValueError(f"squeezer gain must be >= 1, got {self.gain!r}")

    @property
    def modes(self) -> tuple:
        return (self.mode_i, self.mode_j)


@dataclass(frozen=True)
class Swap:
    mode_i: int
    mode_j: int

    @property
    def modes(self) -> tuple:
        return (self.mode_i, self.mode_j)


Gate = Union[PhaseRotation, BeamSplitter, TwoModeSqueeze, Swap]


@dataclass(frozen=True)
class GaussianCircuit:
    width: int
    layers: tuple = ()

    def __post_init__(self):
        if int(self.width) != self.width or self.width < 1:
            raise ValueError(f"circuit width must be a positive integer, got {self.width!r}")
        layers = tuple(tuple(layer) for layer in self.layers)
        for depth, layer in enumerate(layers):
            used = set()
            for gate in layer:
                modes = gate.modes
                if len(set(modes)) != len(modes):
                    raise ValueError(f"gate {gate} repeats a mode")
                for m in modes:
                    if not 0 <= m < self.width:
                        raise ValueError(f"gate {gate} acts outside width {self.width}")
                    if m in used:
                        raise ValueError(f"layer {depth} uses mode {m} twice")
                    used.add(m)
        object.__setattr__(self, "layers", layers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    @property
    def gate_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def op_count(self) -> int:
        """Rotations, beam splitters and squeezers; SWAPs excluded."""
        return sum(1 for gate in self.gates if not isinstance(gate, Swap))

    @property
    def swap_count(self) -> int:
        return self.gate_count - self.op_count

    def then(self, other: "GaussianCircuit") -> "GaussianCircuit":
        if other.width != self.width:
            raise ValueError(f"cannot chain width {self.width} with width {other.width}")
        return GaussianCircuit(self.width, self.layers + other.layers)


def _shift(gate: Gate, offset: int) -> Gate:
    if isinstance(gate, PhaseRotation):
        return PhaseRotation(gate.mode + offset, gate.theta)
    if isinstance(gate, BeamSplitter):
        return BeamSplitter(gate.mode_i + offset, gate.mode_j + offset, gate.theta)
    if isinstance(gate, TwoModeSqueeze):
        return TwoModeSqueeze(gate.mode_i + offset, gate.mode_j + offset, gate.gain)
    return Swap(gate.mode_i + offset, gate.mode_j + offset)


def _side_by_side(parts: Sequence[tuple], width: int) -> list:
    """Run (circuit, offset) pairs in parallel, aligning their layers."""
    depth = max((c.depth for c, _ in parts), default=0)
    layers = []
    for d in range(depth):
        layer = []
        for circuit, offset in parts:
            if d < circuit.depth:
                layer.extend(_shift(g, offset) for g in circuit.layers[d])
        layers.append(tuple(layer))
    return layers


def _log2_exact(n: int, what: str) -> int:
    if int(n) != n or n < 1 or (int(n) & (int(n) - 1)):
        raise ValueError(f"{what} must be a power of two, got {n!r}")
    return int(n).bit_length() - 1


def bit_swap_map(n_bits: int, i: int) -> list:
    """Permutation exchanging bits i+1 and i of every index below 2**n_bits."""
    out = []
    for p in range(1 << n_bits):
        lo, hi = (p >> i) & 1, (p >> (i + 1)) & 1
        out.append(p ^ ((lo ^ hi) * ((1 << i) | (1 << (i + 1)))))
    return out


def perfect_shuffle_map(two_n: int) -> list:
    """Target position of each index: 2k -> k, 2k+1 -> N+k."""
    half = two_n // 2
    return [p // 2 + (p % 2) * half for p in range(two_n)]


def compile_perfect_shuffle(two_n: int) -> GaussianCircuit:
    """Perfect shuffle on 2N = 2**(m+1) modes as m layers of N/2 disjoint SWAPs.

    Layer i exchanges bits i+1 and i of every mode index, so after all
    layers bit 0 has moved to the top and each index is rotated right by
    one bit.
    """
    n_bits = _log2_exact(two_n, "perfect shuffle size")
    if n_bits < 2:
        raise ValueError(f"perfect shuffle needs at least 4 modes, got {two_n}")
    layers = []
    for i in range(n_bits - 1):
        target = bit_swap_map(n_bits, i)
        layers.append(tuple(Swap(p, target[p]) for p in range(two_n) if p < target[p]))
    return GaussianCircuit(two_n, layers)


def compile_gft(n_modes: int) -> GaussianCircuit:
    """Decimation-in-time compilation of the N-mode Gaussian Fourier transform (N a power of two).

    Size 2N is built from: perfect shuffle, two size-N transforms in
    parallel on the lower and upper halves, one rotation by pi + pi k / N on
    mode N+k (twiddle factor plus the sign flip of the balanced block), and a
    pi/4 beam splitter on each pair (k, N+k).
    """
    _log2_exact(n_modes, "Gaussian Fourier transform size")
    if n_modes == 1:
        return GaussianCircuit(1)
    half = n_modes // 2
    layers = []
    if n_modes >= 4:
        layers.extend(compile_perfect_shuffle(n_modes).layers)
    sub = compile_gft(half)
    layers.extend(_side_by_side([(sub, 0), (sub, half)], n_modes))
    layers.append(tuple(PhaseRotation(half + k, math.pi + math.pi * k / half) for k in range(half)))
    layers.append(tuple(BeamSplitter(k, half + k, math.pi / 4) for k in range(half)))
    return GaussianCircuit(n_modes, layers)


def _gate_block(gate: Gate) -> np.ndarray:
    if isinstance(gate, PhaseRotation):
        return rotation(gate.theta)
    eye = np.eye(2)
    if isinstance(gate, Swap):
        return np.block([[np.zeros((2, 2)), eye], [eye, np.zeros((2, 2))]])
    if isinstance(gate, BeamSplitter):
        if gate.theta is None:
            return np.block([[eye, eye], [eye, -eye]]) / math.sqrt(2)
        c, s = math.cos(gate.theta), math.sin(gate.theta)
        return np.block([[c * eye, -s * eye], [s * eye, c * eye]])
    cosh = math.sqrt(gate.gain)
    sinh = math.sqrt(gate.gain - 1.0)
    z = np.diag([1.0, -1.0])
    return np.block([[cosh * eye, sinh * z], [sinh * z, cosh * eye]])


def _gate_rows(gate: Gate) -> np.ndarray:
    return np.ravel([[2 * m, 2 * m + 1] for m in gate.modes])


def circuit_to_symplectic(circuit: GaussianCircuit) -> np.ndarray:
    """Symplectic matrix of the whole circuit, later gates multiplying on the left."""
    out = np.eye(2 * circuit.width)
    for gate in circuit.gates:
        rows = _gate_rows(gate)
        out[rows] = _gate_block(gate) @ out[rows]
    return out


def run_on_state(circuit: GaussianCircuit, state: CovarianceState) -> CovarianceState:
    if state.n_modes != circuit.width:
        raise ValueError(f"circuit width {circuit.width} does not match state with {state.n_modes} modes")
    s = circuit_to_symplectic(circuit)
    return CovarianceState(s @ state.mean, s @ state.cov @ s.T)


def prepare_correlated_circuit(spec: CorrelatedSpec) -> GaussianCircuit:
    """Circuit on 2N modes (system 0..N-1, ancilla N..2N-1) preparing tau_{M,N}(n_bar) from vacuum.

    M two-mode squeezers with gain (N/M) n_bar + 1 entangle system mode k
    with ancilla N+k, then the compiled Fourier transform acts on the system.
    """
    if int(spec.N) & (int(spec.N) - 1):
        raise ValueError(
            f"circuit preparation needs N to be a power of two (got N={spec.N}); "
            "use states.correlated_thermal for the covariance directly"
        )
    n = spec.N
    squeeze = tuple(TwoModeSqueeze(k, n + k, spec.gain) for k in range(spec.M))
    gft = compile_gft(n)
    return GaussianCircuit(2 * n, (squeeze,) + tuple(_side_by_side([(gft, 0)], 2 * n)))


def prepared_state(spec: CorrelatedSpec) -> CovarianceState:
    """System marginal of the preparation circuit applied to vacuum."""
    full = run_on_state(prepare_correlated_circuit(spec), vacuum_state(2 * spec.N))
    return reduced_state(full, range(spec.N))


def _format_gate(gate: Gate) -> str:
    modes = " ".join(str(m) for m in gate.modes)
    if isinstance(gate, PhaseRotation):
        return f"ROT {modes} {gate.theta!r}"
    if isinstance(gate, BeamSplitter):
        return f"BS {modes} {'50:50' if gate.theta is None else repr(gate.theta)}"
    if isinstance(gate, TwoModeSqueeze):
        return f"TMS {modes} {gate.gain!r}"
    return f"SWAP {modes}"


def dumps(circuit: GaussianCircuit) -> str:
    """Line-oriented export: a ``WIDTH n`` header, then one gate per line, layers separated by blank lines."""
    blocks = ["\n".join(_format_gate(g) for g in layer) for layer in circuit.layers]
    return f"WIDTH {circuit.width}\n\n" + "\n\n".join(blocks) + ("\n" if blocks else "")


def loads(text: str) -> GaussianCircuit:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("WIDTH "):
        raise ValueError("circuit text must start with a WIDTH header")
    width = int(lines[0].split()[1])
    layers, current = [], []
    for line in lines[1:] + [""]:
        fields = line.split()
        if not fields:
            if current:
                layers.append(tuple(current))
                current = []
            continue
        tag, args = fields[0], fields[1:]
        if tag == "ROT":
            current.append(PhaseRotation(int(args[0]), float(args[1])))
        elif tag == "BS":
            theta = None if args[2] == "50:50" else float(args[2])
            current.append(BeamSplitter(int(args[0]), int(args[1]), theta))
        elif tag == "TMS":
            current.append(TwoModeSqueeze(int(args[0]), int(args[1]), float(args[2])))
        elif tag == "SWAP":
            current.append(Swap(int(args[0]), int(args[1])))
        else:
            raise ValueError(f"unknown gate tag {tag!r}")
    return GaussianCircuit(width, layers)
