"""Transpiler, router and noisy state-vector simulator for comparing
ion-trap and superconducting cloud backends."""

from .gates import GateKind, NATIVE_SETS, NativeGateSet, equal_up_to_global_phase
from .circuit import Circuit, Instruction
from .simulator import run_ideal
from .transpiler import transpile
from .noise import NoiseProfile, run_noisy
from .backends import BackendConfig, load_backend

__all__ = [
    "BackendConfig",
    "Circuit",
    "GateKind",
    "Instruction",
    "NATIVE_SETS",
    "NativeGateSet",
    "NoiseProfile",
    "equal_up_to_global_phase",
    "load_backend",
    "run_ideal",
    "run_noisy",
    "transpile",
]

__version__ = "0.1.0"
