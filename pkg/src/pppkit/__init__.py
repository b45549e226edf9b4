"""Executable reductions among PPP and PWPP problems, with exhaustive oracles for small instances."""
from .bits import bc, bd
from .circuit import Circuit, Gate, evaluate, truth_table
from .crhash import HashKey, HashParams, keygen
from .instances import brute_force, gen_random, verify
from .reductions import REDUCTIONS, roundtrip

__all__ = [
    "bc",
    "bd",
    "Circuit",
    "Gate",
    "evaluate",
    "truth_table",
    "HashKey",
    "HashParams",
    "keygen",
    "brute_force",
    "gen_random",
    "verify",
    "REDUCTIONS",
    "roundtrip",
]
__version__ = "0.1.0"
