"""Polynomial encodings of "f has a circuit of size s", explicit refutations,
restrictions to XOR systems, and exact proof and certificate checking."""

from .circuits import CircuitIR, Gate, HeuristicCircuit
from .config import Limits, limits
from .errors import MCSPError
from .formulas import PolySystem, VarCatalog, gen_circuit_cnf, gen_circuit_formula, gen_xor_system
from .polynomials import Polynomial, VarPool
from .proofs import ProofObject, verify_proof

__version__ = "0.1.0"
