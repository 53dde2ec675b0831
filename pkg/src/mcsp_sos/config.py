"""Enumeration guards.

Every exhaustive routine checks its work estimate against one of these
limits.  Setting ``MCSP_SOS_BUDGET`` multiplies all of them (e.g. ``10``
allows ten times more work, ``0.1`` a tenth).
"""

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    compile_n: int = 12            # compile_function input bound
    expansion_subsets: int = 10**7  # certify_expansion subset count
    sat_free_vars: int = 25        # formula_sat free variables
    circuit_monomials: int = 400_000
    mcs_states: int = 2_000_000    # min_circuit_size search states
    completions: int = 2**22       # m-independence completion nodes
    closure_subsets: int = 2**20   # pseudo-expectation closure
    interp_support: int = 16       # Möbius interpolation inputs


def limits() -> Limits:
    base = Limits()
    raw = os.environ.get("MCSP_SOS_BUDGET")
    if not raw:
        return base
    factor = float(raw)
    scaled = {k: max(1, int(v * factor)) for k, v in base.__dict__.items()
              if k != "compile_n"}
    return replace(base, **scaled)
