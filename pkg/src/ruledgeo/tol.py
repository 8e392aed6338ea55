"""Central numeric tolerances.

Every module pulls its comparison thresholds from here so that tests and
the CLI can tighten/loosen them in one place.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12   # exact algebraic identities (eps^2 = 0, unit norms)
    geometric: float = 1e-9    # geometric comparisons (line invariants, closure)
    relation: float = 1e-6     # quadrature-backed relation checks
    division: float = 1e-12    # smallest real part a dual division accepts


DEFAULT = Tolerances()
