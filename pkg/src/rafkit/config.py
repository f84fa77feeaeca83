"""Brute-force caps.

Every exhaustive procedure takes a cap; exceeding it raises CapExceeded
instead of silently truncating.  Tests may pass larger caps explicitly.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    af_arguments: int = 20      # subset enumeration over arguments
    free_variables: int = 22    # classical satisfiability brute force
    program_atoms: int = 22     # answer-set search
    qbf_variables: int = 24     # quantifier expansion

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value <= 0:
                raise ValueError(f"cap {name} must be positive, got {value}")


DEFAULT_CAPS = Caps()
