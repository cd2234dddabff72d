"""Fault-attack laboratory for the Dilithium lattice signature scheme.

Implements the scheme itself (keygen/sign/verify with byte-exact round-3
packing), simulated rowhammer-style single-bit faults on the stored secret
key, recovery of the flipped bits from faulty signatures alone, knowledge
aggregation over the redundant coefficient encoding, and core-SVP security
estimation of the weakened key.
"""

from .keys import PublicKey, SecretKey, Signature
from .params import (
    DILITHIUM2,
    DILITHIUM3,
    DILITHIUM5,
    PARAMETER_SETS,
    ParameterSet,
    get_params,
)
from .scheme import SignOutcome, keygen, sign, verify

__version__ = "0.1.0"

__all__ = [
    "DILITHIUM2",
    "DILITHIUM3",
    "DILITHIUM5",
    "PARAMETER_SETS",
    "ParameterSet",
    "PublicKey",
    "SecretKey",
    "SignOutcome",
    "Signature",
    "get_params",
    "keygen",
    "sign",
    "verify",
    "__version__",
]
