"""Parameter sets for the Dilithium signature scheme (round-3 conventions).

All three NIST security levels are provided.  The attack and analysis code
in this package defaults to level 2, which is the smallest instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Q = 8380417            # 2^23 - 2^13 + 1
N = 256
D = 13                 # dropped bits in power-of-two rounding
ROOT_OF_UNITY = 1753   # primitive 512th root of unity mod Q

SEED_BYTES = 32
CRH_BYTES = 48
TR_BYTES = 48


def _bits_for_eta(eta: int) -> int:
    return {2: 3, 4: 4}[eta]


def _bits_for_gamma1(gamma1: int) -> int:
    return {1 << 17: 18, 1 << 19: 20}[gamma1]


def _bits_for_w1(gamma2: int) -> int:
    # high parts lie in [0, (Q-1)/(2*gamma2) - 1]
    return {(Q - 1) // 88: 6, (Q - 1) // 32: 4}[gamma2]


@dataclass(frozen=True)
class ParameterSet:
    """One Dilithium parameter set plus its derived packing sizes."""

    name: str
    k: int              # rows of the public matrix
    l: int              # columns of the public matrix
    eta: int            # secret coefficient bound
    tau: int            # nonzero entries of the challenge
    gamma1: int         # response coefficient range
    gamma2: int         # low-order rounding range
    omega: int          # max total hint weight

    beta: int = field(init=False)
    poly_t1_bytes: int = field(init=False)
    poly_t0_bytes: int = field(init=False)
    poly_eta_bytes: int = field(init=False)
    poly_z_bytes: int = field(init=False)
    poly_w1_bytes: int = field(init=False)
    pk_bytes: int = field(init=False)
    sk_bytes: int = field(init=False)
    sig_bytes: int = field(init=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "beta", self.tau * self.eta)
        set_(self, "poly_t1_bytes", N * (23 - D) // 8)
        set_(self, "poly_t0_bytes", N * D // 8)
        set_(self, "poly_eta_bytes", N * _bits_for_eta(self.eta) // 8)
        set_(self, "poly_z_bytes", N * _bits_for_gamma1(self.gamma1) // 8)
        set_(self, "poly_w1_bytes", N * _bits_for_w1(self.gamma2) // 8)
        set_(self, "pk_bytes", SEED_BYTES + self.k * self.poly_t1_bytes)
        set_(
            self,
            "sk_bytes",
            2 * SEED_BYTES
            + TR_BYTES
            + (self.l + self.k) * self.poly_eta_bytes
            + self.k * self.poly_t0_bytes,
        )
        set_(self, "sig_bytes", SEED_BYTES + self.l * self.poly_z_bytes + self.omega + self.k)

    @property
    def z_bound(self) -> int:
        """Rejection / verification bound on the response: gamma1 - beta."""
        return self.gamma1 - self.beta

    @property
    def w1_levels(self) -> int:
        """Number of distinct high-part values, (Q-1)/(2*gamma2)."""
        return (Q - 1) // (2 * self.gamma2)


DILITHIUM2 = ParameterSet(
    name="dilithium2",
    k=4, l=4, eta=2, tau=39,
    gamma1=1 << 17, gamma2=(Q - 1) // 88, omega=80,
)

DILITHIUM3 = ParameterSet(
    name="dilithium3",
    k=6, l=5, eta=4, tau=49,
    gamma1=1 << 19, gamma2=(Q - 1) // 32, omega=55,
)

DILITHIUM5 = ParameterSet(
    name="dilithium5",
    k=8, l=7, eta=2, tau=60,
    gamma1=1 << 19, gamma2=(Q - 1) // 32, omega=75,
)

PARAMETER_SETS = {p.name: p for p in (DILITHIUM2, DILITHIUM3, DILITHIUM5)}


def get_params(name: str) -> ParameterSet:
    try:
        return PARAMETER_SETS[name]
    except KeyError:
        raise KeyError(
            f"unknown parameter set {name!r}; choose from {sorted(PARAMETER_SETS)}"
        ) from None
