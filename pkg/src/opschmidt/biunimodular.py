from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .linalg import BipartiteOperator, DomainError, ShapeError
from .weyl import GridFunction, diag_from_lambda, dft2


BIUNIMODULAR_TOL = 1e-10
CASE_TWO_PHASES = (1.0, 1j)


class NotApplicableError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LineFunction:
    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex).reshape(-1)
        if self.n < 1:
            raise DomainError(f"N must be >= 1, got {self.n}")
        if values.size != self.n:
            raise ShapeError(f"function on Z_{self.n} needs {self.n} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ShapeError("line function has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class BjorckSaffariSpec:
    modulus: int
    n: int
    m: int
    tau: tuple[int, ...]
    c: tuple[complex, ...]
    rho_exponent: int
    case_tag: Literal[1, 2]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise DomainError(f"modulus must be >= 1, got {self.modulus}")
        if self.n != largest_square_root_divisor(self.modulus):
            raise DomainError(f"n={self.n} is not the largest integer whose square divides {self.modulus}")
        if self.m * self.n != self.modulus:
            raise DomainError(f"m must equal N/n = {self.modulus // self.n}, got {self.m}")
        if sorted(self.tau) != list(range(self.n)):
            raise DomainError(f"tau must be a permutation of 0..{self.n - 1}, got {self.tau}")
        if len(self.c) != self.n or any(abs(abs(complex(c)) - 1.0) > 1e-12 for c in self.c):
            raise DomainError(f"c must hold {self.n} unimodular scalars")
        if self.case_tag != applicable_case(self.n, self.m):
            raise DomainError(
                f"case {self.case_tag} does not apply to n={self.n}, m={self.m}; "
                f"use case {applicable_case(self.n, self.m)}"
            )
        if math.gcd(self.rho_exponent, self.root_order) != 1:
            raise DomainError(
                f"rho exponent {self.rho_exponent} is not coprime to {self.root_order}; rho would not be primitive"
            )

    @property
    def root_order(self) -> int:
        # Case 2 builds its case-1 function on Z_{N/2}, where m' = m/2.
        return self.m if self.case_tag == 1 else self.m // 2


def dft1(f: LineFunction) -> LineFunction:
    # f_hat(a) = N^{-1/2} sum_k exp(+2πi a k / N) f(k)
    return LineFunction(n=f.n, values=np.fft.ifft(f.values, norm="ortho"))


def is_biunimodular(f: LineFunction | GridFunction, tol: float = BIUNIMODULAR_TOL) -> bool:
    transform = dft1(f).values if isinstance(f, LineFunction) else dft2(f).values
    return bool(
        np.all(np.abs(np.abs(f.values) - 1.0) <= tol) and np.all(np.abs(np.abs(transform) - 1.0) <= tol)
    )


def gaussian(n: int, a: int = 1, b: int = 0) -> LineFunction:
    if n < 1:
        raise DomainError(f"N must be >= 1, got {n}")
    k = np.arange(n)
    if n % 2 == 1:
        if math.gcd(a, n) != 1:
            raise DomainError(f"a={a} must be coprime to N={n}")
        exponent = (a * k * k + b * k) % n
        return LineFunction(n=n, values=np.exp(2j * np.pi * exponent / n))
    # Even N: the chirp exp(πi k²/N); a and b do not enter.
    exponent = (k * k) % (2 * n)
    return LineFunction(n=n, values=np.exp(1j * np.pi * exponent / n))


def largest_square_root_divisor(n: int) -> int:
    root = 1
    candidate = 2
    while candidate * candidate <= n:
        if n % (candidate * candidate) == 0:
            root = candidate
        candidate += 1
    return root


def applicable_case(n: int, m: int) -> Literal[1, 2]:
    return 1 if n % 2 == 0 or m % 2 == 1 else 2


def bjorck_saffari_spec(
    modulus: int,
    c: Sequence[complex] | None = None,
    tau: Sequence[int] | None = None,
    rho_exponent: int = 1,
    case_tag: int | None = None,
) -> BjorckSaffariSpec:
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    n = largest_square_root_divisor(modulus)
    m = modulus // n
    resolved_case = applicable_case(n, m) if case_tag is None else case_tag
    return BjorckSaffariSpec(
        modulus=modulus,
        n=n,
        m=m,
        tau=tuple(range(n)) if tau is None else tuple(int(t) for t in tau),
        c=tuple([1.0 + 0j] * n) if c is None else tuple(complex(value) for value in c),
        rho_exponent=rho_exponent,
        case_tag=resolved_case,
    )


def bjorck_saffari(spec: BjorckSaffariSpec) -> LineFunction:
    if spec.n == 1:
        raise NotApplicableError(f"N={spec.modulus} is square-free; the construction needs n > 1")
    if spec.case_tag == 1:
        values = _case_one_values(spec.modulus, spec.n, spec.m, spec.c, spec.tau, spec.rho_exponent)
        return LineFunction(n=spec.modulus, values=values)

    half = spec.modulus // 2
    inner_m = spec.m // 2
    if applicable_case(spec.n, inner_m) != 1:
        raise DomainError(f"case 1 does not apply on Z_{half} (n={spec.n}, m={inner_m})")
    inner = _case_one_values(half, spec.n, inner_m, spec.c, spec.tau, spec.rho_exponent)
    k = np.arange(spec.modulus)
    z = np.array(CASE_TWO_PHASES)
    return LineFunction(n=spec.modulus, values=z[k % 2] * inner[k % half])


def product_grid(f: LineFunction, g: LineFunction) -> GridFunction:
    if f.n != g.n:
        raise ShapeError(f"f and g live on different groups: Z_{f.n} and Z_{g.n}")
    return GridFunction(n=f.n, values=np.outer(f.values, g.values))


def max_entangled_unitary(f: LineFunction, g: LineFunction, tol: float = BIUNIMODULAR_TOL) -> BipartiteOperator:
    for label, function in (("f", f), ("g", g)):
        if not is_biunimodular(function, tol):
            raise PreconditionError(f"{label} is not biunimodular within {tol:g}")
    return diag_from_lambda(product_grid(f, g))


def _case_one_values(
    modulus: int,
    n: int,
    m: int,
    c: Sequence[complex],
    tau: Sequence[int],
    rho_exponent: int,
) -> np.ndarray:
    # k = n*r + h with 0 <= h < n, 0 <= r < m
    r, h = np.divmod(np.arange(modulus), n)
    tau_h = np.array(tau)[h]
    exponent = (r * tau_h + n * r * (r - 1) // 2) % m
    return np.array(c, dtype=complex)[h] * np.exp(2j * np.pi * rho_exponent * exponent / m)
