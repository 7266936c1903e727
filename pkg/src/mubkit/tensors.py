"""Angular-momentum algebra: Clebsch-Gordan coefficients and irreducible
spherical tensor operators, plus two independent constructions used as
cross-checks (a differential-operator route and a spin-3/2 closed-form
polynomial).

Conventions
-----------
* Spins are integers or half-integers; internally everything is tracked as
  doubled integers so no quantum number ever touches floating point.
* Basis order is m-descending: row/column 0 is m = +j, the last is m = -j.
* Tensors follow the Condon-Shortley/Madison normalization

      <j m'| T(k, q) |j m> = sqrt(2k+1) * C(j k j; m q m'),

  so Tr(T(k,q)^dag T(k',q')) = (2j+1) delta_kk' delta_qq' and
  T(k,q)^dag = (-1)^q T(k,-q).
* Clebsch-Gordan coefficients are evaluated with the Racah factorial sum in
  exact rational arithmetic and rounded to float once at the end; they are
  accurate to a few ulp for every spin this package reaches (j <= 25/2).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "angular_momentum",
    "clebsch_gordan",
    "rank3_tensor_polynomial",
    "spherical_tensor",
    "tensor_diagonal",
    "weyl_tensor",
]


def _doubled(x, name: str = "spin") -> int:
    """Twice the value, validated to be an exact integer."""
    two = 2.0 * float(x)
    r = round(two)
    if abs(two - r) > 1e-9:
        raise ValueError(f"{name} must be an integer or half-integer, got {x!r}")
    return int(r)


def _cg_doubled(tj1: int, tm1: int, tj2: int, tm2: int, tj3: int, tm3: int) -> float:
    """C(j1 j2 j3; m1 m2 m3) with all arguments doubled."""
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if tj < 0:
            raise ValueError(f"negative angular momentum {tj}/2")
        if abs(tm) > tj or (tj + tm) % 2:
            raise ValueError(f"projection {tm}/2 is not a valid m for spin {tj}/2")
    if tm1 + tm2 != tm3:
        return 0.0
    if tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2 or (tj1 + tj2 + tj3) % 2:
        return 0.0

    f = math.factorial
    t1 = (tj1 + tj2 - tj3) // 2
    t2 = (tj1 - tj2 + tj3) // 2
    t3 = (-tj1 + tj2 + tj3) // 2
    norm2 = Fraction(
        (tj3 + 1) * f(t1) * f(t2) * f(t3)
        * f((tj1 + tm1) // 2) * f((tj1 - tm1) // 2)
        * f((tj2 + tm2) // 2) * f((tj2 - tm2) // 2)
        * f((tj3 + tm3) // 2) * f((tj3 - tm3) // 2),
        f((tj1 + tj2 + tj3) // 2 + 1),
    )
    lo = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    hi = min(t1, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = Fraction(0)
    for nu in range(lo, hi + 1):
        den = (f(nu) * f(t1 - nu)
               * f((tj1 - tm1) // 2 - nu) * f((tj2 + tm2) // 2 - nu)
               * f((tj3 - tj2 + tm1) // 2 + nu) * f((tj3 - tj1 - tm2) // 2 + nu))
        total += Fraction(-1 if nu % 2 else 1, den)
    if total == 0:
        return 0.0
    # norm2 * total^2 is an exact rational; one rounding at the conversion.
    mag = math.sqrt(float(norm2 * total * total))
    return mag if total > 0 else -mag


def clebsch_gordan(j1, j2, j, m1, m2, m) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | j m> (Condon-Shortley).

    Returns 0.0 when m1 + m2 != m or the triangle rule fails; raises
    ValueError for quantum numbers that are not half-integers or have
    |m| > j or m inconsistent with j by a non-integer.
    """
    return _cg_doubled(_doubled(j1, "j1"), _doubled(m1, "m1"),
                       _doubled(j2, "j2"), _doubled(m2, "m2"),
                       _doubled(j, "j"), _doubled(m, "m"))


def angular_momentum(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin matrices (Jx, Jy, Jz) for spin j in the m-descending basis."""
    tj = _doubled(j, "j")
    if tj < 0:
        raise ValueError(f"spin must be nonnegative, got {j!r}")
    d = tj + 1
    m = (tj - 2.0 * np.arange(d)) / 2.0
    jz = np.diag(m).astype(np.complex128)
    jj = (tj / 2.0) * (tj / 2.0 + 1.0)
    jplus = np.zeros((d, d), dtype=np.complex128)
    # J+ |j m> = sqrt(j(j+1) - m(m+1)) |j m+1>: column m feeds the row above
    jplus[np.arange(d - 1), np.arange(1, d)] = np.sqrt(jj - m[1:] * (m[1:] + 1.0))
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2.0
    jy = (jplus - jminus) / 2.0j
    return jx, jy, jz


def spherical_tensor(j, k: int, q: int = 0) -> np.ndarray:
    """Irreducible spherical tensor T(k, q) for spin j as a dense matrix.

    Requires 0 <= k <= 2j (integer k) and |q| <= k.
    """
    tj = _doubled(j, "j")
    if tj < 0:
        raise ValueError(f"spin must be nonnegative, got {j!r}")
    k = int(k)
    q = int(q)
    if not 0 <= k <= tj:
        raise ValueError(f"rank must satisfy 0 <= k <= 2j = {tj}, got k={k}")
    if abs(q) > k:
        raise ValueError(f"component must satisfy |q| <= k = {k}, got q={q}")
    d = tj + 1
    out = np.zeros((d, d), dtype=np.complex128)
    scale = math.sqrt(2.0 * k + 1.0)
    for col in range(d):
        tm = tj - 2 * col
        tmp = tm + 2 * q
        if abs(tmp) <= tj:
            row = (tj - tmp) // 2
            out[row, col] = scale * _cg_doubled(tj, tm, 2 * k, 2 * q, tj, tmp)
    return out


def tensor_diagonal(j, k: int) -> np.ndarray:
    """Real diagonal of T(k, 0), m-descending."""
    return np.ascontiguousarray(np.diag(spherical_tensor(j, k, 0)).real)


def rank3_tensor_polynomial(j, variant: str = "product") -> np.ndarray:
    """Closed-form spin-operator polynomial quoted for the spin-3/2 rank-3
    diagonal tensor, evaluated literally.

    Two readings of the bracketed expression are implemented:

    * "product" (verbatim): (1/(3*sqrt(5))) * [4 Jz^3 - A @ B]
    * "difference":         (1/(3*sqrt(5))) * [4 Jz^3 - A - B]

    with A = Jz Jx^2 + Jx^2 Jz + Jx Jz Jx and B the same with y in place
    of x. Neither reading reproduces T(3, 0); this function exists so the
    discrepancy can be measured, not hidden. Only spin 3/2 is accepted.
    """
    if _doubled(j, "j") != 3:
        raise ValueError(f"the rank-3 closed form is specific to spin 3/2, got j={j!r}")
    if variant not in ("product", "difference"):
        raise ValueError(f"variant must be 'product' or 'difference', got {variant!r}")
    jx, jy, jz = angular_momentum(1.5)
    a = jz @ jx @ jx + jx @ jx @ jz + jx @ jz @ jx
    b = jz @ jy @ jy + jy @ jy @ jz + jy @ jz @ jy
    cube = 4.0 * (jz @ jz @ jz)
    bracket = cube - a @ b if variant == "product" else cube - a - b
    return bracket / (3.0 * math.sqrt(5.0))


# ---------------------------------------------------------------------------
# Independent construction of the q = 0 tensors from the differential route
#
#   T(k, 0) = N_kj * [ (J . grad)^k  r^k Y_k0(theta, phi) ]_{r -> J},
#
# evaluated by expanding r^k Y_k0 as a polynomial in z and r^2 = x^2+y^2+z^2
# (Legendre coefficients, kept as exact rationals) and replacing each
# monomial x^a y^b z^c by the fully symmetrized product of Jx, Jy, Jz. The
# symmetrization is what (J . grad)^k produces; dropping it is wrong because
# e.g. Sym(z r^2) maps to J^2 Jz - Jz/3, not J^2 Jz.

def _legendre_coeffs(k: int) -> dict[int, Fraction]:
    """Exact expansion r^k P_k(z/r) = sum_i c_i z^(k-2i) (r^2)^i with
    c_i = (-1)^i C(k,i) C(2k-2i,k) / 2^k; returns {k-2i: c_i}.
    """
    out: dict[int, Fraction] = {}
    for i in range(k // 2 + 1):
        c = Fraction((-1) ** i * math.comb(k, i) * math.comb(2 * k - 2 * i, k), 2 ** k)
        out[k - 2 * i] = c
    return out


def _symmetrized_words(jx: np.ndarray, jy: np.ndarray, jz: np.ndarray):
    """Return a memoized W(a,b,c): the sum of all (a+b+c)!/(a!b!c!) distinct
    operator words containing a letters Jx, b letters Jy, c letters Jz, each
    word once. Recursion splits on the leftmost letter.
    """
    d = jx.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    cache: dict[tuple[int, int, int], np.ndarray] = {(0, 0, 0): eye}

    def w(a: int, b: int, c: int) -> np.ndarray:
        if a < 0 or b < 0 or c < 0:
            return np.zeros_like(eye)
        key = (a, b, c)
        if key not in cache:
            cache[key] = (jx @ w(a - 1, b, c)) + (jy @ w(a, b - 1, c)) + (jz @ w(a, b, c - 1))
        return cache[key]

    return w


def weyl_tensor(j, k: int, q: int = 0) -> np.ndarray:
    """T(k, 0) built through the symmetrized differential construction.

    Supports q = 0 only (the harmonic expansion is kept to the axial case);
    any other q raises ValueError. Agrees with spherical_tensor(j, k, 0) to
    machine precision, by a completely different route.
    """
    tj = _doubled(j, "j")
    k = int(k)
    if int(q) != 0:
        raise ValueError("only the q = 0 component is supported by this construction")
    if not 0 <= k <= tj:
        raise ValueError(f"rank must satisfy 0 <= k <= 2j = {tj}, got k={k}")
    jx, jy, jz = angular_momentum(j)
    w = _symmetrized_words(jx, jy, jz)

    total = np.zeros_like(jz)
    for zpow, coeff in _legendre_coeffs(k).items():
        rpow = (k - zpow) // 2  # power of r^2 = x^2 + y^2 + z^2
        # expand (x^2+y^2+z^2)^rpow * z^zpow into monomials x^(2a) y^(2b) z^(2c+zpow)
        for a in range(rpow + 1):
            for b in range(rpow - a + 1):
                c = rpow - a - b
                mult = Fraction(math.factorial(rpow),
                                math.factorial(a) * math.factorial(b) * math.factorial(c))
                alpha, beta, gamma = 2 * a, 2 * b, 2 * c + zpow
                # (J.grad)^k on x^alpha y^beta z^gamma leaves alpha!beta!gamma!
                # times the sum over all letter orders, which is W
                weight = coeff * mult * (math.factorial(alpha)
                                         * math.factorial(beta) * math.factorial(gamma))
                total = total + float(weight) * w(alpha, beta, gamma)

    # N_kj * sqrt((2k+1)/4pi) with the 4pi of the harmonic normalization
    # cancelled symbolically against the one inside N_kj
    scale = (2.0 ** k / math.factorial(k)) * math.sqrt(float(Fraction(
        math.factorial(tj - k) * (tj + 1) * (2 * k + 1),
        math.factorial(tj + k + 1),
    )))
    return scale * total
