"""Exact evaluation of the constant recurrences and the probability bounds built on them.

Every ledger entry is a power of two, so rows are computed on integer
base-2 logarithms.  Derived per-step constants pick up factors of 3 and
live in :class:`ExactScalar`.  Bounds of the form ``exp(-X)`` are returned
as :class:`ExpValue` holding ``-X``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .exact import ExactScalar, ExpValue, Number
from .graphs import Pattern

TWO = ExactScalar.of(2)


class PreconditionError(ValueError):
    pass


class ChainViolationError(PreconditionError):
    pass


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 3:
        raise PreconditionError(f"k must be an integer >= 3, got {k!r}")


# recurrences ------------------------------------------------------------------

@dataclass(frozen=True)
class LedgerRow:
    i: int
    a: ExactScalar
    b: ExactScalar
    C: ExactScalar
    n: ExactScalar

    @property
    def logs(self) -> tuple[int, int, int, int]:
        return self.a.log2(), self.b.log2(), self.C.log2(), self.n.log2()

    def to_json(self, k: int) -> dict[str, object]:
        la, lb, lc, ln = self.logs
        return {"k": k, "i": self.i, "log2_a": str(la), "log2_b": str(lb),
                "log2_C": str(lc), "log2_n": str(ln)}


def _log_rows(k: int, upto: int):
    # log2 of (a_i, b_i, C_i, n_i), i = 1..upto
    la, lb, lc, ln = -1, -3, 0, 0
    yield la, lb, lc, ln
    k2, k3, k4, k6 = k**2, k**3, k**4, k**6
    for _ in range(upto - 1):
        la, lb, lc, ln = (
            19 * k4 * la - 55 * k6,
            37 * k2 * la - 118 * k4 + 4 * lb,
            122 * k4 - 4 * lb - 37 * k2 * la + lc,
            14 * k3 - 4 * k * la + ln,
        )
        yield la, lb, lc, ln


def ledger(k: int, upto: int | None = None) -> list[LedgerRow]:
    """Rows (a_i, b_i, C_i, n_i) for i = 1..C(k,2) (or 1..upto)."""
    _check_k(k)
    last = math.comb(k, 2)
    upto = last if upto is None else upto
    if not 1 <= upto <= last:
        raise PreconditionError(f"row index must lie in 1..{last}")
    return [
        LedgerRow(i, *(ExactScalar.pow2(x) for x in logs))
        for i, logs in enumerate(_log_rows(k, upto), start=1)
    ]


@dataclass(frozen=True)
class ClosedFormParams:
    k: int

    @property
    def x(self) -> int:
        return 19 * self.k**4

    @property
    def y(self) -> int:
        return 55 * self.k**6

    @property
    def u(self) -> int:
        return 37 * self.k**2

    @property
    def v(self) -> int:
        return 118 * self.k**4

    @property
    def w(self) -> int:
        return 37 * self.k**2

    @property
    def z(self) -> int:
        return 122 * self.k**4


def closed_forms(k: int, i: int) -> tuple[int, int, int, int]:
    """(log2 a_i, log2 b_i, log2 C_i, log2 n_i) from geometric-sum closed forms.

    The b, C and n products telescope over the previous row's a and b,
    matching the recurrence exactly.
    """
    _check_k(k)
    if not 1 <= i <= math.comb(k, 2):
        raise PreconditionError(f"i must lie in 1..{math.comb(k, 2)}")
    P = ClosedFormParams(k)
    x, y, u, v, w, z = P.x, P.y, P.u, P.v, P.w, P.z
    s = i - 1
    # -log2 a_j = K x^{j-1} - L
    K = Fraction(x - 1 + y, x - 1)
    L = Fraction(y, x - 1)
    alpha = -(x**s) - Fraction(y * (x**s - 1), x - 1)
    # sum_{m=0}^{s-1} 4^{s-1-m} x^m and friends
    g4 = Fraction(4**s - 1, 3)
    sum_4x = Fraction(x**s - 4**s, x - 4)
    beta = -3 * 4**s - u * (K * sum_4x - L * g4) - v * g4
    # sum_{m=1}^{s} (-log2 a_m) and sum_{m=1}^{s} log2 b_m
    gx = Fraction(x**s - 1, x - 1)
    sum_A = K * gx - L * s
    sum_x4 = Fraction(x**s - 1, x - 1) - g4  # sum over m of (x^{m-1} - 4^{m-1})
    sum_beta = -3 * g4 - u * (K * sum_x4 / (x - 4) - L * (g4 - s) / 3) - v * (g4 - s) / 3
    log_C = s * z - 4 * sum_beta + w * sum_A
    log_n = 14 * k**3 * s + 4 * k * sum_A
    out = (alpha, beta, log_C, log_n)
    for val in out:
        if Fraction(val).denominator != 1:  # pragma: no cover - algebra guard
            raise ArithmeticError("closed form produced a non-integer")
    return tuple(int(val) for val in out)


# per-step constants -----------------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    """A threshold of the shape ``coefficient * prod(var ** power)``."""

    coefficient: ExactScalar
    powers: dict[str, int] = field(default_factory=dict)

    def evaluate(self, **values: Number) -> ExactScalar:
        out = self.coefficient
        for name, pw in self.powers.items():
            out = out * ExactScalar.of(values[name]) ** pw
        return out

    def __str__(self) -> str:
        factors = " * ".join(f"{n}^{p}" if p != 1 else n for n, p in self.powers.items())
        return f"{self.coefficient} * {factors}" if factors else str(self.coefficient)


@dataclass(frozen=True)
class StepConstants:
    k: int
    i: int
    d: ExactScalar
    rho: ExactScalar
    gamma: ExactScalar
    delta_II: ExactScalar
    alpha: ExactScalar
    delta_I: ExactScalar
    ell: Threshold
    h_I: Threshold
    h_II: Threshold

    def identities(self) -> dict[str, bool]:
        """Re-derive each constant along a second route and compare exactly."""
        k = self.k
        g = self.gamma
        return {
            "delta_II": self.delta_II == g**4 / (9 * ExactScalar.pow2(4 * k * k)),
            "alpha": self.alpha == self.delta_II**2 * g / 36,
            "alpha_from_gamma": self.alpha == g**9 / (729 * ExactScalar.pow2(8 * k * k + 2)),
            "rho": self.rho == (self.d / 4) ** (2 * k),
            "gamma": self.gamma == self.d ** (2 * k * k) / ExactScalar.pow2(5 * k * k),
        }


def step_constants(k: int, i: int, a_i: Number, b_i: Number, t: int | None = None) -> StepConstants:
    """The auxiliary constants of one induction step.

    ``t`` is the number of double-creature classes used in ``h_I``; it
    defaults to the generic bound ``2^{C(2k-2,2)}``.
    """
    _check_k(k)
    a, b = ExactScalar.of(a_i), ExactScalar.of(b_i)
    k2 = k * k
    d = a**2 / ExactScalar.pow2(6 * k2)
    rho = (d / 4) ** (2 * k)
    gamma = d ** (2 * k2) / ExactScalar.pow2(5 * k2)
    delta_II = gamma**4 / (9 * ExactScalar.pow2(4 * k2))
    alpha = delta_II**2 * gamma / 36
    delta_I = b**2 / 36
    t = 2 ** math.comb(2 * k - 2, 2) if t is None else t
    ell = Threshold(a / ExactScalar.pow2(2 * k2), {"rho_n": k - 2, "p_I": i})
    h_I = Threshold(delta_I / (2 * t), {"binom_rho_n_2": 1, "p_I": 1})
    h_II = Threshold(delta_II * gamma / 2, {"n": 2, "p_II": 1})
    return StepConstants(k, i, d, rho, gamma, delta_II, alpha, delta_I, ell, h_I, h_II)


def step_constants_for_row(k: int, row: LedgerRow, t: int | None = None) -> StepConstants:
    return step_constants(k, row.i, row.a, row.b, t)


# two-round exposure -------------------------------------------------------------

def _to_mpf(x: ExactScalar) -> mpmath.mpf:
    m = x.mantissa
    return mpmath.ldexp(mpmath.mpf(m.numerator) / m.denominator, x.exp2)


def _from_mpf(x: mpmath.mpf) -> ExactScalar:
    man, exp = mpmath.frexp(x)  # x = man * 2**exp, 0.5 <= |man| < 1
    bits = mpmath.mp.prec
    scaled = int(mpmath.ldexp(man, bits))
    return ExactScalar(Fraction(scaled), exp - bits)


def two_round_split(p: Number, alpha: Number, prec: int = 256) -> tuple[ExactScalar, ExactScalar]:
    """Solve p = p_I + p_II - p_I p_II with p_I = α p_II.

    The root is computed in ``prec``-bit arithmetic through the
    cancellation-free form ``2p / ((1+α) + sqrt((1+α)^2 - 4αp))`` and then
    nudged down until it is provably at most the true root, so
    ``p >= p_II`` holds exactly.  ``p_I`` is ``α * p_II`` exactly.
    """
    p, alpha = ExactScalar.of(p), ExactScalar.of(alpha)
    if not 0 < p <= 1:
        raise PreconditionError("p must lie in (0,1]")
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    if alpha > Fraction(1, 2):
        raise ChainViolationError("alpha > 1/2 breaks p/2 >= alpha*p")

    def g(xv: ExactScalar) -> ExactScalar:
        # increasing on [0,1]; its zero is p_II
        return (1 + alpha) * xv - alpha * xv * xv - p

    with mpmath.workprec(prec):
        P, A = _to_mpf(p), _to_mpf(alpha)
        root = 2 * P / ((1 + A) + mpmath.sqrt((1 + A) ** 2 - 4 * A * P))
        p_II = _from_mpf(root)
    step = ExactScalar.pow2(-(prec - 8))
    tries = 0
    while g(p_II) > 0:
        p_II = p_II - p_II * step
        tries += 1
        if tries > 64:  # pragma: no cover - precision far too low
            raise ArithmeticError("could not bracket the root")
    if not 0 < p_II <= 1:
        raise PreconditionError("no root in (0,1]")
    p_I = alpha * p_II
    check_split_chain(p, alpha, p_I, p_II)
    return p_I, p_II


def split_chain(p: Number, alpha: Number, p_I: Number, p_II: Number) -> list[tuple[str, bool]]:
    """p ≥ p_II ≥ p/2 ≥ αp ≥ αp_II = p_I ≥ αp/2, each link decided exactly."""
    p, alpha, p_I, p_II = (ExactScalar.of(v) for v in (p, alpha, p_I, p_II))
    return [
        ("p >= p_II", p >= p_II),
        ("p_II >= p/2", p_II >= p / 2),
        ("p/2 >= alpha*p", p / 2 >= alpha * p),
        ("alpha*p >= alpha*p_II", alpha * p >= alpha * p_II),
        ("alpha*p_II == p_I", alpha * p_II == p_I),
        ("p_I >= alpha*p/2", p_I >= alpha * p / 2),
    ]


def check_split_chain(p, alpha, p_I, p_II) -> None:
    bad = [name for name, ok in split_chain(p, alpha, p_I, p_II) if not ok]
    if bad:
        raise ChainViolationError("chain broken at " + ", ".join(bad))


def split_residual(p: Number, p_I: ExactScalar, p_II: ExactScalar) -> ExactScalar:
    """|p_I + p_II - p_I p_II - p| / p, exactly."""
    p = ExactScalar.of(p)
    return abs(p_I + p_II - p_I * p_II - p) / p


# Folkman bound ----------------------------------------------------------------

@dataclass(frozen=True)
class FolkmanBound:
    k: int
    log2_nbar: int
    log2_clique_term: Fraction   # (k+1)/2 * (1 + log2 C_bar)
    log2_b_bar: int
    log2_C_bar: int

    @property
    def log2_n0(self) -> Fraction:
        return max(Fraction(self.log2_nbar), self.log2_clique_term)

    @property
    def dominating(self) -> str:
        return "(2C)^((k+1)/2)" if self.log2_clique_term > self.log2_nbar else "n_bar"

    @property
    def n0(self) -> ExactScalar | None:
        """n0 itself when it is an exact power of two (always for odd k)."""
        lg = self.log2_n0
        return ExactScalar.pow2(int(lg)) if lg.denominator == 1 else None


def folkman_bound(k: int) -> FolkmanBound:
    """n0 = max(n̄, (2C̄)^{(k+1)/2}) from the last ledger row."""
    _check_k(k)
    last = ledger(k)[-1]
    la, lb, lc, ln = last.logs
    return FolkmanBound(k, ln, Fraction(k + 1, 2) * (1 + lc), lb, lc)


@dataclass(frozen=True)
class MarginReport:
    """Exponents of the final probabilistic step at n = n0.

    P(no K_{k+1}) > exp(-x_fkg) and P(not arrowing) <= exp(-x_thm) with
    x_thm = b p C(n,2).  The step needs x_fkg < x_thm.  ``x_thm_upper`` is
    b p n^2/2, which avoids building C(n,2) for astronomically large n.
    """

    x_fkg: ExactScalar
    x_thm_upper: ExactScalar
    holds: bool


def probabilistic_method_margin(fb: FolkmanBound) -> MarginReport:
    """Decide x_fkg < b p C(n0,2) exactly.  Only defined when log2 n0 is integral."""
    k = fb.k
    if fb.log2_n0.denominator != 1:
        raise PreconditionError("n0 is not an integral power of two")
    ln0 = int(fb.log2_n0)
    n = ExactScalar.pow2(ln0)
    C = ExactScalar.pow2(fb.log2_C_bar)
    x_fkg = C ** math.comb(k + 1, 2) * n
    # p = C n^{-2/(k+1)}; need log2 of n^{2/(k+1)} integral
    lp_num = fb.log2_C_bar * (k + 1) - 2 * ln0
    if lp_num % (k + 1):
        raise PreconditionError("p is not an exact power of two at n0")
    bp = ExactScalar.pow2(fb.log2_b_bar + lp_num // (k + 1))
    upper = bp * n * n / 2
    if x_fkg >= upper:
        holds = False
    elif 2 * x_fkg < upper:
        # b p n/2 <= upper/2 for n >= 2
        holds = True
    else:
        holds = x_fkg + bp * n / 2 < upper
    return MarginReport(x_fkg, upper, holds)


# probability bounds --------------------------------------------------------------

def fkg_bound(n: Number, k: int, C: Number) -> ExpValue:
    """exp(-C^{C(k+1,2)} n), valid when p = C n^{-2/(k+1)} ≤ 1/2."""
    n, C = ExactScalar.of(n), ExactScalar.of(C)
    if k < 3 or n < 1:
        raise PreconditionError("need k >= 3, n >= 1")
    if C <= 0:
        raise PreconditionError("C must be positive")
    # p <= 1/2  <=>  C^{k+1} <= n^2 / 2^{k+1}
    if C ** (k + 1) > n**2 / ExactScalar.pow2(k + 1):
        raise PreconditionError("p = C n^(-2/(k+1)) exceeds 1/2")
    return ExpValue(-(C ** math.comb(k + 1, 2)) * n)


@dataclass(frozen=True)
class DeletionBound:
    delta: ExactScalar
    h: ExactScalar
    failure: ExpValue


def prop_del_bound(c: Number, N: int, p: Number) -> DeletionBound:
    """δ = c²/9, h = δNp/2 and the failure bound exp(-δ²Np/9)."""
    c, p = ExactScalar.of(c), ExactScalar.of(p)
    if not 0 < c < 1:
        raise PreconditionError("c must lie in (0,1)")
    delta = c * c / 9
    Np = ExactScalar.of(N) * p
    need = 72 / delta**2
    if Np < need:
        raise PreconditionError(
            f"Np = {Np.to_fraction()} is below 72/delta^2 = {need.to_fraction()} "
            f"(deficit {(need - Np).to_fraction()})"
        )
    return DeletionBound(delta, delta * Np / 2, ExpValue(-(delta**2) * Np / 9))


def prop_upper_bound(h: int, s: int) -> ExpValue:
    """exp(-h/(2s))."""
    if h < 0 or s < 1:
        raise PreconditionError("need h >= 0 and s >= 1")
    return ExpValue(-ExactScalar.of(Fraction(h, 2 * s)))


def janson_delta_bar(F: Pattern, n: int, p: Number) -> ExactScalar:
    """Sum over nonempty labeled edge subsets F~ of n^{2v_F - v(F~)} p^{2e_F - e(F~)}."""
    if F.e_F < 1:
        raise PreconditionError("pattern has no edges")
    p = ExactScalar.of(p)
    nn = ExactScalar.of(n)
    total = ExactScalar.of(0)
    for r in range(1, F.e_F + 1):
        for sub in itertools.combinations(F.edges, r):
            v = len({x for e in sub for x in e})
            total = total + nn ** (2 * F.k - v) * p ** (2 * F.e_F - r)
    return total


def base_case_bound(n: int, p: Number) -> ExpValue:
    """exp(-(1/8) C(n,2) p), the Chernoff bound anchoring the induction."""
    p = ExactScalar.of(p)
    if not 0 <= p <= 1:
        raise PreconditionError("p must lie in [0,1]")
    return ExpValue(-ExactScalar.of(Fraction(1, 8)) * math.comb(n, 2) * p)
