"""Exact verdicts for the inequality chains of one induction step.

Each check compares two :class:`ExactScalar` sides.  Checks that involve
``n`` and ``p`` are evaluated at the boundary of the step's hypotheses:
``n = n_{i+1}`` and ``np = C_{i+1}`` (the weakest case, m_F >= 1).
A failing check is a result, not an error: several chains only hold for
sufficiently large k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import PreconditionError, _check_k, ledger, step_constants
from .exact import ExactScalar

P2 = ExactScalar.pow2


@dataclass(frozen=True)
class AuditCheck:
    name: str
    lhs: ExactScalar
    rhs: ExactScalar
    relation: str  # ">=", "<=" or "=="

    @property
    def passed(self) -> bool:
        if self.relation == ">=":
            return self.lhs >= self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs
        return self.lhs == self.rhs

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict[str, object]:
        return {"check_name": self.name, "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(),
                "relation": self.relation, "verdict": self.verdict}


@dataclass(frozen=True)
class AuditReport:
    k: int
    i: int
    checks: tuple[AuditCheck, ...]

    def __getitem__(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict[str, object]:
        return {"k": self.k, "i": self.i, "checks": [c.to_json() for c in self.checks]}


def eq9_bounds(k: int, a_i: ExactScalar) -> list[AuditCheck]:
    """The expanded forms of γ, α, ρ and their simplified lower bounds."""
    sc = step_constants(k, 1, a_i, ExactScalar.of(1))
    k2, k3, k4 = k**2, k**3, k**4
    return [
        AuditCheck("eq9.gamma.identity", sc.gamma, a_i ** (4 * k2) / P2(12 * k4 + 5 * k2), "=="),
        AuditCheck("eq9.gamma", sc.gamma, a_i ** (4 * k2) / P2(13 * k4), ">="),
        AuditCheck("eq9.alpha.identity", sc.alpha,
                   a_i ** (36 * k2) / (729 * P2(108 * k4 + 53 * k2 + 2)), "=="),
        AuditCheck("eq9.alpha", sc.alpha, a_i ** (36 * k2) / P2(109 * k4), ">="),
        AuditCheck("eq9.rho.identity", sc.rho, a_i ** (4 * k) / P2(12 * k3 + 4 * k), "=="),
        AuditCheck("eq9.rho", sc.rho, a_i ** (4 * k) / P2(13 * k3), ">="),
    ]


def audit(k: int, i: int) -> AuditReport:
    """Decide every (k, i)-only inequality of the induction step from F_i to F_{i+1}."""
    _check_k(k)
    if not 1 <= i < math.comb(k, 2):
        raise PreconditionError(f"need 1 <= i < {math.comb(k, 2)}")
    rows = ledger(k, upto=i + 1)
    cur, nxt = rows[i - 1], rows[i]
    a, b, C, n = cur.a, cur.b, cur.C, cur.n
    a1, b1, C1, n1 = nxt.a, nxt.b, nxt.C, nxt.n
    sc = step_constants(k, i, a, b)
    rho, gamma, alpha = sc.rho, sc.gamma, sc.alpha
    dI, dII = sc.delta_I, sc.delta_II
    k2 = k * k
    t_max = P2(math.comb(2 * k - 2, 2))
    one = ExactScalar.of(1)

    checks = eq9_bounds(k, a)
    checks += [
        AuditCheck("scale.rho_n", rho * n1, n, ">="),
        AuditCheck("scale.rho_n_2k3", rho * n1, P2(k**3) * n, ">="),
        AuditCheck("scale.rho_n_ge_3", rho * n1, ExactScalar.of(3), ">="),
        AuditCheck("round1.alpha_rho_C", alpha * rho * C1 / 4, C, ">="),
        AuditCheck("round1.deletion_precondition", alpha * rho * C1 / 2, 72 / dI**2, ">="),
        AuditCheck("creatures.C_ge_2_over_alpha", C1, 2 / alpha, ">="),
        AuditCheck("creatures.chain", rho**k * alpha / 2 * C1, one, ">="),
        AuditCheck("creatures.t_bound", t_max, P2(2 * k2 - 4 * k), "<="),
        AuditCheck("creatures.t_bound_2", P2(2 * k2 - 4 * k),
                   P2(2 * k2 - 1) / (4 * math.comb(k, 2)), "<="),
        AuditCheck("janson.C_ge_4", C1, ExactScalar.of(4), ">="),
        AuditCheck("round2.deletion_precondition", gamma / 2 * n1 * C1, 72 / dII**2, ">="),
        AuditCheck("round2.a_next_blue", gamma / P2(2 * k2), a1, ">="),
        # α^{k²/2} is irrational for odd k, so both sides are squared
        AuditCheck("round2.a_next_red",
                   (dII * gamma * a * rho**k / P2(4 * k2)) ** 2 * alpha**k2, a1**2, ">="),
        AuditCheck("budget.qI_coefficient",
                   dI**2 * rho**2 * alpha / (6 * P2(4 * k2)), 2 * b1, ">="),
        # n + 2k² + 1 <= 2n once n >= 2k² + 1
        AuditCheck("budget.n_ge_2k2_plus_1", n1, ExactScalar.of(2 * k2 + 1), ">="),
        AuditCheck("budget.qI_additive", b1 * C1, ExactScalar.of(2), ">="),
        AuditCheck("budget.qII", dII**2 * gamma / 36, b1, ">="),
        AuditCheck("final.b_C_n", b1 / 2 * C1 * n1, one, ">="),
    ]
    return AuditReport(k, i, tuple(checks))


def eq9_all_pass_threshold(k_max: int = 64) -> int | None:
    """Smallest k >= 3 for which the three eq9 lower bounds all hold at i = 1."""
    a1 = ExactScalar.of(1) / 2
    for k in range(3, k_max + 1):
        names = {"eq9.gamma", "eq9.alpha", "eq9.rho"}
        if all(c.passed for c in eq9_bounds(k, a1) if c.name in names):
            return k
    return None
