"""Runnable checks of the main-eigenvalue results for generalized Bethe trees.

Each check returns a :class:`VerificationOutcome`; ``passed`` is computed from
``observed`` alone so outcomes are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from . import exact, spectra
from .partition import (
    characteristic_matrix,
    check_compatibility,
    check_similarity,
    divisor_matrix,
    is_equitable,
    level_partition,
)
from .tree import (
    DegreeSequence,
    adjacency,
    bethe_degrees,
    build_tree,
    counterexample_degrees,
    level_sizes,
    quasi_regular_degrees,
    vertex_count,
)

# charpoly_tree is O(n^2) big-int work; keep the divisibility check at desk scale
CHARPOLY_TREE_CAP = 5000


@dataclass
class VerificationOutcome:
    claim_id: str
    instance: Any
    expected: str
    observed: dict = field(default_factory=dict)
    passed: bool = False

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "instance": self.instance,
            "expected": self.expected,
            "observed": self.observed,
            "pass": self.passed,
        }


def _degrees(ds: DegreeSequence) -> list[int]:
    return list(ds.degrees)


def verify_theorem1(d: int, k: int) -> VerificationOutcome:
    if d < 2 or k < 3:
        raise ValueError(f"need d >= 2 and k >= 3, got d = {d}, k = {k}")
    bethe = main_count(bethe_degrees(d, k))
    quasi = main_count(quasi_regular_degrees(d, k))
    return VerificationOutcome(
        "thm1",
        {"d": d, "k": k},
        f"B_(d,k) and Q_(d,k) both have exactly {k} main eigenvalues",
        {"bethe_main_count": bethe, "quasi_regular_main_count": quasi},
        bethe == k and quasi == k,
    )


def verify_hou(alpha: int) -> VerificationOutcome:
    if alpha < 2:
        raise ValueError(f"alpha must be >= 2, got {alpha}")
    ds = DegreeSequence((alpha * alpha - alpha + 1, alpha))
    count = main_count(ds)
    return VerificationOutcome(
        "hou",
        {"alpha": alpha, "degrees": _degrees(ds)},
        "exactly 2 main eigenvalues with 3 levels",
        {"main_count": count},
        count == 2,
    )


def verify_counterexample(k: int) -> VerificationOutcome:
    """Three-level check of the even-k counterexample ``B(5, k-3, 5, 3, 2, ..., 2)``."""
    ds = counterexample_degrees(k)
    B = divisor_matrix(ds)
    xi = exact.verify_xi_identity(k)
    count = exact.main_count_divisor(B)
    p = exact.charpoly_tridiagonal(B)
    p_at_minus_two = p(-2)
    observed = {
        "degrees": _degrees(ds),
        "xi_eigen_ok": xi.eigen_ok,
        "xi_orthogonal_ok": xi.orthogonal_ok,
        "xi_offending_index": xi.offending_index,
        "main_count": count,
        "charpoly_at_minus_two": str(p_at_minus_two),
        "minus_two_main": exact.is_main_rational_eigenvalue(B, -2) if p_at_minus_two == 0 else None,
    }
    return VerificationOutcome(
        "thm3",
        {"k": k},
        f"at most {k - 1} main eigenvalues; B^T xi = -2 xi; sum(xi) = 0; p(-2) = 0",
        observed,
        xi.ok and count <= k - 1 and p_at_minus_two == 0,
    )


def brackets_root(p: exact.Poly, value: float, tol: float) -> bool:
    """Sign-change test of ``p`` on the rational interval ``value +- tol``."""
    centre = Fraction(value)
    lo, hi = p(centre - Fraction(tol)), p(centre + Fraction(tol))
    return lo == 0 or hi == 0 or (lo < 0) != (hi < 0)


def verify_main_spectrum_equality(ds: DegreeSequence, tol_cluster: float = spectra.TOL_CLUSTER,
                                  tol_main: float = spectra.TOL_MAIN) -> VerificationOutcome:
    """Numeric main spectrum of the full tree against the exact divisor."""
    n = vertex_count(ds)
    if n > spectra.DEFAULT_EIGEN_CAP:
        raise ValueError(f"tree has {n} vertices, above the eigensolver cap of {spectra.DEFAULT_EIGEN_CAP}")
    A = adjacency(build_tree(ds))
    B = divisor_matrix(ds)
    p = exact.charpoly_tridiagonal(B)
    exact_count = exact.main_count_divisor(B)
    report = spectra.main_spectrum_numeric(A, tol_cluster=tol_cluster, tol_main=tol_main)
    values = report.main_eigenvalues
    bracketed = [brackets_root(p, v, tol_cluster) for v in values]

    rational = []
    for lam in exact.integer_eigenvalues(B):
        cluster = report.cluster_near(lam, tol_cluster)
        rational.append({
            "value": lam,
            "exact_main": exact.is_main_rational_eigenvalue(B, lam),
            "numeric_main": None if cluster is None else cluster.is_main,
        })
    rational_ok = all(r["exact_main"] == r["numeric_main"] for r in rational)

    borderline = [c.value for c in report.clusters if c.borderline]
    observed = {
        "n": n,
        "exact_main_count": exact_count,
        "numeric_main_count": report.main_count,
        "numeric_main_values": values,
        "bracketed": bracketed,
        "rational_eigenvalues": rational,
        "borderline": borderline,
    }
    passed = exact_count == report.main_count and all(bracketed) and rational_ok
    if not passed:
        observed["diagnostic"] = "numeric path disagrees with the exact divisor; exact count is authoritative"
    return VerificationOutcome(
        "lem8",
        _degrees(ds),
        "tree and divisor share the main spectrum",
        observed,
        passed,
    )


def verify_divisor_identities(ds: DegreeSequence, charpoly_cap: int = CHARPOLY_TREE_CAP) -> VerificationOutcome:
    """``AC = CB``, equitability of the level partition and charpoly divisibility."""
    tree = build_tree(ds)
    A = adjacency(tree)
    part = level_partition(tree)
    C = characteristic_matrix(part)
    B = divisor_matrix(ds)
    equitable, table = is_equitable(A, part)
    observed = {
        "equitable": equitable,
        "table_matches_closed_form": bool(equitable and (table == B).all()),
        "ac_equals_cb": check_compatibility(A, C, B),
    }
    if tree.vertex_count <= charpoly_cap:
        observed["charpoly_divides"] = exact.poly_divides(
            exact.charpoly_tridiagonal(B), exact.charpoly_tree(ds))
    else:
        observed["charpoly_divides"] = None
    passed = all(v is not False for v in observed.values())
    return VerificationOutcome("lem4", _degrees(ds), "AC = CB and det(xI-B) | det(xI-A)",
                               observed, passed)


def verify_similarity(ds: DegreeSequence) -> VerificationOutcome:
    ok = check_similarity(divisor_matrix(ds), level_sizes(ds))
    return VerificationOutcome("lem5", _degrees(ds), "b_ij |C_i| = b_ji |C_j|",
                               {"similar_to_transpose": ok}, ok)


def main_count(ds: DegreeSequence) -> int:
    return exact.main_count_divisor(divisor_matrix(ds))


DEFAULT_LEM8_INSTANCES = ("3", "4", "3,2", "4,2", "3,3,2", "2,3,3", "3,3,3", "5,3,5,3,2")


def default_suite() -> list[VerificationOutcome]:
    """Every check at the parameter ranges used by the acceptance tests."""
    outcomes = []
    for d in (2, 3, 4):
        for k in range(3, 9):
            outcomes.append(verify_theorem1(d, k))
    outcomes.extend(verify_hou(a) for a in range(2, 7))
    outcomes.extend(verify_counterexample(k) for k in range(6, 41, 2))
    for text in DEFAULT_LEM8_INSTANCES:
        ds = DegreeSequence.parse(text)
        outcomes.append(verify_divisor_identities(ds))
        outcomes.append(verify_similarity(ds))
        outcomes.append(verify_main_spectrum_equality(ds))
    return outcomes


def summarize(outcomes: Iterable[VerificationOutcome]) -> str:
    outcomes = list(outcomes)
    failed = [o for o in outcomes if not o.passed]
    line = f"{len(outcomes) - len(failed)}/{len(outcomes)} checks passed"
    if failed:
        line += "; failed: " + ", ".join(f"{o.claim_id}{o.instance}" for o in failed)
    return line
