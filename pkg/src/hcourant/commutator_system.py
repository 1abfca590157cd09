"""The linear system behind the expansion of mu_n in iterated commutators.

For odd n >= 5 the operator 2 E_{n-1} - 3 E_{n-2} + E_{n-3}, with
E_j = S^j o pi_1 o S^(n-1-j), is written as a combination of

    d [S^(n-1), pi_1],  b_k [S^k, [S^(n-1-k), pi_1]]  (k even, 2 <= k <= N),
    a_{k3 k2} [S^k3, [S^k2, [S, pi_1]]]               (k3 >= k2 >= 1, sum n-2),
    a_{k4 k3} [S^k4, [S^k3, [S, [S, pi_1]]]]          (k4 >= k3 >= 1, sum n-3),

with N = (n-1)/2 and d, b_k fixed by Bernoulli numbers.  Comparing
coefficients of the formal symbols E_j gives n equations in the n - 3
unknowns a.  This module builds that system, applies the folding row
operation that splits it in two, solves it exactly and checks the
orthogonality relations that certify solvability.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .combinatorics import bernoulli
from .linalg import rank, solve

__all__ = [
    "MAX_N",
    "CommutatorSystem",
    "SolveResult",
    "expand_commutator",
    "system_coefficients",
    "build_system",
    "transform_rows",
    "transform_and_split",
    "solve_system",
    "cross_validate_operator",
]

MAX_N = 25


def expand_commutator(exponents, total: int) -> dict:
    """[S^e_1, [S^e_2, ... [S^e_r, pi_1]]] in the E basis, as {j: coefficient}.

    ``exponents`` lists the powers from the outside in; their sum must be
    ``total``.  Uses [S^a, S^j o pi_1 o S^l] = S^(j+a) o pi_1 o S^l - S^j o pi_1 o S^(l+a).
    """
    if sum(exponents) != total:
        raise ValueError("exponents must add up to the total power")
    terms = {(0, 0): Fraction(1)}
    for a in reversed(list(exponents)):
        new: dict = {}
        for (j, l), c in terms.items():
            new[(j + a, l)] = new.get((j + a, l), 0) + c
            new[(j, l + a)] = new.get((j, l + a), 0) - c
        terms = {k: v for k, v in new.items() if v}
    return {j: c for (j, _), c in terms.items()}


def _check_n(n: int, max_n: int = MAX_N) -> None:
    if n < 5 or n % 2 == 0:
        raise ValueError("n must be an odd integer >= 5")
    if n > max_n:
        raise ValueError(f"n exceeds the cap {max_n}")


def system_coefficients(n: int) -> tuple[Fraction, dict]:
    """d = 1/(n-1) and the b_k for even 2 <= k <= N."""
    _check_n(n, 10**6)
    N = (n - 1) // 2
    top = bernoulli(n - 1)
    d = Fraction(1, n - 1)
    b = {}
    for k in range(2, N + 1, 2):
        v = -Fraction(comb(n - 1, k)) * bernoulli(k) * bernoulli(n - 1 - k) / (k * (n - 1 - k) * top)
        b[k] = v / 2 if k == N else v
    return d, b


@dataclass
class CommutatorSystem:
    n: int
    matrix: list
    rhs: list
    row_labels: list
    column_labels: list
    d: Fraction
    b: dict

    @property
    def N(self) -> int:
        return (self.n - 1) // 2


def _column_pairs(n: int) -> list:
    cols = []
    for k2 in range((n - 2) // 2, 0, -1):
        cols.append(("k3k2", (n - 2 - k2, k2)))
    for k3 in range((n - 3) // 2, 0, -1):
        cols.append(("k4k3", (n - 3 - k3, k3)))
    return cols


def _column_exponents(kind: str, pair: tuple) -> list:
    if kind == "k3k2":
        return [pair[0], pair[1], 1]
    return [pair[0], pair[1], 1, 1]


def _to_vector(n: int, coeffs: dict) -> list:
    """Coefficients ordered E_{n-1}, ..., E_0."""
    return [Fraction(coeffs.get(j, 0)) for j in range(n - 1, -1, -1)]


def build_system(n: int, max_n: int = MAX_N) -> CommutatorSystem:
    _check_n(n, max_n)
    d, b = system_coefficients(n)
    labels = _column_pairs(n)
    cols = [_to_vector(n, expand_commutator(_column_exponents(kind, pair), n - 1)) for kind, pair in labels]
    matrix = [[c[i] for c in cols] for i in range(n)]
    rhs_terms = {n - 1: Fraction(2), n - 2: Fraction(-3), n - 3: Fraction(1)}
    for j, c in expand_commutator([n - 1], n - 1).items():
        rhs_terms[j] = rhs_terms.get(j, 0) - d * c
    for k, bk in b.items():
        for j, c in expand_commutator([k, n - 1 - k], n - 1).items():
            rhs_terms[j] = rhs_terms.get(j, 0) - bk * c
    rhs = _to_vector(n, rhs_terms)
    rows = [f"E{j}" for j in range(n - 1, -1, -1)]
    return CommutatorSystem(n, matrix, rhs, rows, labels, d, b)


def transform_rows(rows: list) -> list:
    """Fold row k with row n+1-k: (R_k + R_{n+1-k})/2 on top, (R_k - R_{n+1-k})/2 below."""
    n = len(rows)
    out = [list(r) for r in rows]
    for k in range(n // 2):
        a, c = rows[k], rows[n - 1 - k]
        out[k] = [(x + y) / 2 for x, y in zip(a, c)]
        out[n - 1 - k] = [(x - y) / 2 for x, y in zip(a, c)]
    return out


@dataclass
class Subsystem:
    matrix: list
    rhs: list
    column_labels: list
    dropped_nonzero: bool


def transform_and_split(sys: CommutatorSystem) -> tuple[Subsystem, Subsystem]:
    """The folded system, split into the first N+1 rows and the last N rows.

    The top keeps the (k4, k3) columns, the bottom the (k3, k2) columns;
    ``dropped_nonzero`` flags a dropped column that is not identically zero.
    """
    N = sys.N
    folded = transform_rows([row + [r] for row, r in zip(sys.matrix, sys.rhs)])
    mp = [row[:-1] for row in folded]
    rp = [row[-1] for row in folded]
    top_idx = [i for i, (kind, _) in enumerate(sys.column_labels) if kind == "k4k3"]
    bot_idx = [i for i, (kind, _) in enumerate(sys.column_labels) if kind == "k3k2"]

    def part(rows, keep, drop):
        bad = any(mp[r][c] for r in rows for c in drop)
        return Subsystem(
            [[mp[r][c] for c in keep] for r in rows],
            [rp[r] for r in rows],
            [sys.column_labels[c] for c in keep],
            bad,
        )

    top = part(range(0, N + 1), top_idx, bot_idx)
    bot = part(range(N + 1, sys.n), bot_idx, top_idx)
    return top, bot


def _dot(u, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


@dataclass
class SolveResult:
    n: int
    solution: list | None
    unique: bool
    labels: list
    certificates: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.solution is not None and self.unique and all(self.certificates.values())

    def as_dict(self) -> dict:
        return {
            f"a_{p[0]}{p[1]}" if max(p) < 10 else f"a_{p[0]},{p[1]}": str(x)
            for (_, p), x in zip(self.labels, self.solution or [])
        }


def solve_system(sys: CommutatorSystem) -> SolveResult:
    """Exact solution plus the rank and orthogonality certificates."""
    n, N = sys.n, sys.N
    x, unique = solve(sys.matrix, sys.rhs)
    top, bot = transform_and_split(sys)
    v1 = [Fraction(1)] * N + [Fraction(1, 2)]
    v2 = [Fraction((N - i) ** 2) for i in range(N + 1)]
    w = [Fraction(i + 1) for i in range(N)]
    tcols = list(zip(*top.matrix))
    bcols = list(zip(*bot.matrix))
    tail = [Fraction(1, 2), Fraction(-3, 2), Fraction(n - 2, n - 1)]
    expected_bot = ([Fraction(0)] * max(N - 3, 0) + tail)[-N:]
    certs = {
        "split_exact": not top.dropped_nonzero and not bot.dropped_nonzero,
        "top_columns_perp_v1": all(_dot(c, v1) == 0 for c in tcols),
        "top_columns_perp_v2": all(_dot(c, v2) == 0 for c in tcols),
        "top_rhs_perp_v1": _dot(top.rhs, v1) == 0,
        "top_rhs_perp_v2": _dot(top.rhs, v2) == 0,
        "bottom_columns_perp_1toN": all(_dot(c, w) == 0 for c in bcols),
        "bottom_rhs_perp_1toN": _dot(bot.rhs, w) == 0,
        "bottom_rhs_shape": bot.rhs == expected_bot,
        "top_rank": rank(top.matrix) == N - 1,
        "bottom_rank": rank(bot.matrix) == N - 1,
        "full_rank": rank(sys.matrix) == n - 3,
    }
    if x is not None:
        total = sum(x, Fraction(0))
        certs["leading_coefficient_sum"] = sys.d + sum(sys.b.values()) + total == 2
        certs["a_consistency"] = _pi_n_coefficient_check(n, sys.d, sys.b, total)
    return SolveResult(n, x, unique, sys.column_labels, certs)


def _pi_n_coefficient_check(n: int, d: Fraction, b: dict, sum_a: Fraction) -> bool:
    """a = n!/2^(n-1) sum a_J agrees with the Bernoulli closed form for a."""
    a = Fraction(factorial(n), 2 ** (n - 1)) * sum_a
    Bn = bernoulli(n - 1)
    s = sum(
        (comb(n - 1, k1) * bernoulli(k1) * bernoulli(n - 1 - k1) / (k1 * (n - 1 - k1)) for k1 in range(2, n - 2)),
        Fraction(0),
    )
    closed = (2 - Fraction(1, n - 1)) + s / (2 * Bn)
    return Fraction(2 ** (n - 1), factorial(n)) * a == closed and a == Fraction(factorial(n), 2 ** (n - 1)) * (2 - d - sum(b.values()))


def cross_validate_operator(n: int, a: list, model=None, tuples: int = 0, seed: int = 1) -> dict:
    """Compare both sides coefficientwise in the E basis, optionally as operators.

    With a model, both sides are also evaluated as maps built from S and
    pi_1 on ``tuples`` sampled words of length n.
    """
    sys = build_system(n)
    lhs = {n - 1: Fraction(2), n - 2: Fraction(-3), n - 3: Fraction(1)}
    rhs: dict = {}

    def add(target, coeffs, c):
        for j, v in coeffs.items():
            target[j] = target.get(j, 0) + c * v

    add(rhs, expand_commutator([n - 1], n - 1), sys.d)
    for k, bk in sys.b.items():
        add(rhs, expand_commutator([k, n - 1 - k], n - 1), bk)
    for (kind, pair), x in zip(sys.column_labels, a):
        add(rhs, expand_commutator(_column_exponents(kind, pair), n - 1), x)
    symbolic = _to_vector(n, lhs) == _to_vector(n, rhs)
    report = {"symbolic": symbolic, "operator_tuples": 0, "operator": True}
    if model is None or tuples <= 0:
        return report
    from .graded import elements_equal, evaluation_cache
    from .sampling import SplitMix64

    lhs_op, rhs_op = _operator_sides(n, sys, a, model)
    rng = SplitMix64(seed)
    for _ in range(tuples):
        word = model.random_tuple(rng, n)
        with evaluation_cache():
            if not elements_equal(lhs_op(*word), rhs_op(*word)):
                report["operator"] = False
        report["operator_tuples"] += 1
    return report


def _operator_sides(n: int, sys: CommutatorSystem, a: list, model):
    from .graded import LinComb
    from .nr import graded_commutator, iterated_power, nr_product
    from .structures import bold_S, rogers_structure

    S = bold_S()
    pi1 = rogers_structure(model, 1)[1]

    def E(j):
        left = pi1 if j == 0 else nr_product(iterated_power(S, j), pi1)
        r = n - 1 - j
        return left if r == 0 else nr_product(left, iterated_power(S, r))

    def nest(exps):
        op = pi1
        for e in reversed(exps):
            op = graded_commutator(iterated_power(S, e), op)
        return op

    lhs = LinComb([(2, E(n - 1)), (-3, E(n - 2)), (1, E(n - 3))])
    terms = [(sys.d, nest([n - 1]))]
    terms += [(bk, nest([k, n - 1 - k])) for k, bk in sys.b.items()]
    terms += [(x, nest(_column_exponents(kind, pair))) for (kind, pair), x in zip(sys.column_labels, a)]
    return lhs, LinComb(terms)
