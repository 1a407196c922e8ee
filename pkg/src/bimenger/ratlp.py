"""Exact rational linear programming and matrix regularity checks.

Everything is computed over arbitrary-precision rationals; there is no
floating point anywhere.  ``Rational`` is the standard-library Fraction,
which already keeps values in lowest terms with a positive denominator.
The solver is a two-phase bounded-variable simplex with Bland's rule:
slow, deterministic, and guaranteed to terminate on a basic (vertex)
optimum, which is what the integrality arguments need.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bigraph import BidirectedGraph, EdgeId, VertexId

Rational = Fraction

HALF = Fraction(1, 2)


class DimensionMismatch(Exception):
    """Objective, constraint matrix and bounds disagree on sizes."""


def is_integral(values: Iterable) -> bool:
    """True iff every entry is an integer (denominator 1)."""
    for v in values:
        if isinstance(v, int):
            continue
        if Fraction(v).denominator != 1:
            return False
    return True


def ratio_str(v) -> str:
    """Exact "p/q" form; integers print without a denominator."""
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


@dataclasses.dataclass(frozen=True)
class LpProblem:
    """max c.x  subject to  A_eq x = b_eq  and  lo <= x <= up (up may be None)."""

    c: tuple
    a_eq: tuple
    b_eq: tuple
    bounds: tuple  # per column: (lo, up or None)
    names: tuple

    def __post_init__(self):
        n = len(self.c)
        if len(self.bounds) != n or len(self.names) != n:
            raise DimensionMismatch("bounds/names do not match objective length")
        if len(self.a_eq) != len(self.b_eq):
            raise DimensionMismatch("constraint matrix and rhs disagree")
        for row in self.a_eq:
            if len(row) != n:
                raise DimensionMismatch("constraint row has wrong length")

    @property
    def ncols(self) -> int:
        return len(self.c)

    def column(self, name: str) -> int:
        return self.names.index(name)


@dataclasses.dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    values: tuple
    objective_value: Optional[Fraction]
    basis: tuple

    def value_of(self, problem: LpProblem, name: str):
        return self.values[problem.column(name)]


def _div(a, b):
    """Exact a/b, returned as int when it divides evenly."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    f = Fraction(a) / Fraction(b)
    return f.numerator if f.denominator == 1 else f


def _scaled_int_row(row, rhs):
    """Clear denominators of one equality row (same solution set)."""
    den = 1
    for v in itertools.chain(row, (rhs,)):
        if not isinstance(v, int):
            f = Fraction(v)
            den = den * f.denominator // _gcd(den, f.denominator)
    if den == 1:
        return [int(v) if isinstance(v, int) else v.numerator for v in row], int(rhs) if isinstance(rhs, int) else rhs.numerator
    out = []
    for v in row:
        f = Fraction(v) * den
        out.append(f.numerator)
    fr = Fraction(rhs) * den
    return out, fr.numerator


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


_MAX_PIVOTS = 200_000


def simplex_max(p: LpProblem) -> LpSolution:
    """Exact bounded-variable simplex, Bland's rule, basic optimum.

    Lower bounds must be finite; upper bounds may be None.  The returned
    solution satisfies every constraint exactly.
    """
    n, m = p.ncols, len(p.a_eq)
    for lo, up in p.bounds:
        if lo is None:
            raise DimensionMismatch("lower bounds must be finite")
        if up is not None and Fraction(up) < Fraction(lo):
            return LpSolution("infeasible", (), None, ())

    # shift variables to lo = 0: work with x' = x - lo
    lo_shift = [Fraction(lo) for lo, _ in p.bounds]
    span = []  # upper bound of shifted variable, None = +inf
    for lo, up in p.bounds:
        span.append(None if up is None else Fraction(up) - Fraction(lo))

    rows = []
    rhs = []
    for i in range(m):
        row, b = _scaled_int_row(list(p.a_eq[i]), p.b_eq[i])
        shift = sum(row[j] * lo_shift[j] for j in range(n) if row[j] and lo_shift[j])
        b = b - shift
        if isinstance(b, Fraction) and b.denominator == 1:
            b = b.numerator
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)

    # artificial column per row; fixed at zero when the row starts balanced
    ncols = n + m
    T = []
    for i in range(m):
        T.append(rows[i] + [0] * m)
        T[i][n + i] = 1
    xB = list(rhs)
    basis = [n + i for i in range(m)]
    in_basis = [False] * ncols
    for j in basis:
        in_basis[j] = True
    # status of nonbasic columns: True = at upper bound
    at_upper = [False] * ncols
    col_span = span + [Fraction(0) if rhs[i] == 0 else None for i in range(m)]

    def current_value(j):
        if in_basis[j]:
            return xB[basis.index(j)]
        if at_upper[j]:
            return col_span[j]
        return 0

    def run_phase(d, obj) -> tuple:
        """Pivot until optimal or unbounded; returns (status, obj)."""
        for _ in range(_MAX_PIVOTS):
            enter = -1
            direction = 0
            for j in range(ncols):
                if in_basis[j]:
                    continue
                sp = col_span[j]
                if sp is not None and sp == 0:
                    continue  # fixed column
                if not at_upper[j] and d[j] > 0:
                    enter, direction = j, 1
                    break
                if at_upper[j] and d[j] < 0:
                    enter, direction = j, -1
                    break
            if enter < 0:
                return "optimal", obj

            col = [T[i][enter] for i in range(m)]
            best_t = None  # tightest row ratio
            leave_row = -1
            leave_to_upper = False
            for i in range(m):
                ci = col[i]
                if not ci:
                    continue
                moves_down = (ci > 0) == (direction == 1)
                if moves_down:
                    ti = _div(xB[i], ci if direction == 1 else -ci)
                    hits_upper = False
                else:
                    sp = col_span[basis[i]]
                    if sp is None:
                        continue
                    ti = _div(sp - xB[i], -ci if direction == 1 else ci)
                    hits_upper = True
                if best_t is None or ti < best_t:
                    best_t, leave_row, leave_to_upper = ti, i, hits_upper
                elif ti == best_t and basis[i] < basis[leave_row]:
                    leave_row, leave_to_upper = i, hits_upper
            flip_t = col_span[enter]
            if best_t is None and flip_t is None:
                return "unbounded", obj
            take_flip = flip_t is not None and (
                best_t is None or flip_t < best_t
                or (flip_t == best_t and enter < basis[leave_row])
            )
            theta = flip_t if take_flip else best_t

            obj = obj + d[enter] * theta * direction
            if take_flip:
                # bound flip: no basis change
                for i in range(m):
                    if col[i]:
                        xB[i] -= direction * col[i] * theta
                at_upper[enter] = not at_upper[enter]
                continue

            # pivot: entering takes value, leaving goes to a bound
            for i in range(m):
                if i != leave_row and col[i]:
                    xB[i] -= direction * col[i] * theta
            enter_val = (col_span[enter] - theta) if at_upper[enter] else theta
            leaving = basis[leave_row]
            in_basis[leaving] = False
            at_upper[leaving] = leave_to_upper
            in_basis[enter] = True
            at_upper[enter] = False
            basis[leave_row] = enter
            xB[leave_row] = enter_val

            piv = T[leave_row][enter]
            prow = T[leave_row]
            if piv != 1:
                for jj in range(ncols):
                    if prow[jj]:
                        prow[jj] = _div(prow[jj], piv)
            nz = [jj for jj in range(ncols) if prow[jj]]
            for i in range(m):
                if i == leave_row:
                    continue
                k = T[i][enter]
                if k:
                    ri = T[i]
                    for jj in nz:
                        ri[jj] -= k * prow[jj]
            k = d[enter]
            if k:
                for jj in nz:
                    d[jj] -= k * prow[jj]
        raise RuntimeError("pivot limit exceeded; Bland's rule should terminate")

    # phase 1: drive positive artificials to zero
    if any(rhs[i] > 0 for i in range(m)):
        c1 = [0] * ncols
        for i in range(m):
            if rhs[i] > 0:
                c1[n + i] = -1
        d1 = c1[:]
        obj1 = 0
        for i in range(m):
            if rhs[i] > 0:
                for jj in range(ncols):
                    if T[i][jj]:
                        d1[jj] += T[i][jj]
                obj1 -= xB[i]
        status, obj1 = run_phase(d1, obj1)
        assert status == "optimal"
        if any(current_value(n + i) != 0 for i in range(m)):
            return LpSolution("infeasible", (), None, ())
    # artificials may stay basic at zero (rank deficiency); freeze them
    for i in range(m):
        col_span[n + i] = Fraction(0)

    # phase 2
    c2 = [Fraction(v) if not isinstance(v, int) else v for v in p.c] + [0] * m
    d2 = list(c2)
    obj2 = 0
    for i in range(m):
        cb = c2[basis[i]]
        if cb:
            for jj in range(ncols):
                if T[i][jj]:
                    d2[jj] -= cb * T[i][jj]
            obj2 += cb * xB[i]
    for j in range(ncols):
        if not in_basis[j] and at_upper[j] and c2[j]:
            obj2 += c2[j] * col_span[j]
    status, obj2 = run_phase(d2, obj2)
    if status == "unbounded":
        return LpSolution("unbounded", (), None, ())

    values = []
    for j in range(n):
        v = Fraction(current_value(j)) + lo_shift[j]
        values.append(v.numerator if v.denominator == 1 else v)
    objective = sum(Fraction(p.c[j]) * values[j] for j in range(n))
    if objective.denominator == 1:
        objective = Fraction(objective.numerator)
    final_basis = tuple(sorted(j for j in basis if j < n))
    return LpSolution("optimal", tuple(values), objective, final_basis)


_MAX_BNB_NODES = 50_000


def solve_integral_max(
    p: LpProblem,
    integral_cols: Optional[Sequence[int]] = None,
    unbounded_cap=None,
) -> LpSolution:
    """Exact maximum over the integral points of an LpProblem.

    Branch and bound over the exact simplex: solve the relaxation, branch
    on the smallest-index fractional column among ``integral_cols`` (all
    columns by default), depth first, pruning nodes whose rounded-down
    bound cannot beat the incumbent.  The objective must be integral on
    ``integral_cols`` for the rounding to be valid.

    ``unbounded_cap`` replaces missing upper bounds on the branching
    columns (required for termination on unbounded problems); the cap
    must not be active at the optimum and a RuntimeError flags it if it
    is.
    """
    cols = list(range(p.ncols)) if integral_cols is None else sorted(integral_cols)
    colset = set(cols)
    for j in range(p.ncols):
        if p.c[j] and j not in colset:
            raise DimensionMismatch("objective touches a non-integral column")

    root = list(p.bounds)
    capped = []
    if unbounded_cap is not None:
        for j in cols:
            lo, up = root[j]
            if up is None:
                root[j] = (lo, unbounded_cap)
                capped.append(j)

    best: Optional[LpSolution] = None
    stack = [tuple(root)]
    nodes = 0
    while stack:
        bounds = stack.pop()
        nodes += 1
        if nodes > _MAX_BNB_NODES:
            raise RuntimeError("branch-and-bound node limit exceeded")
        sol = simplex_max(dataclasses.replace(p, bounds=bounds))
        if sol.status == "unbounded":
            return LpSolution("unbounded", (), None, ())
        if sol.status != "optimal":
            continue
        bound = sol.objective_value
        if bound.denominator != 1:
            bound = Fraction(bound.numerator // bound.denominator)
        if best is not None and bound <= best.objective_value:
            continue
        frac = next(
            (j for j in cols if Fraction(sol.values[j]).denominator != 1), None
        )
        if frac is None:
            best = sol
            continue
        v = Fraction(sol.values[frac])
        lo, up = bounds[frac]
        floor_v = v.numerator // v.denominator
        down = list(bounds)
        down[frac] = (lo, floor_v)
        upb = list(bounds)
        upb[frac] = (floor_v + 1, up)
        stack.append(tuple(upb))
        stack.append(tuple(down))

    if best is None:
        return LpSolution("infeasible", (), None, ())
    for j in capped:
        if Fraction(best.values[j]) >= Fraction(root[j][1]):
            raise RuntimeError(
                "integral optimum pinned at the artificial cap; raise unbounded_cap"
            )
    return best


# ---------------------------------------------------------------------------
# the two programs of the pipeline


def build_primal(g_prime: BidirectedGraph, f: EdgeId) -> LpProblem:
    """max x_f  s.t.  (M x + a x_f)/2 = 0,  0 <= x <= 1,  0 <= x_f <= |E|.

    M is the incidence matrix of the split graph without f, a the column
    of f.  The explicit cap on x_f keeps the feasible region a polytope;
    the balance row at s caps x_f at deg(s) anyway, so it is slack-safe.
    """
    others = [e for e in g_prime.edges if e.eid != f]
    names = tuple(f"x:{e.eid}" for e in others) + ("xf",)
    col_of = {e.eid: j for j, e in enumerate(others)}
    fe = g_prime.edge(f)
    nv = g_prime.n
    rows = [[0] * len(names) for _ in range(nv)]
    vpos = {v: i for i, v in enumerate(g_prime.vertices)}
    for e in others:
        rows[vpos[e.u]][col_of[e.eid]] += HALF * e.sign_u.unit
        rows[vpos[e.v]][col_of[e.eid]] += HALF * e.sign_v.unit
    xf_col = len(names) - 1
    rows[vpos[fe.u]][xf_col] += HALF * fe.sign_u.unit
    rows[vpos[fe.v]][xf_col] += HALF * fe.sign_v.unit
    bounds = tuple((0, 1) for _ in others) + ((0, g_prime.m),)
    return LpProblem(
        c=tuple(0 for _ in others) + (1,),
        a_eq=tuple(tuple(r) for r in rows),
        b_eq=tuple(0 for _ in range(nv)),
        bounds=bounds,
        names=names,
    )


def build_dual(g_prime: BidirectedGraph, f: EdgeId) -> LpProblem:
    """min 1.y  s.t.  (M^T z)/2 + y >= 0,  (a^T z)/2 >= 1,  y >= 0.

    Implemented as maximization of -1.y with the free z split as
    z = z+ - z- and surplus columns turning the inequalities into
    equalities, so a basic optimum is a vertex of the dual polyhedron.
    """
    others = [e for e in g_prime.edges if e.eid != f]
    fe = g_prime.edge(f)
    zp = [f"zp:{v}" for v in g_prime.vertices]
    zn = [f"zn:{v}" for v in g_prime.vertices]
    ys = [f"y:{e.eid}" for e in others]
    sl = [f"sl:{e.eid}" for e in others] + ["sl:f"]
    names = tuple(zp + zn + ys + sl)
    col = {nm: j for j, nm in enumerate(names)}
    nv = g_prime.n
    ncols = len(names)

    rows = []
    b = []
    for i, e in enumerate(others):
        row = [0] * ncols
        row[col[f"zp:{e.u}"]] += HALF * e.sign_u.unit
        row[col[f"zn:{e.u}"]] -= HALF * e.sign_u.unit
        row[col[f"zp:{e.v}"]] += HALF * e.sign_v.unit
        row[col[f"zn:{e.v}"]] -= HALF * e.sign_v.unit
        row[col[f"y:{e.eid}"]] = 1
        row[col[f"sl:{e.eid}"]] = -1
        rows.append(row)
        b.append(0)
    row = [0] * ncols
    row[col[f"zp:{fe.u}"]] += HALF * fe.sign_u.unit
    row[col[f"zn:{fe.u}"]] -= HALF * fe.sign_u.unit
    row[col[f"zp:{fe.v}"]] += HALF * fe.sign_v.unit
    row[col[f"zn:{fe.v}"]] -= HALF * fe.sign_v.unit
    row[col["sl:f"]] = -1
    rows.append(row)
    b.append(1)

    c = [0] * ncols
    for nm in ys:
        c[col[nm]] = -1
    bounds = tuple((0, None) for _ in range(ncols))
    return LpProblem(
        c=tuple(c),
        a_eq=tuple(tuple(r) for r in rows),
        b_eq=tuple(b),
        bounds=bounds,
        names=names,
    )


def primal_vectors(problem: LpProblem, sol: LpSolution) -> tuple[dict, object]:
    """(x per edge id, x_f) from a solved primal."""
    x = {}
    xf = None
    for name, v in zip(problem.names, sol.values):
        if name == "xf":
            xf = v
        elif name.startswith("x:"):
            x[int(name[2:])] = v
    return x, xf


def dual_vectors(problem: LpProblem, sol: LpSolution, g_prime: BidirectedGraph) -> tuple[dict, dict]:
    """(z per vertex, y per edge id) from a solved dual; z = z+ - z-."""
    vals = dict(zip(problem.names, sol.values))
    z = {v: vals[f"zp:{v}"] - vals[f"zn:{v}"] for v in g_prime.vertices}
    y = {}
    for name, v in vals.items():
        if name.startswith("y:"):
            y[int(name[2:])] = v
    return z, y


# ---------------------------------------------------------------------------
# regularity checks


def _invert_exact(R: Sequence[Sequence]) -> Optional[list[list[Fraction]]]:
    """Exact inverse by Gauss-Jordan, or None when singular."""
    o = len(R)
    aug = [[Fraction(R[i][j]) for j in range(o)] + [Fraction(int(i == j)) for j in range(o)]
           for i in range(o)]
    for cpos in range(o):
        prow = next((r for r in range(cpos, o) if aug[r][cpos] != 0), None)
        if prow is None:
            return None
        aug[cpos], aug[prow] = aug[prow], aug[cpos]
        piv = aug[cpos][cpos]
        if piv != 1:
            aug[cpos] = [v / piv for v in aug[cpos]]
        for r in range(o):
            if r != cpos and aug[r][cpos]:
                k = aug[r][cpos]
                aug[r] = [a - k * b for a, b in zip(aug[r], aug[cpos])]
    return [row[o:] for row in aug]


def check_k_regular(A: Sequence[Sequence], k: int, max_order: int = 5) -> bool:
    """True iff k R^{-1} is integral for every non-singular square
    submatrix R of order at most max_order (exhaustive scan)."""
    if k <= 0:
        raise ValueError("k must be a positive integer")
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    for order in range(1, min(max_order, nrows, ncols) + 1):
        for ri in itertools.combinations(range(nrows), order):
            sub_rows = [A[i] for i in ri]
            for ci in itertools.combinations(range(ncols), order):
                R = [[row[j] for j in ci] for row in sub_rows]
                inv = _invert_exact(R)
                if inv is None:
                    continue
                for row in inv:
                    for v in row:
                        if (k * v).denominator != 1:
                            return False
    return True
