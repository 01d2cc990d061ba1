"""Symbolic route for small groups: basic invariants, flat coordinates,
exact restriction of the covariant metric to strata, and the minor-formula
alternate path with its structural checks.

All polynomials live in the simple-root coordinates z_i = (alpha_i, x), so
x = sum_i z_i w^i with w^i the fundamental coweights.  In these coordinates
a root beta = sum_i c_i alpha_i acts as the integer linear form sum c_i z_i,
the mirror of alpha_i is {z_i = 0}, restricting to a stratum D_I is just
setting z_i = 0 for i in I, and the directional derivatives are

    d/d(alpha_j) = sum_k (alpha_k, alpha_j) d/dz_k,
    d/d(w^i)     = d/dz_i.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import isqrt

from .algebra import (MultiPoly, FactoredDeterminant, poly_det, divide_exact,
                      try_divide, factor_linear, IncompleteFactorization)
from .exactla import matinv, matmul, det_fraction, nullspace, rank as mat_rank
from .roots import RootSystem, build_root_system, span_subsystem
from .strata import Stratum, make_stratum, restricted_arrangement

SUPPORTED = {("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3),
             ("D", 3), ("D", 4), ("F", 4)}


class DegenerateBasis(ValueError):
    """The candidate invariants fail the Jacobian factorization check.

    Perturbing the offending invariant by products of lower-degree ones
    restores algebraic independence."""


class SolverFailure(RuntimeError):
    """An exact linear system in the flat-coordinate pipeline was
    inconsistent or had the wrong solution-space dimension."""


# ---------------------------------------------------------------------------
# frames and derivatives

def _ambient_coordinate_forms(R: RootSystem):
    """The ambient coordinate functions x_a as linear forms in z."""
    n = R.rank
    return [MultiPoly.linear([Fraction(R.coweights[i][a]) for i in range(n)])
            for a in range(R.ambient_dim)]


def _root_form(R: RootSystem, beta):
    return MultiPoly.linear(list(R.expansion[beta]))


def _d_simple(R: RootSystem, f: MultiPoly, j: int):
    """Directional derivative along the simple root alpha_{j+1} (0-based j)."""
    out = MultiPoly.zero(f.nvars, f.weights)
    for k in range(R.rank):
        c = R._gram[k][j]
        if c:
            out = out + f.diff(k) * c
    return out


def _d_vector(R: RootSystem, f: MultiPoly, v):
    """Directional derivative along an ambient vector v."""
    out = MultiPoly.zero(f.nvars, f.weights)
    for k in range(R.rank):
        c = sum(Fraction(a) * Fraction(b) for a, b in zip(R.simple[k], v))
        if c:
            out = out + f.diff(k) * c
    return out


def _positive_product(R: RootSystem):
    prod = MultiPoly.const(R.rank, 1)
    for beta in R.positive_roots:
        prod = prod * _root_form(R, beta)
    return prod


def _antidiag(n):
    return [[Fraction(int(i + j == n - 1)) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# invariant bases

class InvariantBasis:
    """n homogeneous W-invariants p^1..p^n (z-polynomials, degrees
    ascending) whose Jacobian factors into the mirror forms.

    `pairing` is the constant matrix eta(dp^a, dp^b): the anti-diagonal
    identity by convention for a non-flat basis (the generalized constant
    metric sum_i dp^i dp^{n+1-i}), the verified flat pairing for solver
    output.  `normalized` records whether that pairing is exactly the
    anti-diagonal identity."""

    def __init__(self, R: RootSystem, polys, flat=False, pairing=None,
                 normalized=None):
        self.R = R
        self.polys = list(polys)
        self.degrees = tuple(p.degree() for p in self.polys)
        if self.degrees != tuple(R.degrees):
            raise DegenerateBasis(
                f"degrees {self.degrees} != invariant degrees {R.degrees}")
        for p in self.polys:
            if not p.is_homogeneous():
                raise DegenerateBasis("invariants must be homogeneous")
        self.flat = flat
        self.pairing = pairing if pairing is not None else _antidiag(R.rank)
        self.pairing_inv = matinv(self.pairing)
        if normalized is None:
            normalized = self.pairing == _antidiag(R.rank)
        self.normalized = normalized
        self.jacobian = self._jacobian_matrix()
        self.jacobian_det = poly_det(self.jacobian)
        self.jacobian_scale = self._check_jacobian()

    def _jacobian_matrix(self):
        R = self.R
        return [[_d_simple(R, p, j) for j in range(R.rank)]
                for p in self.polys]

    def _check_jacobian(self):
        """det(d p^i / d alpha_j) must equal a nonzero scalar times the
        product of all positive-root forms; returns that scalar."""
        prod = _positive_product(self.R)
        J = self.jacobian_det
        if J.is_zero():
            raise DegenerateBasis(
                "Jacobian vanishes: invariants are algebraically dependent; "
                "perturb by products of lower invariants")
        le, lc = prod.leading()
        ce = J.terms.get(le)
        if ce is None:
            raise DegenerateBasis("Jacobian does not match the mirror product")
        scale = ce / lc
        if J != prod * scale:
            raise DegenerateBasis(
                "Jacobian is not proportional to the mirror product; "
                "perturb by products of lower invariants")
        return scale

    def minor_dets(self):
        """J_k for k = 1..n: eliminate the k-th column and n-th row of the
        directional Jacobi matrix."""
        n = self.R.rank
        out = []
        for k in range(n):
            B = [[self.jacobian[i][j] for j in range(n) if j != k]
                 for i in range(n - 1)]
            out.append(poly_det(B) if n > 1 else MultiPoly.const(1, 1))
        return out

    def __repr__(self):
        tag = "flat" if self.flat else "basic"
        return f"<InvariantBasis {self.R.label}{self.R.rank} {tag} deg={self.degrees}>"


def basic_invariants(R: RootSystem) -> InvariantBasis:
    """Power-sum style invariants (plus the product invariant for D and
    positive-root power sums for F_4)."""
    key = (R.label, R.rank)
    if key not in SUPPORTED:
        raise ValueError(f"unsupported group {R.label}{R.rank}")
    if R.label in ("A", "B"):
        xs = _ambient_coordinate_forms(R)
        polys = [sum((x ** d for x in xs), MultiPoly.zero(R.rank))
                 for d in R.degrees]
    elif R.label == "D":
        xs = _ambient_coordinate_forms(R)
        pf = MultiPoly.const(R.rank, 1)
        for x in xs:
            pf = pf * x
        even = [sum((x ** d for x in xs), MultiPoly.zero(R.rank))
                for d in range(2, 2 * R.rank - 1, 2)]
        polys = sorted(even + [pf], key=lambda p: p.degree())
    else:  # F_4
        forms = [_root_form(R, b) for b in R.positive_roots]
        polys = [sum((f ** d for f in forms), MultiPoly.zero(R.rank))
                 for d in R.degrees]
    return InvariantBasis(R, polys, flat=False)


def quartic_family_d3(a, b) -> InvariantBasis:
    """The two-parameter D_3 basis p1 = (1/8) sum x^2, p2 = x1 x2 x3,
    p3 = a sum x^4 + b p1^2 (a != 0)."""
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        raise DegenerateBasis("a = 0 makes p3 a multiple of p1^2")
    R = build_root_system("D", 3)
    xs = _ambient_coordinate_forms(R)
    p1 = sum((x ** 2 for x in xs), MultiPoly.zero(3)) * Fraction(1, 8)
    p2 = xs[0] * xs[1] * xs[2]
    p3 = sum((x ** 4 for x in xs), MultiPoly.zero(3)) * a + p1 * p1 * b
    return InvariantBasis(R, [p1, p2, p3], flat=False)


# ---------------------------------------------------------------------------
# expressing invariants in a basis (exact evaluation + re-expansion)

def _weighted_monomials(weights, total):
    """All exponent tuples e with sum e_i * weights_i == total."""
    n = len(weights)
    out = []

    def rec(i, rem, acc):
        if i == n:
            if rem == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        top = rem // w
        for e in range(top + 1):
            rec(i + 1, rem - e * w, acc + [e])
    rec(0, total, [])
    return out


def _compose_monomial(polys, expt, cache):
    key = expt
    if key in cache:
        return cache[key]
    n = polys[0].nvars
    out = MultiPoly.const(n, 1)
    for p, e in zip(polys, expt):
        if e:
            out = out * p ** e
    cache[key] = out
    return out


def express_in_invariants(q: MultiPoly, basis: InvariantBasis,
                          rng=None) -> MultiPoly:
    """Write the invariant z-polynomial q as a polynomial in the basis
    invariants, exactly.  Solves by evaluation at random rational points
    and verifies by exact re-expansion."""
    rng = rng or random.Random(20240915)
    weights = basis.degrees
    n = basis.R.rank
    if q.is_zero():
        return MultiPoly.zero(n, weights)
    deg = q.degree()
    monos = _weighted_monomials(weights, deg)
    rows, rhs = [], []
    for _ in range(len(monos) + 6):
        pt = [Fraction(rng.randint(-40, 40), rng.randint(1, 5))
              for _ in range(n)]
        vals = [p.evaluate(pt) for p in basis.polys]
        rows.append([_eval_monomial(vals, e) for e in monos])
        rhs.append(q.evaluate(pt))
    if mat_rank(rows) < len(monos):
        raise SolverFailure("evaluation points failed to separate monomials")
    from .exactla import solve
    coeffs = solve(rows, rhs)
    result = MultiPoly(n, {e: c for e, c in zip(monos, coeffs) if c}, weights)
    # exact re-expansion check
    cache = getattr(basis, "_mono_cache", None)
    if cache is None:
        cache = basis._mono_cache = {}
    recon = MultiPoly.zero(n)
    for e, c in result.terms.items():
        recon = recon + _compose_monomial(basis.polys, e, cache) * c
    if recon != q:
        raise SolverFailure("re-expansion mismatch in invariant expression")
    return result


def _eval_monomial(vals, expt):
    out = Fraction(1)
    for v, e in zip(vals, expt):
        if e:
            out *= v ** e
    return out


# ---------------------------------------------------------------------------
# flat coordinates

def convolution_matrix(basis: InvariantBasis):
    """g^{ab}(z) = (grad p^a, grad p^b) as z-polynomials."""
    R = basis.R
    n = R.rank
    grads = [[p.diff(k) for k in range(n)] for p in basis.polys]
    mixed = [[sum((grads[b][l] * R._gram[k][l] for l in range(n)),
                  MultiPoly.zero(n)) for k in range(n)]
             for b in range(n)]
    out = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            entry = sum((grads[a][k] * mixed[b][k] for k in range(n)),
                        MultiPoly.zero(n))
            out[a][b] = out[b][a] = entry
    return out


def _sqrt_fraction(c: Fraction):
    """Exact rational square root, or None."""
    if c < 0:
        return None
    pn, pd = isqrt(c.numerator), isqrt(c.denominator)
    if pn * pn == c.numerator and pd * pd == c.denominator:
        return Fraction(pn, pd)
    return None


def flat_coordinates(R: RootSystem) -> InvariantBasis:
    """Solve for a flat basis: convolution in invariants, Christoffel data,
    degree-by-degree linear flatness equations, pairing normalization."""
    base = basic_invariants(R)
    n = R.rank
    degs = list(base.degrees)
    h = degs[-1]
    weights = tuple(degs)

    # contravariant invariant form in the p-frame, as p-polynomials
    gz = convolution_matrix(base)
    g_p = [[express_in_invariants(gz[a][b], base) if b >= a else None
            for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(a):
            g_p[a][b] = g_p[b][a]

    # eta^{ab}(p) = d g^{ab} / d p^n ; det must be a nonzero constant
    eta_p = [[g_p[a][b].diff(n - 1) for b in range(n)] for a in range(n)]
    det_eta = poly_det(eta_p)
    if not det_eta.is_constant() or det_eta.is_zero():
        raise SolverFailure("det of d g / d p^n is not a nonzero constant")
    c0 = det_eta.constant_value()

    # polynomial covariant inverse via cofactors
    eta_cov = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            minor = [[eta_p[i][j] for j in range(n) if j != b]
                     for i in range(n) if i != a]
            cof = poly_det(minor) if n > 1 else MultiPoly.const(n, 1, weights)
            eta_cov[b][a] = cof * (Fraction((-1) ** (a + b)) / c0)

    # Christoffel symbols of eta in the p-frame (polynomial)
    half = Fraction(1, 2)
    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                s = MultiPoly.zero(n, weights)
                for l in range(n):
                    s = s + eta_p[k][l] * (eta_cov[l][j].diff(i)
                                           + eta_cov[i][l].diff(j)
                                           - eta_cov[i][j].diff(l))
                gamma[k][i][j] = gamma[k][j][i] = s * half

    # flatness equations per degree block
    by_degree = {}
    for d in sorted(set(degs)):
        mult = degs.count(d)
        monos = _weighted_monomials(weights, d)
        basis_polys = [MultiPoly(n, {e: Fraction(1)}, weights) for e in monos]
        # linear map: ansatz coeffs -> PDE residual coefficients
        cols = []
        for bp in basis_polys:
            residual_terms = {}
            for i in range(n):
                for j in range(i, n):
                    resid = bp.diff(i).diff(j)
                    for k in range(n):
                        resid = resid - gamma[k][i][j] * bp.diff(k)
                    for e, c in resid.terms.items():
                        residual_terms[(i, j, e)] = \
                            residual_terms.get((i, j, e), Fraction(0)) + c
            cols.append(residual_terms)
        keys = sorted({k for col in cols for k in col},
                      key=lambda t: (t[0], t[1], t[2]))
        A = [[col.get(key, Fraction(0)) for col in cols] for key in keys]
        sols = nullspace(A) if A else \
            [[Fraction(int(i == j)) for j in range(len(cols))]
             for i in range(len(cols))]
        if len(sols) != mult:
            raise SolverFailure(
                f"degree {d}: flatness solution space has dimension "
                f"{len(sols)}, expected {mult}")
        block = []
        for v in sols:
            t = MultiPoly(n, {e: c for e, c in zip(monos, v) if c}, weights)
            block.append(t)
        by_degree[d] = block

    ts = []
    used = {d: 0 for d in by_degree}
    for d in degs:
        ts.append(by_degree[d][used[d]])
        used[d] += 1

    # self-consistent pairing: eta(dt^a, dt^b) = d g^{ab}(t) / d t^n, read
    # off in the frame of the flat basis itself.  By degree, p^n appears
    # only in t^n and there linearly with constant coefficient gamma, so
    # d/dt^n = (1/gamma) d/dp^n and the pairing is the p-frame pairing
    # contracted with the flat differentials, divided by gamma.
    e_top = tuple(int(i == n - 1) for i in range(n))
    gamma_top = ts[-1].terms.get(e_top, Fraction(0))
    if not gamma_top:
        raise SolverFailure(
            "top flat coordinate does not involve the top invariant")
    dts = [[t.diff(c) for c in range(n)] for t in ts]
    P0 = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            s = MultiPoly.zero(n, weights)
            for c in range(n):
                for d in range(n):
                    s = s + dts[a][c] * eta_p[c][d] * dts[b][d]
            if not s.is_constant():
                raise SolverFailure("flat pairing is not constant")
            P0[a][b] = P0[b][a] = Fraction(0) if s.is_zero() \
                else s.constant_value() / gamma_top
    tz = [t.substitute(base.polys) for t in ts]

    # normalize without rescaling the top flat coordinate, so the metric
    # (defined through d/dt^n) stays fixed under the transformation
    T, lam, normalized = _pairing_transform(P0, degs, h)
    ts = _apply_transform(T, ts)
    tz = _apply_transform(T, tz)
    pairing = [[x / lam for x in row]
               for row in matmul(matmul(T, P0), _transpose(T))]
    if normalized and pairing != _antidiag(n):
        raise SolverFailure("pairing normalization did not reach the "
                            "anti-diagonal identity")

    out = InvariantBasis(R, tz, flat=True, pairing=pairing,
                         normalized=normalized)
    out.polys_in_invariants = ts
    return out


def _transpose(M):
    return [list(row) for row in zip(*M)]


def _apply_transform(T, ts):
    n = len(ts)
    zero = MultiPoly.zero(ts[0].nvars, ts[0].weights)
    return [sum((ts[b] * T[a][b] for b in range(n) if T[a][b]), zero)
            for a in range(n)]


def _self_pairing(basis: InvariantBasis):
    """The constant matrix d g^{ab}(basis) / d (top invariant)."""
    n = basis.R.rank
    conv = convolution_matrix(basis)
    P = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            gt = express_in_invariants(conv[a][b], basis)
            entry = gt.diff(n - 1)
            if not entry.is_constant():
                raise SolverFailure("flat pairing is not constant")
            P[a][b] = P[b][a] = entry.constant_value() if not entry.is_zero() \
                else Fraction(0)
    return P


def _pairing_transform(C, degs, h):
    """A block transformation T (new = T old) taking the constant pairing C
    to the anti-diagonal identity where that is possible over the
    rationals.  Since the metric is defined through the top flat
    coordinate, rescaling that coordinate by lam rescales every pairing
    entry by 1/lam on top of the usual congruence; this extra freedom
    absorbs the square class of a one-dimensional self-dual block."""
    n = len(degs)
    top = n - 1
    blocks = {}
    for i, d in enumerate(degs):
        blocks.setdefault(d, []).append(i)
    lam = Fraction(1)
    if n == 1:
        lam = 1 / C[0][0]
    else:
        for d, idx in sorted(blocks.items()):
            if h + 2 - d == d and len(idx) == 1 and idx[0] != top \
                    and _sqrt_fraction(C[idx[0]][idx[0]]) is None:
                lam = C[idx[0]][idx[0]]
                break
    if lam != 1:
        T0 = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        T0[top][top] = lam
        C = [[C[i][j] * (lam if i == top else 1) * (lam if j == top else 1)
              / lam for j in range(n)] for i in range(n)]
    else:
        T0 = None
    T = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if n == 1:
        return (T0 if T0 is not None else T), lam, True
    normalized = True
    done = set()
    for d, idx in sorted(blocks.items()):
        if d in done:
            continue
        dual = h + 2 - d
        if dual not in blocks:
            raise SolverFailure("degrees do not pair up to h + 2")
        jdx = blocks[dual]
        mu = len(idx)
        done.add(d)
        done.add(dual)
        if d != dual:
            # transform whichever block avoids the top degree h
            fixed, moved = (jdx, idx) if dual == h else (idx, jdx)
            M = [[C[i][j] for j in moved] for i in fixed]
            # want C(fixed[i], new_moved[j]) = delta_{i + j, mu - 1}
            X = matmul(matinv(M), _antidiag(mu))
            for col in range(mu):
                for row in range(mu):
                    T[moved[col]][moved[row]] = X[row][col]
        else:
            S = [[C[i][j] for j in idx] for i in idx]
            if mu == 1:
                r = _sqrt_fraction(S[0][0])
                if r is None:
                    normalized = False
                else:
                    T[idx[0]][idx[0]] = 1 / r
            elif mu == 2:
                uv = _hyperbolic_basis(S)
                if uv is None:
                    normalized = False
                else:
                    u, v = uv
                    i0, i1 = idx
                    T[i0][i0], T[i0][i1] = u[0], u[1]
                    T[i1][i0], T[i1][i1] = v[0], v[1]
            else:
                normalized = False
    if T0 is not None:
        T = matmul(T, T0)
    return T, lam, normalized


def _hyperbolic_basis(S):
    """Rational basis (u, v) with S(u,u) = S(v,v) = 0, S(u,v) = 1, if one
    exists (iff -det S is a rational square)."""
    disc = S[0][1] ** 2 - S[0][0] * S[1][1]
    r = _sqrt_fraction(disc)
    if r is None:
        return None
    if S[0][0] != 0:
        u = [(-S[0][1] + r) / S[0][0], Fraction(1)]
    else:
        u = [Fraction(1), Fraction(0)]
    su = [S[0][0] * u[0] + S[0][1] * u[1],
          S[1][0] * u[0] + S[1][1] * u[1]]
    if su[0] != 0:
        v = [Fraction(1) / su[0], Fraction(0)]
    elif su[1] != 0:
        v = [Fraction(0), Fraction(1) / su[1]]
    else:
        return None
    svv = (S[0][0] * v[0] * v[0] + 2 * S[0][1] * v[0] * v[1]
           + S[1][1] * v[1] * v[1])
    v = [v[0] - svv / 2 * u[0], v[1] - svv / 2 * u[1]]
    return u, v


# ---------------------------------------------------------------------------
# covariant metric and restriction

def covariant_metric(basis: InvariantBasis):
    """The covariant metric sum (P^-1)_{ab} dp^a dp^b in the z-frame."""
    n = basis.R.rank
    grads = [[p.diff(k) for k in range(n)] for p in basis.polys]
    Pinv = basis.pairing_inv
    mixed = [[sum((grads[b][l] * Pinv[a][b] for b in range(n)),
                  MultiPoly.zero(n)) for l in range(n)] for a in range(n)]
    out = [[None] * n for _ in range(n)]
    for r in range(n):
        for l in range(r, n):
            s = MultiPoly.zero(n)
            for a in range(n):
                s = s + grads[a][r] * mixed[a][l]
            out[r][l] = out[l][r] = s
    return out


def restricted_saito_det(basis: InvariantBasis, D: Stratum,
                         arrangement=None) -> FactoredDeterminant:
    """Restrict the covariant metric to the stratum parameters and factor
    the exact determinant over the restricted arrangement forms.

    For a flat basis a complete factorization with exponents k_H is a
    theorem; for a non-flat basis IncompleteFactorization is a legal
    outcome and propagates to the caller."""
    if basis.R is not D.R and (basis.R.label, basis.R.rank) != \
            (D.R.label, D.R.rank):
        raise ValueError("basis and stratum use different groups")
    n = basis.R.rank
    I0 = [i - 1 for i in sorted(D.I)]
    params0 = [j - 1 for j in D.params]
    rgrads = [[p.diff(r).set_vars_zero(I0, params0) for r in params0]
              for p in basis.polys]
    Pinv = basis.pairing_inv
    dim = len(params0)
    M = [[None] * dim for _ in range(dim)]
    for r in range(dim):
        for l in range(r, dim):
            s = MultiPoly.zero(dim)
            for a in range(n):
                for b in range(n):
                    c = Pinv[a][b]
                    if c:
                        s = s + rgrads[a][r] * rgrads[b][l] * c
            M[r][l] = M[l][r] = s
    det = poly_det(M)
    arr = arrangement if arrangement is not None else restricted_arrangement(D)
    return factor_linear(det, [hp.form for hp in arr])


# ---------------------------------------------------------------------------
# the minor-formula route

def _eta_numerators(basis: InvariantBasis, indices):
    """J^2 eta^{ij} for i, j in `indices` (0-based), as polynomials."""
    R = basis.R
    n = R.rank
    J = basis.jacobian_det
    Jk = basis.minor_dets()
    dJ = [J.diff(i) for i in range(n)]
    dJk = {k: [Jk[k].diff(i) for i in range(n)] for k in indices}
    out = {}
    for i in indices:
        for j in indices:
            if (j, i) in out:
                out[(i, j)] = out[(j, i)]
                continue
            s1 = (dJk[j][i] * J - Jk[j] * dJ[i]) * ((-1) ** (n + j))
            s2 = (dJk[i][j] * J - Jk[i] * dJ[j]) * ((-1) ** (n + i))
            out[(i, j)] = s1 + s2
    return out


def general_formula_det(basis: InvariantBasis, D: Stratum) -> MultiPoly:
    """-P_D where P = J^2 det(eta^{ij})_{i,j in I}: the minor numerator is
    divided exactly by J^{2|I|-2} before restricting, witnessing the
    well-defined limit."""
    I0 = [i - 1 for i in sorted(D.I)]
    if not I0:
        raise ValueError("need |I| >= 1")
    params0 = [j - 1 for j in D.params]
    N = _eta_numerators(basis, I0)
    k = len(I0)
    num = poly_det([[N[(i, j)] for j in I0] for i in I0])
    J = basis.jacobian_det
    P = num if k == 1 else divide_exact(num, J ** (2 * k - 2))
    return -P.set_vars_zero(I0, params0)


def frame_constant(basis: InvariantBasis, D: Stratum) -> Fraction:
    """The exact constant c with

        restricted_saito_det(basis, D) == c * general_formula_det(basis, D).

    Two sources: the Jacobian det(G)^2, G = ((w^i, w^j))_{i,j not in I},
    between the parameter frame x = sum s_j w^j and the coweight
    coordinates (w^i, x) used by the minor formula, and -1/det(pairing)
    from the determinant of the unrestricted metric in coweight
    coordinates being J^2/det(pairing) rather than -J^2."""
    R = basis.R
    idx = [j - 1 for j in D.params]
    G = [[sum(Fraction(a) * Fraction(b)
              for a, b in zip(R.coweights[i], R.coweights[j]))
          for j in idx] for i in idx]
    return -det_fraction(G) ** 2 / det_fraction(basis.pairing)


# ---------------------------------------------------------------------------
# structural checks

def identity_field_checks(basis: InvariantBasis):
    """Exact divisibility / proportionality / sign / tangency checks on the
    Jacobian minors and the inverse identity field.  Returns a report
    listing each check with a pass flag; never raises on failure."""
    R = basis.R
    n = R.rank
    h = R.coxeter_number
    Jk = basis.minor_dets()
    report = []

    def add(name, passed, detail=""):
        report.append({"check": name, "passed": bool(passed),
                       "detail": detail})

    # divisibility of J_k by every root inside the span of the other
    # simple roots, and non-divisibility by alpha_k itself
    for k in range(n):
        alphas = [b for b in R.positive_roots if R.expansion[b][k] == 0]
        ok = all(try_divide(Jk[k], _root_form(R, b)) is not None
                 for b in alphas)
        add(f"minor_divisibility_k={k + 1}", ok,
            f"{len(alphas)} root forms")
        zk = MultiPoly.variable(n, k)
        add(f"minor_nondivisibility_k={k + 1}",
            try_divide(Jk[k], zk) is None)

    # restriction of J_k to its own mirror is the reduced defining
    # polynomial of the restricted arrangement
    for k in range(n):
        D = make_stratum(R, [k + 1])
        arr = restricted_arrangement(D)
        keep = [j - 1 for j in D.params]
        rk = Jk[k].set_vars_zero([k], keep)
        try:
            fd = factor_linear(rk, [hp.form for hp in arr])
            ok = all(e == 1 for e in fd.factors.values()) \
                and len(fd.factors) == len(arr)
        except IncompleteFactorization:
            ok = False
        add(f"minor_restriction_k={k + 1}", ok,
            f"|A_D| = {len(arr)}")

    # sign relation between I_l and I_m on codimension-2 strata whose
    # rank-2 subsystem has more than two positive roots
    Ik = {}
    for k in range(n):
        q = Jk[k]
        for j in range(n):
            if j != k:
                q = divide_exact(q, MultiPoly.variable(n, j))
        Ik[k] = q
    for l, m in combinations(range(n), 2):
        sub = span_subsystem(R, [R.simple[l], R.simple[m]])
        if sub.size // 2 <= 2:
            continue
        keep = [j for j in range(n) if j not in (l, m)]
        lhs = Ik[m].set_vars_zero([l, m], keep)
        rhs = Ik[l].set_vars_zero([l, m], keep) * ((-1) ** ((l - m - 1) % 2))
        add(f"minor_sign_relation_{l + 1}{m + 1}", lhs == rhs,
            f"subsystem size {sub.size // 2}")

    # tangency of the inverse identity field to every stratum (flat basis)
    if basis.flat:
        ts = basis.polys
        degs = basis.degrees
        Pinv = basis.pairing_inv
        for codim in (1, 2):
            for I in combinations(range(1, n + 1), codim):
                if codim == n:
                    continue
                D = make_stratum(R, I)
                I0 = [i - 1 for i in I]
                keep = [j - 1 for j in D.params]
                ok = True
                for gamma in D.rd.roots:
                    if all(x <= 0 for x in R.expansion.get(gamma, (0,))):
                        continue
                    expr = MultiPoly.zero(n)
                    for a in range(n):
                        for b in range(n):
                            c = Pinv[a][b]
                            if c:
                                expr = expr + ts[a] * _d_vector(
                                    R, ts[b], gamma) * (c * degs[a])
                    if not expr.set_vars_zero(I0, keep).is_zero():
                        ok = False
                add("inverse_identity_tangency_I=" +
                    ",".join(str(i) for i in I), ok)
        # degree count of the inverse identity field components
        add("inverse_identity_degree",
            all(degs[a] + degs[n - 1 - a] - 1 == h + 1 for a in range(n)))
    return report
