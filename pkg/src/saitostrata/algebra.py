"""Exact polynomial arithmetic: rational scalars, sparse multivariate
polynomials, polynomial-matrix determinants, exact division and trial
factorization into linear forms.

Coefficients are `fractions.Fraction` throughout; nothing here ever rounds.
Polynomials are stored sparsely as {exponent tuple: coefficient} with a
graded-lexicographic term order used for canonical serialization and for
exact division.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Scalar = Fraction
ScalarLike = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class IncompleteFactorization(ArithmeticError):
    """Trial division by the candidate linear forms left a non-constant
    cofactor."""

    def __init__(self, msg, cofactor=None, partial=None):
        super().__init__(msg)
        self.cofactor = cofactor
        self.partial = partial


def _grlex_key(expt):
    # graded lexicographic: total degree first, then lex on the exponent tuple
    return (sum(expt), expt)


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    `terms` maps exponent tuples (length = nvars) to nonzero Fractions.
    `weights`, when given, assigns a positive integer weight to each variable
    so weighted homogeneity can be queried (used for invariant-coordinate
    rings where variable i carries the invariant degree d_i).
    """

    __slots__ = ("nvars", "terms", "weights")

    def __init__(self, nvars: int, terms: Mapping[tuple, ScalarLike] | None = None,
                 weights: Sequence[int] | None = None):
        self.nvars = nvars
        tidy = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    e = tuple(e)
                    if len(e) != nvars:
                        raise ValueError("exponent length mismatch")
                    tidy[e] = tidy.get(e, Fraction(0)) + c
            tidy = {e: c for e, c in tidy.items() if c}
        self.terms = tidy
        self.weights = tuple(weights) if weights is not None else None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars, weights=None):
        return cls(nvars, {}, weights)

    @classmethod
    def const(cls, nvars, c, weights=None):
        return cls(nvars, {(0,) * nvars: Fraction(c)}, weights)

    @classmethod
    def variable(cls, nvars, i, weights=None):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)}, weights)

    @classmethod
    def linear(cls, coeffs, weights=None):
        """Linear form sum_i coeffs[i] * x_i."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        return cls(n, terms, weights)

    # -- basic queries ------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights=None):
        w = weights if weights is not None else self.weights
        if w is None:
            return self.degree()
        if not self.terms:
            return -1
        return max(sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms)

    def is_homogeneous(self, weights=None):
        w = weights if weights is not None else self.weights
        if not self.terms:
            return True
        if w is None:
            degs = {sum(e) for e in self.terms}
        else:
            degs = {sum(wi * ei for wi, ei in zip(w, e)) for e in self.terms}
        return len(degs) == 1

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------
    def _wrap(self, terms):
        p = MultiPoly.__new__(MultiPoly)
        p.nvars = self.nvars
        p.terms = terms
        p.weights = self.weights
        return p

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.nvars, other, self.weights)
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Fraction(0)) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return self._wrap(t)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.nvars, other, self.weights)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self._wrap({})
            return self._wrap({e: co * c for e, co in self.terms.items()})
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e, Fraction(0)) + ca * cb
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.nvars, 1, self.weights)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return isinstance(other, MultiPoly) and self.nvars == other.nvars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- calculus / substitution -------------------------------------
    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return self._wrap(out)

    def evaluate(self, point):
        """Exact evaluation at a rational point (sequence of Fractions)."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(point, e):
                if ei:
                    v *= Fraction(xi) ** ei
            total += v
        return total

    def substitute(self, values):
        """Substitute MultiPoly values[i] for variable i (all same nvars)."""
        if not values:
            raise ValueError("empty substitution")
        tgt = values[0].nvars
        out = MultiPoly.zero(tgt, values[0].weights)
        pow_cache = [{} for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = MultiPoly.const(tgt, c, values[0].weights)
            for i, ei in enumerate(e):
                if ei:
                    cache = pow_cache[i]
                    if ei not in cache:
                        cache[ei] = values[i] ** ei
                    term = term * cache[ei]
            out = out + term
        return out

    def set_vars_zero(self, indices, keep=None):
        """Set the given variables to zero; optionally re-index onto `keep`
        (an ordered list of surviving variable indices) producing a
        polynomial in len(keep) variables."""
        idx = set(indices)
        if keep is None:
            keep = [i for i in range(self.nvars) if i not in idx]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] for i in idx):
                continue
            out[tuple(e[i] for i in keep)] = c
        w = tuple(self.weights[i] for i in keep) if self.weights else None
        return MultiPoly(len(keep), out, w)

    def with_weights(self, weights):
        return MultiPoly(self.nvars, self.terms, weights)

    # -- display ------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}"
                            for i, k in enumerate(e) if k)
            if mono:
                bits.append(f"{c}*{mono}" if c != 1 else mono)
            else:
                bits.append(str(c))
        return " + ".join(bits)


class LinearForm:
    """Canonical representative of a projective class of linear forms.

    Integer coefficient vector, primitive (gcd 1), first nonzero entry
    positive. Optionally labelled with parameter names for display."""

    __slots__ = ("coeffs", "labels")

    def __init__(self, coeffs: Sequence[int], labels: Sequence[str] | None = None):
        coeffs = tuple(int(c) for c in coeffs)
        if all(c == 0 for c in coeffs):
            raise ValueError("zero linear form")
        g = 0
        for c in coeffs:
            g = gcd(g, abs(c))
        if g != 1:
            raise ValueError("linear form not primitive: %r" % (coeffs,))
        for c in coeffs:
            if c:
                if c < 0:
                    raise ValueError("first nonzero entry must be positive")
                break
        self.coeffs = coeffs
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def canonical(cls, coeffs: Sequence[ScalarLike], labels=None):
        """Canonicalize a rational vector: clear denominators, make
        primitive, fix the sign of the first nonzero entry.

        Returns (form, scale) with  original = scale * form  as covectors."""
        fr = [Fraction(c) for c in coeffs]
        if all(c == 0 for c in fr):
            raise ValueError("zero linear form")
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        g = 0
        for c in ints:
            g = gcd(g, abs(c))
        ints = [c // g for c in ints]
        sign = 1
        for c in ints:
            if c:
                sign = 1 if c > 0 else -1
                break
        ints = [sign * c for c in ints]
        scale = Fraction(sign * g, den)
        return cls(ints, labels), scale

    def as_poly(self, weights=None):
        return MultiPoly.linear(self.coeffs, weights)

    def evaluate(self, point):
        return sum(Fraction(c) * Fraction(x) for c, x in zip(self.coeffs, point))

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        return self.coeffs < other.coeffs

    def __repr__(self):
        labels = self.labels or tuple(f"s{i}" for i in range(len(self.coeffs)))
        bits = []
        for c, name in zip(self.coeffs, labels):
            if not c:
                continue
            if c == 1:
                bits.append(("+", name))
            elif c == -1:
                bits.append(("-", name))
            else:
                bits.append(("+" if c > 0 else "-", f"{abs(c)}*{name}"))
        s = ""
        for sign, txt in bits:
            s += (sign if s or sign == "-" else "") + txt
        return s


class Unknown:
    """Marker for a determinant coefficient the theory leaves unpinned."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unknown"


UNKNOWN = Unknown()


class FactoredDeterminant:
    """A scalar (or Unknown) times a multiset of (LinearForm, exponent)."""

    __slots__ = ("coefficient", "factors")

    def __init__(self, coefficient, factors: Mapping[LinearForm, int]):
        if not isinstance(coefficient, Unknown):
            coefficient = Fraction(coefficient)
        fs = {}
        for f, k in factors.items():
            k = int(k)
            if k < 1:
                raise ValueError("exponents must be >= 1")
            if f in fs:
                raise ValueError("duplicate linear form")
            fs[f] = k
        self.coefficient = coefficient
        self.factors = fs

    def degree(self):
        return sum(self.factors.values())

    def multiset(self):
        """Frozen (form-coefficients, exponent) multiset for comparisons."""
        return frozenset((f.coeffs, k) for f, k in self.factors.items())

    def exponents_sorted(self):
        return sorted(self.factors.values())

    def expand(self, nvars=None, weights=None):
        if isinstance(self.coefficient, Unknown):
            raise ValueError("cannot expand with unknown coefficient")
        if nvars is None:
            nvars = len(next(iter(self.factors)).coeffs) if self.factors else 1
        p = MultiPoly.const(nvars, self.coefficient, weights)
        for f, k in self.factors.items():
            p = p * (f.as_poly(weights) ** k)
        return p

    def evaluate(self, point):
        if isinstance(self.coefficient, Unknown):
            raise ValueError("cannot evaluate with unknown coefficient")
        v = Fraction(self.coefficient)
        for f, k in self.factors.items():
            v *= f.evaluate(point) ** k
        return v

    def __repr__(self):
        parts = [repr(self.coefficient)]
        for f, k in sorted(self.factors.items()):
            parts.append(f"({f!r})^{k}" if k > 1 else f"({f!r})")
        return " * ".join(parts)


# ---------------------------------------------------------------------------
# determinants

def det_cofactor(matrix):
    """Cofactor (Laplace) expansion along the first row."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix not square")
    if n == 0:
        raise ValueError("empty matrix")
    if n == 1:
        return matrix[0][0]
    nv = matrix[0][0].nvars
    total = MultiPoly.zero(nv, matrix[0][0].weights)
    for j in range(n):
        a = matrix[0][j]
        if a.is_zero():
            continue
        minor = [[matrix[i][k] for k in range(n) if k != j] for i in range(1, n)]
        sub = det_cofactor(minor)
        total = total + (a * sub if j % 2 == 0 else -(a * sub))
    return total


def det_bareiss(matrix):
    """Fraction-free Bareiss elimination; every division is exact."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix not square")
    if n == 0:
        raise ValueError("empty matrix")
    m = [list(row) for row in matrix]
    nv = m[0][0].nvars
    one = MultiPoly.const(nv, 1, m[0][0].weights)
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(nv, one.weights)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
            m[i][k] = MultiPoly.zero(nv, one.weights)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


def poly_det(matrix):
    """Exact determinant of a square MultiPoly matrix.

    Small matrices go through cofactor expansion, larger ones through
    fraction-free elimination; both are exact and agree (tested)."""
    n = len(matrix)
    if n <= 3:
        return det_cofactor(matrix)
    return det_bareiss(matrix)


# ---------------------------------------------------------------------------
# exact division / factorization

def divide_exact(numerator: MultiPoly, divisor: MultiPoly) -> MultiPoly:
    """Return q with q * divisor == numerator, or raise NotDivisible."""
    if divisor.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if numerator.nvars != divisor.nvars:
        raise ValueError("variable count mismatch")
    if divisor.is_constant():
        c = divisor.constant_value()
        return numerator * (Fraction(1) / c)
    rem = dict(numerator.terms)
    de, dc = divisor.leading()
    q = {}
    while rem:
        e = max(rem, key=_grlex_key)
        c = rem[e]
        qe = tuple(a - b for a, b in zip(e, de))
        if any(x < 0 for x in qe):
            raise NotDivisible("remainder nonzero")
        qc = c / dc
        q[qe] = qc
        # rem -= qc * x^qe * divisor
        for fe, fc in divisor.terms.items():
            te = tuple(a + b for a, b in zip(qe, fe))
            s = rem.get(te, Fraction(0)) - qc * fc
            if s:
                rem[te] = s
            else:
                rem.pop(te, None)
    return MultiPoly(numerator.nvars, q, numerator.weights)


def try_divide(numerator, divisor):
    try:
        return divide_exact(numerator, divisor)
    except NotDivisible:
        return None


def factor_linear(poly: MultiPoly, candidates: Iterable[LinearForm]) -> FactoredDeterminant:
    """Trial-divide `poly` by the candidate linear forms until none divides.

    The remaining cofactor must be a nonzero constant (it becomes the
    coefficient); a non-constant cofactor raises IncompleteFactorization —
    the falsifier for product-of-linear-forms claims."""
    if poly.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    factors = {}
    rest = poly
    for form in candidates:
        fp = form.as_poly(poly.weights)
        if fp.nvars != poly.nvars:
            raise ValueError("candidate form has wrong variable count")
        k = 0
        while True:
            q = try_divide(rest, fp)
            if q is None:
                break
            rest = q
            k += 1
        if k:
            factors[form] = k
    if not rest.is_constant():
        raise IncompleteFactorization(
            "cofactor is not constant (degree %d)" % rest.degree(),
            cofactor=rest, partial=factors)
    return FactoredDeterminant(rest.constant_value(), factors)
