"""Monogenic number fields K = Q[x]/(f) with O_K = Z[theta].

Only monogenic fields are supported: build_field runs the Dedekind
criterion at every prime whose square divides disc(f) and rejects the
polynomial otherwise.  All element arithmetic is exact (ints/Fractions
over the power basis 1, theta, ..., theta^(n-1)); floats appear only in
the embedding routines, which carry explicit working precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from sympy import ZZ, factorint, isprime
from sympy.polys.galoistools import gf_gcd

from .errors import FieldConstructionError, MissingRootOfUnityError
from .exact_math import (
    IntPolynomial,
    count_real_roots,
    factor_mod_p,
    irreducibility_certificate,
    polynomial_discriminant,
)


class AlgebraicNumber:
    """Element of K as coordinates over the power basis; exact arithmetic."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "NumberField", coords: Sequence):
        self.field = field
        self.coords = tuple(
            c if isinstance(c, int) else (int(c) if Fraction(c).denominator == 1 else Fraction(c))
            for c in coords
        )
        if len(self.coords) != field.degree:
            raise ValueError("coordinate length != field degree")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AlgebraicNumber)
            and self.field is other.field
            and all(a == b for a, b in zip(self.coords, other.coords))
        )

    def __hash__(self) -> int:
        return hash(tuple(Fraction(c) for c in self.coords))

    def __repr__(self) -> str:
        return f"<{' + '.join(f'{c}*t^{i}' for i, c in enumerate(self.coords))} in {self.field.label}>"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_one(self) -> bool:
        return self.coords[0] == 1 and all(c == 0 for c in self.coords[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_integral(self) -> bool:
        return all(isinstance(c, int) or Fraction(c).denominator == 1 for c in self.coords)

    def int_coords(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"{self!r} is not integral")
        return [int(c) for c in self.coords]

    def __add__(self, other: "AlgebraicNumber") -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "AlgebraicNumber") -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, [-a for a in self.coords])

    def __mul__(self, other) -> "AlgebraicNumber":
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, [a * other for a in self.coords])
        K = self.field
        n = K.degree
        conv = [0] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(other.coords):
                if b != 0:
                    conv[i + j] += a * b
        out = list(conv[:n])
        for k in range(n, 2 * n - 1):
            ck = conv[k]
            if ck != 0:
                red = K.theta_power(k)
                for i in range(n):
                    if red[i]:
                        out[i] += ck * red[i]
        return AlgebraicNumber(K, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "AlgebraicNumber":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of y -> x*y over the power basis (columns are x*theta^j)."""
        K = self.field
        cols = []
        acc = self
        for _ in range(K.degree):
            cols.append(acc.coords)
            acc = acc * K.theta
        return [[Fraction(cols[j][i]) for j in range(K.degree)] for i in range(K.degree)]

    def trace(self) -> Fraction:
        tr = sum(Fraction(c) * p for c, p in zip(self.coords, self.field.power_traces))
        return Fraction(tr)

    def norm(self) -> Fraction:
        if all(isinstance(c, int) for c in self.coords):
            return Fraction(self.field.norm_int(self.coords))
        m = self.multiplication_matrix()
        return _det_fraction(m)

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.multiplication_matrix()
        rhs = [Fraction(1 if i == 0 else 0) for i in range(self.field.degree)]
        sol = _solve_fraction(m, rhs)
        return AlgebraicNumber(self.field, sol)

    def __truediv__(self, other: "AlgebraicNumber") -> "AlgebraicNumber":
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, [Fraction(a, 1) / other for a in self.coords])
        return self * other.inverse()


def _det_fraction(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / Fraction(a[k][k])
        for i in range(k + 1, n):
            if a[i][k] != 0:
                factor = a[i][k] * inv
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return det


def _solve_fraction(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(m)
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / Fraction(a[k][k])
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [a[i][n] for i in range(n)]


class NumberField:
    """K = Q[x]/(f) with ring of integers Z[theta]; theta = class of x."""

    def __init__(self, poly: IntPolynomial, label: str = ""):
        self.poly = poly
        self.degree = poly.degree
        self.label = label or f"deg{self.degree}-{poly.coeffs}"
        self.disc = polynomial_discriminant(poly) if self.degree > 1 else 1
        self.r1 = count_real_roots(poly)
        self.r2 = (self.degree - self.r1) // 2
        self._theta_powers: dict[int, tuple[int, ...]] = {}
        self.power_traces = self._newton_power_traces()
        self.zero = AlgebraicNumber(self, [0] * self.degree)
        self.one = AlgebraicNumber(self, [1] + [0] * (self.degree - 1))
        self.theta = AlgebraicNumber(
            self, [0, 1] + [0] * (self.degree - 2) if self.degree > 1 else [0]
        )
        self._roots_cache: tuple[int, list] | None = None
        self._zeta_cache: dict[int, AlgebraicNumber | None] = {}
        self._norm_form: dict[tuple[int, ...], int] | None = None
        self.ell = 2  # Kummer degree attached by build_field

    # -- basis bookkeeping --------------------------------------------------

    def theta_power(self, k: int) -> tuple[int, ...]:
        """Coordinates of theta^k over the power basis (exact ints)."""
        n = self.degree
        if k < n:
            return tuple(1 if i == k else 0 for i in range(n))
        cached = self._theta_powers.get(k)
        if cached is not None:
            return cached
        prev = self.theta_power(k - 1)
        # theta^k = theta * theta^(k-1); theta^n = -(c0 + ... + c_{n-1} theta^{n-1})
        shifted = [0] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(n):
                shifted[i] -= top * self.poly.coeffs[i]
        out = tuple(shifted)
        self._theta_powers[k] = out
        return out

    def norm_form(self) -> dict[tuple[int, ...], int]:
        """The norm as an integer form: N(sum x_i theta^i) = sum c_m prod x^m.

        Expanded once per field from det of the generic multiplication
        matrix; evaluating the form is far cheaper than fraction-exact
        Gaussian elimination per element.
        """
        if self._norm_form is None:
            import sympy

            n = self.degree
            xs = sympy.symbols(f"x0:{n}")
            rows = [
                [
                    sum(xs[i] * self.theta_power(i + j)[r] for i in range(n))
                    for j in range(n)
                ]
                for r in range(n)
            ]
            det = sympy.Matrix(rows).det(method="berkowitz")
            poly = sympy.Poly(det, *xs)
            self._norm_form = {tuple(m): int(c) for m, c in poly.terms()}
        return self._norm_form

    def norm_int(self, coords: Sequence[int]) -> int:
        """Exact norm of an integral element given by int coordinates."""
        total = 0
        for mon, c in self.norm_form().items():
            t = c
            for x, e in zip(coords, mon):
                if e:
                    t *= x**e
            total += t
        return total

    def mul_int_coords(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """Product of two integral elements given as coordinate tuples (ints only).

        Fast path for residue arithmetic and enumeration loops: plain
        convolution folded through the theta-power table, no element objects.
        """
        n = self.degree
        conv = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:n])
        for k in range(n, 2 * n - 1):
            ck = conv[k]
            if ck:
                tp = self.theta_power(k)
                for i in range(n):
                    out[i] += ck * tp[i]
        return tuple(out)

    def _newton_power_traces(self) -> list[int]:
        """Tr(theta^k) for k = 0..2n-2 via Newton's identities (exact).

        For monic f = x^n + a_{n-1}x^{n-1} + ... + a_0:
          p_k = -(sum_{i=1}^{min(k-1,n)} a_{n-i} p_{k-i}) - k*a_{n-k}   (k <= n)
          p_k = -(sum_{i=1}^{n} a_{n-i} p_{k-i})                        (k > n)
        """
        n = self.degree
        a = self.poly.coeffs
        p = [0] * (2 * n - 1 if n > 1 else 1)
        p[0] = n
        for k in range(1, len(p)):
            s = 0
            for i in range(1, min(k - 1, n) + 1):
                s += a[n - i] * p[k - i]
            if k <= n:
                s += k * a[n - k]
            p[k] = -s
        return p

    def element(self, coords: Sequence) -> AlgebraicNumber:
        return AlgebraicNumber(self, coords)

    def from_int(self, a) -> AlgebraicNumber:
        return AlgebraicNumber(self, [a] + [0] * (self.degree - 1))

    # -- analytic data -------------------------------------------------------

    def roots(self, prec_bits: int = 200) -> list:
        """Roots of f ordered: real ascending, then complex (im > 0) by (re, im)."""
        if self._roots_cache is not None and self._roots_cache[0] >= prec_bits:
            return self._roots_cache[1]
        work = max(prec_bits, 200)
        with mpmath.workprec(work + 40):
            raw = mpmath.polyroots(self.poly.descending(), maxsteps=400, extraprec=120)
            tiny = mpmath.mpf(2) ** (-(work // 2))
            reals = sorted(mpmath.mpc(r).real for r in raw if abs(mpmath.mpc(r).imag) < tiny)
            comps = sorted(
                (mpmath.mpc(r) for r in raw if mpmath.mpc(r).imag >= tiny),
                key=lambda z: (z.real, z.imag),
            )
            ordered = list(reals) + list(comps)
        if len(ordered) != self.r1 + self.r2:
            raise ArithmeticError("root classification disagrees with Sturm signature")
        self._roots_cache = (work, ordered)
        return ordered

    def embeddings(self, x: AlgebraicNumber, prec_bits: int = 64) -> list:
        """Values of x under the r1 real and r2 complex embeddings (one per pair)."""
        rts = self.roots(max(200, prec_bits + 60))
        with mpmath.workprec(prec_bits + 60):
            out = []
            for rho in rts:
                acc = mpmath.mpf(0) if isinstance(rho, mpmath.mpf) else mpmath.mpc(0)
                for c in reversed(x.coords):
                    acc = acc * rho + (
                        mpmath.mpf(c) if isinstance(c, int) else mpmath.mpf(c.numerator) / c.denominator
                    )
                out.append(acc)
        return out

    def abs_norm_from_embeddings(self, x: AlgebraicNumber, prec_bits: int = 64) -> mpmath.mpf:
        vals = self.embeddings(x, prec_bits)
        acc = mpmath.mpf(1)
        for i, v in enumerate(vals):
            av = abs(v)
            acc *= av * av if i >= self.r1 else av
        return acc

    def minkowski_bound(self) -> Fraction:
        """Exact rational upper estimate of the Minkowski bound."""
        n = self.degree
        base = Fraction(math.factorial(n), n**n)
        # 4/pi < 4/3.14159265358979 ; sqrt(|d|) <= (isqrt(|d| * 10^12) + 1) / 10^6
        four_over_pi = Fraction(4 * 10**14, 314159265358979)
        scaled = abs(self.disc) * 10**12
        sqrt_up = Fraction(math.isqrt(scaled) + 1, 10**6)
        return base * four_over_pi**self.r2 * sqrt_up

    # -- roots of unity -------------------------------------------------------

    def contains_zeta(self, ell: int) -> AlgebraicNumber | None:
        """A fixed primitive ell-th root of unity in K, or None.

        The decision is exact: candidate coordinates come from a numeric
        solve, but acceptance requires the cyclotomic polynomial to vanish
        identically in exact arithmetic, and every embedding pattern is tried
        before answering None.
        """
        if ell in self._zeta_cache:
            return self._zeta_cache[ell]
        if ell == 1:
            self._zeta_cache[ell] = self.one
            return self.one
        if ell == 2:
            z = self.from_int(-1)
            self._zeta_cache[ell] = z
            return z
        result: AlgebraicNumber | None = None
        if self.r1 == 0 and (ell - 1) <= self.degree:
            result = self._find_zeta_complex(ell)
        self._zeta_cache[ell] = result
        return result

    def _find_zeta_complex(self, ell: int) -> AlgebraicNumber | None:
        n = self.degree
        cyclo = _cyclotomic(ell)
        with mpmath.workprec(300):
            rts = self.roots(300)
            targets = [mpmath.exp(2j * mpmath.pi * k / ell) for k in range(1, ell)]
            import itertools

            for assign in itertools.product(range(ell - 1), repeat=self.r2):
                # complex-linear system: one equation per complex place
                rows = []
                rhs = []
                for j, rho in enumerate(rts):
                    row = [rho**i for i in range(n)]
                    rows.append([v.real for v in row])
                    rows.append([v.imag for v in row])
                    t = targets[assign[j]]
                    rhs.append(t.real)
                    rhs.append(t.imag)
                try:
                    sol = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(rhs))
                except ZeroDivisionError:
                    continue
                coords = [int(mpmath.nint(sol[i])) for i in range(n)]
                if any(abs(sol[i] - coords[i]) > 0.25 for i in range(n)):
                    continue
                z = self.element(coords)
                if _poly_eval_int(cyclo, z).is_zero():
                    # canonical choice: smallest assignment index that verifies
                    return z
        return None

    def element_order(self, x: AlgebraicNumber, cap: int = 64) -> int | None:
        """Multiplicative order of x if <= cap, else None."""
        acc = x
        for k in range(1, cap + 1):
            if acc.is_one():
                return k
            acc = acc * x
        return None


def _poly_eval_int(coeffs_ascending: list[int], z: AlgebraicNumber) -> AlgebraicNumber:
    acc = z.field.zero
    for c in reversed(coeffs_ascending):
        acc = acc * z + z.field.from_int(c)
    return acc


@lru_cache(maxsize=None)
def _cyclotomic(ell: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the ell-th cyclotomic polynomial, ell prime."""
    if not isprime(ell):
        raise ValueError("ell must be prime")
    return tuple([1] * ell)


def dedekind_q_maximal(f: IntPolynomial, q: int) -> bool:
    """Dedekind criterion: is Z[theta] maximal at q?

    With f = prod g_i^{e_i} mod q, set g = prod g_i, h = f/g mod q (monic
    lifts), F = (g*h - f)/q.  Z[theta] is q-maximal iff gcd(F, g, h) = 1
    in F_q[x].
    """
    factors = factor_mod_p(f, q)
    g = [1]
    for gi, _ in factors:
        g = _poly_mul_mod(g, list(gi.coeffs), q)
    h = [1]
    for gi, ei in factors:
        for _ in range(ei - 1):
            h = _poly_mul_mod(h, list(gi.coeffs), q)
    # integer lift product minus f, divided by q
    gh = _poly_mul_int(g, h)
    n = max(len(gh), len(f.coeffs))
    diff = [(gh[i] if i < len(gh) else 0) - (f.coeffs[i] if i < len(f.coeffs) else 0) for i in range(n)]
    if any(d % q for d in diff):
        raise ArithmeticError("g*h != f mod q; factorization inconsistent")
    F = [(d // q) % q for d in diff]
    # gcd over F_q via sympy (descending order, zero poly = [])
    def desc(c):
        c = [x % q for x in c]
        while c and c[-1] == 0:
            c.pop()
        return list(reversed(c))

    d1 = gf_gcd(desc(F), desc(g), q, ZZ)
    d2 = gf_gcd(d1, desc(h), q, ZZ)
    return len(d2) == 1  # constant gcd


def _poly_mul_mod(a: list[int], b: list[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    return out


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def build_field(coeffs: Sequence[int], ell: int = 2, label: str = "") -> NumberField:
    """Construct a monogenic number field and check it supports ell-Kummer theory.

    coeffs are ascending with leading 1.  Raises FieldConstructionError for
    non-monic/reducible/non-monogenic input and MissingRootOfUnityError if
    zeta_ell is not in the field.
    """
    f = IntPolynomial(coeffs)
    irreducibility_certificate(f)
    if f.degree > 1:
        disc = polynomial_discriminant(f)
        if disc == 0:
            raise FieldConstructionError("defining polynomial is not separable")
        for q, e in factorint(abs(disc)).items():
            if e >= 2 and not dedekind_q_maximal(f, q):
                raise FieldConstructionError(
                    f"Z[theta] is not maximal at {q}; non-monogenic input is unsupported"
                )
    K = NumberField(f, label=label)
    if not isprime(ell):
        raise FieldConstructionError(f"ell = {ell} is not prime")
    if K.contains_zeta(ell) is None:
        raise MissingRootOfUnityError(
            f"field {K.label} does not contain a primitive {ell}-th root of unity"
        )
    K.ell = ell
    return K
