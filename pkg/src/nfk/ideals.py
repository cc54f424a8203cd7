"""Ideal arithmetic over O_K = Z[theta] in Hermite normal form.

Integral ideals are column lattices in power-basis coordinates, stored as
the square upper-triangular HNF fixed in exact_math.  Fractional ideals
are (integral numerator, positive integer denominator), reduced.  Where a
full factorization is already known, FactoredIdeal keeps {prime: exponent}
(negative exponents allowed) and does group-like arithmetic without any
lattice inversions.

Generator searches (principality tests) enumerate lattice elements of the
correct norm exactly: closed-form in degree 1, a positive-definite binary
form solve for imaginary quadratics, and a unit-balanced coordinate box
for unit rank >= 1.  The canonical generator — the F-map used throughout
the Kummer layer — is the match minimizing the largest embedding
magnitude, ties broken by smallest coordinate key (|c| before sign, so 2
beats -2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
from sympy import factorint

from .config import Ceilings
from .errors import CeilingError, NotASquareError, NotPrincipalError
from .exact_math import IntMatrix, IntPolynomial, hnf_reduce, hnf_square, lattice_contains
from .number_field import AlgebraicNumber, NumberField


class Ideal:
    """Nonzero integral ideal as a square HNF column lattice."""

    __slots__ = ("field", "hnf")

    def __init__(self, field: NumberField, hnf_matrix: IntMatrix):
        self.field = field
        self.hnf = hnf_matrix

    @staticmethod
    def one(field: NumberField) -> "Ideal":
        return Ideal(field, IntMatrix.identity(field.degree))

    def norm(self) -> int:
        n = 1
        for d in self.hnf.diagonal():
            n *= d
        return n

    def is_one(self) -> bool:
        return self.hnf == IntMatrix.identity(self.field.degree)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ideal) and self.field is other.field and self.hnf == other.hnf

    def __hash__(self) -> int:
        return hash(self.hnf)

    def __repr__(self) -> str:
        return f"Ideal(norm={self.norm()}, hnf={self.hnf.rows})"

    def contains(self, x: AlgebraicNumber) -> bool:
        return lattice_contains(self.hnf, x.int_coords())

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(lattice_contains(self.hnf, col) for col in other.hnf.columns())

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical residue representative of a coordinate vector mod the ideal."""
        return tuple(hnf_reduce(self.hnf, coords))

    def residues(self) -> Iterator[tuple[int, ...]]:
        """All canonical residue representatives (norm of them)."""
        diag = self.hnf.diagonal()
        n = self.field.degree
        idx = [0] * n
        while True:
            yield self.reduce(idx)
            i = 0
            while i < n:
                idx[i] += 1
                if idx[i] < diag[i]:
                    break
                idx[i] = 0
                i += 1
            if i == n:
                return

    def basis_elements(self) -> list[AlgebraicNumber]:
        return [self.field.element(col) for col in self.hnf.columns()]

    def content(self) -> int:
        """Largest rational integer d with self contained in d*O_K (gcd of HNF entries)."""
        return math.gcd(*[x for row in self.hnf.rows for x in row])


def ideal_from_element(a: AlgebraicNumber) -> Ideal:
    """Principal ideal a*O_K (a integral, nonzero)."""
    if a.is_zero():
        raise ValueError("zero element generates the zero ideal")
    K = a.field
    cols = []
    acc = a
    for _ in range(K.degree):
        cols.append(acc.int_coords())
        acc = acc * K.theta
    m = IntMatrix([[cols[j][i] for j in range(K.degree)] for i in range(K.degree)])
    return Ideal(K, hnf_square(m))


def ideal_from_rational(K: NumberField, m: int) -> Ideal:
    if m == 0:
        raise ValueError("zero ideal")
    m = abs(m)
    return Ideal(K, IntMatrix([[m if i == j else 0 for j in range(K.degree)] for i in range(K.degree)]))


def ideal_from_generators(K: NumberField, gens: Sequence[AlgebraicNumber]) -> Ideal:
    cols = []
    for g in gens:
        acc = g
        for _ in range(K.degree):
            cols.append(acc.int_coords())
            acc = acc * K.theta
    m = IntMatrix([[cols[j][i] for j in range(len(cols))] for i in range(K.degree)])
    return Ideal(K, hnf_square(m))


def ideal_mul(a: Ideal, b: Ideal) -> Ideal:
    """Product ideal: HNF of all pairwise basis products."""
    K = a.field
    n = K.degree
    acols = list(a.hnf.columns())
    belems = b.basis_elements()
    cols = []
    for ac in acols:
        ae = K.element(ac)
        for be in belems:
            cols.append((ae * be).int_coords())
    m = IntMatrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])
    return Ideal(K, hnf_square(m))


def ideal_pow(a: Ideal, e: int) -> Ideal:
    if e < 0:
        raise ValueError("use FactoredIdeal/FractionalIdeal for negative powers")
    out = Ideal.one(a.field)
    base = a
    while e:
        if e & 1:
            out = ideal_mul(out, base)
        base = ideal_mul(base, base) if e > 1 else base
        e >>= 1
    return out


def ideal_gcd(a: Ideal, b: Ideal) -> Ideal:
    """a + b (contains both; their gcd in the divisibility order)."""
    n = a.field.degree
    cols = [a.hnf.column(j) for j in range(n)] + [b.hnf.column(j) for j in range(n)]
    m = IntMatrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])
    return Ideal(a.field, hnf_square(m))


def ideal_scale(a: Ideal, m: int) -> Ideal:
    """m * a for a positive rational integer m."""
    m = abs(m)
    return Ideal(a.field, IntMatrix([[x * m for x in row] for row in a.hnf.rows]))


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------


class PrimeIdeal:
    """Prime over p in two-element representation (p, g(theta))."""

    __slots__ = ("field", "p", "gpoly", "e", "f", "ideal", "index", "ambiguous", "_powers")

    def __init__(self, field: NumberField, p: int, gpoly: IntPolynomial, e: int, index: int):
        self.field = field
        self.p = p
        self.gpoly = gpoly
        self.e = e
        self.f = gpoly.degree
        self.index = index  # position among the primes over p (canonical order)
        self.ambiguous = False  # set when another prime over p shares (f, e)
        # evaluate g at theta with full power reduction: for an inert prime
        # g is the defining polynomial itself and g(theta) = 0, leaving (p)
        n_deg = field.degree
        g_coords = [0] * n_deg
        for k, c in enumerate(gpoly.coeffs):
            if c:
                tp = field.theta_power(k)
                for i in range(n_deg):
                    g_coords[i] += c * tp[i]
        g_elt = field.element(g_coords)
        n = field.degree
        cols = [[p if i == j else 0 for i in range(n)] for j in range(n)]
        acc = g_elt
        for _ in range(n):
            cols.append(acc.int_coords())
            acc = acc * field.theta
        m = IntMatrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])
        self.ideal = Ideal(field, hnf_square(m))
        self._powers = [Ideal.one(field), self.ideal]

    @property
    def norm(self) -> int:
        return self.p**self.f

    def power(self, k: int) -> Ideal:
        while len(self._powers) <= k:
            self._powers.append(ideal_mul(self._powers[-1], self.ideal))
        return self._powers[k]

    def sort_key(self) -> tuple:
        return (self.norm, self.p, self.index)

    def label(self) -> str:
        return f"{self.p},{self.f},{self.e}" + (f",{self.index}" if self.ambiguous else "")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PrimeIdeal)
            and self.field is other.field
            and self.p == other.p
            and self.gpoly == other.gpoly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.gpoly.coeffs))

    def __lt__(self, other: "PrimeIdeal") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"q[{self.label()}]"


def split_prime(K: NumberField, p: int) -> list[PrimeIdeal]:
    """Primes above p via factorization of the defining polynomial mod p.

    Valid at every p because the field is monogenic.  Result is cached and
    canonically ordered (by the factor's coefficient tuple).
    """
    cache = getattr(K, "_prime_cache", None)
    if cache is None:
        cache = {}
        K._prime_cache = cache
    got = cache.get(p)
    if got is not None:
        return got
    if K.degree == 1:
        out = [PrimeIdeal(K, p, IntPolynomial([0, 1]), 1, 0)]
        cache[p] = out
        return out
    from .exact_math import factor_mod_p

    factors = factor_mod_p(K.poly, p)
    out = []
    for idx, (g, e) in enumerate(factors):
        out.append(PrimeIdeal(K, p, g, e, idx))
    shape: dict[tuple[int, int], int] = {}
    for q in out:
        shape[(q.f, q.e)] = shape.get((q.f, q.e), 0) + 1
    for q in out:
        q.ambiguous = shape[(q.f, q.e)] > 1
    cache[p] = out
    return out


def primes_over_ell(K: NumberField, ell: int) -> list[PrimeIdeal]:
    return split_prime(K, ell)


def valuation(prime: PrimeIdeal, a: Ideal) -> int:
    """nu_prime(a) by containment in successive prime powers."""
    v = 0
    while prime.power(v + 1).contains_ideal(a):
        v += 1
    return v


def element_valuation(prime: PrimeIdeal, x: AlgebraicNumber) -> int:
    return valuation(prime, ideal_from_element(x))


def factor_ideal(a: Ideal) -> "FactoredIdeal":
    """Full factorization into primes; exponents cross-checked against N(a)."""
    K = a.field
    n = a.norm()
    exps: dict[PrimeIdeal, int] = {}
    for p, ep in sorted(factorint(n).items()):
        primes = split_prime(K, p)
        live = [q for q in primes if q.ideal.contains_ideal(a)]
        total = 0
        if len(live) == 1 and live[0].f and ep % live[0].f == 0 and len(primes) == 1:
            v = ep // live[0].f
            exps[live[0]] = v
            total = v * live[0].f
        else:
            for q in live:
                v = valuation(q, a)
                if v:
                    exps[q] = v
                    total += v * q.f
        if total != ep:
            raise ArithmeticError(f"valuations at {p} sum to {total}, expected {ep}")
    return FactoredIdeal(K, exps)


# ---------------------------------------------------------------------------
# fractional and factored ideals
# ---------------------------------------------------------------------------


class FractionalIdeal:
    """num / den with num an integral Ideal and den a positive integer, reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: Ideal, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        den = abs(den)
        g = math.gcd(den, num.content())
        if g > 1:
            num = Ideal(num.field, IntMatrix([[x // g for x in row] for row in num.hnf.rows]))
            den //= g
        self.num = num
        self.den = den

    @property
    def field(self) -> NumberField:
        return self.num.field

    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den ** self.field.degree)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FractionalIdeal)
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"FractionalIdeal({self.num!r} / {self.den})"

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        return FractionalIdeal(ideal_mul(self.num, other.num), self.den * other.den)


class FactoredIdeal:
    """A fractional ideal known by its prime factorization (exponents in Z)."""

    __slots__ = ("field", "exps")

    def __init__(self, field: NumberField, exps: dict[PrimeIdeal, int] | None = None):
        self.field = field
        self.exps = {q: e for q, e in (exps or {}).items() if e != 0}

    @staticmethod
    def unit(field: NumberField) -> "FactoredIdeal":
        return FactoredIdeal(field, {})

    def is_unit_ideal(self) -> bool:
        return not self.exps

    def is_integral(self) -> bool:
        return all(e > 0 for e in self.exps.values())

    def support(self) -> list[PrimeIdeal]:
        return sorted(self.exps)

    def norm(self) -> Fraction:
        out = Fraction(1)
        for q, e in self.exps.items():
            out *= Fraction(q.norm) ** e
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FactoredIdeal) and self.exps == other.exps

    def __hash__(self) -> int:
        return hash(tuple(sorted(((q.p, q.gpoly.coeffs, e) for q, e in self.exps.items()))))

    def __repr__(self) -> str:
        if not self.exps:
            return "FactoredIdeal(1)"
        return "FactoredIdeal(" + " * ".join(f"{q!r}^{e}" for q, e in sorted(self.exps.items())) + ")"

    def __mul__(self, other: "FactoredIdeal") -> "FactoredIdeal":
        exps = dict(self.exps)
        for q, e in other.exps.items():
            exps[q] = exps.get(q, 0) + e
        return FactoredIdeal(self.field, exps)

    def __pow__(self, k: int) -> "FactoredIdeal":
        return FactoredIdeal(self.field, {q: e * k for q, e in self.exps.items()})

    def inverse(self) -> "FactoredIdeal":
        return self**-1

    def __truediv__(self, other: "FactoredIdeal") -> "FactoredIdeal":
        return self * other.inverse()

    def sqrt(self) -> "FactoredIdeal":
        if any(e % 2 for e in self.exps.values()):
            raise NotASquareError(f"odd exponent in {self!r}")
        return FactoredIdeal(self.field, {q: e // 2 for q, e in self.exps.items()})

    def radical(self) -> "FactoredIdeal":
        return FactoredIdeal(self.field, {q: 1 for q in self.exps})

    def to_ideal(self) -> Ideal:
        """Assemble the HNF ideal; requires integrality."""
        if not self.is_integral():
            raise ValueError("not integral; use to_fractional")
        out = Ideal.one(self.field)
        for q in self.support():
            out = ideal_mul(out, ideal_pow(q.ideal, self.exps[q]))
        return out

    def to_fractional(self) -> FractionalIdeal:
        """Assemble num/den using p*q^{-1} = (product of the other primes over p)."""
        num = Ideal.one(self.field)
        den = 1
        for q in self.support():
            e = self.exps[q]
            if e > 0:
                num = ideal_mul(num, ideal_pow(q.ideal, e))
            else:
                k = -e
                cofactor = Ideal.one(self.field)
                for r in split_prime(self.field, q.p):
                    exp = r.e - 1 if r == q else r.e
                    if exp:
                        cofactor = ideal_mul(cofactor, ideal_pow(r.ideal, exp))
                num = ideal_mul(num, ideal_pow(cofactor, k))
                den *= q.p**k
        return FractionalIdeal(num, den)


# ---------------------------------------------------------------------------
# parts decomposition (ell-part / ell-power part / i-power parts)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartsDecomposition:
    """A = ell_part * root^ell * prod_i power_parts[i]^i.

    ell_part carries the full exponent of every prime over ell; root is
    coprime to ell; each power_parts[i] (1 <= i < ell) is squarefree,
    pairwise coprime with the others, coprime to ell, and consists of the
    primes whose exponent is congruent to i mod ell.
    """

    ell: int
    ell_part: FactoredIdeal
    root: FactoredIdeal
    power_parts: dict[int, FactoredIdeal]

    def reconstruct(self) -> FactoredIdeal:
        out = self.ell_part * self.root**self.ell
        for i, part in self.power_parts.items():
            out = out * part**i
        return out

    def ell_free_ell_power_free(self) -> FactoredIdeal:
        out = FactoredIdeal.unit(self.ell_part.field)
        for i, part in self.power_parts.items():
            out = out * part**i
        return out

    def squarefree_support(self) -> FactoredIdeal:
        """s(prod power_parts^i): the radical of the ell-free ell-power-free part."""
        out = FactoredIdeal.unit(self.ell_part.field)
        for part in self.power_parts.values():
            out = out * part
        return out


def decompose_parts(a: FactoredIdeal | Ideal, ell: int) -> PartsDecomposition:
    fa = a if isinstance(a, FactoredIdeal) else factor_ideal(a)
    K = fa.field
    ell_primes = {q for q in split_prime(K, ell)}
    ell_part: dict[PrimeIdeal, int] = {}
    root: dict[PrimeIdeal, int] = {}
    parts: dict[int, dict[PrimeIdeal, int]] = {i: {} for i in range(1, ell)}
    for q, e in fa.exps.items():
        if q in ell_primes:
            ell_part[q] = e
            continue
        r = e % ell
        if e // ell:
            root[q] = e // ell
        if r:
            parts[r][q] = 1
    return PartsDecomposition(
        ell=ell,
        ell_part=FactoredIdeal(K, ell_part),
        root=FactoredIdeal(K, root),
        power_parts={i: FactoredIdeal(K, parts[i]) for i in range(1, ell)},
    )


def sqrt_of_square(a: FractionalIdeal | FactoredIdeal) -> FactoredIdeal:
    """Exact square root of a fractional ideal that is a perfect square."""
    if isinstance(a, FractionalIdeal):
        fa = factor_ideal(a.num)
        for p, e in factorint(a.den).items():
            for q in split_prime(a.num.field, p):
                fa = fa * FactoredIdeal(a.num.field, {q: -e * q.e})
    else:
        fa = a
    return fa.sqrt()


# ---------------------------------------------------------------------------
# generator searches
# ---------------------------------------------------------------------------


def _coord_sort_key(coords: Sequence[int]) -> tuple:
    # highest power-basis coordinate first: among the generators of (2) in
    # Z[i] this prefers 2 over 2i, and among {2, -2} prefers 2.
    return tuple((abs(c), 0 if c >= 0 else 1) for c in reversed(coords))


def _imag_quadratic_norm_matches(a: Ideal, target: int) -> list[list[int]]:
    """All x in the ideal lattice with N(x) = target (imaginary quadratic K).

    Solves the positive-definite binary form of the HNF basis exactly.
    """
    K = a.field
    v1, v2 = a.basis_elements()
    A = int(v1.norm())
    C = int(v2.norm())
    B = int((v1 + v2).norm()) - A - C
    D = B * B - 4 * A * C  # < 0
    out = []
    tmax = math.isqrt((4 * A * target) // (-D))
    for t in range(-tmax, tmax + 1):
        disc_t = D * t * t + 4 * A * target
        if disc_t < 0:
            continue
        r = math.isqrt(disc_t)
        if r * r != disc_t:
            continue
        for sgn in ((1,) if r == 0 else (1, -1)):
            num = -B * t + sgn * r
            if num % (2 * A):
                continue
            s = num // (2 * A)
            x = [s * c1 + t * c2 for c1, c2 in zip(a.hnf.column(0), a.hnf.column(1))]
            out.append(x)
    return out


def _box_norm_matches(
    a: Ideal,
    target: int,
    units: Sequence[AlgebraicNumber],
    ceilings: Ceilings,
) -> list[list[int]]:
    """All x in the ideal with |N(x)| = target, found by a bounded coordinate box.

    The box covers a fundamental domain of the unit action on the norm-target
    surface: any generator can be unit-shifted until each |log sigma_i| stays
    within half the total log-spread of the fundamental units, so a complete
    scan of that box decides principality.
    """
    K = a.field
    n = K.degree
    rank = K.r1 + K.r2 - 1
    if len(units) < rank:
        from .errors import RankError

        raise RankError(f"box search needs {rank} fundamental units, got {len(units)}")
    rts = K.roots(200)
    with mpmath.workprec(120):
        spread = [mpmath.mpf(0)] * (K.r1 + K.r2)
        for u in units:
            vals = K.embeddings(u, 80)
            for i, v in enumerate(vals):
                spread[i] += abs(mpmath.log(abs(v))) / 2
        nth = mpmath.mpf(target) ** (mpmath.mpf(1) / n)
        # one uniform bound M: the unit-balanced generator has every
        # |sigma_i| <= N^(1/n) exp(spread_i) <= M, so the max-|sigma|
        # minimizers all satisfy max |sigma| <= M and the box is complete
        # for them (per-coordinate bounds would not guarantee that).
        emb_bound = nth * mpmath.exp(max(spread)) * mpmath.mpf("1.0001") + mpmath.mpf("1e-9")
        # real n x n embedding matrix of the ideal basis (complex rows split)
        rows = []
        for i, rho in enumerate(rts):
            vals = [
                sum(mpmath.mpf(c) * rho**k for k, c in enumerate(col)) for col in a.hnf.columns()
            ]
            if i < K.r1:
                rows.append([mpmath.mpf(v) for v in vals])
            else:
                rows.append([mpmath.mpc(v).real for v in vals])
                rows.append([mpmath.mpc(v).imag for v in vals])
        inv = mpmath.inverse(mpmath.matrix(rows))
        tbound = []
        for j in range(n):
            s = sum(abs(inv[j, k]) * emb_bound for k in range(n))
            tbound.append(int(mpmath.floor(s)) + 1)
    points = 1
    for tb in tbound:
        points *= 2 * tb + 1
    if points > ceilings.search_points:
        raise CeilingError(f"generator search box of {points} points", ceilings.search_points)
    cols = [a.hnf.column(j) for j in range(n)]
    out = []
    idx = [-tb for tb in tbound]
    norm_int = K.norm_int
    while True:
        coords = [sum(idx[j] * cols[j][i] for j in range(n)) for i in range(n)]
        if any(coords):
            if abs(norm_int(coords)) == target:
                out.append(coords)
        i = 0
        while i < n:
            idx[i] += 1
            if idx[i] <= tbound[i]:
                break
            idx[i] = -tbound[i]
            i += 1
        if i == n:
            return out


def norm_matches(
    a: Ideal,
    units: Sequence[AlgebraicNumber] = (),
    ceilings: Ceilings | None = None,
) -> list[list[int]]:
    """All candidate generators: elements of a with |N| = N(a) (complete set)."""
    ceilings = ceilings or Ceilings()
    K = a.field
    target = a.norm()
    if K.degree == 1:
        return [[target], [-target]]
    if K.degree == 2 and K.r1 == 0:
        return _imag_quadratic_norm_matches(a, target)
    return _box_norm_matches(a, target, units, ceilings)


def principal_test_generator(
    a: Ideal | FractionalIdeal,
    units: Sequence[AlgebraicNumber] = (),
    ceilings: Ceilings | None = None,
) -> AlgebraicNumber | None:
    """Canonical generator if principal, else None.

    A fractional ideal num/den is principal iff its integral numerator is.
    The canonical choice minimizes max |sigma(x)| over the complete set of
    norm matches, ties broken by the coordinate key (|c|, sign).
    """
    den = 1
    if isinstance(a, FractionalIdeal):
        den = a.den
        a = a.num
    K = a.field
    if a.is_one():
        gen = K.one
        return gen if den == 1 else K.element([Fraction(c, den) for c in gen.coords])
    if K.degree == 1:
        # the generators of (n) are +-n; the coordinate tie-break picks +n
        n = a.norm()
        return K.from_int(n) if den == 1 else K.element([Fraction(n, den)])
    # every match lies in the lattice of a, so |N(x)| = N(a) already forces
    # (x) = a: the matches ARE the generators.
    matches = norm_matches(a, units, ceilings)
    best = None
    best_key = None
    with mpmath.workprec(100):
        for coords in matches:
            x = K.element(coords)
            vals = K.embeddings(x, 64)
            mx = max(abs(v) for v in vals)
            key = (mx, _coord_sort_key(coords))
            if best_key is None or _emb_key_less(key, best_key):
                best, best_key = coords, key
    if best is None:
        return None
    gen = K.element(best)
    if den != 1:
        return K.element([Fraction(c, den) for c in gen.coords])
    return gen


def _emb_key_less(k1, k2) -> bool:
    m1, c1 = k1
    m2, c2 = k2
    # embedding magnitudes are floats: treat within-epsilon as ties
    if m1 < m2 * (1 - mpmath.mpf("1e-12")):
        return True
    if m2 < m1 * (1 - mpmath.mpf("1e-12")):
        return False
    return c1 < c2


def canonical_generator(
    a: Ideal | FractionalIdeal,
    units: Sequence[AlgebraicNumber] = (),
    ceilings: Ceilings | None = None,
) -> AlgebraicNumber:
    gen = principal_test_generator(a, units, ceilings)
    if gen is None:
        raise NotPrincipalError(f"{a!r} is not principal")
    return gen
