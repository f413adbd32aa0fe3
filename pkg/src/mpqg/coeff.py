"""Exact coefficient rings for the multiparameter kernel.

A RingDescriptor fixes the multiparameter matrix discipline (generic, of
integral type with exponent matrix B, or canonical B = DA) and the target
(formal, q = 1, or q = a primitive odd root of unity), and builds elements
of the corresponding exact ring:

  generic/formal      Laurent in s = q^(1/2) and u_ij = q_ij^(1/2) (i < j)
                      over Z, with q_ii^(1/2) = q^{d_i} and
                      q_ji^(1/2) = q^{d_i a_ij} q_ij^(-1/2) eliminated;
  integral/canonical  Laurent in s alone, q_ij = q^{b_ij};
  q = 1               Laurent in y_ij^(1/2) (generic) or plain rationals;
  q = eps             cyclotomic residues Q[x]/Phi_ell(x), with
                      eps^(1/2) := eps^((ell+1)/2), keeping the u_ij in
                      generic mode.

Formal elements carry a denominator that is a polynomial in s alone; every
denominator the algebra produces (relation (d) commutators, divided-power
factorials, pairing values) is of this shape because the diagonal bichar
values q_{beta,beta} are pure q-powers.  Fractions are kept gcd-reduced and
sign-canonical so equality is literal dict equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import _intpoly as ip

try:  # compiled kernel if the optional extension was built
    from . import _laurent_c as _lk

    KERNEL = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _laurent_py as _lk

    KERNEL = "python"

lmul = _lk.lmul
ladd_into = _lk.ladd_into
lscale = _lk.lscale
lshift = _lk.lshift
lmul_spoly = _lk.lmul_spoly


class SpecializationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic residues
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _phi(ell: int):
    return ip.cyclotomic_poly(ell)


@lru_cache(maxsize=None)
def _power_basis(ell: int):
    """Coordinates of x^k mod Phi_ell for k = 0..ell-1."""
    phi = _phi(ell)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(1)] + [Fraction(0)] * (deg - 1)
    for _ in range(ell):
        rows.append(tuple(cur))
        nxt = [Fraction(0)] + cur[:-1]
        top = cur[-1]
        if top:
            # x^deg = -(phi - x^deg)
            for i in range(deg):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(rows)


def _canon_q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


class Cyclotomic:
    """An element of Q[x]/Phi_ell(x) in power-basis coordinates."""

    __slots__ = ("ell", "co")

    def __init__(self, ell, co):
        deg = len(_phi(ell)) - 1
        co = list(co)
        co = co + [0] * (deg - len(co))
        self.ell = ell
        self.co = tuple(_canon_q(Fraction(c)) for c in co[:deg])

    @classmethod
    def from_scalar(cls, ell, c):
        return cls(ell, (c,))

    @classmethod
    def root_power(cls, ell, k):
        return cls(ell, _power_basis(ell)[k % ell])

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.ell != self.ell:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_scalar(self.ell, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.ell, (a + b for a, b in zip(self.co, o.co)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.ell, (-a for a in self.co))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.ell, (a - b for a, b in zip(self.co, o.co)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        deg = len(self.co)
        prod = [0] * (2 * deg - 1)
        for i, a in enumerate(self.co):
            if not a:
                continue
            for j, b in enumerate(o.co):
                if b:
                    prod[i + j] += a * b
        phi = _phi(self.ell)
        for k in range(len(prod) - 1, deg - 1, -1):
            c = prod[k]
            if not c:
                continue
            prod[k] = 0
            for j in range(deg):
                prod[k - deg + j] -= c * phi[j]
        return Cyclotomic(self.ell, prod[:deg])

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        out = Cyclotomic.from_scalar(self.ell, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self):
        g, s, _ = ip.qgcd_ext(tuple(Fraction(c) for c in self.co), _phi(self.ell))
        if len(g) != 1:
            raise ZeroDivisionError("non-invertible cyclotomic element")
        c = g[0]
        return Cyclotomic(self.ell, tuple(x / c for x in s))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_scalar(self.ell, other)
        return (
            isinstance(other, Cyclotomic)
            and self.ell == other.ell
            and self.co == other.co
        )

    def __bool__(self):
        return any(self.co)

    def __hash__(self):
        return hash((self.ell, self.co))

    @property
    def is_integral(self) -> bool:
        return all(
            isinstance(c, int) or c.denominator == 1 for c in self.co
        )

    def __repr__(self):
        return f"Cyclotomic({self.ell}, {list(self.co)})"


# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------

MODES = ("generic", "integral", "canonical")
TARGETS = ("formal", "one", "eps")


class RingDescriptor:
    """Coefficient-ring choice for one Cartan datum."""

    def __init__(self, datum, mode="generic", target="formal", b=None, ell=None):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        self.datum = datum
        self.mode = mode
        self.target = target
        t = datum.theta
        if mode == "canonical":
            b = tuple(
                tuple(datum.d[i] * datum.A[i][j] for j in range(t))
                for i in range(t)
            )
        elif mode == "integral":
            if b is None:
                raise ValueError("integral mode needs the exponent matrix b")
            b = tuple(tuple(row) for row in b)
            for i in range(t):
                if b[i][i] != 2 * datum.d[i]:
                    raise ValueError("b_ii must equal 2 d_i")
                for j in range(t):
                    if b[i][j] + b[j][i] != 2 * datum.d[i] * datum.A[i][j]:
                        raise ValueError("b_ij + b_ji must equal 2 d_i a_ij")
        else:
            b = None
        self.b = b
        if target == "eps":
            if ell is None or ell < 3 or ell % 2 == 0:
                raise ValueError("eps target needs odd ell >= 3")
            if any(gcd(ell, d) != 1 for d in datum.d):
                raise ValueError("ell must be coprime to the symmetrizers")
        else:
            ell = None
        self.ell = ell
        self.pairs = tuple(
            (i, j) for i in range(t) for j in range(t) if i < j
        )
        if target == "one":
            self.nvars = len(self.pairs) if mode == "generic" else 0
        elif mode == "generic":
            self.nvars = (1 if target == "formal" else 0) + len(self.pairs)
        else:
            self.nvars = 1 if target == "formal" else 0
        self._pair_slot = {}
        off = 1 if target == "formal" else 0
        if mode == "generic":
            for n, p in enumerate(self.pairs):
                self._pair_slot[p] = off + n
        if target == "eps":
            self.eps = Cyclotomic.root_power(ell, 1)
            self.eps_half = Cyclotomic.root_power(ell, (ell + 1) // 2)
        else:
            self.eps = None
            self.eps_half = None

    @property
    def is_strongly_integral(self) -> bool:
        if self.b is None:
            return False
        t = self.datum.theta
        return all(
            self.b[i][j] % self.datum.d[i] == 0
            and self.b[i][j] % self.datum.d[j] == 0
            for i in range(t)
            for j in range(t)
        )

    def cache_key(self) -> str:
        return (
            f"{self.datum.name}|{self.mode}|{self.target}"
            f"|b={self.b}|ell={self.ell}"
        )

    def __eq__(self, other):
        return (
            isinstance(other, RingDescriptor)
            and self.cache_key() == other.cache_key()
        )

    def __hash__(self):
        return hash(self.cache_key())

    def __repr__(self):
        return f"RingDescriptor({self.cache_key()})"

    # -- scalar coercion ----------------------------------------------------

    def coerce_scalar(self, c):
        if self.target == "eps":
            if isinstance(c, Cyclotomic):
                if c.ell != self.ell:
                    raise ValueError("mixed cyclotomic orders")
                return c
            return Cyclotomic.from_scalar(self.ell, c)
        if isinstance(c, Fraction):
            return _canon_q(c)
        if isinstance(c, int):
            return c
        raise TypeError(f"bad scalar {c!r}")

    def _scalar_one(self):
        return self.coerce_scalar(1)

    # -- element factories ---------------------------------------------------

    def zero(self) -> "RingElem":
        return RingElem(self, {}, (1,), _normalized=True)

    def one(self) -> "RingElem":
        return self.from_scalar(1)

    def from_scalar(self, c) -> "RingElem":
        c = self.coerce_scalar(c)
        if not c:
            return self.zero()
        num = {(0,) * self.nvars: c}
        return RingElem(self, num, (1,))

    def monomial(self, exp, c=1) -> "RingElem":
        c = self.coerce_scalar(c)
        if not c:
            return self.zero()
        return RingElem(self, {tuple(exp): c}, (1,))

    def q_half_power(self, n: int) -> "RingElem":
        """q^(n/2) as an element (s^n)."""
        if self.target == "formal":
            exp = [0] * self.nvars
            exp[0] = n
            return self.monomial(exp)
        if self.target == "one":
            return self.one()
        return self.from_scalar(self.eps_half ** n)

    def q(self, n: int = 1) -> "RingElem":
        return self.q_half_power(2 * n)

    def qij_half_power(self, i: int, j: int, h: int) -> "RingElem":
        """q_ij^(h/2) under the square-root elimination rules."""
        if h == 0:
            return self.one()
        d, A = self.datum.d, self.datum.A
        if self.mode != "generic":
            return self.q_half_power(self.b[i][j] * h)
        if i == j:
            return self.q_half_power(2 * d[i] * h)
        exp = [0] * self.nvars
        if i < j:
            exp[self._pair_slot[(i, j)]] = h
            return self.monomial(exp)
        # q_ji^(1/2) = q^{d_j a_ji} u_ji^{-1} for j < i
        exp[self._pair_slot[(j, i)]] = -h
        mono = self.monomial(exp)
        return mono * self.q_half_power(2 * d[j] * A[j][i] * h)

    def qij(self, i: int, j: int, n: int = 1) -> "RingElem":
        return self.qij_half_power(i, j, 2 * n)

    def bichar(self, mu, nu) -> "RingElem":
        """The bicharacter q_{mu,nu} = prod q_ij^{mu_i nu_j}."""
        return self.bichar_half(mu, nu) ** 2

    def bichar_half(self, mu, nu) -> "RingElem":
        out = self.one()
        t = self.datum.theta
        for i in range(t):
            if not mu[i]:
                continue
            for j in range(t):
                if nu[j]:
                    out = out * self.qij_half_power(i, j, mu[i] * nu[j])
        return out

    def q_root(self, beta) -> "RingElem":
        """q_beta = q^{d_beta}."""
        return self.q(self.datum.d_root(beta))

    def with_target(self, target, ell=None) -> "RingDescriptor":
        return RingDescriptor(
            self.datum, self.mode, target, b=self.b, ell=ell
        )


# ---------------------------------------------------------------------------
# ring elements
# ---------------------------------------------------------------------------


def _num_neg(num):
    return {k: -v for k, v in num.items()}


class RingElem:
    """A fraction num/den; den is a polynomial in s alone, (1,) off formal."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den=(1,), _normalized=False):
        self.ring = ring
        if _normalized:
            self.num = num
            self.den = den
            return
        num = {k: v for k, v in num.items() if v}
        if ring.target != "formal":
            if den != (1,):
                raise ValueError("denominators only exist at the formal level")
            self.num = num
            self.den = (1,)
            return
        self.num, self.den = _normalize_formal(num, den)

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_monomial(self) -> bool:
        return len(self.num) == 1 and self.den == (1,)

    def monomial_exp(self):
        if len(self.num) != 1:
            raise ValueError("not a monomial")
        return next(iter(self.num))

    def as_scalar(self):
        """The coefficient when the element is a constant; raises otherwise."""
        if not self.num:
            return self.ring.coerce_scalar(0)
        if len(self.num) != 1:
            raise ValueError("not a constant")
        k, v = next(iter(self.num.items()))
        if any(k):
            raise ValueError("not a constant")
        if self.den != (1,):
            if len(self.den) != 1:
                raise ValueError("not a constant")
            return Fraction(v, self.den[0])
        return v

    def is_laurent(self) -> bool:
        """True when the denominator is trivial."""
        return self.den == (1,)

    def is_q_laurent(self) -> bool:
        """True when the element lies in Z[q^{+-1}] (integral coefficients,
        even powers of s, no multiparameter variables)."""
        if self.den != (1,):
            return False
        for k, v in self.num.items():
            if isinstance(v, Fraction) and v.denominator != 1:
                return False
            if isinstance(v, Cyclotomic) and not v.is_integral:
                return False
            if self.ring.target == "formal":
                if k[0] % 2:
                    return False
                if any(k[1:]):
                    return False
            elif any(k):
                return False
        return True

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other):
        if isinstance(other, RingElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("mixed rings")
            return other
        return self.ring.from_scalar(other)

    def __add__(self, other):
        o = self._check(other)
        if self.den == o.den:
            num = dict(self.num)
            ladd_into(num, o.num)
            return RingElem(self.ring, num, self.den)
        num = lmul_spoly(self.num, o.den)
        ladd_into(num, lmul_spoly(o.num, self.den))
        return RingElem(self.ring, num, ip.pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RingElem(
            self.ring, _num_neg(self.num), self.den, _normalized=True
        )

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        return RingElem(
            self.ring, lmul(self.num, o.num), ip.pmul(self.den, o.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        if not o.num:
            raise ZeroDivisionError
        ring = self.ring
        if ring.target != "formal":
            if len(o.num) != 1:
                raise ValueError("division by a non-monomial off formal")
            k, v = next(iter(o.num.items()))
            if isinstance(v, Cyclotomic):
                vi = v.inv()
            else:
                vi = Fraction(1, 1) / Fraction(v)
            num = lshift(self.num, tuple(-x for x in k))
            return RingElem(ring, lscale(num, ring.coerce_scalar(vi)), (1,))
        # divisor of shape monomial * (polynomial in s): fold into the den
        uparts = {k[1:] for k in o.num}
        if len(uparts) == 1:
            u = next(iter(uparts))
            sexps = sorted(k[0] for k in o.num)
            m = sexps[0]
            poly = [0] * (sexps[-1] - m + 1)
            for k, v in o.num.items():
                poly[k[0] - m] = v
            shift = tuple([-m] + [-x for x in u])
            num = lshift(lmul_spoly(self.num, o.den), shift)
            return RingElem(ring, num, ip.pmul(self.den, tuple(poly)))
        # otherwise the quotient must divide out exactly
        num = _exact_div(lmul_spoly(self.num, o.den), o.num)
        return RingElem(ring, num, self.den)

    def __rtruediv__(self, other):
        return self._check(other) / self

    def inv(self) -> "RingElem":
        return self.ring.one() / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            try:
                other = self.ring.from_scalar(other)
            except (TypeError, ValueError):
                return NotImplemented
        if not isinstance(other, RingElem):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash(
            (self.ring.cache_key(), self.den, frozenset(self.num.items()))
        )

    def __repr__(self):
        return f"<{to_text(self)}>"


def _exact_div(a: dict, b: dict) -> dict:
    """Exact division of Laurent numerators; raises ValueError if inexact.

    Per-slot minimal exponents are additive under multiplication, so both
    operands shift to honest polynomials whose quotient, when it exists,
    is again a polynomial; lex-descending division by the single divisor
    then either terminates exactly or proves the quotient does not exist.
    """
    if not b:
        raise ZeroDivisionError
    if not a:
        return {}
    n = len(next(iter(b)))
    amin = [min(k[i] for k in a) for i in range(n)]
    bmin = [min(k[i] for k in b) for i in range(n)]
    shift = tuple(x - y for x, y in zip(amin, bmin))
    aa = {
        tuple(x - m for x, m in zip(k, amin)): Fraction(v)
        for k, v in a.items()
    }
    bb = {tuple(x - m for x, m in zip(k, bmin)): v for k, v in b.items()}
    blead = max(bb)
    bc = bb[blead]
    out = {}
    while aa:
        alead = max(aa)
        e = tuple(x - y for x, y in zip(alead, blead))
        if any(x < 0 for x in e):
            raise ValueError("division is not exact")
        c = aa[alead] / bc
        out[e] = c
        for k, v in bb.items():
            kk = tuple(x + y for x, y in zip(k, e))
            w = aa.get(kk, 0) - c * v
            if w:
                aa[kk] = w
            elif kk in aa:
                del aa[kk]
    return {tuple(x + y for x, y in zip(k, shift)): v for k, v in out.items()}


def _normalize_formal(num, den):
    if not num:
        return {}, (1,)
    den = ip.pnorm(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    # clear fractional coefficients into the denominator
    D = 1
    for v in num.values():
        if isinstance(v, Fraction):
            D = lcm(D, v.denominator)
    if D != 1:
        num = {
            k: int(v * D) if isinstance(v, Fraction) else v * D
            for k, v in num.items()
        }
        den = ip.pscale(den, D)
    # strip a pure s-power from the denominator
    k0 = 0
    while not den[k0]:
        k0 += 1
    if k0:
        den = den[k0:]
        num = {(k[0] - k0,) + k[1:]: v for k, v in num.items()}
    if den[-1] < 0:
        den = ip.pneg(den)
        num = _num_neg(num)
    if den == (1,):
        return num, den
    # regroup the numerator into s-polynomials per multiparameter part
    groups = {}
    for k, v in num.items():
        groups.setdefault(k[1:], {})[k[0]] = v
    polys = {}
    for u, g in groups.items():
        m = min(g)
        p = [0] * (max(g) - m + 1)
        for e, v in g.items():
            p[e - m] = v
        polys[u] = (m, tuple(p))
    g = den
    for _, (_, p) in polys.items():
        g = ip.pgcd(g, p)
        if g == (1,):
            break
    if g != (1,):
        den = ip.pdivexact(den, g)
        num = {}
        for u, (m, p) in polys.items():
            qp = ip.pdivexact(p, g)
            for e, v in enumerate(qp):
                if v:
                    num[(m + e,) + u] = v
    if den[-1] < 0:
        den = ip.pneg(den)
        num = _num_neg(num)
    return num, den


# ---------------------------------------------------------------------------
# q-arithmetic
# ---------------------------------------------------------------------------


def q_int(n: int, p: RingElem) -> RingElem:
    """(n)_p = 1 + p + ... + p^(n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = p.ring.zero()
    pk = p.ring.one()
    for _ in range(n):
        out = out + pk
        pk = pk * p
    return out


def q_int_factorial(n: int, p: RingElem) -> RingElem:
    out = p.ring.one()
    for k in range(2, n + 1):
        out = out * q_int(k, p)
    return out


def q_bracket(n: int, p: RingElem) -> RingElem:
    """[n]_p = (p^n - p^-n)/(p - p^-1); needs p invertible."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = p.ring.zero()
    for k in range(n):
        out = out + p ** (n - 1 - 2 * k)
    return out


def q_bracket_factorial(n: int, p: RingElem) -> RingElem:
    out = p.ring.one()
    for k in range(2, n + 1):
        out = out * q_bracket(k, p)
    return out


def q_binomial(n: int, k: int, p: RingElem) -> RingElem:
    """Gaussian binomial (n over k)_p for n >= 0, by the Pascal recursion."""
    if k < 0 or k > n:
        return p.ring.zero()
    row = [p.ring.one()]
    for m in range(1, n + 1):
        new = [p.ring.one()]
        for j in range(1, m):
            new.append(row[j - 1] + (p ** j) * row[j])
        new.append(p.ring.one())
        row = new
    return row[k]


def q_binomial_general(c: int, t: int, p: RingElem) -> RingElem:
    """(c over t)_p for any integer c: prod_{s=1..t} (p^{c+1-s}-1)/(p^s-1)."""
    if t < 0:
        return p.ring.zero()
    out = p.ring.one()
    for s in range(1, t + 1):
        out = out * (p ** (c + 1 - s) - 1)
        out = out / (p ** s - 1)
    return out


def q_bracket_binomial(n: int, k: int, p: RingElem) -> RingElem:
    """Balanced binomial [n over k]_p via bracket factorials."""
    if k < 0 or k > n:
        return p.ring.zero()
    num = q_bracket_factorial(n, p)
    den = q_bracket_factorial(k, p) * q_bracket_factorial(n - k, p)
    return num / den


def bichar(ring: RingDescriptor, mu, nu) -> RingElem:
    return ring.bichar(mu, nu)


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------


def specialize_elem(elem: RingElem, target: RingDescriptor) -> RingElem:
    """Push a formal element to a q = 1 or q = eps ring of the same mode."""
    ring = elem.ring
    if ring.target != "formal":
        raise SpecializationError("can only specialize formal elements")
    if target.mode != ring.mode or target.datum is not ring.datum:
        raise SpecializationError("target ring has different mode or datum")
    if target.target == "formal":
        raise SpecializationError("target must be q = 1 or q = eps")
    if target.target == "one":
        denv = ip.peval(elem.den, 1)
        if denv == 0:
            raise SpecializationError("denominator vanishes at q = 1")
        num = {}
        for k, v in elem.num.items():
            key = k[1:]
            c = num.get(key, 0) + Fraction(v, denv)
            num[key] = c
        num = {k: _canon_q(v) for k, v in num.items() if v}
        return RingElem(target, num, (1,))
    # eps
    sval = target.eps_half
    denv = ip.peval(elem.den, sval)
    if isinstance(denv, int):
        denv = Cyclotomic.from_scalar(target.ell, denv)
    if not denv:
        raise SpecializationError("denominator vanishes at q = eps")
    dinv = denv.inv()
    num = {}
    for k, v in elem.num.items():
        key = k[1:]
        c = (sval ** k[0]) * v * dinv
        acc = num.get(key)
        acc = c if acc is None else acc + c
        if acc:
            num[key] = acc
        elif key in num:
            del num[key]
    return RingElem(target, num, (1,))


# ---------------------------------------------------------------------------
# text grammar and JSON forms
# ---------------------------------------------------------------------------


def _var_names(ring: RingDescriptor):
    names = []
    if ring.target == "formal":
        names.append("q")
    if ring.mode == "generic" and ring.target != "one":
        for i, j in ring.pairs:
            names.append(f"q{i + 1}{j + 1}")
    elif ring.mode == "generic" and ring.target == "one":
        for i, j in ring.pairs:
            names.append(f"y{i + 1}{j + 1}")
    return names


def _exp_text(name: str, e: int) -> str:
    # e counts half-steps of the printed symbol
    if e % 2 == 0:
        n = e // 2
        return name if n == 1 else f"{name}^{n}"
    return f"{name}^({e}/2)"


def _scalar_text(v) -> str:
    if isinstance(v, Cyclotomic):
        parts = []
        for k, c in enumerate(v.co):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mon = "e" if k == 1 else f"e^{k}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return s if len(parts) == 1 and "+" not in s else f"({s})"
    return str(v)


def _num_text(ring, num) -> str:
    if not num:
        return "0"
    names = _var_names(ring)
    terms = []
    for k in sorted(num, key=lambda t: t[::-1], reverse=True):
        v = num[k]
        factors = [
            _exp_text(names[i], e) for i, e in enumerate(k) if e
        ]
        coeff = _scalar_text(v)
        if factors and coeff == "1":
            text = "*".join(factors)
        elif factors and coeff == "-1":
            text = "-" + "*".join(factors)
        elif factors:
            text = "*".join([coeff] + factors)
        else:
            text = coeff
        terms.append(text)
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def to_text(elem: RingElem) -> str:
    num = _num_text(elem.ring, elem.num)
    if elem.den == (1,):
        return num
    den = _num_text(elem.ring, {(e,) + (0,) * (elem.ring.nvars - 1): c
                                for e, c in enumerate(elem.den) if c})
    return f"({num}) / ({den})"


class _Tok:
    def __init__(self, kind, val):
        self.kind = kind
        self.val = val


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(text[i:j])))
            i = j
        elif c.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum()):
                j += 1
            toks.append(_Tok("name", text[i:j]))
            i = j
        elif c in "+-*/^()":
            toks.append(_Tok(c, c))
            i += 1
        else:
            raise ValueError(f"bad character {c!r} in ring element")
    toks.append(_Tok("end", None))
    return toks


class _Parser:
    def __init__(self, ring, toks):
        self.ring = ring
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind and t.kind != kind:
            raise ValueError(f"expected {kind}, got {t.kind}")
        self.pos += 1
        return t

    def parse(self):
        out = self.expr()
        self.take("end")
        return out

    def expr(self):
        neg = False
        if self.peek().kind in "+-":
            neg = self.take().kind == "-"
        out = self.term()
        if neg:
            out = -out
        while self.peek().kind in "+-":
            op = self.take().kind
            t = self.term()
            out = out - t if op == "-" else out + t
        return out

    def term(self):
        out = self.atom()
        while self.peek().kind in "*/":
            op = self.take().kind
            a = self.atom()
            out = out / a if op == "/" else out * a
        return out

    def atom(self):
        t = self.peek()
        if t.kind == "name":
            self.take()
            half = 2
            if self.peek().kind == "^":
                self.take()
                half = self.exponent()
            return self.var_power_name(t.val, half)
        if t.kind == "int":
            self.take()
            base = self.ring.from_scalar(t.val)
        elif t.kind == "(":
            self.take()
            base = self.expr()
            self.take(")")
        elif t.kind == "-":
            self.take()
            return -self.atom()
        else:
            raise ValueError(f"unexpected token {t.kind}")
        if self.peek().kind == "^":
            self.take()
            half = self.exponent()
            if half % 2:
                raise ValueError("fractional power of a non-variable")
            base = base ** (half // 2)
        return base

    def exponent(self):
        """Exponent in half-steps: n -> 2n, (k/2) -> k."""
        t = self.peek()
        if t.kind == "int":
            self.take()
            return 2 * t.val
        if t.kind == "-":
            self.take()
            n = self.take("int").val
            return -2 * n
        if t.kind == "(":
            self.take()
            sign = 1
            if self.peek().kind == "-":
                self.take()
                sign = -1
            n = self.take("int").val
            if self.peek().kind == "/":
                self.take()
                d = self.take("int").val
                if d != 2:
                    raise ValueError("only half-integer exponents supported")
                self.take(")")
                return sign * n
            self.take(")")
            return sign * 2 * n
        raise ValueError("bad exponent")

    def var_power_name(self, name, half):
        ring = self.ring
        if name == "q":
            return ring.q_half_power(half)
        if name == "e" and ring.target == "eps":
            if half % 2:
                raise ValueError("fractional power of e")
            return ring.from_scalar(ring.eps ** (half // 2))
        if len(name) == 3 and name[0] in "qy" and name[1:].isdigit():
            i, j = int(name[1]) - 1, int(name[2]) - 1
            return ring.qij_half_power(i, j, half)
        raise ValueError(f"unknown variable {name!r}")


def parse_elem(ring: RingDescriptor, text: str) -> RingElem:
    """Parse the textual grammar, e.g. 'q^-1*q12^(1/2) + 2'."""
    return _Parser(ring, _tokenize(text)).parse()


def _scalar_json(v):
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, Cyclotomic):
        return {"cyclo": [_scalar_json(_canon_q(Fraction(c))) for c in v.co],
                "ell": v.ell}
    raise TypeError(v)


def _scalar_unjson(ring, obj):
    if isinstance(obj, dict):
        co = [Fraction(c) if isinstance(c, str) else c for c in obj["cyclo"]]
        return Cyclotomic(obj["ell"], co)
    if isinstance(obj, str):
        return Fraction(obj)
    return obj


def elem_to_json(elem: RingElem) -> dict:
    names = _var_names(elem.ring)
    terms = []
    for k in sorted(elem.num, reverse=True):
        e = {}
        for i, x in enumerate(k):
            if x:
                e[names[i]] = str(x // 2) if x % 2 == 0 else f"{x}/2"
        terms.append({"c": _scalar_json(elem.num[k]), "e": e})
    out = {"terms": terms}
    if elem.den != (1,):
        out["den"] = list(elem.den)
    return out


def elem_from_json(ring: RingDescriptor, obj: dict) -> RingElem:
    names = _var_names(ring)
    slot = {n: i for i, n in enumerate(names)}
    num = {}
    for t in obj.get("terms", ()):
        exp = [0] * ring.nvars
        for name, v in t.get("e", {}).items():
            if isinstance(v, str) and "/" in v:
                h = int(v.split("/")[0])
            else:
                h = 2 * int(v)
            exp[slot[name]] = h
        num[tuple(exp)] = ring.coerce_scalar(_scalar_unjson(ring, t["c"]))
    den = tuple(obj.get("den", (1,)))
    return RingElem(ring, num, den)
