"""Free noncommutative layer: letters, words, tensors, algebra maps.

Words are tuples of letter ids drawn from an Alphabet built on a Cartan
datum.  The letter blocks sit in the straightening order used everywhere
downstream:

    F letters (descending convex order of positive roots),
    toral letters L_1^+, L_1^-, ..., L_t^-, K_1^+, ..., K_t^-,
    E letters (ascending convex order).

An NCPoly is a finite sum of words with RingElem coefficients over an
algebra context; the context decides what multiplication of two words
means (free concatenation here, straightening in the rewriting layer,
which plugs in through the same mul_words hook).
"""

from __future__ import annotations

from fractions import Fraction

from . import coeff as cf
from .cartan import positive_roots

F_KIND, L_KIND, K_KIND, E_KIND = "F", "L", "K", "E"


class Alphabet:
    """Letter bookkeeping for one Cartan datum."""

    def __init__(self, datum):
        self.datum = datum
        self.roots = positive_roots(datum)
        N, t = len(self.roots), datum.theta
        self.nroots = N
        self.size = 2 * N + 4 * t
        self._kind = [None] * self.size
        self._index = [None] * self.size
        self._sign = [0] * self.size
        # F block: F_{beta^N} first
        for r in range(N):
            lid = N - 1 - r
            self._kind[lid] = F_KIND
            self._index[lid] = r
        # toral blocks: all L, then all K; + before -
        for i in range(t):
            for s, sgn in enumerate((1, -1)):
                lid = N + 2 * i + s
                self._kind[lid] = L_KIND
                self._index[lid] = i
                self._sign[lid] = sgn
                lid = N + 2 * t + 2 * i + s
                self._kind[lid] = K_KIND
                self._index[lid] = i
                self._sign[lid] = sgn
        # E block: ascending convex order
        for r in range(N):
            lid = N + 4 * t + r
            self._kind[lid] = E_KIND
            self._index[lid] = r
        self._simple_root_index = {}
        for r, beta in enumerate(self.roots):
            if beta.is_simple:
                self._simple_root_index[beta.index(1)] = r
        # root height per letter, zero on the toral block
        self._height = [0] * self.size
        for r in range(N):
            h = self.roots[r].height
            self._height[self.E(r)] = h
            self._height[self.F(r)] = h
        # expansion of each letter into simple letters, via the bracket
        # decomposition of composite roots; toral letters stand for themselves
        self._phi = [None] * self.size
        for lid in range(self.size):
            if self._kind[lid] in (L_KIND, K_KIND):
                self._phi[lid] = (lid,)
        for r in sorted(range(N), key=lambda r: self.roots[r].height):
            if self.roots[r].is_simple:
                self._phi[self.E(r)] = (self.E(r),)
                self._phi[self.F(r)] = (self.F(r),)
            else:
                h, l = datum.decomposition[r]
                self._phi[self.E(r)] = self._phi[self.E(h)] + self._phi[self.E(l)]
                self._phi[self.F(r)] = self._phi[self.F(h)] + self._phi[self.F(l)]
        self._key_cache = {}

    # -- letter lookup -------------------------------------------------------

    def F(self, r: int) -> int:
        return self.nroots - 1 - r

    def E(self, r: int) -> int:
        return self.nroots + 4 * self.datum.theta + r

    def L(self, i: int, sign: int = 1) -> int:
        return self.nroots + 2 * i + (0 if sign > 0 else 1)

    def K(self, i: int, sign: int = 1) -> int:
        t = self.datum.theta
        return self.nroots + 2 * t + 2 * i + (0 if sign > 0 else 1)

    def F_simple(self, i: int) -> int:
        return self.F(self._simple_root_index[i])

    def E_simple(self, i: int) -> int:
        return self.E(self._simple_root_index[i])

    def kind(self, lid: int) -> str:
        return self._kind[lid]

    def index(self, lid: int) -> int:
        return self._index[lid]

    def sign(self, lid: int) -> int:
        return self._sign[lid]

    def root(self, lid: int):
        return self.roots[self._index[lid]]

    def is_toral(self, lid: int) -> bool:
        return self._kind[lid] in (L_KIND, K_KIND)

    def inverse_toral(self, lid: int) -> int:
        k = self._kind[lid]
        if k == L_KIND:
            return self.L(self._index[lid], -self._sign[lid])
        if k == K_KIND:
            return self.K(self._index[lid], -self._sign[lid])
        raise ValueError("only toral letters are invertible")

    def word_key(self, w):
        """Straightening order: graded disorder count on the expansion.

        Each word is flattened by expanding composite root letters through
        their bracket decompositions.  The key compares, in order:

        * expansion length, so mixed commutation terms (which trade a pair
          of root letters for one toral letter) are strictly smaller;
        * the sorted expansion, so words of different simple-letter content
          never reach the inversion count;
        * the number of inversions of the expansion, which makes every
          out-of-order pair larger than its straightening: the sorted swap
          and the in-between correction products all flatten to fewer
          inversions over the same multiset;
        * word length, so a composite letter beats its own spelled-out
          bracket (same expansion, shorter word);
        * the word itself.

        Inversion counts shift by a constant under concatenation once the
        multisets agree, sorted multisets compare stably under union, and
        the other components are additive, so the key is a total,
        concatenation-compatible well order.
        """
        key = self._key_cache.get(w)
        if key is None:
            flat = []
            for a in w:
                flat.extend(self._phi[a])
            inv = 0
            for i in range(len(flat)):
                x = flat[i]
                for j in range(i + 1, len(flat)):
                    if x > flat[j]:
                        inv += 1
            key = (len(flat), tuple(sorted(flat)), inv, len(w), w)
            self._key_cache[w] = key
        return key

    # -- degrees ---------------------------------------------------------------

    def q_degree(self, word) -> tuple:
        """Root-lattice degree: E letters count +root, F letters -root."""
        t = self.datum.theta
        out = [0] * t
        for lid in word:
            k = self._kind[lid]
            if k == E_KIND:
                for j, x in enumerate(self.roots[self._index[lid]]):
                    out[j] += x
            elif k == F_KIND:
                for j, x in enumerate(self.roots[self._index[lid]]):
                    out[j] -= x
        return tuple(out)

    def bidegree(self, word) -> tuple:
        """Group bigrading: K_i, L_i have degree (a_i, a_i), E letters
        (0, root), F letters (root, 0)."""
        t = self.datum.theta
        eta = [0] * t
        etap = [0] * t
        for lid in word:
            k = self._kind[lid]
            idx = self._index[lid]
            if k == E_KIND:
                for j, x in enumerate(self.roots[idx]):
                    etap[j] += x
            elif k == F_KIND:
                for j, x in enumerate(self.roots[idx]):
                    eta[j] += x
            else:
                s = self._sign[lid]
                eta[idx] += s
                etap[idx] += s
        return tuple(eta), tuple(etap)

    def toral_gamma(self, word):
        """K_mu L_nu -> (mu, nu); None when the word has E or F letters."""
        t = self.datum.theta
        mu = [0] * t
        nu = [0] * t
        for lid in word:
            k = self._kind[lid]
            if k == K_KIND:
                mu[self._index[lid]] += self._sign[lid]
            elif k == L_KIND:
                nu[self._index[lid]] += self._sign[lid]
            else:
                return None
        return tuple(mu), tuple(nu)

    # -- names -------------------------------------------------------------------

    def letter_name(self, lid: int) -> str:
        k = self._kind[lid]
        idx = self._index[lid]
        if k in (K_KIND, L_KIND):
            base = f"{k}{idx + 1}"
            return base if self._sign[lid] > 0 else f"{base}^-1"
        beta = self.roots[idx]
        if beta.is_simple:
            return f"{k}{beta.index(1) + 1}"
        return f"{k}root({idx + 1})"


def word_name(alphabet: Alphabet, word) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        name = alphabet.letter_name(word[i])
        if n == 1:
            parts.append(name)
        elif name.endswith("^-1"):
            parts.append(f"{name[:-3]}^-{n}")
        else:
            parts.append(f"{name}^{n}")
        i = j
    return "*".join(parts)


class FreeAlgebra:
    """Context for NCPoly arithmetic; multiplication is concatenation."""

    def __init__(self, datum, ring: cf.RingDescriptor, alphabet: Alphabet = None):
        if ring.datum is not datum:
            raise ValueError("ring was built on a different datum")
        self.datum = datum
        self.ring = ring
        self.alphabet = alphabet if alphabet is not None else Alphabet(datum)

    def mul_words(self, w1, w2):
        """Product of two basis words as {word: RingElem}."""
        return {w1 + w2: self.ring.one()}

    # -- element factories ------------------------------------------------------

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def one(self) -> "NCPoly":
        return NCPoly(self, {(): self.ring.one()})

    def scalar(self, c) -> "NCPoly":
        c = self._coerce(c)
        return NCPoly(self, {(): c} if c else {})

    def word(self, letters, c=1) -> "NCPoly":
        c = self._coerce(c)
        return NCPoly(self, {tuple(letters): c} if c else {})

    def gen(self, lid: int) -> "NCPoly":
        return self.word((lid,))

    def _coerce(self, c) -> cf.RingElem:
        if isinstance(c, cf.RingElem):
            if c.ring != self.ring:
                raise ValueError("coefficient from a different ring")
            return c
        return self.ring.from_scalar(c)

    # -- named generators (parser hooks) -------------------------------------------

    def E(self, i: int) -> "NCPoly":
        return self.gen(self.alphabet.E_simple(i))

    def F(self, i: int) -> "NCPoly":
        return self.gen(self.alphabet.F_simple(i))

    def K(self, i: int, sign: int = 1) -> "NCPoly":
        return self.gen(self.alphabet.K(i, sign))

    def L(self, i: int, sign: int = 1) -> "NCPoly":
        return self.gen(self.alphabet.L(i, sign))

    def E_root(self, r: int) -> "NCPoly":
        return self.gen(self.alphabet.E(r))

    def F_root(self, r: int) -> "NCPoly":
        return self.gen(self.alphabet.F(r))

    def toral_monomial(self, mu, nu) -> "NCPoly":
        """K_mu L_nu as a single word, exponents in normal order."""
        w = []
        t = self.datum.theta
        for i in range(t):
            w.extend([self.alphabet.L(i, 1 if nu[i] > 0 else -1)] * abs(nu[i]))
        for i in range(t):
            w.extend([self.alphabet.K(i, 1 if mu[i] > 0 else -1)] * abs(mu[i]))
        w.sort()
        return self.word(w)

    def divided_E(self, i: int, n: int) -> "NCPoly":
        """E_i^(n) = E_i^n / (n)!_{q_ii}."""
        qi = self.ring.qij(i, i)
        return self.E(i) ** n / cf.q_int_factorial(n, qi)

    def divided_F(self, i: int, n: int) -> "NCPoly":
        qi = self.ring.qij(i, i)
        return self.F(i) ** n / cf.q_int_factorial(n, qi)

    def toral_binomial(self, kind: str, i: int, c: int, t: int) -> "NCPoly":
        """(M; c over t) at base q_ii, M = K_i or L_i."""
        qi = self.ring.qij(i, i)
        M = self.K(i) if kind == K_KIND else self.L(i)
        out = self.one()
        for s in range(1, t + 1):
            out = out * (M * qi ** (c - s + 1) - 1)
        return out / cf.q_int_factorial(t, qi)

    def parse(self, text: str) -> "NCPoly":
        return parse_expr(self, text)


def _acc(terms: dict, word, c) -> None:
    v = terms.get(word)
    if v is None:
        if c:
            terms[word] = c
    else:
        v = v + c
        if v:
            terms[word] = v
        else:
            del terms[word]


class NCPoly:
    """Finite sum of words with ring coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms: dict):
        self.alg = alg
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff_of(self, word) -> cf.RingElem:
        return self.terms.get(tuple(word), self.alg.ring.zero())

    def support(self):
        return set(self.terms)

    def as_scalar(self) -> cf.RingElem:
        if not self.terms:
            return self.alg.ring.zero()
        if set(self.terms) != {()}:
            raise ValueError("not a scalar")
        return self.terms[()]

    def _coerce(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.alg is not self.alg and other.alg.ring != self.alg.ring:
                raise ValueError("mixed algebras")
            return other
        return self.alg.scalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for w, c in o.terms.items():
            _acc(out, w, c)
        return NCPoly(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.alg, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, cf.RingElem, cf.Cyclotomic)):
            return self.scale(other)
        o = self._coerce(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                c = c1 * c2
                if not c:
                    continue
                for w, cw in self.alg.mul_words(w1, w2).items():
                    _acc(out, w, c * cw)
        return NCPoly(self.alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, cf.RingElem, cf.Cyclotomic)):
            return self.scale(other)
        return self._coerce(other) * self

    def scale(self, c) -> "NCPoly":
        c = self.alg._coerce(c)
        if not c:
            return self.alg.zero()
        return NCPoly(self.alg, {w: v * c for w, v in self.terms.items()})

    def __truediv__(self, c):
        if isinstance(c, NCPoly):
            c = c.as_scalar()
        c = self.alg._coerce(c)
        return NCPoly(self.alg, {w: v / c for w, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) == 1:
                (w, c), = self.terms.items()
                if len(w) == 1 and self.alg.alphabet.is_toral(w[0]):
                    inv = self.alg.gen(self.alg.alphabet.inverse_toral(w[0]))
                    return (inv / c) ** (-n)
            raise ValueError("negative power of a non-invertible element")
        out = self.alg.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, cf.RingElem)):
            other = self.alg.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.alg.ring == other.alg.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((w, c) for w, c in self.terms.items()))

    def map_coeffs(self, f, target_alg=None) -> "NCPoly":
        alg = target_alg if target_alg is not None else self.alg
        out = {}
        for w, c in self.terms.items():
            v = f(c)
            if v:
                out[w] = v
        return NCPoly(alg, out)

    def __repr__(self):
        return f"<{poly_name(self)}>"


def poly_name(p: NCPoly) -> str:
    if not p.terms:
        return "0"
    ab = p.alg.alphabet
    parts = []
    for w in sorted(p.terms, key=lambda t: (len(t), t)):
        c = p.terms[w]
        ctext = cf.to_text(c)
        wtext = word_name(ab, w)
        if w == ():
            parts.append(ctext if _is_atomic(ctext) else f"({ctext})")
        elif ctext == "1":
            parts.append(wtext)
        elif ctext == "-1":
            parts.append(f"-{wtext}")
        elif _is_atomic(ctext):
            parts.append(f"{ctext}*{wtext}")
        else:
            parts.append(f"({ctext})*{wtext}")
    out = parts[0]
    for t in parts[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _is_atomic(ctext: str) -> bool:
    if ctext.startswith("(") and ctext.endswith(")"):
        return True
    bare = ctext[1:] if ctext.startswith("-") else ctext
    return not any(c in bare for c in " +-/")


def free_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Concatenation product, ignoring the algebra's word multiplication."""
    out = {}
    for w1, c1 in p.terms.items():
        for w2, c2 in q.terms.items():
            _acc(out, w1 + w2, c1 * c2)
    return NCPoly(p.alg, out)


# ---------------------------------------------------------------------------
# algebra maps
# ---------------------------------------------------------------------------


def extend_algebra_hom(p: NCPoly, target, letter_images, coeff_map=None):
    """Apply the algebra map sending letter l to letter_images[l]."""
    out = target.zero()
    for w, c in p.terms.items():
        img = target.one()
        for lid in w:
            img = img * letter_images[lid]
        cc = coeff_map(c) if coeff_map else c
        out = out + img.scale(cc)
    return out


def extend_algebra_antihom(p: NCPoly, target, letter_images, coeff_map=None):
    """Same, but reversing each word (an algebra antihomomorphism)."""
    out = target.zero()
    for w, c in p.terms.items():
        img = target.one()
        for lid in reversed(w):
            img = img * letter_images[lid]
        cc = coeff_map(c) if coeff_map else c
        out = out + img.scale(cc)
    return out


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


class Tensor2:
    """Element of A (x) A: words are pairs, product is componentwise."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms: dict):
        self.alg = alg
        self.terms = terms

    @classmethod
    def pure(cls, a: NCPoly, b: NCPoly) -> "Tensor2":
        out = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                _acc(out, (w1, w2), c1 * c2)
        return cls(a.alg, out)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return Tensor2(self.alg, out)

    def __neg__(self):
        return Tensor2(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Tensor2":
        c = self.alg._coerce(c)
        if not c:
            return Tensor2(self.alg, {})
        return Tensor2(self.alg, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, cf.RingElem, cf.Cyclotomic)):
            return self.scale(other)
        out = {}
        alg = self.alg
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                c = c1 * c2
                if not c:
                    continue
                left = alg.mul_words(a1, a2)
                right = alg.mul_words(b1, b2)
                for wa, ca in left.items():
                    for wb, cb in right.items():
                        _acc(out, (wa, wb), c * ca * cb)
        return Tensor2(self.alg, out)

    __rmul__ = __mul__

    def flip(self) -> "Tensor2":
        return Tensor2(self.alg, {(b, a): c for (a, b), c in self.terms.items()})

    def transform(self, fa, fb) -> "Tensor2":
        """Map word w1 (x) w2 to fa(w1) (x) fb(w2) and expand."""
        out = {}
        for (w1, w2), c in self.terms.items():
            p1, p2 = fa(w1), fb(w2)
            for u1, c1 in p1.terms.items():
                for u2, c2 in p2.terms.items():
                    _acc(out, (u1, u2), c * c1 * c2)
        return Tensor2(self.alg, out)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor2)
            and self.alg.ring == other.alg.ring
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "<0 (x) 0>"
        ab = self.alg.alphabet
        parts = []
        for (w1, w2) in sorted(self.terms, key=lambda k: (len(k[0]) + len(k[1]), k)):
            c = self.terms[(w1, w2)]
            ct = cf.to_text(c)
            lead = "" if ct == "1" else ("-" if ct == "-1" else f"({ct})*")
            parts.append(f"{lead}{word_name(ab, w1)} (x) {word_name(ab, w2)}")
        return "<" + "  +  ".join(parts) + ">"


class Tensor3:
    """Element of A (x) A (x) A."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms: dict):
        self.alg = alg
        self.terms = terms

    @classmethod
    def pure(cls, a: NCPoly, b: NCPoly, c: NCPoly) -> "Tensor3":
        out = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                for w3, c3 in c.terms.items():
                    _acc(out, (w1, w2, w3), c1 * c2 * c3)
        return cls(a.alg, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return Tensor3(self.alg, out)

    def __neg__(self):
        return Tensor3(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def transform(self, fa, fb, fc) -> "Tensor3":
        out = {}
        for (w1, w2, w3), c in self.terms.items():
            for u1, c1 in fa(w1).terms.items():
                for u2, c2 in fb(w2).terms.items():
                    for u3, c3 in fc(w3).terms.items():
                        _acc(out, (u1, u2, u3), c * c1 * c2 * c3)
        return Tensor3(self.alg, out)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor3)
            and self.alg.ring == other.alg.ring
            and self.terms == other.terms
        )


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

_FUNCS = {
    "divE": lambda alg, a: alg.divided_E(a[0] - 1, a[1]),
    "divF": lambda alg, a: alg.divided_F(a[0] - 1, a[1]),
    "binK": lambda alg, a: alg.toral_binomial(K_KIND, a[0] - 1, a[1], a[2]),
    "binL": lambda alg, a: alg.toral_binomial(L_KIND, a[0] - 1, a[1], a[2]),
    "Eroot": lambda alg, a: alg.E_root(a[0] - 1),
    "Froot": lambda alg, a: alg.F_root(a[0] - 1),
}

_FUNC_ARITY = {"divE": 2, "divF": 2, "binK": 3, "binL": 3, "Eroot": 1, "Froot": 1}


def _gen_by_name(alg: FreeAlgebra, name: str):
    t = alg.datum.theta
    if len(name) >= 2 and name[0] in "EFKL" and name[1:].isdigit():
        i = int(name[1:]) - 1
        if not 0 <= i < t:
            raise ValueError(f"generator index out of range in {name!r}")
        return {
            "E": alg.E, "F": alg.F, "K": alg.K, "L": alg.L,
        }[name[0]](i)
    return None


class _ExprParser:
    def __init__(self, alg: FreeAlgebra, text: str):
        self.alg = alg
        self.toks = cf._tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        t = self.toks[self.pos]
        if kind and t.kind != kind:
            raise ValueError(f"expected {kind}, got {t.kind}")
        self.pos += 1
        return t

    def parse(self) -> NCPoly:
        out = self.expr()
        self.take("end")
        return out

    def expr(self) -> NCPoly:
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

    def term(self) -> NCPoly:
        out = self.atom()
        while self.peek().kind in "*/":
            op = self.take().kind
            a = self.atom()
            if op == "/":
                out = out / a.as_scalar()
            else:
                out = out * a
        return out

    def atom(self) -> NCPoly:
        t = self.peek()
        if t.kind == "-":
            self.take()
            return -self.atom()
        if t.kind == "int":
            self.take()
            base = self.alg.scalar(t.val)
        elif t.kind == "(":
            self.take()
            base = self.expr()
            self.take(")")
        elif t.kind == "name":
            self.take()
            base = self.name_atom(t.val)
        else:
            raise ValueError(f"unexpected token {t.kind}")
        if self.peek().kind == "^":
            self.take()
            n = self.int_exponent()
            base = base ** n
        return base

    def name_atom(self, name: str) -> NCPoly:
        if name in _FUNCS:
            self.take("(")
            args = [self.signed_int()]
            while self.peek().kind != ")":
                args.append(self.signed_int())
            self.take(")")
            if len(args) != _FUNC_ARITY[name]:
                raise ValueError(f"{name} takes {_FUNC_ARITY[name]} arguments")
            return _FUNCS[name](self.alg, args)
        g = _gen_by_name(self.alg, name)
        if g is not None:
            return g
        # fall back to a coefficient variable: q, qij, yij, e
        half = 2
        if self.peek().kind == "^":
            self.take()
            half = self.half_exponent()
        p = cf._Parser(self.alg.ring, [])
        elem = p.var_power_name(name, half)
        return self.alg.scalar(elem)

    def signed_int(self) -> int:
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        return sign * self.take("int").val

    def int_exponent(self) -> int:
        sign = 1
        if self.peek().kind == "-":
            self.take()
            sign = -1
        if self.peek().kind == "(":
            self.take()
            n = self.signed_int()
            self.take(")")
            return sign * n
        return sign * self.take("int").val

    def half_exponent(self) -> int:
        # exponent for a coefficient variable, in half-steps
        t = self.peek()
        if t.kind == "int":
            self.take()
            return 2 * t.val
        if t.kind == "-":
            self.take()
            return -2 * self.take("int").val
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


def parse_expr(alg: FreeAlgebra, text: str) -> NCPoly:
    """Parse expressions like 'E1*F1 - F1*E1' or 'q^2*binK(1,0,2)'."""
    # allow commas as argument separators by treating them as spaces
    return _ExprParser(alg, text.replace(",", " ")).parse()
