"""Finite Cartan data, convex root orders, and classical oracles.

Everything downstream is parametrized by a CartanDatum: a Cartan matrix of
finite type together with its symmetrizers, a fixed reduced word for the
longest Weyl element, the induced convex order on positive roots, and a
decomposition table writing each non-simple positive root as a sum of two
earlier-and-later roots in the convex order (the shape used by the bracket
recursion for quantum root vectors).

The module also carries two purely classical oracles used by the test layer:
Kostant partition numbers (graded dimensions of U^+) and absolute values of
Chevalley structure constants, the latter read off from explicit integer
matrix representations.
"""

from __future__ import annotations

from functools import lru_cache


class Root(tuple):
    """A vector in the root lattice, coordinates in the simple-root basis."""

    def __add__(self, other):
        return Root(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return Root(a - b for a, b in zip(self, other))

    def __mul__(self, n):
        return Root(n * a for a in self)

    __rmul__ = __mul__

    @property
    def height(self) -> int:
        return sum(self)

    @property
    def is_simple(self) -> bool:
        return sum(self) == 1 and all(a in (0, 1) for a in self)

    def __repr__(self):
        return "Root" + tuple.__repr__(self)


class ReducedWord(tuple):
    """A reduced word for w0, entries are 0-based simple-reflection indices."""

    def __new__(cls, entries, theta):
        entries = tuple(entries)
        if any(not 0 <= i < theta for i in entries):
            raise ValueError("reflection index out of range")
        self = tuple.__new__(cls, entries)
        self.theta = theta
        return self


# type name -> (Cartan matrix, symmetrizers, reduced word for w0, 1-based)
_TABLE = {
    "A1": (((2,),), (1,), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1), (1, 2, 1)),
    # alpha1 long, alpha2 short: a12 = -1, a21 = -2
    "B2": (((2, -1), (-2, 2)), (2, 1), (1, 2, 1, 2)),
    "A3": (
        ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
        (1, 1, 1),
        (1, 2, 1, 3, 2, 1),
    ),
}


class CartanDatum:
    """Cartan matrix + symmetrizers + convex order data for one finite type."""

    def __init__(self, name: str):
        if name not in _TABLE:
            raise ValueError(f"unknown Cartan type {name!r}; have {sorted(_TABLE)}")
        A, d, word = _TABLE[name]
        self.name = name
        self.A = A
        self.d = d
        self.theta = len(d)
        self.word = ReducedWord((i - 1 for i in word), self.theta)
        self.roots = self._convex_roots()
        self.N = len(self.roots)
        self.simple = tuple(
            Root(1 if j == i else 0 for j in range(self.theta))
            for i in range(self.theta)
        )
        self.root_index = {b: k for k, b in enumerate(self.roots)}
        self.decomposition = self._decompositions()

    # s_i(v) = v - (sum_j a_ij v_j) alpha_i
    def reflect(self, i: int, v: Root) -> Root:
        c = sum(self.A[i][j] * v[j] for j in range(self.theta))
        return Root(
            v[j] - c if j == i else v[j] for j in range(self.theta)
        )

    def _convex_roots(self):
        roots = []
        for k, ik in enumerate(self.word):
            v = Root(
                1 if j == ik else 0 for j in range(self.theta)
            )
            for i in reversed(self.word[:k]):
                v = self.reflect(i, v)
            # applied s_{i_1} ... s_{i_{k-1}} to alpha_{i_k}
            roots.append(v)
        return tuple(roots)

    def _decompositions(self):
        """For each non-simple beta^k pick (h, l), h < k < l, beta^h + beta^l = beta^k.

        Ties broken by smallest h then smallest l; the choice is validated
        downstream against the pairing and graded-dimension oracles.
        """
        table = {}
        for k, b in enumerate(self.roots):
            if b.is_simple:
                continue
            found = None
            for h in range(k):
                for l in range(k + 1, self.N):
                    if self.roots[h] + self.roots[l] == b:
                        found = (h, l)
                        break
                if found:
                    break
            if found is None:
                raise RuntimeError(f"no convex decomposition for {b}")
            table[k] = found
        return table

    def sym(self, mu, nu) -> int:
        """The symmetrized pairing (mu, nu) = sum d_i a_ij mu_i nu_j."""
        return sum(
            self.d[i] * self.A[i][j] * mu[i] * nu[j]
            for i in range(self.theta)
            for j in range(self.theta)
        )

    def d_root(self, beta) -> int:
        """d_beta with (beta, beta) = 2 d_beta; equals d_i on W alpha_i."""
        dd = self.sym(beta, beta)
        if dd % 2:
            raise ValueError("odd self-pairing")
        return dd // 2

    def __repr__(self):
        return f"CartanDatum({self.name})"


@lru_cache(maxsize=None)
def build_datum(name: str) -> CartanDatum:
    return CartanDatum(name)


def positive_roots(datum: CartanDatum):
    """Positive roots in the convex order induced by the fixed reduced word."""
    return datum.roots


def root_pairing(datum: CartanDatum, mu, nu) -> int:
    return datum.sym(mu, nu)


def kostant_partition(datum: CartanDatum, mu) -> int:
    """Number of ways to write mu as an N-multiset of positive roots."""
    roots = datum.roots

    @lru_cache(maxsize=None)
    def count(rest, k):
        if all(c == 0 for c in rest):
            return 1
        if k == len(roots):
            return 0
        b = roots[k]
        total = 0
        m = 0
        cur = rest
        while all(c >= 0 for c in cur):
            total += count(cur, k + 1)
            cur = tuple(c - bb for c, bb in zip(cur, b))
            m += 1
        return total

    return count(tuple(mu), 0)


# ---------------------------------------------------------------------------
# classical matrix representations: Chevalley-constant oracle
# ---------------------------------------------------------------------------


def _mat(n, entries):
    """n x n integer matrix from {(i, j): v} with 1-based indices."""
    m = [[0] * n for _ in range(n)]
    for (i, j), v in entries.items():
        m[i - 1][j - 1] = v
    return tuple(tuple(row) for row in m)


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_sub(a, b):
    return tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def _commutator(a, b):
    return _mat_sub(_mat_mul(a, b), _mat_mul(b, a))


def _is_zero(a):
    return all(all(x == 0 for x in row) for row in a)


def _ratio(a, b):
    """c with a = c*b for integer matrices, or None."""
    c = None
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if y == 0:
                if x != 0:
                    return None
                continue
            if x % y:
                return None
            r = x // y
            if c is None:
                c = r
            elif c != r:
                return None
    if c is None:
        return 0
    # check zero positions of b force zero in a
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if y == 0 and x != 0:
                return None
    return c


@lru_cache(maxsize=None)
def _positive_rep(name: str):
    """Chevalley root vectors for the positive roots, as integer matrices.

    sl(n) uses E_{ij} for e_i - e_j.  For B2 the symplectic realization is
    taken with the long-root-first labeling alpha1 = 2 e2, alpha2 = e1 - e2.
    """
    datum = build_datum(name)
    t = datum.theta
    rep = {}
    if name in ("A1", "A2", "A3"):
        n = t + 1
        # root sum_{i<=k<j} alpha_k  <->  e_i - e_j
        for b in datum.roots:
            i = min(k for k in range(t) if b[k])
            j = max(k for k in range(t) if b[k])
            rep[b] = _mat(n, {(i + 1, j + 2): 1})
    elif name == "B2":
        a1, a2 = datum.simple
        rep[a1] = _mat(4, {(2, 4): 1})                      # 2 e2
        rep[a2] = _mat(4, {(1, 2): 1, (4, 3): -1})          # e1 - e2
        rep[a1 + a2] = _mat(4, {(1, 4): 1, (2, 3): 1})      # e1 + e2
        rep[a1 + a2 + a2] = _mat(4, {(1, 3): 1})            # 2 e1
    else:  # pragma: no cover
        raise ValueError(name)
    return rep


def chevalley_constant(datum: CartanDatum, alpha: Root, beta: Root) -> int:
    """|c| with [x_alpha, x_beta] = c x_{alpha+beta} in a Chevalley basis.

    Only the absolute value is well defined independently of sign choices;
    returns 0 when alpha + beta is not a root.
    """
    rep = _positive_rep(datum.name)
    s = alpha + beta
    comm = _commutator(rep[alpha], rep[beta])
    if s not in rep:
        if not _is_zero(comm):
            raise RuntimeError("nonzero commutator outside root spaces")
        return 0
    c = _ratio(comm, rep[s])
    if c is None:
        raise RuntimeError("commutator not proportional to root vector")
    return abs(c)
