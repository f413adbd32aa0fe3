"""Straightening onto the PBW basis by confluent rewriting.

Words are ordered by disorder of their expansions into simple letters
(Alphabet.word_key): expansion length grades the order, then the
inversion count of the expansion compares words of equal content.
Expanding composite root letters is what lets one order handle both
bracket contractions, which shorten words, and mixed commutation terms,
which lengthen them; counting inversions instead of reading the
expansion lexicographically is what keeps every out-of-order pair above
its own straightening regardless of which simple letters the brackets
happen to start with.  The defining relations, the bracket definitions
of the root letters, and the toral conjugation laws are oriented into
rules whose left sides strictly dominate their right sides; Knuth-Bendix
completion then resolves every critical pair.  When the queue empties
the system is confluent, so sorted words (with no inverse toral pair)
form a basis and straightening is well defined.

Normal words read

    F_{b^N}^{a_N} ... F_{b^1}^{a_1} L_1 ... L_t K_1 ... K_t E_{b^1}^{c_1} ... E_{b^N}^{c_N}

with the b^r in the convex order attached to the chosen reduced word.
"""

from __future__ import annotations

import heapq
import itertools
import json

from . import coeff as cf
from .cartan import kostant_partition
from .ncalg import (
    E_KIND,
    F_KIND,
    Alphabet,
    FreeAlgebra,
    NCPoly,
    free_mul,
)


class CompletionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# seed rules
# ---------------------------------------------------------------------------


def _add_rule(rules, key, lhs, rhs):
    klhs = key(lhs)
    for w in rhs:
        if key(w) >= klhs:
            raise CompletionError(f"rule does not decrease the order: {lhs} -> {w}")
    rules[lhs] = {w: c for w, c in rhs.items() if c}


def root_norm(datum, ring, r):
    """Bracket normalizer [k]_{q_i}! for the composite root b^r.

    Here a_i is the simple root appearing in the two-part decomposition of
    b^r and k is its multiplicity in b^r.  Dividing the bracket by this
    factor keeps each root vector dual to its mirror under the bilinear
    form instead of to a q-factorial multiple of it.
    """
    beta = datum.roots[r]
    out = ring.one()
    for part in datum.decomposition[r][::-1]:
        b = datum.roots[part]
        if b.is_simple:
            i = b.index(1)
            qi = ring.q_half_power(2 * datum.d[i])
            for s in range(2, beta[i] + 1):
                out = out * cf.q_bracket(s, qi)
            break
    return out


def _seed_rules(datum, ring, ab: Alphabet):
    one = ring.one()
    key = ab.word_key
    rules = {}
    t = datum.theta
    N = ab.nroots
    toral = [ab.L(i, s) for i in range(t) for s in (1, -1)] + [
        ab.K(i, s) for i in range(t) for s in (1, -1)
    ]
    # toral letters commute; inverse pairs cancel
    for a in toral:
        for b in toral:
            if b > a:
                _add_rule(rules, key, (b, a), {(a, b): one})
    for i in range(t):
        _add_rule(rules, key, (ab.K(i, 1), ab.K(i, -1)), {(): one})
        _add_rule(rules, key, (ab.L(i, 1), ab.L(i, -1)), {(): one})
    # toral conjugation of root letters
    alpha = [tuple(1 if j == i else 0 for j in range(t)) for i in range(t)]
    for r in range(N):
        beta = tuple(ab.roots[r])
        eE, fE = ab.E(r), ab.F(r)
        for i in range(t):
            for s in (1, -1):
                cK = ring.bichar(alpha[i], beta) ** (-s)
                cL = ring.bichar(beta, alpha[i]) ** s
                _add_rule(rules, key, (eE, ab.K(i, s)), {(ab.K(i, s), eE): cK})
                _add_rule(rules, key, (eE, ab.L(i, s)), {(ab.L(i, s), eE): cL})
                _add_rule(rules, key, (ab.K(i, s), fE), {(fE, ab.K(i, s)): cK})
                _add_rule(rules, key, (ab.L(i, s), fE), {(fE, ab.L(i, s)): cL})
    # mixed simple relation: E_i F_j = F_j E_i + delta_ij q_ii (K_i - L_i)/(q_ii - 1)
    for i in range(t):
        for j in range(t):
            e, f = ab.E_simple(i), ab.F_simple(j)
            rhs = {(f, e): one}
            if i == j:
                qii = ring.qij(i, i)
                c = qii / (qii - 1)
                rhs[(ab.K(i, 1),)] = c
                rhs[(ab.L(i, 1),)] = -c
            _add_rule(rules, key, (e, f), rhs)
    # quantum Serre rules; the F side twists by the transposed parameter,
    # which is what commuting E_i through the F relation forces
    for i in range(t):
        for j in range(t):
            if i == j:
                continue
            m = 1 - datum.A[i][j]
            qii = ring.qij(i, i)
            for kind in (E_KIND, F_KIND):
                gi = ab.E_simple(i) if kind == E_KIND else ab.F_simple(i)
                gj = ab.E_simple(j) if kind == E_KIND else ab.F_simple(j)
                twist = ring.qij(i, j) if kind == E_KIND else ring.qij(j, i)
                words = {}
                for k in range(m + 1):
                    w = (gi,) * (m - k) + (gj,) + (gi,) * k
                    c = (
                        (-1) ** k
                        * cf.q_binomial(m, k, qii)
                        * qii ** (k * (k - 1) // 2)
                        * twist ** k
                    )
                    words[w] = words.get(w, ring.zero()) + c
                lhs = max(words, key=key)
                clead = words.pop(lhs)
                rhs = {w: -(c / clead) for w, c in words.items() if c}
                if lhs in rules:
                    if rules[lhs] != rhs:
                        raise CompletionError("inconsistent Serre seeds")
                else:
                    _add_rule(rules, key, lhs, rhs)
    # bracket definitions of the non-simple root letters; the lower convex
    # part multiplies on the left, and repeated simple factors are divided
    # out, so that ascending E monomials pair diagonally with ascending F
    # monomials
    for r in range(N):
        beta = ab.roots[r]
        if beta.is_simple:
            continue
        h, l = datum.decomposition[r]
        bh, bl = tuple(ab.roots[h]), tuple(ab.roots[l])
        nu = root_norm(datum, ring, r)
        # E_{b^r} = (E_{b^l} E_{b^h} - bichar(b^l, b^h) E_{b^h} E_{b^l}) / nu
        ce = ring.bichar(bl, bh)
        _add_rule(
            rules,
            key,
            (ab.E(l), ab.E(h)),
            {(ab.E(h), ab.E(l)): ce, (ab.E(r),): nu},
        )
        # F_{b^r} = (F_{b^l} F_{b^h} - bichar(b^h, b^l) F_{b^h} F_{b^l}) / nu
        cf_inv = ring.bichar(bh, bl) ** -1
        _add_rule(
            rules,
            key,
            (ab.F(h), ab.F(l)),
            {(ab.F(l), ab.F(h)): cf_inv, (ab.F(r),): -(cf_inv * nu)},
        )
    return rules


# ---------------------------------------------------------------------------
# reduction and completion
# ---------------------------------------------------------------------------


class RuleTable:
    """A confluent set of order-decreasing rules over one ring."""

    VERSION = 1

    def __init__(self, datum, ring, rules, stats=None):
        self.datum = datum
        self.ring = ring
        self.rules = rules
        self.lengths = tuple(sorted({len(l) for l in rules}))
        self.stats = dict(stats or {})

    def find_redex(self, w):
        """Leftmost-shortest rule match inside w, or None."""
        n = len(w)
        for i in range(n):
            for L in self.lengths:
                if i + L > n:
                    break
                if w[i : i + L] in self.rules:
                    return i, w[i : i + L]
        return None

    def to_json(self) -> dict:
        items = []
        for lhs, rhs in sorted(self.rules.items(), key=lambda kv: (len(kv[0]), kv[0])):
            items.append(
                {
                    "lhs": list(lhs),
                    "rhs": [
                        {"w": list(w), "c": cf.elem_to_json(c)}
                        for w, c in sorted(rhs.items(), key=lambda kv: (len(kv[0]), kv[0]))
                    ],
                }
            )
        return {
            "version": self.VERSION,
            "key": self.ring.cache_key(),
            "rules": items,
            "stats": self.stats,
        }

    @classmethod
    def from_json(cls, datum, ring, obj) -> "RuleTable":
        if obj.get("version") != cls.VERSION:
            raise ValueError("rule-table version mismatch")
        if obj.get("key") != ring.cache_key():
            raise ValueError("rule table was built for a different ring")
        rules = {}
        for item in obj["rules"]:
            rhs = {
                tuple(e["w"]): cf.elem_from_json(ring, e["c"]) for e in item["rhs"]
            }
            rules[tuple(item["lhs"])] = rhs
        return cls(datum, ring, rules, obj.get("stats"))


def _overlaps(u, v):
    """Critical superpositions of LHS words u and v.

    Yields (super_word, pos_u, pos_v): u matches super at pos_u, v at pos_v.
    """
    # proper suffix of u = proper prefix of v
    for o in range(1, len(u)):
        tail = u[o:]
        if len(tail) < len(v) and v[: len(tail)] == tail:
            yield u + v[len(tail) :], 0, o
    # v contained in u
    if len(v) < len(u):
        for o in range(len(u) - len(v) + 1):
            if u[o : o + len(v)] == v:
                yield u, 0, o


def _apply_at(rules, w, pos, lhs, ring):
    """One rewriting step at a known match; returns {word: coeff}."""
    out = {}
    pre, suf = w[:pos], w[pos + len(lhs) :]
    for m, c in rules[lhs].items():
        key = pre + m + suf
        v = out.get(key)
        out[key] = c if v is None else v + c
    return {k: v for k, v in out.items() if v}


def _normalize(table: RuleTable, poly: dict, memo: dict) -> dict:
    """Fully reduce a {word: coeff} dict, memoizing single-word results."""
    out = {}
    for w, c in poly.items():
        if not c:
            continue
        nf = _straighten_word(table, w, memo)
        for m, v in nf.items():
            acc = out.get(m)
            acc = v * c if acc is None else acc + v * c
            if acc:
                out[m] = acc
            elif m in out:
                del out[m]
    return out


def _straighten_word(table: RuleTable, w0, memo: dict) -> dict:
    one = table.ring.one()
    if w0 in memo:
        return memo[w0]
    stack = [w0]
    while stack:
        w = stack[-1]
        if w in memo:
            stack.pop()
            continue
        redex = table.find_redex(w)
        if redex is None:
            memo[w] = {w: one}
            stack.pop()
            continue
        i, lhs = redex
        step = _apply_at(table.rules, w, i, lhs, table.ring)
        missing = [sub for sub in step if sub not in memo]
        if missing:
            stack.extend(missing)
            continue
        out = {}
        for sub, c in step.items():
            for m, v in memo[sub].items():
                acc = out.get(m)
                acc = v * c if acc is None else acc + v * c
                if acc:
                    out[m] = acc
                elif m in out:
                    del out[m]
        memo[w] = out
        stack.pop()
    return memo[w0]


def complete(datum, ring, max_rules=4000, max_pairs=2_000_000):
    """Knuth-Bendix completion from the seed rules; returns a RuleTable."""
    ab = Alphabet(datum)
    rules = _seed_rules(datum, ring, ab)
    table = RuleTable(datum, ring, rules)
    queue = []
    seen = set()
    tick = itertools.count()

    # smallest superpositions first, so two-letter consequences exist
    # before the longer words that reduce through them come up
    def enqueue(u, v):
        for sup, pu, pv in _overlaps(u, v):
            key = (u, v, sup, pu, pv)
            if key not in seen and (pu, u) != (pv, v):
                seen.add(key)
                heapq.heappush(
                    queue, (ab.word_key(sup), next(tick), sup, pu, u, pv, v)
                )

    lhss = list(rules)
    for u in lhss:
        for v in lhss:
            enqueue(u, v)

    memo = {}
    processed = 0
    added = 0

    def install(lhs, rhs):
        nonlocal added
        _add_rule(table.rules, ab.word_key, lhs, rhs)
        table.lengths = tuple(sorted({len(l) for l in table.rules}))
        added += 1
        if len(table.rules) > max_rules:
            raise CompletionError(f"completion exceeded {max_rules} rules")
        memo.clear()
        for other in list(table.rules):
            enqueue(lhs, other)
            enqueue(other, lhs)

    def orient(diff, what):
        lhs = max(diff, key=ab.word_key)
        clead = diff.pop(lhs)
        try:
            rhs = {w: -(c / clead) for w, c in diff.items()}
        except ValueError as exc:
            raise CompletionError(f"cannot orient {what} at {lhs}: {exc}") from exc
        install(lhs, rhs)

    while True:
        while queue:
            processed += 1
            if processed > max_pairs:
                raise CompletionError(
                    f"completion exceeded {max_pairs} critical pairs "
                    f"({len(table.rules)} rules so far)"
                )
            _, _, sup, pu, u, pv, v = heapq.heappop(queue)
            if u not in table.rules or v not in table.rules:
                continue
            p = _normalize(
                table, _apply_at(table.rules, sup, pu, u, table.ring), memo
            )
            q = _normalize(
                table, _apply_at(table.rules, sup, pv, v, table.ring), memo
            )
            diff = dict(p)
            for w, c in q.items():
                acc = diff.get(w)
                acc = -c if acc is None else acc - c
                if acc:
                    diff[w] = acc
                elif w in diff:
                    del diff[w]
            if not diff:
                continue
            orient(diff, "critical pair")
        # overlaps alone may leave a descending pair untouched; its
        # straightening is still forced by expanding both letters into
        # simple ones, multiplying, and normalizing
        goal = None
        for a in range(ab.size):
            for b in range(a):
                pair = (a, b)
                if pair in table.rules:
                    continue
                if goal is None or ab.word_key(pair) < ab.word_key(goal):
                    goal = pair
        if goal is None:
            break
        a, b = goal
        prod = {}
        for wa, ca in _letter_expansion(datum, ring, ab, a).items():
            for wb, cb in _letter_expansion(datum, ring, ab, b).items():
                w = wa + wb
                c = ca * cb
                acc = prod.get(w)
                acc = c if acc is None else acc + c
                if acc:
                    prod[w] = acc
                elif w in prod:
                    del prod[w]
        diff = {goal: ring.one()}
        for w, c in _normalize(table, prod, memo).items():
            acc = diff.get(w)
            acc = -c if acc is None else acc - c
            if acc:
                diff[w] = acc
            elif w in diff:
                del diff[w]
        if not diff:
            raise CompletionError(
                f"descending pair {goal} reduces to itself; the normal "
                "monomials would not be independent"
            )
        orient(diff, f"descending pair {goal}")
    table.stats = {
        "rules": len(table.rules),
        "pairs": processed,
        "derived": added,
    }
    _post_checks(datum, ring, ab, table)
    return table


def _letter_expansion(datum, ring, ab, lid) -> dict:
    """The letter as a {word: coeff} dict over simple letters only."""
    kind = ab.kind(lid)
    if kind not in (E_KIND, F_KIND) or ab.root(lid).is_simple:
        return {(lid,): ring.one()}
    r = ab.index(lid)
    h, l = datum.decomposition[r]
    bh, bl = tuple(ab.roots[h]), tuple(ab.roots[l])
    c = ring.bichar(bl, bh) if kind == E_KIND else ring.bichar(bh, bl)
    nu_inv = root_norm(datum, ring, r) ** -1
    hi = _letter_expansion(datum, ring, ab, ab.E(h) if kind == E_KIND else ab.F(h))
    lo = _letter_expansion(datum, ring, ab, ab.E(l) if kind == E_KIND else ab.F(l))
    out = {}
    for wh, ch in hi.items():
        for wl, cl in lo.items():
            w1 = wl + wh
            out[w1] = out.get(w1, ring.zero()) + nu_inv * cl * ch
            w2 = wh + wl
            out[w2] = out.get(w2, ring.zero()) - nu_inv * c * ch * cl
    return {w: v for w, v in out.items() if v}


def _post_checks(datum, ring, ab, table):
    # every out-of-order two-letter word must be head-reducible
    for a in range(ab.size):
        for b in range(ab.size):
            if a > b and (a, b) not in table.rules:
                raise CompletionError(
                    f"missing straightening rule for descending pair "
                    f"({ab.letter_name(a)}, {ab.letter_name(b)})"
                )
    # normal words must stay normal: no rule rewrites a sorted word,
    # except the inverse-pair cancellations
    for lhs in table.rules:
        if all(lhs[i] <= lhs[i + 1] for i in range(len(lhs) - 1)):
            ok = len(lhs) == 2 and ab.is_toral(lhs[0]) and (
                ab.inverse_toral(lhs[0]) == lhs[1]
            )
            if not ok:
                raise CompletionError(
                    f"confluent system rewrites the sorted word {lhs}; "
                    "the normal monomials would not be independent"
                )


# ---------------------------------------------------------------------------
# the PBW algebra
# ---------------------------------------------------------------------------


class PBWAlgebra(FreeAlgebra):
    """NCPoly context whose multiplication straightens onto normal words."""

    def __init__(self, datum, ring, table: RuleTable = None):
        super().__init__(datum, ring)
        self.table = table if table is not None else complete(datum, ring)
        self._memo = {}

    def mul_words(self, w1, w2):
        return _straighten_word(self.table, w1 + w2, self._memo)

    def straighten_word(self, w) -> dict:
        return _straighten_word(self.table, tuple(w), self._memo)

    def straighten(self, p: NCPoly) -> NCPoly:
        """Normal form of a free-word polynomial in this algebra."""
        out = _normalize(self.table, p.terms, self._memo)
        return NCPoly(self, out)

    def is_normal_word(self, w) -> bool:
        w = tuple(w)
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                return False
            if self.alphabet.is_toral(w[i]) and self.alphabet.inverse_toral(
                w[i]
            ) == w[i + 1]:
                return False
        return True

    # -- root vectors ---------------------------------------------------------

    def expand_root(self, kind: str, r: int) -> NCPoly:
        """The bracket word for the root letter, in simple letters only."""
        ab = self.alphabet
        beta = ab.roots[r]
        if beta.is_simple:
            lid = ab.E(r) if kind == E_KIND else ab.F(r)
            return self.gen(lid)
        h, l = self.datum.decomposition[r]
        bh, bl = tuple(ab.roots[h]), tuple(ab.roots[l])
        nu_inv = root_norm(self.datum, self.ring, r) ** -1
        xh = self.expand_root(kind, h)
        xl = self.expand_root(kind, l)
        c = self.ring.bichar(bl, bh) if kind == E_KIND else self.ring.bichar(bh, bl)
        return (free_mul(xl, xh) - free_mul(xh, xl).scale(c)).scale(nu_inv)

    def root_vectors(self, kind: str = E_KIND):
        """All root letters as elements, in convex order."""
        mk = self.E_root if kind == E_KIND else self.F_root
        return [mk(r) for r in range(self.alphabet.nroots)]

    # -- PBW monomials ----------------------------------------------------------

    def pbw_word(self, f_exps, mu, nu, e_exps):
        """The sorted word F^a K_mu L_nu E^c (exponents by convex index)."""
        ab = self.alphabet
        N, t = ab.nroots, self.datum.theta
        w = []
        for lid in range(N):
            w.extend([lid] * f_exps[N - 1 - lid])
        for i in range(t):
            w.extend([ab.L(i, 1 if nu[i] > 0 else -1)] * abs(nu[i]))
        for i in range(t):
            w.extend([ab.K(i, 1 if mu[i] > 0 else -1)] * abs(mu[i]))
        for r in range(N):
            w.extend([ab.E(r)] * e_exps[r])
        return tuple(w)

    def graded_dimension(self, mu, kind: str = E_KIND) -> int:
        """Number of normal one-sided monomials of root degree mu."""
        roots = self.alphabet.roots
        target = tuple(mu)

        def count(r, rest):
            if all(x == 0 for x in rest):
                return 1
            if r == len(roots):
                return 0
            if any(x < 0 for x in rest):
                return 0
            beta = roots[r]
            total = 0
            sub = rest
            while all(x >= 0 for x in sub):
                total += count(r + 1, sub)
                sub = tuple(a - b for a, b in zip(sub, beta))
            return total

        return count(0, target)


def pbw_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    """Product in a PBW algebra (straightened)."""
    return p * q


def straighten(alg: PBWAlgebra, p: NCPoly) -> NCPoly:
    return alg.straighten(p)


# ---------------------------------------------------------------------------
# construction cache and specialization of tables
# ---------------------------------------------------------------------------

_ALGEBRA_CACHE: dict = {}


def build_pbw_algebra(datum, ring) -> PBWAlgebra:
    """Build (or fetch from the in-process cache) the straightened algebra."""
    key = ring.cache_key()
    alg = _ALGEBRA_CACHE.get(key)
    if alg is None:
        alg = PBWAlgebra(datum, ring)
        _ALGEBRA_CACHE[key] = alg
    return alg


def specialize_table(table: RuleTable, target: cf.RingDescriptor) -> RuleTable:
    """Push a formal rule table to a q = 1 or q = eps coefficient ring."""
    rules = {}
    for lhs, rhs in table.rules.items():
        new = {}
        for w, c in rhs.items():
            v = cf.specialize_elem(c, target)
            if v:
                new[w] = v
        rules[lhs] = new
    return RuleTable(table.datum, target, rules, table.stats)


def specialized_algebra(alg: PBWAlgebra, target: cf.RingDescriptor) -> PBWAlgebra:
    key = target.cache_key()
    out = _ALGEBRA_CACHE.get(key)
    if out is None:
        out = PBWAlgebra(alg.datum, target, specialize_table(alg.table, target))
        _ALGEBRA_CACHE[key] = out
    return out


def save_table(table: RuleTable, path) -> None:
    with open(path, "w") as fh:
        json.dump(table.to_json(), fh)


def load_table(datum, ring, path) -> RuleTable:
    with open(path) as fh:
        return RuleTable.from_json(datum, ring, json.load(fh))
