"""The Q+-graded free algebra on the generators e_{il} and its bilinear form.

Words are tuples of labels (i, l) with i an index position and l >= 1 the
level (l = 1 for real indices).  The coproduct maps into the twisted tensor
square; the form pairs words through the coproduct recursion and is memoized
globally on word pairs.  Gram tables per degree expose rank and a pivot
monomial set computed by fraction-free elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cartan import BorcherdsCartanDatum, RootVec, height, root_sub
from .errors import BudgetError, DomainError
from .linalg import bareiss_rank_pivots, scalar_rows_to_int_polys
from .scalars import MINUS_ONE, ONE, ZERO, Scalar, q_fact

Label = tuple  # (index position, level)
Word = tuple  # tuple[Label, ...]


class FreeElem:
    """Finite linear combination of words; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = terms or {}

    @staticmethod
    def zero() -> "FreeElem":
        return FreeElem({})

    @staticmethod
    def unit() -> "FreeElem":
        return FreeElem({(): ONE})

    @staticmethod
    def word(w: Word, coeff: Scalar = ONE) -> "FreeElem":
        if coeff.is_zero():
            return FreeElem({})
        return FreeElem({w: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FreeElem") -> "FreeElem":
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(w, None)
            else:
                out[w] = acc
        return FreeElem(out)

    def __sub__(self, other: "FreeElem") -> "FreeElem":
        return self + (-other)

    def __neg__(self) -> "FreeElem":
        return FreeElem({w: -c for w, c in self.terms.items()})

    def scale(self, s: Scalar) -> "FreeElem":
        if s.is_zero():
            return FreeElem({})
        if s.is_one():
            return self
        return FreeElem({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: "FreeElem") -> "FreeElem":
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                acc = out.get(w)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(w, None)
                else:
                    out[w] = acc
        return FreeElem(out)

    def bar_coeffs(self) -> "FreeElem":
        """Apply q -> q^(-1) to every coefficient (generators are fixed)."""
        return FreeElem({w: c.bar() for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms):
            body = "*".join(f"e[{i},{l}]" for i, l in w) or "1"
            bits.append(f"({self.terms[w]})*{body}")
        return " + ".join(bits)


class TensorElem:
    """Element of the twisted tensor square: map from word pairs to scalars."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = terms or {}

    @staticmethod
    def unit() -> "TensorElem":
        return TensorElem({((), ()): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, key, c: Scalar):
        acc = self.terms.get(key)
        acc = c if acc is None else acc + c
        if acc.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = acc

    def __add__(self, other: "TensorElem") -> "TensorElem":
        out = TensorElem(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        out = TensorElem(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, -c)
        return out

    def scale(self, s: Scalar) -> "TensorElem":
        if s.is_zero():
            return TensorElem({})
        return TensorElem({k: c * s for k, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (w1, w2) in sorted(self.terms):
            b1 = "*".join(f"e[{i},{l}]" for i, l in w1) or "1"
            b2 = "*".join(f"e[{i},{l}]" for i, l in w2) or "1"
            bits.append(f"({self.terms[(w1, w2)]})*{b1}(x){b2}")
        return " + ".join(bits)


@dataclass
class GramTable:
    """Symmetric Gram matrix of a degree slice over its monomial basis."""

    beta: RootVec
    words: list
    matrix: list
    rank: int
    pivots: list  # positions into ``words``

    def pivot_words(self) -> list:
        return [self.words[p] for p in self.pivots]


class FreeAlgebra:
    """The free algebra of a datum together with its form machinery."""

    def __init__(self, datum: BorcherdsCartanDatum, height_budget: int = 8):
        self.datum = datum
        self.height_budget = height_budget
        self._pair_memo: dict = {}
        self._words_memo: dict = {}
        self._gram_memo: dict = {}
        self.gram_store = None  # optional on-disk cache, set by the engine

    # -- basic constructions --------------------------------------------------

    def generator(self, i: int, l: int = 1) -> FreeElem:
        if (i, l) not in set(self.datum.generators):
            if self.datum.is_real(i) and l != 1:
                raise DomainError(f"real index {self.datum.names[i]!r} only carries l = 1")
        return FreeElem.word(((i, l),))

    def word_degree(self, w: Word) -> RootVec:
        deg = [0] * self.datum.n
        for i, l in w:
            deg[i] += l
        return tuple(deg)

    def degree_of(self, x: FreeElem) -> RootVec:
        """Degree of a homogeneous element; DomainError if inhomogeneous."""
        degs = {self.word_degree(w) for w in x.terms}
        if len(degs) != 1:
            raise DomainError("element is not homogeneous")
        return next(iter(degs))

    def divided_power(self, i: int, r: int) -> FreeElem:
        """e_i^(r) = e_i^r / [r]_i! for a real index i."""
        if not self.datum.is_real(i):
            raise DomainError("divided powers are defined for real indices")
        if r == 0:
            return FreeElem.unit()
        w = ((i, 1),) * r
        return FreeElem.word(w, q_fact(r, self.datum.s[i]).inverse())

    # -- coproduct and twisted tensor algebra ---------------------------------

    def tensor_multiply(self, u: TensorElem, v: TensorElem) -> TensorElem:
        out = TensorElem({})
        d = self.datum
        for (x1, x2), cu in u.terms.items():
            deg_x2 = self.word_degree(x2)
            for (y1, y2), cv in v.terms.items():
                tw = d.root_pairing(deg_x2, self.word_degree(y1))
                c = cu * cv
                if tw:
                    c = c * Scalar.q_power(tw)
                out.add_term((x1 + y1, x2 + y2), c)
        return out

    def coproduct_letter(self, i: int, l: int) -> TensorElem:
        qi = self.datum.q_exp_braced(i)
        out = {}
        for m in range(l + 1):
            n = l - m
            left = ((i, m),) if m else ()
            right = ((i, n),) if n else ()
            out[(left, right)] = Scalar.q_power(qi * m * n) if qi * m * n else ONE
        return TensorElem(out)

    def coproduct(self, x: FreeElem) -> TensorElem:
        out = TensorElem({})
        for w, c in x.terms.items():
            acc = TensorElem.unit()
            for (i, l) in w:
                acc = self.tensor_multiply(acc, self.coproduct_letter(i, l))
            for k, cc in acc.terms.items():
                out.add_term(k, cc * c)
        return out

    # -- the bilinear form -----------------------------------------------------

    def form(self, x: FreeElem, y: FreeElem) -> Scalar:
        acc = ZERO
        for w1, c1 in x.terms.items():
            d1 = self.word_degree(w1)
            for w2, c2 in y.terms.items():
                if d1 != self.word_degree(w2):
                    continue
                v = self.pair_words(w1, w2)
                if v.cn:
                    acc = acc + c1 * c2 * v
        return acc

    def pair_words(self, w: Word, w2: Word) -> Scalar:
        """{e_w, e_w2} for arbitrary words (zero on degree mismatch)."""
        if not w2:
            return ONE if not w else ZERO
        if not w:
            return ZERO
        key = (w, w2)
        hit = self._pair_memo.get(key)
        if hit is not None:
            return hit
        if self.word_degree(w) != self.word_degree(w2):
            val = ZERO
        elif len(w2) == 1:
            if len(w) == 1:
                val = self.datum.nu(*w[0]) if w[0] == w2[0] else ZERO
            else:
                val = self._pair_single(w2[0], w)
        else:
            val = self._pair_split(w, w2)
        self._pair_memo[key] = val
        return val

    def _pair_single(self, label: Label, w: Word) -> Scalar:
        """{e_{jk}, e_w} for a multi-letter word w of degree k*alpha_j.

        Pairs rho(e_{jk}) against w[0] (x) w[1:]; only the split whose left
        factor is the single letter w[0] itself survives.
        """
        j, k = label
        i0, l0 = w[0]
        rest = w[1:]
        if i0 != j or l0 >= k:
            return ZERO  # l0 == k would force rest to pair with 1
        qb = self.datum.q_exp_braced(j)
        e = qb * l0 * (k - l0)
        val = self.datum.nu(j, l0) * self.pair_words(rest, ((j, k - l0),))
        if e and val.cn:
            val = val * Scalar.q_power(e)
        return val

    def _pair_split(self, w: Word, w2: Word) -> Scalar:
        """{e_w, e_{w2[0]} * e_{w2[1:]}} through the coproduct of w.

        Enumerates the splits of w whose left part has degree k*alpha_j:
        letters of index j give up part of their level, all other letters go
        to the right factor, picking up the twisted-tensor q-powers.
        """
        j, k = w2[0]
        rest = w2[1:]
        d = self.datum
        qb = d.q_exp_braced(j)
        alpha_j = d.alpha(j)
        jpos = [t for t, (i, _) in enumerate(w) if i == j]
        if sum(w[t][1] for t in jpos) < k:
            return ZERO
        acc = ZERO

        def go(pos_idx: int, remaining: int, left: Word, right: Word, coeff: Scalar, rdeg: int):
            # rdeg = (degree of the right part built so far, alpha_j)
            nonlocal acc
            if pos_idx == len(jpos):
                if remaining:
                    return
                tail = w[jpos[-1] + 1 :]
                lhs = self.pair_words(left, (w2[0],))
                if lhs.cn:
                    rhs = self.pair_words(right + tail, rest)
                    if rhs.cn:
                        acc = acc + coeff * lhs * rhs
                return
            t = jpos[pos_idx]
            start = jpos[pos_idx - 1] + 1 if pos_idx else 0
            gap = w[start:t]
            if gap:
                rdeg += d.root_pairing(self.word_degree(gap), alpha_j)
                right = right + gap
            lev = w[t][1]
            for m in range(min(lev, remaining) + 1):
                n = lev - m
                e = qb * m * n + m * rdeg
                c = coeff * Scalar.q_power(e) if e else coeff
                lw = left + ((j, m),) if m else left
                rw = right + ((j, n),) if n else right
                go(pos_idx + 1, remaining - m, lw, rw, c, rdeg + 2 * qb * n)

        go(0, k, (), (), ONE, 0)
        return acc

    # -- degree slices, Gram tables, radical -----------------------------------

    def letters_within(self, beta: RootVec) -> list:
        """Generator labels (i, l) with l*alpha_i <= beta componentwise."""
        return [(i, l) for (i, l) in self.datum.generators if l <= beta[i]]

    def monomials(self, beta: RootVec) -> list:
        """All words of degree beta in lexicographic label order."""
        if height(beta) > self.height_budget:
            raise BudgetError(
                f"degree height {height(beta)} exceeds budget {self.height_budget}",
                needed=height(beta),
            )
        return self._monomials(beta)

    def _monomials(self, beta: RootVec) -> list:
        hit = self._words_memo.get(beta)
        if hit is not None:
            return hit
        if not any(beta):
            out = [()]
        else:
            out = []
            for (i, l) in self.letters_within(beta):
                sub = root_sub(beta, self.datum.alpha(i, l))
                out.extend(((i, l),) + w for w in self._monomials(sub))
        self._words_memo[beta] = out
        return out

    def gram(self, beta: RootVec) -> GramTable:
        """Full Gram table of the degree-beta slice, rank by Bareiss elimination."""
        hit = self._gram_memo.get(beta)
        if hit is not None:
            return hit
        if self.gram_store is not None:
            stored = self.gram_store.load(self.datum, beta)
            if stored is not None:
                self._gram_memo[beta] = stored
                return stored
        words = self.monomials(beta)
        matrix = [[None] * len(words) for _ in words]
        for r, wr in enumerate(words):
            for c in range(r, len(words)):
                v = self.pair_words(wr, words[c])
                matrix[r][c] = v
                if c != r:
                    matrix[c][r] = v
        rank, pivots = bareiss_rank_pivots(scalar_rows_to_int_polys(matrix))
        table = GramTable(beta, words, matrix, rank, pivots)
        self._gram_memo[beta] = table
        if self.gram_store is not None:
            self.gram_store.save(self.datum, table)
        return table

    def radical_member(self, x: FreeElem) -> bool:
        """True iff a homogeneous x pairs to zero against every monomial."""
        if x.is_zero():
            return True
        beta = self.degree_of(x)
        for w in self.monomials(beta):
            acc = ZERO
            for wx, c in x.terms.items():
                v = self.pair_words(wx, w)
                if v.cn:
                    acc = acc + c * v
            if acc.cn:
                return False
        return True

    def serre_element(
        self, i: int, j: int, n: int, m: int, c: tuple | None = None, sign: int = 1
    ) -> FreeElem:
        """The alternating sum sum_{r+s=m} (-1)^r q_i^{±r(-a_ij*n-m+1)} e_i^(r) e_{j,c} e_i^(s).

        Hypothesis: i real, i != j, m > -a_ij * n >= 0.  For real j the middle
        factor is the divided power e_j^(n) and c is ignored.
        """
        d = self.datum
        if not d.is_real(i):
            raise DomainError("serre elements need a real first index")
        if i == j:
            raise DomainError("serre elements need distinct indices")
        if n < 0 or m <= -d.a[i][j] * n:
            raise DomainError(
                f"hypothesis m > -a_ij*n >= 0 violated: m={m}, -a_ij*n={-d.a[i][j] * n}"
            )
        if sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        if d.is_real(j):
            middle = self.divided_power(j, n)
        else:
            if n == 0:
                middle = FreeElem.unit()
            else:
                if c is None:
                    raise DomainError("imaginary middle index needs a composition")
                if sum(c) != n or any(p <= 0 for p in c):
                    raise DomainError(f"{c} is not a composition of {n}")
                middle = FreeElem.word(tuple((j, p) for p in c))
        si = d.s[i]
        expo = -d.a[i][j] * n - m + 1
        out = FreeElem.zero()
        for r in range(m + 1):
            s = m - r
            term = (self.divided_power(i, r) * middle) * self.divided_power(i, s)
            coeff = Scalar.q_power(sign * si * r * expo)
            if r % 2:
                coeff = -coeff
            out = out + term.scale(coeff)
        return out
