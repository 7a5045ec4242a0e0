"""The full algebra in triangular normal form and its Lusztig symmetries.

Every element is a sum of terms (negative word) * q^h * (positive word) with
both words drawn from degree-wise pivot bases of primitive-generator words.
Products are straightened with the mixed commutation rule on primitive
letters: a positive letter commutes past a negative one unless the labels
match exactly, in which case it emits tau * (K^-l - K^l).

Pivot bases are built degree by degree: candidates are letter-extensions of
the lower bases, their Gram matrix (through representatives in the free
algebra) is row-reduced, and the pivot columns become the basis.  A dual set
of pivot rows gives a certified-nonsingular block for coordinate solves.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import Coroot, RootVec, height, root_add, root_sub
from .errors import BudgetError, ConsistencyError, DomainError
from .freealg import FreeAlgebra, FreeElem, Word
from .linalg import LU, modp_rank_pivots, rref
from .primitive import PrimitiveTable
from .scalars import ONE, ZERO, Scalar, q_fact, q_int

LP = "Lp"
LPP = "Lpp"


@dataclass
class DegreeBasis:
    beta: RootVec
    words: list  # pivot primitive words, a basis of the degree slice
    dual_rows: list  # candidate words whose pairings certify coordinates
    lu: LU | None  # factorization of gram[dual_rows][:, words]
    expansions: dict  # candidate word -> coordinate tuple over ``words``


class UAlgebra:
    def __init__(self, alg: FreeAlgebra, prims: PrimitiveTable | None = None, window: int = 8):
        self.alg = alg
        self.datum = alg.datum
        self.prims = prims or PrimitiveTable(alg)
        self.window = window
        self._bases: dict = {}
        self._prim_pairs: dict = {}
        self._reduce_memo: dict = {}
        self._straighten_memo: dict = {}
        self._single_memo: dict = {}
        self._sym_image_memo: dict = {}

    # -- pairings of primitive words ------------------------------------------

    def prim_pair(self, w: Word, w2: Word) -> Scalar:
        """{a_w, a_w2} through representatives in the free algebra."""
        key = (w, w2)
        hit = self._prim_pairs.get(key)
        if hit is None:
            hit = self.alg.form(self.prims.rep_word(w), self.prims.rep_word(w2))
            self._prim_pairs[key] = hit
        return hit

    def word_degree(self, w: Word) -> RootVec:
        return self.alg.word_degree(w)

    # -- degree bases ----------------------------------------------------------

    def basis(self, beta: RootVec) -> DegreeBasis:
        hit = self._bases.get(beta)
        if hit is not None:
            return hit
        if height(beta) > self.window:
            raise BudgetError(
                f"degree height {height(beta)} exceeds window {self.window}",
                needed=height(beta),
            )
        if not any(beta):
            b = DegreeBasis(beta, [()], [()], LU([[ONE]]), {(): (ONE,)})
            self._bases[beta] = b
            return b
        candidates = []
        for (i, l) in self.alg.letters_within(beta):
            lower = self.basis(root_sub(beta, self.datum.alpha(i, l)))
            candidates.extend(((i, l),) + w for w in lower.words)
        if not candidates:
            b = DegreeBasis(beta, [], [], None, {})
            self._bases[beta] = b
            return b
        n = len(candidates)
        gram = [[None] * n for _ in range(n)]
        for r in range(n):
            for c in range(r, n):
                v = self.prim_pair(candidates[r], candidates[c])
                gram[r][c] = v
                if c != r:
                    gram[c][r] = v
        basis = self._select_basis(beta, candidates, gram)
        self._bases[beta] = basis
        return basis

    def _select_basis(self, beta: RootVec, candidates: list, gram: list) -> DegreeBasis:
        n = len(candidates)
        # modular preselection is cheap and certified afterwards: a block
        # nonsingular mod p is nonsingular exactly
        _, piv_cols = modp_rank_pivots(gram)
        jrows = [gram[j] for j in piv_cols]
        _, piv_rows = modp_rank_pivots([[jrows[a][b] for b in range(n)] for a in range(len(jrows))])
        block = [[gram[r][j] for j in piv_cols] for r in piv_rows]
        try:
            lu = LU(block)
            expansions = self._certify(candidates, gram, piv_cols, piv_rows, lu)
        except Exception:
            expansions = None
        if expansions is None:
            # fall back to exact elimination for the pivot structure
            _, piv_cols = rref(gram)
            jrows = [gram[j] for j in piv_cols]
            _, piv_rows = rref(jrows)
            block = [[gram[r][j] for j in piv_cols] for r in piv_rows]
            lu = LU(block)
            expansions = self._certify(candidates, gram, piv_cols, piv_rows, lu)
            if expansions is None:
                raise ConsistencyError(f"basis certification failed at degree {beta}")
        words = [candidates[j] for j in piv_cols]
        dual = [candidates[r] for r in piv_rows]
        return DegreeBasis(beta, words, dual, lu, expansions)

    def _certify(self, candidates, gram, piv_cols, piv_rows, lu) -> dict | None:
        """Exact coordinates for every candidate, verified against all pairings."""
        n = len(candidates)
        expansions = {}
        unit = {j: k for k, j in enumerate(piv_cols)}
        for c in range(n):
            if c in unit:
                coords = tuple(ONE if k == unit[c] else ZERO for k in range(len(piv_cols)))
            else:
                coords = tuple(lu.solve([gram[r][c] for r in piv_rows]))
                # verify the expansion reproduces the pairing against every
                # candidate; this certifies both span and dimension exactly
                for k in range(n):
                    acc = ZERO
                    for t, j in enumerate(piv_cols):
                        if coords[t].cn and gram[k][j].cn:
                            acc = acc + coords[t] * gram[k][j]
                    if acc != gram[k][c]:
                        return None
            expansions[candidates[c]] = coords
        return expansions

    def dim(self, beta: RootVec) -> int:
        return len(self.basis(beta).words)

    def reduce_word(self, w: Word) -> dict:
        """Coordinates of the class of a_w over the pivot words of its degree."""
        hit = self._reduce_memo.get(w)
        if hit is not None:
            return hit
        beta = self.word_degree(w)
        basis = self.basis(beta)
        if w in basis.expansions:
            out = {
                basis.words[k]: c
                for k, c in enumerate(basis.expansions[w])
                if c.cn
            }
        else:
            head = w[:1]
            out = {}
            for pw, c in self.reduce_word(w[1:]).items():
                cand = head + pw
                exp = self.basis(beta).expansions.get(cand)
                if exp is None:
                    raise ConsistencyError(f"missing candidate expansion for {cand}")
                for k, cc in enumerate(exp):
                    if cc.cn:
                        key = basis.words[k]
                        acc = out.get(key)
                        acc = c * cc if acc is None else acc + c * cc
                        if acc.cn:
                            out[key] = acc
                        else:
                            out.pop(key, None)
        self._reduce_memo[w] = out
        return out

    def coords_of_free(self, x: FreeElem) -> dict:
        """Pivot-word coordinates of an element of the free algebra, per degree."""
        by_deg: dict = {}
        for w, c in x.terms.items():
            by_deg.setdefault(self.alg.word_degree(w), []).append((w, c))
        out: dict = {}
        for beta, terms in by_deg.items():
            basis = self.basis(beta)
            if not basis.words:
                continue
            elem = FreeElem({w: c for w, c in terms})
            rhs = [self.alg.form(self.prims.rep_word(r), elem) for r in basis.dual_rows]
            coords = basis.lu.solve(rhs)
            for k, cc in enumerate(coords):
                if cc.cn:
                    out[basis.words[k]] = out.get(basis.words[k], ZERO) + cc
        return {w: c for w, c in out.items() if c.cn}

    # -- straightening ----------------------------------------------------------

    def _tau(self, i: int, l: int) -> Scalar:
        return self.prims.generator(i, l).tau

    def _b_norm(self, i: int) -> Scalar:
        """tau_i * (q_i^-1 - q_i), the rescaling of the negative real generator."""
        si = self.datum.s[i]
        return self._tau(i, 1) * (Scalar.q_power(-si) - Scalar.q_power(si))

    def _single_pass(self, a: Label, y: Word) -> list:
        """a * b_y as a list of (yword, coroot, xword, coeff), words raw."""
        key = (a, y)
        hit = self._single_memo.get(key)
        if hit is not None:
            return hit
        zero_h = self.datum.zero_coroot()
        if not y:
            out = [((), zero_h, (a,), ONE)]
        else:
            b, rest = y[0], y[1:]
            out = [((b,) + yw, h, xt, c) for (yw, h, xt, c) in self._single_pass(a, rest)]
            if a == b:
                # a_{il} b_{il} - b_{il} a_{il} = tau_{il} (K_i^-l - K_i^l),
                # and each K_i^m picks up q^(-m*(deg rest, alpha_i)) moving
                # rightward past the remaining negative letters
                i, l = a
                tau = self._tau(i, l)
                dr = self.datum.root_pairing(self.word_degree(rest), self.datum.alpha(i))
                si = self.datum.s[i]
                out.append((rest, self.datum.coroot_h(i, -l * si), (), tau * Scalar.q_power(l * dr)))
                out.append((rest, self.datum.coroot_h(i, l * si), (), -(tau * Scalar.q_power(-l * dr))))
        self._single_memo[key] = out
        return out

    def _straighten(self, x: Word, y: Word) -> list:
        """x * y for a positive word x and negative word y, words raw."""
        if not x or not y:
            return [(y, self.datum.zero_coroot(), x, ONE)]
        key = (x, y)
        hit = self._straighten_memo.get(key)
        if hit is not None:
            return hit
        out = []
        for (y3, h3, xt, c3) in self._single_pass(x[-1], y):
            for (y4, h4, x4, c4) in self._straighten(x[:-1], y3):
                c = c3 * c4
                tw = self.datum.root_on_coroot(self.word_degree(x4), h3)
                if tw:
                    c = c * Scalar.q_power(-tw)
                out.append((y4, h4 + h3, x4 + xt, c))
        self._straighten_memo[key] = out
        return out

    # -- element constructors ----------------------------------------------------

    def zero_elem(self) -> "UElem":
        return UElem(self, {})

    def one(self) -> "UElem":
        return UElem(self, {((), self.datum.zero_coroot(), ()): ONE})

    def q_h(self, h: Coroot) -> "UElem":
        return UElem(self, {((), h, ()): ONE})

    def K(self, i: int, m: int = 1) -> "UElem":
        return self.q_h(self.datum.coroot_h(i, m * self.datum.s[i]))

    def a_word(self, w: Word, coeff: Scalar = ONE) -> "UElem":
        zero_h = self.datum.zero_coroot()
        terms = {}
        for pw, c in self.reduce_word(w).items():
            v = c * coeff
            if v.cn:
                terms[((), zero_h, pw)] = v
        return UElem(self, terms)

    def b_word(self, w: Word, coeff: Scalar = ONE) -> "UElem":
        zero_h = self.datum.zero_coroot()
        terms = {}
        for pw, c in self.reduce_word(w).items():
            v = c * coeff
            if v.cn:
                terms[(pw, zero_h, ())] = v
        return UElem(self, terms)

    def a_gen(self, i: int, l: int = 1) -> "UElem":
        return self.a_word(((i, l),))

    def b_gen(self, i: int, l: int = 1) -> "UElem":
        return self.b_word(((i, l),))

    def B(self, i: int) -> "UElem":
        return self.b_gen(i).scale(self._b_norm(i).inverse())

    def a_divided(self, i: int, r: int) -> "UElem":
        if r == 0:
            return self.one()
        return self.a_word(((i, 1),) * r, q_fact(r, self.datum.s[i]).inverse())

    def B_divided(self, i: int, r: int) -> "UElem":
        if r == 0:
            return self.one()
        c = q_fact(r, self.datum.s[i]) * self._b_norm(i) ** r
        return self.b_word(((i, 1),) * r, c.inverse())

    def from_positive(self, terms: dict) -> "UElem":
        """UElem from a dict of (possibly raw) positive words to scalars."""
        zero_h = self.datum.zero_coroot()
        out: dict = {}
        for w, c in terms.items():
            for pw, cc in self.reduce_word(w).items():
                key = ((), zero_h, pw)
                acc = out.get(key)
                acc = c * cc if acc is None else acc + c * cc
                if acc.cn:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return UElem(self, out)

    # -- multiplication ------------------------------------------------------------

    def multiply(self, u: "UElem", v: "UElem") -> "UElem":
        out: dict = {}
        d = self.datum
        for (y1, h1, x1), c1 in u.terms.items():
            for (y2, h2, x2), c2 in v.terms.items():
                c12 = c1 * c2
                for (y3, h3, x3, c3) in self._straighten(x1, y2):
                    c = c12 * c3
                    tw = -d.root_on_coroot(self.word_degree(y3), h1)
                    tw -= d.root_on_coroot(self.word_degree(x3), h2)
                    if tw:
                        c = c * Scalar.q_power(tw)
                    h = h1 + h3 + h2
                    yy = y1 + y3
                    xx = x3 + x2
                    for yp, cy in self.reduce_word(yy).items():
                        ccy = c * cy
                        if not ccy.cn:
                            continue
                        for xp, cx in self.reduce_word(xx).items():
                            v2 = ccy * cx
                            if not v2.cn:
                                continue
                            key = (yp, h, xp)
                            acc = out.get(key)
                            acc = v2 if acc is None else acc + v2
                            if acc.cn:
                                out[key] = acc
                            else:
                                out.pop(key, None)
        return UElem(self, out)

    # -- involutions -----------------------------------------------------------

    def involution(self, kind: str, u: "UElem", i: int | None = None) -> "UElem":
        if kind == "omega":
            return self._omega(u)
        if kind == "star":
            return self._star(u)
        if kind == "varpi":
            if i is None:
                raise DomainError("varpi is attached to a real index")
            self.datum._require_real(i)
            return self._varpi(i, u)
        raise DomainError(f"unknown involution {kind!r}")

    def _omega(self, u: "UElem") -> "UElem":
        out = self.zero_elem()
        for (y, h, x), c in u.terms.items():
            t = self.a_word(y, c)
            t = self.multiply(t, self.q_h(-h))
            t = self.multiply(t, self.b_word(x))
            out = out + t
        return out

    def _star(self, u: "UElem") -> "UElem":
        out = self.zero_elem()
        for (y, h, x), c in u.terms.items():
            t = self.a_word(tuple(reversed(x)), c)
            t = self.multiply(t, self.q_h(-h))
            t = self.multiply(t, self.b_word(tuple(reversed(y))))
            out = out + t
        return out

    def _varpi(self, i: int, u: "UElem") -> "UElem":
        bn = self._b_norm(i)
        out = self.zero_elem()
        for (y, h, x), c in u.terms.items():
            t = self.one().scale(c)
            for lab in y:
                img = self.a_gen(*lab).scale(bn) if lab == (i, 1) else self.a_word((lab,))
                t = self.multiply(t, img)
            t = self.multiply(t, self.q_h(-h))
            for lab in x:
                img = self.B(i) if lab == (i, 1) else self.b_word((lab,))
                t = self.multiply(t, img)
            out = out + t
        return out

    # -- Lusztig symmetries on U -------------------------------------------------

    def _sym_image(self, variant: str, i: int, e: int, lab: Label, side: str) -> "UElem":
        key = (variant, i, e, lab, side)
        hit = self._sym_image_memo.get(key)
        if hit is not None:
            return hit
        d = self.datum
        si = d.s[i]
        bn = self._b_norm(i)
        j, l = lab
        if lab == (i, 1):
            if variant == LP:
                if side == "x":  # a_i -> -K_{ei} B_i = -q_i^{-2e} B_i K_{ei}
                    img = UElem(
                        self,
                        {(((i, 1),), d.coroot_h(i, e * si), ()): -(Scalar.q_power(-2 * e * si) / bn)},
                    )
                else:  # b_i -> -bn * a_i K_{-ei} = -bn q_i^{2e} K_{-ei} a_i
                    img = UElem(
                        self,
                        {((), d.coroot_h(i, -e * si), ((i, 1),)): -(bn * Scalar.q_power(2 * e * si))},
                    )
            else:
                if side == "x":  # a_i -> -B_i K_{ei}
                    img = UElem(self, {(((i, 1),), d.coroot_h(i, e * si), ()): -(bn.inverse())})
                else:  # b_i -> -bn * K_{-ei} a_i
                    img = UElem(self, {((), d.coroot_h(i, -e * si), ((i, 1),)): -bn})
        else:
            lbeta = -l * d.a[i][j]
            terms: dict = {}
            for r in range(lbeta + 1):
                s = lbeta - r
                sign = MINUS if r % 2 else ONE
                if variant == LP:
                    expo = e * si * r if side == "x" else -e * si * r
                else:
                    expo = -e * si * r if side == "x" else e * si * r
                if side == "x":
                    if variant == LP:
                        w = ((i, 1),) * r + (lab,) + ((i, 1),) * s
                    else:
                        w = ((i, 1),) * s + (lab,) + ((i, 1),) * r
                    c = Scalar.q_power(expo) / (q_fact(r, si) * q_fact(s, si))
                else:
                    if variant == LP:
                        w = ((i, 1),) * s + (lab,) + ((i, 1),) * r
                    else:
                        w = ((i, 1),) * r + (lab,) + ((i, 1),) * s
                    c = Scalar.q_power(expo) / (q_fact(r, si) * q_fact(s, si) * bn ** lbeta)
                c = c * sign
                acc = terms.get(w)
                terms[w] = c if acc is None else acc + c
            if side == "x":
                img = self.from_positive(terms)
            else:
                img = self.zero_elem()
                for w, c in terms.items():
                    img = img + self.b_word(w, c)
        self._sym_image_memo[key] = img
        return img

    def symmetry(self, variant: str, i: int, e: int, u: "UElem") -> "UElem":
        """The algebra endomorphism L'_{i,e} (variant Lp) or L''_{i,e} (Lpp)."""
        if variant not in (LP, LPP):
            raise DomainError(f"unknown symmetry variant {variant!r}")
        if e not in (1, -1):
            raise DomainError("sign e must be +1 or -1")
        self.datum._require_real(i)
        out = self.zero_elem()
        for (y, h, x), c in u.terms.items():
            t = self.one().scale(c)
            for lab in y:
                t = self.multiply(t, self._sym_image(variant, i, e, lab, "y"))
            t = self.multiply(t, self.q_h(self.datum.reflect_coroot(i, h)))
            for lab in x:
                t = self.multiply(t, self._sym_image(variant, i, e, lab, "x"))
            out = out + t
        return out

    def braid_apply(self, variant: str, word, e: int, u: "UElem") -> "UElem":
        if not self.datum.is_reduced(tuple(word)):
            raise DomainError(f"word {tuple(word)} is not reduced")
        for i in reversed(tuple(word)):
            u = self.symmetry(variant, i, e, u)
        return u

    # -- the F/F'/G/G' operator families -----------------------------------------

    def family(self, kind: str, i: int, j: int, n: int, m: int, e: int) -> "UElem":
        """F/F'/G/G' sums of flanked divided powers, purely positive/negative."""
        d = self.datum
        d._require_real(i)
        if i == j:
            raise DomainError("family needs distinct indices")
        if n < 0 or m < 0:
            return self.zero_elem()
        si = d.s[i]
        beta = -d.a[i][j]
        if n == 0:
            middle: Word = ()
            mid_scale = ONE
        elif d.is_real(j):
            middle = ((j, 1),) * n
            mid_scale = q_fact(n, d.s[j]).inverse()
        else:
            middle = ((j, n),)
            mid_scale = ONE
        bn = self._b_norm(i)
        out = self.zero_elem()
        for r in range(m + 1):
            s = m - r
            expo = e * si * r * (beta * n - m + 1)
            if kind in ("F", "Fp"):
                c = Scalar.q_power(expo) * mid_scale / (q_fact(r, si) * q_fact(s, si))
                if r % 2:
                    c = -c
                w = ((i, 1),) * r + middle + ((i, 1),) * s
                if kind == "Fp":
                    w = ((i, 1),) * s + middle + ((i, 1),) * r
                out = out + self.a_word(w, c)
            elif kind in ("G", "Gp"):
                # b_{jn} mirrors a_{jn} (divided power of the plain negative
                # generator); only the flanking B_i's carry the rescaling
                c = Scalar.q_power(-expo) * mid_scale / (q_fact(r, si) * q_fact(s, si) * bn**m)
                if r % 2:
                    c = -c
                w = ((i, 1),) * s + middle + ((i, 1),) * r
                if kind == "Gp":
                    w = ((i, 1),) * r + middle + ((i, 1),) * s
                out = out + self.b_word(w, c)
            else:
                raise DomainError(f"unknown family kind {kind!r}")
        return out


MINUS = Scalar.from_int(-1)


class UElem:
    """Element of the full algebra in unique triangular normal form.

    Terms map (negative pivot word, coroot exponent, positive pivot word) to
    scalars; equality is termwise.
    """

    __slots__ = ("ua", "terms")

    def __init__(self, ua: UAlgebra, terms: dict):
        self.ua = ua
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "UElem") -> "UElem":
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc.cn:
                out[k] = acc
            else:
                out.pop(k, None)
        return UElem(self.ua, out)

    def __sub__(self, other: "UElem") -> "UElem":
        return self + other.scale(MINUS)

    def __neg__(self) -> "UElem":
        return self.scale(MINUS)

    def scale(self, s: Scalar) -> "UElem":
        if s.is_zero():
            return UElem(self.ua, {})
        if s.is_one():
            return self
        return UElem(self.ua, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other: "UElem") -> "UElem":
        return self.ua.multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UElem):
            return NotImplemented
        return self.terms == other.terms

    def is_positive(self) -> bool:
        """No negative letters and no Cartan part in any term."""
        return all(not y and h.is_zero() for (y, h, x) in self.terms)

    def is_negative(self) -> bool:
        return all(not x and h.is_zero() for (y, h, x) in self.terms)

    def positive_words(self) -> dict:
        if not self.is_positive():
            raise DomainError("element is not purely positive")
        return {x: c for (y, h, x), c in self.terms.items()}

    def negative_words(self) -> dict:
        if not self.is_negative():
            raise DomainError("element is not purely negative")
        return {y: c for (y, h, x), c in self.terms.items()}

    def k_weight(self, i: int) -> int:
        """n with K_i u K_i^-1 = q_i^n u; DomainError if not homogeneous."""
        d = self.ua.datum
        vals = set()
        for (y, h, x) in self.terms:
            gamma = root_sub(self.ua.word_degree(x), self.ua.word_degree(y))
            vals.add(sum(gamma[j] * d.a[i][j] for j in range(d.n)))
        if len(vals) > 1:
            raise DomainError("element is not K_i-homogeneous")
        return vals.pop() if vals else 0

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ua.datum.names
        bits = []
        for (y, h, x) in sorted(self.terms, key=repr):
            c = self.terms[(y, h, x)]
            part = [f"({c})"]
            for i, l in y:
                part.append(f"b[{names[i]},{l}]")
            for t, v in enumerate(h.h):
                if v:
                    part.append(f"q^({v}h_{names[t]})")
            for t, v in enumerate(h.d):
                if v:
                    part.append(f"q^({v}d_{names[t]})")
            for i, l in x:
                part.append(f"a[{names[i]},{l}]")
            bits.append("*".join(part))
        return " + ".join(bits)
