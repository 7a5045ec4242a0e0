"""Coordinates on the positive half, its derivation families and projections.

Elements are linear combinations of pivot primitive words (classes modulo the
form radical).  The delta operators act by Leibniz rules on letters; the
n-step and mixed extractions read components off the formal coproduct, whose
letters split group-like.  Projections onto the flank subalgebras are exact
degree-wise linear algebra.
"""

from __future__ import annotations

from .cartan import RootVec, height, root_add, root_sub
from .errors import BudgetError, ConsistencyError, DegeneracyError, DomainError
from .freealg import FreeElem, Word
from .linalg import LU, kernel, rref
from .scalars import ONE, ZERO, Scalar, q_fact
from .ualg import LPP, UAlgebra, UElem


class UPlusElem:
    """Linear combination of pivot words of the positive half."""

    __slots__ = ("ua", "terms")

    def __init__(self, ua: UAlgebra, terms: dict):
        self.ua = ua
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "UPlusElem") -> "UPlusElem":
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            acc = c if acc is None else acc + c
            if acc.cn:
                out[w] = acc
            else:
                out.pop(w, None)
        return UPlusElem(self.ua, out)

    def __sub__(self, other: "UPlusElem") -> "UPlusElem":
        return self + other.scale(Scalar.from_int(-1))

    def scale(self, s: Scalar) -> "UPlusElem":
        if s.is_zero():
            return UPlusElem(self.ua, {})
        if s.is_one():
            return self
        return UPlusElem(self.ua, {w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: "UPlusElem") -> "UPlusElem":
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = c1 * c2
                for pw, cc in self.ua.reduce_word(w1 + w2).items():
                    v = c * cc
                    if not v.cn:
                        continue
                    acc = out.get(pw)
                    acc = v if acc is None else acc + v
                    if acc.cn:
                        out[pw] = acc
                    else:
                        out.pop(pw, None)
        return UPlusElem(self.ua, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPlusElem):
            return NotImplemented
        return self.terms == other.terms

    def degrees(self) -> set:
        return {self.ua.word_degree(w) for w in self.terms}

    def degree(self) -> RootVec:
        degs = self.degrees()
        if len(degs) != 1:
            raise DomainError("element is not homogeneous")
        return next(iter(degs))

    def component(self, beta: RootVec) -> "UPlusElem":
        return UPlusElem(
            self.ua, {w: c for w, c in self.terms.items() if self.ua.word_degree(w) == beta}
        )

    def rep(self) -> FreeElem:
        """A representative in the free algebra."""
        return self.ua.prims.rep(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ua.datum.names
        bits = []
        for w in sorted(self.terms, key=repr):
            body = "*".join(f"a[{names[i]},{l}]" for i, l in w) or "1"
            bits.append(f"({self.terms[w]})*{body}")
        return " + ".join(bits)


class UPlus:
    """Operation container for the positive half of a UAlgebra."""

    def __init__(self, ua: UAlgebra):
        self.ua = ua
        self.datum = ua.datum
        self._rho_memo: dict = {}
        self._mixed_solvers: dict = {}
        self._proj_solvers: dict = {}

    # -- constructors ------------------------------------------------------------

    def zero(self) -> UPlusElem:
        return UPlusElem(self.ua, {})

    def one(self) -> UPlusElem:
        return UPlusElem(self.ua, {(): ONE})

    def gen(self, i: int, l: int = 1) -> UPlusElem:
        return self.from_word(((i, l),))

    def from_word(self, w: Word, coeff: Scalar = ONE) -> UPlusElem:
        out: dict = {}
        for pw, c in self.ua.reduce_word(w).items():
            v = c * coeff
            if v.cn:
                out[pw] = v
        return UPlusElem(self.ua, out)

    def from_words(self, terms: dict) -> UPlusElem:
        out = self.zero()
        for w, c in terms.items():
            out = out + self.from_word(w, c)
        return out

    def from_free(self, x: FreeElem) -> UPlusElem:
        return UPlusElem(self.ua, self.ua.coords_of_free(x))

    def a_divided(self, i: int, r: int) -> UPlusElem:
        if r == 0:
            return self.one()
        return self.from_word(((i, 1),) * r, q_fact(r, self.datum.s[i]).inverse())

    def embed(self, x: UPlusElem) -> UElem:
        zero_h = self.datum.zero_coroot()
        return UElem(self.ua, {((), zero_h, w): c for w, c in x.terms.items()})

    def extract(self, u: UElem) -> UPlusElem:
        return UPlusElem(self.ua, u.positive_words())

    # -- Leibniz derivations -------------------------------------------------------

    def delta_small(self, i: int, l: int, side: str, x: UPlusElem) -> UPlusElem:
        """delta_{i,l} (side 'lower') or delta^{i,l} (side 'upper')."""
        if side not in ("lower", "upper"):
            raise DomainError("side must be 'lower' or 'upper'")
        d = self.datum
        alpha_i = d.alpha(i)
        out = self.zero()
        for w, c in x.terms.items():
            for t, lab in enumerate(w):
                if lab != (i, l):
                    continue
                if side == "lower":
                    flank = self.ua.word_degree(w[t + 1 :])
                else:
                    flank = self.ua.word_degree(w[:t])
                e = l * d.root_pairing(flank, alpha_i)
                coeff = c * Scalar.q_power(e) if e else c
                out = out + self.from_word(w[:t] + w[t + 1 :], coeff)
        return out

    def delta_on_raw(self, i: int, l: int, side: str, terms: dict) -> UPlusElem:
        """Same Leibniz rule applied to raw (unreduced) word combinations.

        Used as a representative-independence self-check in the tests.
        """
        return self.delta_small(i, l, side, UPlusElem(self.ua, dict(terms)))

    def ker_membership(self, i: int, x: UPlusElem) -> bool:
        self.datum._require_real(i)
        return self.delta_small(i, 1, "upper", x).is_zero()

    def ker_membership_star(self, i: int, x: UPlusElem) -> bool:
        self.datum._require_real(i)
        return self.delta_small(i, 1, "lower", x).is_zero()

    # -- formal coproduct -----------------------------------------------------------

    def rho_word(self, w: Word) -> list:
        """Group-like splits of a primitive word: (left, right, coeff) triples."""
        hit = self._rho_memo.get(w)
        if hit is not None:
            return hit
        d = self.datum
        splits = [((), (), ONE, d.zero_root())]
        for lab in w:
            i, l = lab
            ldeg = d.alpha(i, l)
            nxt = []
            for (lw, rw, c, rdeg) in splits:
                tw = d.root_pairing(rdeg, ldeg)
                cl = c * Scalar.q_power(tw) if tw else c
                nxt.append((lw + (lab,), rw, cl, rdeg))
                nxt.append((lw, rw + (lab,), c, root_add(rdeg, ldeg)))
            splits = nxt
        out = [(lw, rw, c) for (lw, rw, c, _) in splits]
        self._rho_memo[w] = out
        return out

    def rho(self, x: UPlusElem) -> dict:
        """Coproduct in pivot-word tensor coordinates: (left, right) -> scalar."""
        out: dict = {}
        for w, c in x.terms.items():
            for (lw, rw, cc) in self.rho_word(w):
                base = c * cc
                if not base.cn:
                    continue
                for pl, cl in self.ua.reduce_word(lw).items():
                    c2 = base * cl
                    if not c2.cn:
                        continue
                    for pr, cr in self.ua.reduce_word(rw).items():
                        v = c2 * cr
                        if not v.cn:
                            continue
                        key = (pl, pr)
                        acc = out.get(key)
                        acc = v if acc is None else acc + v
                        if acc.cn:
                            out[key] = acc
                        else:
                            out.pop(key, None)
        return out

    # -- n-step extractions -----------------------------------------------------------

    def delta_n(self, i: int, n: int, side: str, x: UPlusElem) -> UPlusElem:
        """delta_{ni} ('lower') or delta^{ni} ('upper') for a real index i."""
        self.datum._require_real(i)
        if n < 1:
            raise DomainError("n must be >= 1")
        if side not in ("lower", "upper"):
            raise DomainError("side must be 'lower' or 'upper'")
        probe = ((i, 1),) * n
        fact = q_fact(n, self.datum.s[i])
        out = self.zero()
        for w, c in x.terms.items():
            for (lw, rw, cc) in self.rho_word(w):
                if side == "upper" and lw == probe:
                    out = out + self.from_word(rw, c * cc * fact)
                elif side == "lower" and rw == probe:
                    out = out + self.from_word(lw, c * cc * fact)
        return out

    def _mixed_solver(self, i: int, j: int, l: int, m: int):
        """Extraction data for the degree l*alpha_j + m*alpha_i left slot."""
        key = (i, j, l, m)
        hit = self._mixed_solvers.get(key)
        if hit is not None:
            return hit
        d = self.datum
        lbeta = -l * d.a[i][j]
        if not 0 <= m <= lbeta:
            raise DomainError(
                f"mixed extraction defined for 0 <= r+s <= {lbeta}, got {m}"
            )
        target = root_add(d.alpha(j, l), d.alpha(i, m))
        basis = self.ua.basis(target)
        dim = len(basis.words)
        windex = {w: k for k, w in enumerate(basis.words)}
        fam = []
        for r in range(m + 1):
            s = m - r
            w = ((i, 1),) * r + ((j, l),) + ((i, 1),) * s
            coeff = (q_fact(r, d.s[i]) * q_fact(s, d.s[i])).inverse()
            vec = [ZERO] * dim
            for pw, c in self.ua.reduce_word(w).items():
                vec[windex[pw]] = c * coeff
            fam.append(vec)
        rows, piv = rref([list(v) for v in fam])
        if len(rows) != m + 1:
            raise DegeneracyError(
                f"flanked family not independent in degree {target}"
            )
        # extend the family to a basis by unit vectors on pivot words
        cols = [list(v) for v in fam]
        used = set(piv)
        for k in range(dim):
            if len(cols) == dim:
                break
            if k in used:
                continue
            probe = cols + [[ONE if t == k else ZERO for t in range(dim)]]
            rows2, _ = rref(probe)
            if len(rows2) == len(cols) + 1:
                cols.append(probe[-1])
        if len(cols) != dim:
            raise DegeneracyError(f"could not extend family to a basis in degree {target}")
        mat = [[cols[c][r] for c in range(dim)] for r in range(dim)]
        solver = (LU(mat), windex, dim)
        self._mixed_solvers[key] = solver
        return solver

    def delta_mixed(self, i: int, jl: tuple, m: int, order: str, x: UPlusElem) -> UPlusElem:
        """delta^{(j,l);mi} (order 'jl-first') or delta^{mi;(j,l)} ('i-first')."""
        self.datum._require_real(i)
        j, l = jl
        if order not in ("jl-first", "i-first"):
            raise DomainError("order must be 'jl-first' or 'i-first'")
        lu, windex, dim = self._mixed_solver(i, j, l, m)
        # component index within the flanked family: (r, s) = (0, m) when the
        # (j,l) letter comes first, (m, 0) when the a_i block comes first
        comp = 0 if order == "jl-first" else m
        d = self.datum
        target = root_add(d.alpha(j, l), d.alpha(i, m))
        out = self.zero()
        gamma_cache: dict = {}
        for w, c in x.terms.items():
            for (lw, rw, cc) in self.rho_word(w):
                if self.ua.word_degree(lw) != target:
                    continue
                base = c * cc
                if not base.cn:
                    continue
                for pl, cl in self.ua.reduce_word(lw).items():
                    g = gamma_cache.get(pl)
                    if g is None:
                        rhs = [ZERO] * dim
                        rhs[windex[pl]] = ONE
                        g = lu.solve(rhs)[comp]
                        gamma_cache[pl] = g
                    v = base * cl * g
                    if v.cn:
                        out = out + self.from_word(rw, v)
        return out

    # -- projections ---------------------------------------------------------------

    def _proj_solver(self, i: int, side: str, beta: RootVec):
        key = (i, side, beta)
        hit = self._proj_solvers.get(key)
        if hit is not None:
            return hit
        d = self.datum
        basis = self.ua.basis(beta)
        dim = len(basis.words)
        windex = {w: k for k, w in enumerate(basis.words)}
        if beta[i] == 0:
            # no a_i letters can occur: everything lies in the flank subalgebra
            solver = (None, windex, [], dim)
            self._proj_solvers[key] = solver
            return solver
        lower = root_sub(beta, d.alpha(i))
        lowbasis = self.ua.basis(lower)
        # kernel of the relevant single-step derivation on this degree
        mat = []
        for w in basis.words:
            dv = self.delta_small(i, 1, "upper" if side == "P" else "lower", UPlusElem(self.ua, {w: ONE}))
            row = [ZERO] * len(lowbasis.words)
            lindex = {ww: k for k, ww in enumerate(lowbasis.words)}
            for ww, c in dv.terms.items():
                row[lindex[ww]] = c
            mat.append(row)
        # kernel vectors of the transposed action: delta(sum c_w w) = 0
        ker = kernel([[mat[r][c] for r in range(dim)] for c in range(len(lowbasis.words))], ncols=dim)
        # complement: a_i * U+ (side P) or U+ * a_i (side Pprime)
        comp = []
        for w in lowbasis.words:
            word = ((i, 1),) + w if side == "P" else w + ((i, 1),)
            vec = [ZERO] * dim
            for pw, c in self.ua.reduce_word(word).items():
                vec[windex[pw]] = c
            comp.append(vec)
        rows, piv = rref(comp)
        comp_basis = [rows[k] for k in range(len(rows))]
        if len(comp_basis) + len(ker) != dim:
            raise ConsistencyError(
                f"projection decomposition rank mismatch in degree {beta}: "
                f"{len(comp_basis)} + {len(ker)} != {dim}"
            )
        cols = comp_basis + ker
        mat2 = [[cols[c][r] for c in range(dim)] for r in range(dim)]
        try:
            lu = LU(mat2)
        except DegeneracyError:
            raise ConsistencyError(f"projection decomposition not direct in degree {beta}")
        solver = (lu, windex, ker, dim)
        self._proj_solvers[key] = solver
        return solver

    def project(self, i: int, side: str, x: UPlusElem) -> UPlusElem:
        """P_i (side 'P', along a_i U+) or P'_i (side 'Pprime', along U+ a_i)."""
        self.datum._require_real(i)
        if side not in ("P", "Pprime"):
            raise DomainError("side must be 'P' or 'Pprime'")
        out = self.zero()
        for beta in x.degrees():
            comp = x.component(beta)
            lu, windex, ker, dim = self._proj_solver(i, side, beta)
            if lu is None:
                out = out + comp
                continue
            vec = [ZERO] * dim
            for w, c in comp.terms.items():
                vec[windex[w]] = c
            sol = lu.solve(vec)
            ncomp = dim - len(ker)
            basis = self.ua.basis(beta)
            terms: dict = {}
            for t, kv in enumerate(ker):
                c = sol[ncomp + t]
                if not c.cn:
                    continue
                for k, cc in enumerate(kv):
                    if cc.cn:
                        w = basis.words[k]
                        acc = terms.get(w, ZERO) + c * cc
                        if acc.cn:
                            terms[w] = acc
                        else:
                            terms.pop(w, None)
            out = out + UPlusElem(self.ua, terms)
        return out

    # -- f/f'/g/g' families and the invariant form -----------------------------------

    def f_family(self, i: int, jl: tuple, m: int, kind: str):
        """f/f' as positive elements, g/g' as negative UElems (e = -1 aliases)."""
        j, l = jl
        if kind in ("f", "fp"):
            u = self.ua.family("F" if kind == "f" else "Fp", i, j, l, m, -1)
            return self.extract(u)
        if kind in ("g", "gp"):
            return self.ua.family("G" if kind == "g" else "Gp", i, j, l, m, -1)
        raise DomainError(f"unknown family kind {kind!r}")

    def l_double_prime_on_bracket(self, i: int, x: UPlusElem) -> UPlusElem:
        if not self.ker_membership(i, x):
            raise DomainError("element is not in the flank subalgebra ker delta^i")
        img = self.ua.symmetry(LPP, i, 1, self.embed(x))
        if not img.is_positive():
            raise ConsistencyError("positivity contract violated by the symmetry image")
        return self.extract(img)

    def form_pm(self, y, x: UPlusElem) -> Scalar:
        """{y, x} for negative y against positive x, through representatives."""
        if isinstance(y, UElem):
            ywords = y.negative_words()
        elif isinstance(y, UPlusElem):
            ywords = y.terms
        else:
            raise DomainError("y must be a negative UElem or a mirrored positive element")
        acc = ZERO
        for wy, cy in ywords.items():
            dy = self.ua.word_degree(wy)
            for wx, cx in x.terms.items():
                if self.ua.word_degree(wx) != dy:
                    continue
                v = self.ua.prim_pair(wy, wx)
                if v.cn:
                    acc = acc + cy * cx * v
        return acc
