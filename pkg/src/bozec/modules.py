"""Truncated highest-weight modules with exact generator actions.

Verma weight spaces are the degree slices of the negative half (mirrored
pivot words acting freely on the highest-weight vector).  Irreducible
quotients are built level by level from lowering candidates, with dependence
and null vectors detected by the contravariant form <b_w v, b_w' v> =
(coefficient of v in sigma(b_w) b_w' v); its radical is the maximal
submodule, so the surviving words are a basis of the simple quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cartan import Coroot, RootVec, Weight, height, root_add, root_sub
from .errors import BudgetError, ConsistencyError, DomainError, InconclusiveError
from .freealg import Word
from .linalg import LU, kernel, modp_rank_pivots, rref
from .scalars import ONE, ZERO, Scalar, q_fact, q_int
from .ualg import UAlgebra, UElem

VERMA = "verma"
IRREDUCIBLE = "irreducible"


@dataclass
class ModuleSpace:
    beta: RootVec
    weight: Weight
    words: list  # basis words (negative letters, read as b-words)
    dual: list  # words certifying coordinates through the contravariant form
    lu: LU | None
    nulls: list  # dropped candidate words (kernel of the form), irreducible kind


class ModuleVec:
    """Weight-graded coordinate vector in a truncated highest-weight module."""

    __slots__ = ("module", "comps")

    def __init__(self, module: "HWModule", comps: dict):
        self.module = module
        self.comps = {b: v for b, v in comps.items() if any(c.cn for c in v)}

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other: "ModuleVec") -> "ModuleVec":
        out = {b: v[:] for b, v in self.comps.items()}
        for b, v in other.comps.items():
            if b in out:
                out[b] = [a + c for a, c in zip(out[b], v)]
            else:
                out[b] = v[:]
        return ModuleVec(self.module, out)

    def __sub__(self, other: "ModuleVec") -> "ModuleVec":
        return self + other.scale(Scalar.from_int(-1))

    def scale(self, s: Scalar) -> "ModuleVec":
        if s.is_zero():
            return ModuleVec(self.module, {})
        return ModuleVec(self.module, {b: [c * s for c in v] for b, v in self.comps.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVec):
            return NotImplemented
        return self.module is other.module and self.comps == other.comps

    def betas(self) -> list:
        return sorted(self.comps)

    def __repr__(self) -> str:
        if not self.comps:
            return "0"
        bits = []
        for b in sorted(self.comps):
            bits.append(f"{b}:[" + ", ".join(str(c) for c in self.comps[b]) + "]")
        return " + ".join(bits)


class HWModule:
    """Verma-type or irreducible highest-weight module truncated at a depth."""

    def __init__(self, ua: UAlgebra, lam: Weight, depth: int, kind: str = IRREDUCIBLE):
        if kind not in (VERMA, IRREDUCIBLE):
            raise DomainError(f"unknown module kind {kind!r}")
        if kind == IRREDUCIBLE and not ua.datum.is_dominant(lam):
            raise DomainError("irreducible quotients are built for dominant weights only")
        self.ua = ua
        self.datum = ua.datum
        self.lam = lam
        self.depth = depth
        self.kind = kind
        self.spaces: dict = {}
        self._pair_memo: dict = {}
        self._act_a_memo: dict = {}
        self._build()
        if kind == IRREDUCIBLE:
            self.verify_irreducible()

    # -- construction -----------------------------------------------------------

    def _build(self):
        d = self.datum
        zero = d.zero_root()
        self.spaces[zero] = ModuleSpace(zero, self.lam, [()], [()], LU([[ONE]]), [])
        betas = sorted(self._all_betas(), key=lambda b: (height(b), b))
        for beta in betas:
            if beta == zero:
                continue
            self.spaces[beta] = self._build_space(beta)

    def _all_betas(self) -> list:
        d = self.datum
        out = set()

        def go(beta):
            if beta in out:
                return
            out.add(beta)
            for (i, l) in d.generators:
                if l + height(beta) <= self.depth:
                    go(root_add(beta, d.alpha(i, l)))

        go(d.zero_root())
        return sorted(out)

    def _build_space(self, beta: RootVec) -> ModuleSpace:
        d = self.datum
        weight = self.lam - d.root_weight(beta)
        candidates = []
        for (i, l) in d.generators:
            if beta[i] >= l:
                above = self.spaces.get(root_sub(beta, d.alpha(i, l)))
                if above is not None:
                    candidates.extend(((i, l),) + w for w in above.words)
        if self.kind == VERMA:
            words = [w for w in self.ua.basis(beta).words]
            return ModuleSpace(beta, weight, words, [], None, [])
        if not candidates:
            return ModuleSpace(beta, weight, [], [], None, [])
        n = len(candidates)
        gram = [[None] * n for _ in range(n)]
        for r in range(n):
            for c in range(r, n):
                v = self._pair(candidates[r], candidates[c])
                gram[r][c] = v
                if c != r:
                    gram[c][r] = v
        piv_cols, piv_rows, lu = self._pivot_structure(gram)
        words = [candidates[j] for j in piv_cols]
        dual = [candidates[r] for r in piv_rows]
        nulls = [candidates[k] for k in range(n) if k not in set(piv_cols)]
        return ModuleSpace(beta, weight, words, dual, lu, nulls)

    def _pivot_structure(self, gram):
        n = len(gram)
        _, piv_cols = modp_rank_pivots(gram)
        jrows = [gram[j] for j in piv_cols]
        _, piv_rows = modp_rank_pivots(jrows)
        block = [[gram[r][j] for j in piv_cols] for r in piv_rows]
        try:
            lu = LU(block)
            if self._certified(gram, piv_cols, piv_rows, lu):
                return piv_cols, piv_rows, lu
        except Exception:
            pass
        _, piv_cols = rref(gram)
        jrows = [gram[j] for j in piv_cols]
        _, piv_rows = rref(jrows)
        block = [[gram[r][j] for j in piv_cols] for r in piv_rows]
        lu = LU(block)
        if not self._certified(gram, piv_cols, piv_rows, lu):
            raise ConsistencyError("module space certification failed")
        return piv_cols, piv_rows, lu

    def _certified(self, gram, piv_cols, piv_rows, lu) -> bool:
        n = len(gram)
        pivset = set(piv_cols)
        for c in range(n):
            if c in pivset:
                continue
            coords = lu.solve([gram[r][c] for r in piv_rows])
            for k in range(n):
                acc = ZERO
                for t, j in enumerate(piv_cols):
                    if coords[t].cn and gram[k][j].cn:
                        acc = acc + coords[t] * gram[k][j]
                if acc != gram[k][c]:
                    return False
        return True

    # -- the contravariant form ----------------------------------------------------

    def _pair(self, w: Word, w2: Word) -> Scalar:
        """<b_w v, b_w2 v>: coefficient of v in sigma(b_w) b_w2 v."""
        if not w and not w2:
            return ONE
        if not w or not w2:
            return ZERO
        key = (w, w2)
        hit = self._pair_memo.get(key)
        if hit is not None:
            return hit
        if self.ua.word_degree(w) != self.ua.word_degree(w2):
            val = ZERO
        else:
            acc = ZERO
            rest = w[1:]
            for (w2t, c) in self._act_a_word(w[0], w2):
                if c.cn:
                    v = self._pair(rest, w2t)
                    if v.cn:
                        acc = acc + c * v
            val = acc
        self._pair_memo[key] = val
        return val

    def _act_a_word(self, a, word: Word) -> list:
        """a_{il} . b_word v as a list of (word minus one letter, scalar)."""
        key = (a, word)
        hit = self._act_a_memo.get(key)
        if hit is not None:
            return hit
        i, l = a
        d = self.datum
        tau = self.ua.prims.generator(i, l).tau
        si = d.s[i]
        out = []
        for t, lab in enumerate(word):
            if lab != a:
                continue
            suffix_deg = self.ua.word_degree(word[t + 1 :])
            mu = self.lam - d.root_weight(suffix_deg)
            n = mu.h[i]
            c = tau * (Scalar.q_power(-l * si * n) - Scalar.q_power(l * si * n))
            if c.cn:
                out.append((word[:t] + word[t + 1 :], c))
        self._act_a_memo[key] = out
        return out

    # -- coordinates -----------------------------------------------------------------

    def space(self, beta: RootVec) -> ModuleSpace:
        sp = self.spaces.get(beta)
        if sp is None:
            raise BudgetError(
                f"weight space at depth {height(beta)} not built (depth bound {self.depth})",
                needed=height(beta),
            )
        return sp

    def dimension(self, beta: RootVec) -> int:
        sp = self.spaces.get(beta)
        return len(sp.words) if sp else 0

    def _express(self, beta: RootVec, terms: dict) -> list:
        """Coordinates of a raw b-word combination in the space at beta."""
        sp = self.space(beta)
        if not sp.words:
            return []
        if self.kind == VERMA:
            windex = {w: k for k, w in enumerate(sp.words)}
            vec = [ZERO] * len(sp.words)
            for w, c in terms.items():
                for pw, cc in self.ua.reduce_word(w).items():
                    k = windex[pw]
                    vec[k] = vec[k] + c * cc
            return vec
        rhs = []
        for r in sp.dual:
            acc = ZERO
            for w, c in terms.items():
                v = self._pair(r, w)
                if v.cn:
                    acc = acc + c * v
            rhs.append(acc)
        return sp.lu.solve(rhs)

    def highest_vector(self) -> ModuleVec:
        return ModuleVec(self, {self.datum.zero_root(): [ONE]})

    def basis_vector(self, beta: RootVec, k: int) -> ModuleVec:
        sp = self.space(beta)
        return ModuleVec(self, {beta: [ONE if t == k else ZERO for t in range(len(sp.words))]})

    # -- actions ----------------------------------------------------------------------

    def act_b(self, i: int, l: int, v: ModuleVec) -> ModuleVec:
        d = self.datum
        out: dict = {}
        for beta, vec in v.comps.items():
            target = root_add(beta, d.alpha(i, l))
            if height(target) > self.depth:
                raise BudgetError(
                    f"lowering beyond the depth bound: need depth {height(target)}",
                    needed=height(target),
                )
            sp = self.space(beta)
            terms: dict = {}
            for k, c in enumerate(vec):
                if c.cn:
                    w = ((i, l),) + sp.words[k]
                    terms[w] = terms.get(w, ZERO) + c
            coords = self._express(target, terms)
            if any(c.cn for c in coords):
                acc = out.get(target)
                out[target] = [a + b for a, b in zip(acc, coords)] if acc else coords
        return ModuleVec(self, out)

    def act_a(self, i: int, l: int, v: ModuleVec) -> ModuleVec:
        d = self.datum
        out: dict = {}
        for beta, vec in v.comps.items():
            if beta[i] < l:
                continue
            target = root_sub(beta, d.alpha(i, l))
            sp = self.space(beta)
            terms: dict = {}
            for k, c in enumerate(vec):
                if not c.cn:
                    continue
                for (w2, cc) in self._act_a_word((i, l), sp.words[k]):
                    val = c * cc
                    if val.cn:
                        terms[w2] = terms.get(w2, ZERO) + val
            terms = {w: c for w, c in terms.items() if c.cn}
            if not terms:
                continue
            coords = self._express(target, terms)
            if any(c.cn for c in coords):
                acc = out.get(target)
                out[target] = [a + b for a, b in zip(acc, coords)] if acc else coords
        return ModuleVec(self, out)

    def act_h(self, h: Coroot, v: ModuleVec) -> ModuleVec:
        out = {}
        for beta, vec in v.comps.items():
            mu = self.space(beta).weight
            s = Scalar.q_power(mu.eval_coroot(h))
            out[beta] = [c * s for c in vec]
        return ModuleVec(self, out)

    def act_B(self, i: int, v: ModuleVec) -> ModuleVec:
        return self.act_b(i, 1, v).scale(self.ua._b_norm(i).inverse())

    def act_B_divided(self, i: int, p: int, v: ModuleVec) -> ModuleVec:
        if p == 0:
            return v
        c = q_fact(p, self.datum.s[i]) * self.ua._b_norm(i) ** p
        for _ in range(p):
            v = self.act_b(i, 1, v)
        return v.scale(c.inverse())

    def act_a_divided(self, i: int, p: int, v: ModuleVec) -> ModuleVec:
        if p == 0:
            return v
        for _ in range(p):
            v = self.act_a(i, 1, v)
        return v.scale(q_fact(p, self.datum.s[i]).inverse())

    def act_u(self, u: UElem, v: ModuleVec) -> ModuleVec:
        out = ModuleVec(self, {})
        for (y, h, x), c in u.terms.items():
            t = v
            for lab in reversed(x):
                t = self.act_a(*lab, t)
                if t.is_zero():
                    break
            if t.is_zero():
                continue
            t = self.act_h(h, t)
            for lab in reversed(y):
                t = self.act_b(*lab, t)
            out = out + t.scale(c)
        return out

    # -- diagnostics ---------------------------------------------------------------

    def nilpotency_degree(self, i: int, v: ModuleVec, op: str = "raise") -> int:
        """Least N with a_i^N v = 0 (op 'raise') or B_i^N v = 0 (op 'lower')."""
        self.datum._require_real(i)
        n = 0
        while not v.is_zero():
            n += 1
            if op == "raise":
                v = self.act_a(i, 1, v)
            elif op == "lower":
                try:
                    v = self.act_b(i, 1, v)
                except BudgetError as exc:
                    raise InconclusiveError(
                        f"nilpotency search hit the depth bound {self.depth}",
                        needed=exc.needed,
                    )
            else:
                raise DomainError("op must be 'raise' or 'lower'")
        return n

    def verify_irreducible(self):
        """No nonzero vector below the top is killed by all raising operators."""
        d = self.datum
        for beta, sp in self.spaces.items():
            if not any(beta) or not sp.words:
                continue
            rows = []
            dim = len(sp.words)
            for (i, l) in d.generators:
                if beta[i] < l:
                    continue
                target = root_sub(beta, d.alpha(i, l))
                tdim = self.dimension(target)
                cols = []
                for k in range(dim):
                    img = self.act_a(i, l, self.basis_vector(beta, k))
                    cols.append(img.comps.get(target, [ZERO] * tdim))
                for r in range(tdim):
                    rows.append([cols[k][r] for k in range(dim)])
            if kernel(rows, ncols=dim):
                raise ConsistencyError(
                    f"singular vector survived in the irreducible quotient at {beta}"
                )

    def character(self) -> list:
        """JSON-ready list of (weight h-values, dimension) pairs."""
        out = []
        for beta in sorted(self.spaces, key=lambda b: (height(b), b)):
            sp = self.spaces[beta]
            if not sp.words:
                continue
            hvals = {self.datum.names[t]: sp.weight.h[t] for t in range(self.datum.n)}
            out.append({"weight": hvals, "dimension": len(sp.words)})
        return out


def verma_null_dimensions(module: HWModule) -> dict:
    """Maximal-submodule dimensions of a Verma module, by the level-by-level
    null recursion N_beta = {v : a_{il} v in N for all (i,l)}.

    Independent of the contravariant-form construction; used as an oracle.
    """
    if module.kind != VERMA:
        raise DomainError("null recursion runs on the verma kind")
    d = module.datum
    nulls: dict = {d.zero_root(): []}
    out: dict = {}
    for beta in sorted(module.spaces, key=lambda b: (height(b), b)):
        if not any(beta):
            out[beta] = 0
            continue
        sp = module.space(beta)
        dim = len(sp.words)
        if dim == 0:
            nulls[beta] = []
            out[beta] = 0
            continue
        rows = []
        for (i, l) in d.generators:
            if beta[i] < l:
                continue
            target = root_sub(beta, d.alpha(i, l))
            tsp = module.spaces.get(target)
            if tsp is None:
                continue
            tdim = len(tsp.words)
            nbasis = nulls.get(target, [])
            # quotient projection: rows spanning a complement test of N_target
            proj_rows = _complement_rows(nbasis, tdim)
            cols = []
            for k in range(dim):
                img = module.act_a(i, l, module.basis_vector(beta, k))
                cols.append(img.comps.get(target, [ZERO] * tdim))
            for prow in proj_rows:
                rows.append(
                    [
                        sum((prow[r] * cols[k][r] for r in range(tdim)), ZERO)
                        for k in range(dim)
                    ]
                )
        nb = kernel(rows, ncols=dim)
        nulls[beta] = nb
        out[beta] = len(nb)
    return out


def _complement_rows(null_basis: list, dim: int) -> list:
    """Functionals vanishing exactly on the span of null_basis."""
    if not null_basis:
        return [[ONE if j == r else ZERO for j in range(dim)] for r in range(dim)]
    return kernel([list(v) for v in null_basis], ncols=dim)
