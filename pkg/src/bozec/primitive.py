"""Primitive generators of the positive half and their structure constants.

For an imaginary index i and level l, the primitive generator is the unique
element of the form e_{il} + (correction over words with all levels < l) which
is orthogonal to every monomial with all levels < l.  It is found by one
exact linear solve against the corresponding Gram sub-block; its self-pairing
tau is the structure constant of the mixed commutation relation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import height
from .errors import BudgetError, DegeneracyError, DomainError
from .freealg import FreeAlgebra, FreeElem, Word
from .linalg import rref, solve_in_span
from .scalars import ONE, Scalar

Composition = tuple  # tuple[int, ...], positive parts


@dataclass
class PrimGen:
    i: int
    l: int
    element: FreeElem
    tau: Scalar

    def correction_coefficients(self) -> dict:
        """gamma_c for the non-leading words, keyed by level composition."""
        out = {}
        for w, c in self.element.terms.items():
            if w != ((self.i, self.l),):
                out[tuple(l for _, l in w)] = c
        return out


class PrimitiveTable:
    """Primitive generators, their tau constants, and word representatives."""

    def __init__(self, alg: FreeAlgebra):
        self.alg = alg
        self.datum = alg.datum
        self._gens: dict = {}
        self._reps: dict = {}

    def generator(self, i: int, l: int) -> PrimGen:
        key = (i, l)
        hit = self._gens.get(key)
        if hit is not None:
            return hit
        d = self.datum
        if d.is_real(i):
            if l != 1:
                raise DomainError(f"real index {d.names[i]!r} only carries l = 1")
            gen = PrimGen(i, 1, self.alg.generator(i, 1), d.nu(i, 1))
        elif l > d.max_l[i]:
            raise BudgetError(
                f"level {l} exceeds max_l = {d.max_l[i]} for index {d.names[i]!r}", needed=l
            )
        elif l < 1:
            raise DomainError("levels start at 1")
        else:
            gen = self._solve(i, l)
        self._gens[key] = gen
        return gen

    def _solve(self, i: int, l: int) -> PrimGen:
        alg = self.alg
        beta = self.datum.alpha(i, l)
        lead: Word = ((i, l),)
        words = alg._monomials(beta)
        sub = [w for w in words if w != lead]
        if not sub:
            nu = self.datum.nu(i, l)
            return PrimGen(i, l, alg.generator(i, l), nu)
        # the sub-Gram may be singular (isotropic slices have radical); the
        # canonical representative carries its correction on the pivot
        # sub-words and must be orthogonal to the whole lower-level span
        gram = [[alg.pair_words(a, b) for b in sub] for a in sub]
        _, piv = rref(gram)
        cols = [[gram[k][j] for k in range(len(sub))] for j in piv]
        rhs = [-alg.pair_words(lead, b) for b in sub]
        coeffs = solve_in_span(cols, rhs)
        if coeffs is None:
            raise DegeneracyError(
                f"degenerate Gram sub-block at degree {l}*alpha_{self.datum.names[i]}"
            )
        elem = alg.generator(i, l)
        for j, c in zip(piv, coeffs):
            if c.cn:
                elem = elem + FreeElem.word(sub[j], c)
        tau = alg.form(elem, elem)
        return PrimGen(i, l, elem, tau)

    def tau(self, i: int, l: int) -> Scalar:
        return self.generator(i, l).tau

    def rep_word(self, w: Word) -> FreeElem:
        """Representative of the primitive-generator word a_{w_1} ... a_{w_t}."""
        if not w:
            return FreeElem.unit()
        hit = self._reps.get(w)
        if hit is not None:
            return hit
        head = self.generator(*w[0]).element
        rep = head * self.rep_word(w[1:])
        self._reps[w] = rep
        return rep

    def rep(self, terms: dict) -> FreeElem:
        """Representative of a linear combination of primitive words."""
        out = FreeElem.zero()
        for w, c in terms.items():
            out = out + self.rep_word(w).scale(c)
        return out

    def composition_product(self, i: int, comp: Composition) -> tuple[FreeElem, Scalar]:
        """a_{i,c} = a_{i c_1} ... a_{i c_t} together with tau_{i,c}."""
        if any(p < 1 for p in comp):
            raise DomainError(f"{comp} is not a composition")
        for p in comp:
            if not self.datum.is_real(i) and p > self.datum.max_l[i]:
                raise BudgetError(
                    f"part {p} exceeds max_l = {self.datum.max_l[i]}", needed=p
                )
        elem = self.rep_word(tuple((i, p) for p in comp))
        tau = ONE
        for p in comp:
            tau = tau * self.generator(i, p).tau
        return elem, tau


def compositions(n: int, max_part: int | None = None) -> list:
    """All compositions of n (parts in [1, max_part]), lexicographic."""
    if n == 0:
        return [()]
    cap = n if max_part is None else min(n, max_part)
    out = []
    for first in range(1, cap + 1):
        out.extend((first,) + rest for rest in compositions(n - first, max_part))
    return out


def partitions(n: int, max_part: int | None = None) -> list:
    """All partitions of n with weakly decreasing parts."""
    if n == 0:
        return [()]
    cap = n if max_part is None else min(n, max_part)
    out = []
    for first in range(cap, 0, -1):
        out.extend((first,) + rest for rest in partitions(n - first, first))
    return out
