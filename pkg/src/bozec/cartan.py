"""Borcherds-Cartan data: index classification, lattices, Weyl words.

Root-lattice elements are int tuples over the index positions; weights and
coroots are (h, d) pairs of int tuples over the same positions.  All pairings
are exact integers.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DatumError, DomainError
from .scalars import ONE, Scalar, expand_series, format_scalar, parse_scalar

RootVec = tuple  # tuple[int, ...], coefficients over the datum's indices

REAL = "real"
IMAGINARY = "imaginary-nonisotropic"
ISOTROPIC = "isotropic"

_BRAID_TABLE = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class Weight:
    """A weight given by its pairings with the h_i and d_i coroot generators."""

    h: tuple
    d: tuple

    def eval_coroot(self, c: "Coroot") -> int:
        return sum(a * b for a, b in zip(self.h, c.h)) + sum(
            a * b for a, b in zip(self.d, c.d)
        )

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(
            tuple(a + b for a, b in zip(self.h, other.h)),
            tuple(a + b for a, b in zip(self.d, other.d)),
        )

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(
            tuple(a - b for a, b in zip(self.h, other.h)),
            tuple(a - b for a, b in zip(self.d, other.d)),
        )


@dataclass(frozen=True)
class Coroot:
    """An element of the coroot lattice, integer combination of h_i and d_i."""

    h: tuple
    d: tuple

    def __add__(self, other: "Coroot") -> "Coroot":
        return Coroot(
            tuple(a + b for a, b in zip(self.h, other.h)),
            tuple(a + b for a, b in zip(self.d, other.d)),
        )

    def __neg__(self) -> "Coroot":
        return Coroot(tuple(-a for a in self.h), tuple(-a for a in self.d))

    def is_zero(self) -> bool:
        return not any(self.h) and not any(self.d)


def root_add(a: RootVec, b: RootVec) -> RootVec:
    return tuple(x + y for x, y in zip(a, b))


def root_sub(a: RootVec, b: RootVec) -> RootVec:
    return tuple(x - y for x, y in zip(a, b))


def height(beta: RootVec) -> int:
    return sum(beta)


def dominates(beta: RootVec, gamma: RootVec) -> bool:
    """Componentwise beta >= gamma."""
    return all(x >= y for x, y in zip(beta, gamma))


class BorcherdsCartanDatum:
    """An even symmetrizable Borcherds-Cartan matrix with its lattices.

    ``nu`` holds the explicit form normalizations nu_{il}; unlisted pairs
    default to 1, which satisfies the power-series positivity assumption with
    zero tail.
    """

    def __init__(
        self,
        names: Sequence[str],
        a: Sequence[Sequence[int]],
        s: Sequence[int],
        nu: dict | None = None,
        max_l: int | dict = 3,
        series_order: int = 20,
    ):
        self.names = tuple(names)
        self.n = len(self.names)
        self.a = tuple(tuple(int(x) for x in row) for row in a)
        self.s = tuple(int(x) for x in s)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        nu = dict(nu or {})
        self.nu_table = {}
        for (nm, l), val in nu.items():
            if nm not in self.index:
                raise DatumError("unknown-index", f"nu entry for unknown index {nm!r}")
            if not isinstance(val, Scalar):
                val = parse_scalar(val)
            self.nu_table[(self.index[nm], int(l))] = val
        if isinstance(max_l, dict):
            self.max_l = tuple(int(max_l.get(nm, 3)) for nm in self.names)
        else:
            self.max_l = tuple(int(max_l) for _ in self.names)
        self.series_order = series_order
        self._validate()
        self.real = tuple(i for i in range(self.n) if self.a[i][i] == 2)
        self.imaginary = tuple(i for i in range(self.n) if self.a[i][i] <= 0)
        self.isotropic = tuple(i for i in range(self.n) if self.a[i][i] == 0)
        # I-infinity, capped per imaginary index; real indices pair with l = 1
        gens = []
        for i in range(self.n):
            if self.a[i][i] == 2:
                gens.append((i, 1))
            else:
                gens.extend((i, l) for l in range(1, self.max_l[i] + 1))
        self.generators = tuple(gens)
        self._check_assumption()

    # -- validation ----------------------------------------------------------

    def _validate(self):
        if self.n == 0:
            raise DatumError("empty-index-set", "at least one index is required")
        if len(set(self.names)) != self.n:
            raise DatumError("duplicate-index", "index names must be distinct")
        if len(self.a) != self.n or any(len(row) != self.n for row in self.a):
            raise DatumError("matrix-shape", "a must be square over the index set")
        if len(self.s) != self.n:
            raise DatumError("symmetrizer-shape", "one s_i per index is required")
        for i in range(self.n):
            d = self.a[i][i]
            if d > 2 or d % 2 != 0:
                raise DatumError(
                    "diagonal-even",
                    f"a_ii must lie in {{2, 0, -2, ...}}, got {d} at {self.names[i]!r}",
                )
            if self.s[i] <= 0:
                raise DatumError("symmetrizer-positive", f"s_i must be > 0 at {self.names[i]!r}")
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.a[i][j] > 0:
                    raise DatumError(
                        "offdiagonal-nonpositive",
                        f"a_ij must be <= 0 for i != j, got {self.a[i][j]} at "
                        f"({self.names[i]!r},{self.names[j]!r})",
                    )
                if self.s[i] * self.a[i][j] != self.s[j] * self.a[j][i]:
                    raise DatumError(
                        "symmetrizability",
                        f"s_i*a_ij != s_j*a_ji at ({self.names[i]!r},{self.names[j]!r})",
                    )
        for (i, l), val in self.nu_table.items():
            if val.is_zero():
                raise DatumError("nu-nonzero", f"nu must be nonzero at ({self.names[i]!r},{l})")
            if self.a[i][i] == 2 and l != 1:
                raise DatumError(
                    "nu-real-level", f"real index {self.names[i]!r} only carries l = 1"
                )

    def _check_assumption(self):
        # power-series positivity is only checked to a finite order, and only
        # warned about: membership is undecidable for general rational functions
        for (i, l), val in self.nu_table.items():
            ser = expand_series(val, self.series_order)
            if not ser.in_one_plus_nonneg_tail():
                warnings.warn(
                    f"nu[{self.names[i]},{l}] = {format_scalar(val)} does not look like "
                    f"1 + q^-1*Z>=0[[q^-1]] up to order {self.series_order}",
                    stacklevel=3,
                )

    # -- basic data ----------------------------------------------------------

    def idx(self, name: str) -> int:
        if name not in self.index:
            raise DomainError(f"unknown index {name!r}")
        return self.index[name]

    def classify(self, i: int) -> str:
        if not 0 <= i < self.n:
            raise DomainError(f"unknown index position {i}")
        d = self.a[i][i]
        if d == 2:
            return REAL
        if d == 0:
            return ISOTROPIC
        return IMAGINARY

    def is_real(self, i: int) -> bool:
        return self.a[i][i] == 2

    def nu(self, i: int, l: int) -> Scalar:
        return self.nu_table.get((i, l), ONE)

    def q_exp_i(self, i: int) -> int:
        """Exponent d with q_i = q^d."""
        return self.s[i]

    def q_exp_braced(self, i: int) -> int:
        """Exponent d with q_(i) = q^d, i.e. (alpha_i, alpha_i)/2."""
        return self.s[i] * self.a[i][i] // 2

    # -- lattices ------------------------------------------------------------

    def zero_root(self) -> RootVec:
        return (0,) * self.n

    def alpha(self, i: int, mult: int = 1) -> RootVec:
        return tuple(mult if t == i else 0 for t in range(self.n))

    def root_pairing(self, beta: RootVec, gamma: RootVec) -> int:
        acc = 0
        for i, x in enumerate(beta):
            if x:
                si = self.s[i]
                row = self.a[i]
                for j, y in enumerate(gamma):
                    if y:
                        acc += x * y * si * row[j]
        return acc

    def weight_root_pairing(self, beta: RootVec, lam: Weight) -> int:
        """(beta, lambda) = sum_i k_i * s_i * lambda(h_i)."""
        return sum(x * self.s[i] * lam.h[i] for i, x in enumerate(beta) if x)

    def zero_weight(self) -> Weight:
        z = (0,) * self.n
        return Weight(z, z)

    def fundamental_weight(self, i: int) -> Weight:
        return Weight(tuple(1 if t == i else 0 for t in range(self.n)), (0,) * self.n)

    def weight_from_h_values(self, hvals: dict, dvals: dict | None = None) -> Weight:
        h = [0] * self.n
        for nm, v in hvals.items():
            h[self.idx(nm)] = int(v)
        d = [0] * self.n
        for nm, v in (dvals or {}).items():
            d[self.idx(nm)] = int(v)
        return Weight(tuple(h), tuple(d))

    def root_weight(self, beta: RootVec) -> Weight:
        """The weight of the root-lattice element beta (alpha_j(h_i) = a_ij)."""
        h = tuple(sum(self.a[i][j] * beta[j] for j in range(self.n)) for i in range(self.n))
        d = tuple(beta)
        return Weight(h, d)

    def coroot_h(self, i: int, mult: int = 1) -> Coroot:
        z = (0,) * self.n
        return Coroot(tuple(mult if t == i else 0 for t in range(self.n)), z)

    def coroot_d(self, i: int, mult: int = 1) -> Coroot:
        z = (0,) * self.n
        return Coroot(z, tuple(mult if t == i else 0 for t in range(self.n)))

    def zero_coroot(self) -> Coroot:
        z = (0,) * self.n
        return Coroot(z, z)

    def alpha_on_coroot(self, j: int, c: Coroot) -> int:
        """alpha_j(h) for h in the coroot lattice."""
        return sum(c.h[i] * self.a[i][j] for i in range(self.n)) + c.d[j]

    def root_on_coroot(self, beta: RootVec, c: Coroot) -> int:
        return sum(beta[j] * self.alpha_on_coroot(j, c) for j in range(self.n) if beta[j])

    def is_dominant(self, lam: Weight) -> bool:
        return all(v >= 0 for v in lam.h)

    # -- Weyl group ----------------------------------------------------------

    def _require_real(self, i: int):
        if not self.is_real(i):
            raise DomainError(f"index {self.names[i]!r} is not real")

    def reflect_weight(self, i: int, lam: Weight) -> Weight:
        """r_i(lambda) = lambda - lambda(h_i) * alpha_i."""
        self._require_real(i)
        c = lam.h[i]
        if c == 0:
            return lam
        alpha_w = self.root_weight(self.alpha(i))
        return Weight(
            tuple(a - c * b for a, b in zip(lam.h, alpha_w.h)),
            tuple(a - c * b for a, b in zip(lam.d, alpha_w.d)),
        )

    def reflect_root(self, i: int, beta: RootVec) -> RootVec:
        self._require_real(i)
        c = sum(self.a[i][j] * beta[j] for j in range(self.n))  # beta(h_i)
        if c == 0:
            return beta
        return tuple(x - c if t == i else x for t, x in enumerate(beta))

    def reflect_coroot(self, i: int, h: Coroot) -> Coroot:
        """r_i(h) = h - alpha_i(h) * h_i."""
        self._require_real(i)
        c = self.alpha_on_coroot(i, h)
        if c == 0:
            return h
        return Coroot(tuple(x - c if t == i else x for t, x in enumerate(h.h)), h.d)

    def braid_order(self, i: int, j: int) -> int | None:
        """Order m_ij of r_i r_j; None when infinite."""
        if i == j:
            raise DomainError("braid order needs two distinct indices")
        self._require_real(i)
        self._require_real(j)
        prod = self.a[i][j] * self.a[j][i]
        return _BRAID_TABLE.get(prod)

    def is_reduced(self, word: Sequence[int]) -> bool:
        """Coxeter reducedness: each prefix must keep sending its next simple
        root to a positive root."""
        for i in word:
            self._require_real(i)
        for t in range(len(word)):
            v = self.alpha(word[t])
            for u in range(t - 1, -1, -1):
                v = self.reflect_root(word[u], v)
            if not all(x >= 0 for x in v):
                return False
        return True

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        indices = [
            {"name": self.names[i], "a_ii": self.a[i][i], "s": self.s[i]}
            for i in range(self.n)
        ]
        off = [
            [self.names[i], self.names[j], self.a[i][j]]
            for i in range(self.n)
            for j in range(self.n)
            if i != j and self.a[i][j] != 0
        ]
        nu = [
            [self.names[i], l, format_scalar(v)]
            for (i, l), v in sorted(self.nu_table.items())
        ]
        return {
            "indices": indices,
            "a_off_diag": off,
            "nu": nu,
            "max_l": {self.names[i]: self.max_l[i] for i in range(self.n)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "BorcherdsCartanDatum":
        try:
            names = [str(e["name"]) for e in data["indices"]]
            diag = [int(e["a_ii"]) for e in data["indices"]]
            s = [int(e["s"]) for e in data["indices"]]
        except (KeyError, TypeError) as exc:
            raise DatumError("schema", f"malformed indices table: {exc}")
        pos = {nm: i for i, nm in enumerate(names)}
        if len(pos) != len(names):
            raise DatumError("duplicate-index", "index names must be distinct")
        a = [[0] * len(names) for _ in names]
        for i, d in enumerate(diag):
            a[i][i] = d
        for entry in data.get("a_off_diag", []):
            ni, nj, v = entry
            if ni not in pos or nj not in pos:
                raise DatumError("unknown-index", f"a_off_diag names unknown index in {entry}")
            a[pos[ni]][pos[nj]] = int(v)
        nu = {}
        for entry in data.get("nu", []):
            nm, l, text = entry
            nu[(str(nm), int(l))] = parse_scalar(text)
        max_l = data.get("max_l", 3)
        if isinstance(max_l, dict):
            max_l = {str(k): int(v) for k, v in max_l.items()}
        return cls(names, a, s, nu=nu, max_l=max_l)

    def content_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def __repr__(self) -> str:
        kinds = ",".join(f"{self.names[i]}:{self.a[i][i]}" for i in range(self.n))
        return f"BorcherdsCartanDatum({kinds})"
