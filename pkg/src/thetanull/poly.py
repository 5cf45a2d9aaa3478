"""Exact sparse multivariate polynomials over the integers.

Monomials are keyed by exponent tuples; coefficients are Python ints, so all
identities checked through this module are exact theorems, not float
statements.  Only the handful of operations the local-expansion checks need
are implemented.
"""

from __future__ import annotations


class IntPolynomial:
    """Immutable sparse polynomial with integer coefficients.

    ``coeffs`` maps exponent tuples (one nonnegative int per variable) to
    nonzero integer coefficients.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs=None):
        clean = {}
        for expo, coef in (coeffs or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != nvars or any(e < 0 for e in expo):
                raise ValueError(f"bad exponent vector {expo}")
            coef = int(coef)
            if coef:
                clean[expo] = clean.get(expo, 0) + coef
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "coeffs", {k: v for k, v in clean.items() if v})

    def __setattr__(self, *_):  # pragma: no cover - immutability guard
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def variable(cls, index: int, nvars: int) -> "IntPolynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} outside 0..{nvars - 1}")
        expo = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {expo: 1})

    @classmethod
    def constant(cls, value: int, nvars: int) -> "IntPolynomial":
        return cls(nvars, {(0,) * nvars: int(value)})

    def _require_same(self, other: "IntPolynomial"):
        if not isinstance(other, IntPolynomial) or other.nvars != self.nvars:
            raise ValueError("operands must share the variable count")

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.nvars)
        self._require_same(other)
        out = dict(self.coeffs)
        for expo, coef in other.coeffs.items():
            out[expo] = out.get(expo, 0) + coef
        return IntPolynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.nvars, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(self.nvars, {k: other * v for k, v in self.coeffs.items()})
        self._require_same(other)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                out[expo] = out.get(expo, 0) + c1 * c2
        return IntPolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPolynomial.constant(1, self.nvars)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.nvars)
        return isinstance(other, IntPolynomial) and self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def evaluate(self, values) -> int:
        """Exact value at an integer point."""
        values = [int(v) for v in values]
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        total = 0
        for expo, coef in self.coeffs.items():
            term = coef
            for v, e in zip(values, expo):
                term *= v**e
            total += term
        return total

    def substitute(self, index: int, value: int) -> "IntPolynomial":
        """Set variable ``index`` to an integer constant (exactly)."""
        out = {}
        for expo, coef in self.coeffs.items():
            scaled = coef * (int(value) ** expo[index])
            if not scaled:
                continue
            new_expo = expo[:index] + (0,) + expo[index + 1 :]
            out[new_expo] = out.get(new_expo, 0) + scaled
        return IntPolynomial(self.nvars, out)

    def permute(self, perm) -> "IntPolynomial":
        """Relabel variables: new variable i carries old exponent perm[i]."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError("not a permutation")
        return IntPolynomial(
            self.nvars,
            {tuple(expo[perm[i]] for i in range(self.nvars)): c for expo, c in self.coeffs.items()},
        )

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        if self.is_zero:
            return "IntPolynomial(0)"
        terms = []
        for expo in sorted(self.coeffs, reverse=True):
            coef = self.coeffs[expo]
            mono = "*".join(f"x{i+1}^{e}" if e > 1 else f"x{i+1}" for i, e in enumerate(expo) if e)
            terms.append(f"{coef}" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)
