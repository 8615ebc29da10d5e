"""Truncated power series with coefficients in a SymRing."""

from __future__ import annotations

from biq.algebra.ring import SymExpr, SymRing
from biq.errors import NonComposable, NonInvertible, NotInvertible, RingMismatch


class Series:
    """f(z) mod z^N, coefficients stored low degree first."""

    def __init__(self, ring: SymRing, coeffs, N: int, var: str = "z"):
        self.ring = ring
        self.N = N
        self.var = var
        cs = [ring(c) for c in list(coeffs)[:N]]
        cs += [ring.zero] * (N - len(cs))
        self.coeffs = cs

    @classmethod
    def variable(cls, ring, N, var="z"):
        return cls(ring, [0, 1], N, var)

    def _check(self, other):
        if not isinstance(other, Series):
            return Series(self.ring, [other], self.N, self.var)
        if other.ring != self.ring:
            raise RingMismatch("series over different rings")
        return other

    def __getitem__(self, i):
        return self.coeffs[i] if i < self.N else self.ring.zero

    def __add__(self, other):
        other = self._check(other)
        n = min(self.N, other.N)
        return Series(self.ring, [self[i] + other[i] for i in range(n)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, [-c for c in self.coeffs], self.N, self.var)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        n = min(self.N, other.N)
        out = [self.ring.zero] * n
        for i in range(n):
            a = self.coeffs[i]
            if not a:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return Series(self.ring, out, n, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Series(self.ring, [1], self.N, self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.N, other.N)
        return all(self[i] == other[i] for i in range(n))

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, or N if none."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return self.N

    def truncate(self, n: int) -> "Series":
        return Series(self.ring, self.coeffs[:n], min(n, self.N), self.var)

    def inverse(self) -> "Series":
        """Multiplicative inverse; the constant term must be a unit."""
        try:
            c0inv = self.coeffs[0].inverse()
        except NotInvertible as exc:
            raise NonInvertible("constant term is not a unit") from exc
        out = [c0inv]
        for n in range(1, self.N):
            acc = self.ring.zero
            for i in range(1, n + 1):
                if self.coeffs[i]:
                    acc = acc + self.coeffs[i] * out[n - i]
            out.append(-(acc * c0inv))
        return Series(self.ring, out, self.N, self.var)

    def compose(self, g: "Series") -> "Series":
        """self(g(z)); g must have zero constant term."""
        g = self._check(g)
        if g.coeffs[0]:
            raise NonComposable("inner series has nonzero constant term")
        n = min(self.N, g.N)
        result = Series(self.ring, [self.coeffs[0]], n, self.var)
        power = Series(self.ring, [1], n, self.var)
        for i in range(1, n):
            power = power * g
            if self.coeffs[i]:
                result = result + power * self.coeffs[i]
        return result

    def func_inverse(self) -> "Series":
        """The series h with self(h(z)) = z mod z^N."""
        if self.coeffs[0]:
            raise NonInvertible("series has nonzero constant term")
        if self.N < 2:
            return Series(self.ring, [], self.N, self.var)
        try:
            l_inv = self.coeffs[1].inverse()
        except NotInvertible as exc:
            raise NonInvertible("linear coefficient is not a unit") from exc
        h = Series(self.ring, [0, l_inv], self.N, self.var)
        # fix one coefficient per round
        for n in range(2, self.N):
            err = self.compose(h)
            h.coeffs[n] = h.coeffs[n] - err.coeffs[n] * l_inv
        return h

    def map_coeffs(self, fn, ring=None) -> "Series":
        ring = ring or self.ring
        return Series(ring, [fn(c) for c in self.coeffs], self.N, self.var)

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cs = str(c)
            if mono:
                cs = "" if cs == "1" else (f"({cs})*" if " " in cs else f"{cs}*")
            parts.append(cs + mono)
        return (" + ".join(parts) or "0") + f" + O({self.var}^{self.N})"


class BiSeries:
    """F(z1, z2) mod (z1^N1, z2^N2)."""

    def __init__(self, ring: SymRing, coeffs: dict, N1: int, N2: int):
        self.ring = ring
        self.N1, self.N2 = N1, N2
        self.coeffs = {
            (i, j): ring(c) for (i, j), c in coeffs.items() if i < N1 and j < N2 and ring(c)
        }

    def __getitem__(self, ij):
        return self.coeffs.get(ij, self.ring.zero)

    def __eq__(self, other):
        return isinstance(other, BiSeries) and self.coeffs == other.coeffs

    def swap(self) -> "BiSeries":
        return BiSeries(self.ring, {(j, i): c for (i, j), c in self.coeffs.items()}, self.N2, self.N1)

    def specialize_second(self, value: int = 0) -> Series:
        """F(z, 0) when value is 0."""
        if value:
            raise NotImplementedError("only z2 = 0 is supported")
        return Series(self.ring, [self[(i, 0)] for i in range(self.N1)], self.N1)

    def __repr__(self):
        parts = []
        for (i, j) in sorted(self.coeffs):
            c = self.coeffs[(i, j)]
            mono = "*".join(x for x in (
                "" if i == 0 else ("z1" if i == 1 else f"z1^{i}"),
                "" if j == 0 else ("z2" if j == 1 else f"z2^{j}"),
            ) if x)
            cs = str(c)
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
        return " + ".join(parts) or "0"


