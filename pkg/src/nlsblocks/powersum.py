"""Exact integers of the form sum c_k B^(e_k) with sparse, possibly huge, exponents.

Sites built from the sequence C^(D^i) quickly outgrow memory as ordinary
integers (C^(3^24) has about 10^11 digits).  A PowerSum keeps the base and
the exponents symbolic, so ring operations stay cheap and zero tests stay
exact: after carrying, every digit satisfies |c_k| < B and the lowest
nonzero digit decides whether the value vanishes.
"""

import math


class PowerSum:
    __slots__ = ("base", "_terms", "_norm")

    def __init__(self, base, terms=None):
        if base < 2:
            raise ValueError("base must be at least 2")
        self.base = int(base)
        clean = {}
        for e, c in (terms or {}).items():
            if e < 0:
                raise ValueError("negative exponent")
            if c:
                clean[int(e)] = clean.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in clean.items() if c}
        self._norm = None

    @classmethod
    def power(cls, base, exponent, coeff=1):
        return cls(base, {exponent: coeff})

    @classmethod
    def from_int(cls, base, value):
        return cls(base, {0: value})

    # -- normal form --

    def digits(self):
        """Carried form {e: c} with 0 < |c| < base; carries truncate toward zero."""
        if self._norm is None:
            pending = dict(self._terms)
            out = {}
            while pending:
                e = min(pending)
                c = pending.pop(e)
                q = abs(c) // self.base * (1 if c > 0 else -1)
                r = c - q * self.base
                if r:
                    out[e] = r
                if q:
                    pending[e + 1] = pending.get(e + 1, 0) + q
            self._norm = out
        return self._norm

    def is_zero(self):
        return not self.digits()

    def sign(self):
        d = self.digits()
        if not d:
            return 0
        return 1 if d[max(d)] > 0 else -1

    def residue(self, p):
        """Value modulo a prime p that does not divide the base."""
        if self.base % p == 0:
            raise ValueError("the modulus divides the base")
        return sum(c * pow(self.base, e % (p - 1), p) for e, c in self._terms.items()) % p

    def to_int(self, max_exponent=10 ** 5):
        if self._terms and max(self._terms) > max_exponent:
            raise OverflowError("exponent too large for an ordinary integer")
        return sum(c * self.base ** e for e, c in self._terms.items())

    def log_size(self):
        """Approximate log2 of the absolute value."""
        d = self.digits()
        if not d:
            return float("-inf")
        top = max(d)
        return top * math.log2(self.base) + math.log2(abs(d[top]))

    # -- arithmetic --

    def _coerce(self, other):
        if isinstance(other, PowerSum):
            if other.base != self.base:
                raise ValueError("mixed bases")
            return other
        if isinstance(other, int):
            return PowerSum(self.base, {0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return PowerSum(self.base, out)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum(self.base, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PowerSum(self.base, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = PowerSum(self.base, {0: 1})
        for _ in range(k):
            out = out * self
        return out

    # -- comparison --

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self):
        return hash(("PowerSum", self.residue(2305843009213693951)))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        parts = [f"{c}*{self.base}^{e}" for e, c in sorted(self._terms.items(), reverse=True)]
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"base": self.base,
                "terms": [[str(e), str(c)] for e, c in sorted(self._terms.items())]}

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["base"]), {int(e): int(c) for e, c in data["terms"]})


def residue(x, p):
    """x mod p for ordinary integers and PowerSums alike."""
    return x.residue(p) if isinstance(x, PowerSum) else int(x) % p
