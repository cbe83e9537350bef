"""Truncated power series in one variable with C^n coefficients, n in {1, 2}.

A series carries its coefficients ``c[0..N]`` (each a length-``dim`` tuple of
scalars), its truncation order ``N`` and nothing else: arithmetic never reads
or writes beyond the stated order, and every result records the tightest order
that is still fully determined by its inputs.  Two scalar backends coexist:

* exact mode -- Gaussian rationals (:class:`halfdisk.rational.QC`), where
  equalities are checked with zero tolerance;
* float mode -- built-in ``complex``, where equality means relative agreement
  to ``1e-10`` and a coefficient counts as zero below ``1e-12`` times the
  largest coefficient magnitude.

A series is *real* when every coefficient has vanishing imaginary part; for a
map of the upper half-disk this encodes being R^n-valued on the edge, since
evaluation then commutes with conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rational import QC

DEFAULT_ORDER = 32
EQ_RTOL = 1e-10
ZERO_RTOL = 1e-12


class TruncationError(ValueError):
    pass


def _as_scalar(x, exact: bool):
    if exact:
        return QC.of(x)
    return complex(x)


def _is_zero_scalar(x, scale: float) -> bool:
    if isinstance(x, QC):
        return not bool(x)
    return abs(x) <= ZERO_RTOL * scale


@dataclass(frozen=True)
class TruncatedSeries:
    """Vector-valued polynomial jet sum_k c_k zeta^k, valid through order N."""

    coeffs: tuple          # tuple over k of tuple over components
    order: int
    dim: int
    clipped: bool = False  # nonzero content beyond `order` was discarded

    # -- construction -----------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, order: int | None = None,
                    exact: bool | None = None) -> "TruncatedSeries":
        """Build a series from ``coeffs[k] = scalar`` (dim 1) or vector."""
        rows = []
        dim = None
        for c in coeffs:
            if isinstance(c, (tuple, list)):
                row = tuple(c)
            else:
                row = (c,)
            if dim is None:
                dim = len(row)
            elif len(row) != dim:
                raise ValueError("inconsistent coefficient dimensions")
            rows.append(row)
        if dim is None:
            dim = 1
        if exact is None:
            exact = all(isinstance(x, (QC, int)) or hasattr(x, "numerator")
                        for row in rows for x in row)
        rows = [tuple(_as_scalar(x, exact) for x in row) for row in rows]
        if order is None:
            order = max(DEFAULT_ORDER, len(rows) - 1)
        if len(rows) - 1 > order:
            raise ValueError("more coefficients than truncation order allows")
        zero = QC(0) if exact else 0j
        rows += [tuple(zero for _ in range(dim))] * (order + 1 - len(rows))
        return cls(tuple(rows), order, dim)

    @classmethod
    def zero(cls, dim: int = 1, order: int = DEFAULT_ORDER,
             exact: bool = True) -> "TruncatedSeries":
        return cls.from_coeffs([tuple(0 for _ in range(dim))], order=order,
                               exact=exact)

    @classmethod
    def variable(cls, dim: int = 1, component: int = 0,
                 order: int = DEFAULT_ORDER, exact: bool = True):
        """The monomial zeta placed in one component."""
        one = [0] * dim
        one[component] = 1
        return cls.from_coeffs([tuple(0 for _ in range(dim)), tuple(one)],
                               order=order, exact=exact)

    # -- basic queries -----------------------------------------------------

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0][0], QC)

    def coefficient(self, k: int, component: int = 0):
        if k > self.order:
            raise TruncationError(f"coefficient {k} beyond valid order {self.order}")
        return self.coeffs[k][component]

    def _scale(self) -> float:
        m = 0.0
        for row in self.coeffs:
            for x in row:
                m = max(m, abs(complex(x)))
        return m if m > 0 else 1.0

    def is_zero(self) -> bool:
        s = self._scale() if not self.exact else 0.0
        return all(_is_zero_scalar(x, s) for row in self.coeffs for x in row)

    def is_real(self) -> bool:
        if self.exact:
            return all(x.im == 0 for row in self.coeffs for x in row)
        s = self._scale()
        return all(abs(x.imag) <= ZERO_RTOL * s for row in self.coeffs for x in row)

    def vanishing_order(self) -> int | None:
        """Index of the first nonzero coefficient vector, or None."""
        s = self._scale() if not self.exact else 0.0
        for k, row in enumerate(self.coeffs):
            if not all(_is_zero_scalar(x, s) for x in row):
                return k
        return None

    def approx_eq(self, other: "TruncatedSeries", rtol: float = EQ_RTOL) -> bool:
        if self.dim != other.dim:
            return False
        n = min(self.order, other.order)
        if self.exact and other.exact:
            return all(self.coeffs[k] == other.coeffs[k] for k in range(n + 1))
        s = max(self._scale(), other._scale())
        return all(
            abs(complex(self.coeffs[k][j]) - complex(other.coeffs[k][j])) <= rtol * s
            for k in range(n + 1) for j in range(self.dim))

    # -- arithmetic --------------------------------------------------------

    def _binary_order(self, other) -> int:
        return min(self.order, other.order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in add")
        n = self._binary_order(other)
        rows = tuple(tuple(a + b for a, b in zip(self.coeffs[k], other.coeffs[k]))
                     for k in range(n + 1))
        return TruncatedSeries(rows, n, self.dim,
                               clipped=self.clipped or other.clipped)

    def __neg__(self):
        rows = tuple(tuple(-x for x in row) for row in self.coeffs)
        return TruncatedSeries(rows, self.order, self.dim, self.clipped)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = _as_scalar(c, self.exact)
        rows = tuple(tuple(c * x for x in row) for row in self.coeffs)
        return TruncatedSeries(rows, self.order, self.dim, self.clipped)

    def _top_degree(self, component: int | None = None) -> int | None:
        """Largest index with a nonzero coefficient (per component or any)."""
        s = self._scale() if not self.exact else 0.0
        for k in range(len(self.coeffs) - 1, -1, -1):
            row = self.coeffs[k]
            vals = row if component is None else (row[component],)
            if not all(_is_zero_scalar(x, s) for x in vals):
                return k
        return None

    def multiply(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Product; one factor must be scalar (dim 1) unless dims agree
        (componentwise).  Only coefficients up to the result order are
        computed; discarded nonzero content is flagged via the top degrees
        (exact: coefficients form an integral domain, so deg(ab) = deg a +
        deg b)."""
        if self.dim != 1 and other.dim != 1 and self.dim != other.dim:
            raise ValueError("dimension mismatch in multiply")
        n = self._binary_order(other)
        dim = max(self.dim, other.dim)
        a, b = self, other
        zero = _as_scalar(0, a.exact)

        def comp(series, k, j):
            return series.coeffs[k][j if series.dim > 1 else 0]

        da = {j: a._top_degree(j if a.dim > 1 else 0) for j in range(dim)}
        db = {j: b._top_degree(j if b.dim > 1 else 0) for j in range(dim)}
        clipped = a.clipped or b.clipped
        for j in range(dim):
            if da[j] is not None and db[j] is not None and da[j] + db[j] > n:
                clipped = True
        rows = []
        for k in range(n + 1):
            row = []
            for j in range(dim):
                ta, tb = da[j], db[j]
                if ta is None or tb is None:
                    row.append(zero)
                    continue
                lo = max(0, k - tb)
                hi = min(k, ta)
                acc = None
                for i in range(lo, hi + 1):
                    term = comp(a, i, j) * comp(b, k - i, j)
                    acc = term if acc is None else acc + term
                row.append(acc if acc is not None else zero)
            rows.append(tuple(row))
        return TruncatedSeries(tuple(rows), n, dim, clipped)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.multiply(other)
        return self.scale(other)

    __rmul__ = __mul__

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by zeta^k (order drops by 0; content beyond N clips)."""
        zero = tuple(_as_scalar(0, self.exact) for _ in range(self.dim))
        rows = (zero,) * k + self.coeffs
        s = self._scale() if not self.exact else 0.0
        clipped = self.clipped or any(
            not all(_is_zero_scalar(x, s) for x in row)
            for row in rows[self.order + 1:])
        return TruncatedSeries(rows[:self.order + 1], self.order, self.dim, clipped)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by zeta^k; requires the first k coefficients to vanish."""
        s = self._scale() if not self.exact else 0.0
        for row in self.coeffs[:k]:
            if not all(_is_zero_scalar(x, s) for x in row):
                raise ValueError("cannot factor out zeta^%d: low-order terms present" % k)
        rows = self.coeffs[k:]
        return TruncatedSeries(rows, self.order - k, self.dim, self.clipped)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self.coeffs[:order + 1], order, self.dim, self.clipped)

    def compose(self, psi: "TruncatedSeries") -> "TruncatedSeries":
        """Coefficients of self(psi(zeta)); psi must be scalar with psi(0)=0."""
        if psi.dim != 1:
            raise ValueError("reparametrization must be scalar")
        s = psi._scale() if not psi.exact else 0.0
        if not _is_zero_scalar(psi.coeffs[0][0], s):
            raise ValueError("reparametrization must fix the origin: psi(0) != 0")
        n = min(self.order, psi.order)
        exact = self.exact
        zero = _as_scalar(0, exact)
        out = [[zero] * self.dim for _ in range(n + 1)]
        # Horner in psi: result = c_K + psi*(c_{K-1} + psi*(...))
        kmax = min(len(self.coeffs) - 1, n)
        acc = None
        for k in range(kmax, -1, -1):
            if acc is None:
                acc = TruncatedSeries.from_coeffs([self.coeffs[k]], order=n,
                                                  exact=exact)
            else:
                acc = psi.truncate(n).multiply(acc)
                acc = acc + TruncatedSeries.from_coeffs([self.coeffs[k]], order=n,
                                                        exact=exact)
        res = acc if acc is not None else TruncatedSeries.zero(self.dim, n, exact)
        for k in range(n + 1):
            for j in range(self.dim):
                out[k][j] = res.coeffs[k][j]
        return TruncatedSeries(tuple(tuple(r) for r in out), n, self.dim,
                               self.clipped or psi.clipped or res.clipped)

    def conjugate_reflect(self) -> "TruncatedSeries":
        """Series of zeta -> conj(self(conj zeta)): conjugate each coefficient."""
        rows = tuple(tuple(x.conjugate() for x in row) for row in self.coeffs)
        return TruncatedSeries(rows, self.order, self.dim, self.clipped)

    def derivative(self) -> "TruncatedSeries":
        rows = tuple(tuple(k * x for x in self.coeffs[k])
                     for k in range(1, len(self.coeffs)))
        if not rows:
            return TruncatedSeries.zero(self.dim, 0, self.exact)
        return TruncatedSeries(rows, self.order - 1, self.dim, self.clipped)

    def component(self, j: int) -> "TruncatedSeries":
        rows = tuple((row[j],) for row in self.coeffs)
        return TruncatedSeries(rows, self.order, 1, self.clipped)

    @classmethod
    def bundle(cls, components: Sequence["TruncatedSeries"]) -> "TruncatedSeries":
        n = min(c.order for c in components)
        rows = tuple(tuple(c.coeffs[k][0] for c in components) for k in range(n + 1))
        return cls(rows, n, len(components), any(c.clipped for c in components))

    # -- evaluation and serialization ---------------------------------------

    def as_float(self) -> "TruncatedSeries":
        rows = tuple(tuple(complex(x) for x in row) for row in self.coeffs)
        return TruncatedSeries(rows, self.order, self.dim, self.clipped)

    def __call__(self, z):
        """Evaluate at a complex number or numpy array (float mode)."""
        import numpy as np
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + (self.dim,), dtype=complex)
        zp = np.ones_like(z)
        for row in self.coeffs:
            for j in range(self.dim):
                out[..., j] += zp * complex(row[j])
            zp = zp * z
        return out

    def to_json(self) -> dict:
        def pair(x):
            c = complex(x)
            return [c.real, c.imag]
        if self.dim == 1:
            coeffs = [pair(row[0]) for row in self.coeffs]
        else:
            coeffs = [[pair(x) for x in row] for row in self.coeffs]
        return {"dim": self.dim, "order": self.order, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data: dict, exact: bool = False) -> "TruncatedSeries":
        dim = data["dim"]
        rows = []
        for row in data["coeffs"]:
            if dim == 1:
                re, im = row
                rows.append((complex(re, im),))
            else:
                rows.append(tuple(complex(re, im) for re, im in row))
        if exact:
            rows = [tuple(QC(*_exact_parts(x)) for x in row) for row in rows]
        return cls.from_coeffs(rows, order=data["order"], exact=exact)

    def __repr__(self):
        scale = 0.0 if self.exact else self._scale()
        terms = []
        for k, row in enumerate(self.coeffs):
            if any(not _is_zero_scalar(x, scale) for x in row):
                terms.append(f"z^{k}*{tuple(str(x) for x in row)}")
            if len(terms) > 4:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"<series dim={self.dim} order={self.order}: {body}>"


def _exact_parts(x: complex):
    from fractions import Fraction
    return Fraction(x.real), Fraction(x.imag)
