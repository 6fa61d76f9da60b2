"""3x3 symmetric tridiagonal matrices, plane-rotation QR and shifted QR steps.

Matrices are plain nested tuples of mpf (row major); the symmetric
tridiagonal state is the five-scalar :class:`SymTridiagonal3`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ShiftIsEigenvalue
from .precision import PrecisionCtx


@dataclass(frozen=True)
class SymTridiagonal3:
    d1: object
    d2: object
    d3: object
    e1: object
    e2: object

    @classmethod
    def from_matrix(cls, m) -> SymTridiagonal3:
        """Read the tridiagonal part of ``m``, averaging the symmetric pairs."""
        return cls(m[0][0], m[1][1], m[2][2],
                   (m[0][1] + m[1][0]) / 2, (m[1][2] + m[2][1]) / 2)

    def to_matrix(self):
        z = self.d1 * 0
        return ((self.d1, self.e1, z),
                (self.e1, self.d2, self.e2),
                (z, self.e2, self.d3))

    def entries(self):
        return (self.d1, self.d2, self.d3, self.e1, self.e2)

    def coerce(self, ctx: PrecisionCtx) -> SymTridiagonal3:
        return SymTridiagonal3(*(ctx.num(v) for v in self.entries()))


T_X = SymTridiagonal3(0, 0, 0, 1, 0)


@dataclass(frozen=True)
class QRFactors:
    q: tuple
    r: tuple


@dataclass(frozen=True, order=True)
class SubEigPair:
    lo: object
    hi: object


def _matmul(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(3)), a[i][0] * 0)
                       for j in range(3)) for i in range(3))


def _transpose(a):
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def qr_decompose(m, ctx: PrecisionCtx) -> QRFactors:
    """QR factorization of a real 3x3 matrix by plane rotations.

    Rotations zero (3,1), then (2,1), then (3,2); the first is the
    identity for Hessenberg input. A rotation whose pivot norm is at most
    ``ctx.tol`` is replaced by the identity, so singular inputs are
    accepted. Finally rows of R (columns of Q) are negated where needed
    to make diag(R) nonnegative.
    """
    mp = ctx.mp
    r = [[ctx.num(m[i][j]) for j in range(3)] for i in range(3)]
    qt = [[mp.one if i == j else mp.zero for j in range(3)] for i in range(3)]

    for col, i, k in ((0, 1, 2), (0, 0, 1), (1, 1, 2)):
        a, b = r[i][col], r[k][col]
        if b == 0:
            continue
        h = mp.hypot(a, b)
        if h <= ctx.tol:
            continue
        c, s = a / h, b / h
        for mat in (r, qt):
            for j in range(3):
                u, v = mat[i][j], mat[k][j]
                mat[i][j] = c * u + s * v
                mat[k][j] = c * v - s * u
        r[k][col] = mp.zero

    for i in range(3):
        if r[i][i] < 0:
            r[i] = [-v for v in r[i]]
            qt[i] = [-v for v in qt[i]]

    q = tuple(tuple(qt[j][i] for j in range(3)) for i in range(3))
    return QRFactors(q, tuple(tuple(row) for row in r))


def shifted_step(s, t: SymTridiagonal3, ctx: PrecisionCtx, extend: bool = False) -> SymTridiagonal3:
    """The s-step ``Q(T - sI)^T  T  Q(T - sI)``.

    With ``extend=False`` a shift within ``ctx.tol`` of an eigenvalue
    (``|det(T - sI)| <= tol``) raises :class:`ShiftIsEigenvalue`; with
    ``extend=True`` the degenerate-pivot convention of :func:`qr_decompose`
    is used, which realizes the continuous extension of the step.
    """
    return SymTridiagonal3.from_matrix(shifted_step_full(s, t, ctx, extend))


def shifted_step_full(s, t: SymTridiagonal3, ctx: PrecisionCtx, extend: bool = False):
    """Like :func:`shifted_step` but returns the full 3x3 product (for closure checks)."""
    s = ctx.num(s)
    t = t.coerce(ctx)
    shifted = SymTridiagonal3(t.d1 - s, t.d2 - s, t.d3 - s, t.e1, t.e2).to_matrix()
    if not extend and abs(_det3(shifted)) <= ctx.tol:
        raise ShiftIsEigenvalue(f"shift {ctx.mp.nstr(s, 15)} is an eigenvalue of T within tolerance")
    q = qr_decompose(shifted, ctx).q
    return _matmul(_transpose(q), _matmul(t.to_matrix(), q))


def bottom_block_eigs(t: SymTridiagonal3, ctx: PrecisionCtx) -> SubEigPair:
    """Eigenvalues of the trailing 2x2 block, without cancellation in either root."""
    mp = ctx.mp
    d2, d3, e2 = ctx.num(t.d2), ctx.num(t.d3), ctx.num(t.e2)
    mean = (d2 + d3) / 2
    rad = mp.hypot((d2 - d3) / 2, e2)
    big = mean + rad if mean >= 0 else mean - rad
    if big == 0:
        return SubEigPair(mp.zero, mp.zero)
    other = (d2 * d3 - e2 * e2) / big
    return SubEigPair(min(big, other), max(big, other))


def wilkinson_shift(t: SymTridiagonal3, ctx: PrecisionCtx):
    """Sub-eigenvalue closest to T33; draws (within tol) go to the larger one."""
    pair = bottom_block_eigs(t, ctx)
    d3 = ctx.num(t.d3)
    dist_lo, dist_hi = abs(d3 - pair.lo), abs(d3 - pair.hi)
    if abs(dist_lo - dist_hi) <= ctx.tol:
        return pair.hi
    return pair.lo if dist_lo < dist_hi else pair.hi


def wilkinson_step(t: SymTridiagonal3, ctx: PrecisionCtx) -> SymTridiagonal3:
    return shifted_step(wilkinson_shift(t, ctx), t, ctx, extend=True)


def spectrum_residual(t: SymTridiagonal3):
    """Largest deviation of the characteristic polynomial from x^3 - x."""
    d1, d2, d3, e1, e2 = t.entries()
    trace = d1 + d2 + d3
    minors = d1 * d2 - e1 * e1 + d1 * d3 + d2 * d3 - e2 * e2
    det = d1 * (d2 * d3 - e2 * e2) - e1 * e1 * d3
    return max(abs(trace), abs(minors + 1), abs(det))


def is_unreduced(t: SymTridiagonal3) -> bool:
    return t.e1 != 0 and t.e2 != 0


def max_abs_diff(a: SymTridiagonal3, b: SymTridiagonal3):
    return max(abs(u - v) for u, v in zip(a.entries(), b.entries()))
