"""Independent reference implementation on plain sympy expressions.

Nothing here imports the package's arithmetic: sections are lists of sympy
expressions, brackets are expanded by hand from raw tables, and a residual is zero when
the expanded numerator of its combined fraction is. Converters at the bottom turn package objects
into this representation for cross-checks.
"""

from __future__ import annotations

from itertools import combinations

import sympy as sp


def zero(expr) -> bool:
    return sp.expand(sp.numer(sp.together(expr))) == 0


def vzero(vec) -> bool:
    return all(zero(c) for c in vec)


def vsub(u, v):
    return [sp.expand(a - b) for a, b in zip(u, v)]


def vadd(*vs):
    return [sp.expand(sum(cs)) for cs in zip(*vs)]


def smul(f, v):
    return [sp.expand(f * c) for c in v]


def basis(n, i):
    return [sp.Integer(1) if j == i else sp.Integer(0) for j in range(n)]


def apply_vf(X, f, xs):
    return sp.expand(sum(X[i] * sp.diff(f, xs[i]) for i in range(len(xs))))


def vf_bracket(X, Y, xs):
    return [sp.expand(apply_vf(X, Y[i], xs) - apply_vf(Y, X[i], xs)) for i in range(len(xs))]


class Alg:
    """anchor[a] is the coordinate vector of rho(e_a); c[(a, b)] the components of [e_a, e_b]."""

    def __init__(self, xs, anchor, c, rank=None):
        self.xs = list(xs)
        self.rank = len(anchor) if rank is None else rank
        self.anchor = [list(map(sp.sympify, r)) for r in anchor] if anchor else \
            [[sp.Integer(0)] * len(self.xs) for _ in range(self.rank)]
        self.c = {}
        for (a, b), v in c.items():
            v = list(map(sp.sympify, v))
            self.c[(a, b)] = v
            self.c[(b, a)] = [-x for x in v]

    @classmethod
    def tangent(cls, xs):
        n = len(xs)
        return cls(xs, [basis(n, i) for i in range(n)], {})

    def struct(self, a, b):
        return self.c.get((a, b), [sp.Integer(0)] * self.rank)

    def rho(self, mu):
        return [sp.expand(sum(mu[a] * self.anchor[a][i] for a in range(self.rank)))
                for i in range(len(self.xs))]

    def bracket(self, mu, nu):
        n = self.rank
        out = [sp.Integer(0)] * n
        for a in range(n):
            for b in range(n):
                if mu[a] != 0 and nu[b] != 0:
                    s = self.struct(a, b)
                    out = [o + mu[a] * nu[b] * s[k] for k, o in enumerate(out)]
        rm, rn = self.rho(mu), self.rho(nu)
        out = [o + apply_vf(rm, nu[k], self.xs) - apply_vf(rn, mu[k], self.xs) for k, o in enumerate(out)]
        return [sp.expand(o) for o in out]

    def frame(self):
        return [basis(self.rank, i) for i in range(self.rank)]


class Conn:
    """gamma[(alpha, a)] = components of nabla_{xi_alpha} e_a."""

    def __init__(self, F: Alg, r: int, gamma=None):
        self.F, self.r = F, r
        self.g = {k: list(map(sp.sympify, v)) for k, v in (gamma or {}).items()}

    def __call__(self, X, mu):
        out = [sp.Integer(0)] * self.r
        for (al, a), v in self.g.items():
            if X[al] != 0 and mu[a] != 0:
                out = [o + X[al] * mu[a] * v[k] for k, o in enumerate(out)]
        rX = self.F.rho(X)
        return [sp.expand(o + apply_vf(rX, mu[k], self.F.xs)) for k, o in enumerate(out)]


class Form2:
    def __init__(self, m, r, comps=None):
        self.m, self.r = m, r
        self.c = {}
        for (i, j), v in (comps or {}).items():
            v = list(map(sp.sympify, v))
            self.c[(i, j)] = v
            self.c[(j, i)] = [-x for x in v]

    def __call__(self, X, Y):
        out = [sp.Integer(0)] * self.r
        for (i, j), v in self.c.items():
            if X[i] != 0 and Y[j] != 0:
                out = [o + X[i] * Y[j] * v[k] for k, o in enumerate(out)]
        return [sp.expand(o) for o in out]


def mat_apply(M, v):
    return [sp.expand(sum(M[t][s] * v[s] for s in range(len(v)))) for t in range(len(M))]


# -- composite operations ----------------------------------------------------

def curvature(n: Conn, X, Y, mu):
    return vsub(vsub(n(X, n(Y, mu)), n(Y, n(X, mu))), n(n.F.bracket(X, Y), mu))


def bas_E(E: Alg, n: Conn, K, mu, nu):
    return vadd(E.bracket(mu, nu), n(mat_apply(K, nu), mu))


def bas_F(E: Alg, n: Conn, K, mu, X):
    return vadd(n.F.bracket(mat_apply(K, mu), X), mat_apply(K, n(X, mu)))


def basic_curvature(E, n, K, mu, nu, X):
    b = E.bracket
    return vadd(n(X, b(mu, nu)), smul(-1, b(n(X, mu), nu)), smul(-1, b(mu, n(X, nu))),
                smul(-1, n(bas_F(E, n, K, nu, X), mu)), n(bas_F(E, n, K, mu, X), nu))


def covariant_residual(E, n, K, z, X, Y, nu):
    d = vsub(vsub(bas_E(E, n, K, nu, z(X, Y)), z(bas_F(E, n, K, nu, X), Y)), z(X, bas_F(E, n, K, nu, Y)))
    return vadd(curvature(n, X, Y, nu), d)


def nabla_zeta(n: Conn, z: Form2, K):
    def nz(X, mu):
        return vsub(n(X, mu), z(X, mat_apply(K, mu)))
    return nz


def d2(nab, z: Form2, F: Alg, X, Y, Z):
    br = F.bracket
    return vadd(nab(X, z(Y, Z)), smul(-1, nab(Y, z(X, Z))), nab(Z, z(X, Y)),
                smul(-1, z(br(X, Y), Z)), z(br(X, Z), Y), smul(-1, z(br(Y, Z), X)))


def H_bracket(E, n, K, z, mu, nu):
    t = vsub(vsub(bas_E(E, n, K, mu, nu), bas_E(E, n, K, nu, mu)), E.bracket(mu, nu))
    return vadd(t, z(mat_apply(K, mu), mat_apply(K, nu)))


def extension_structure(E: Alg, F: Alg, n: Conn, K, z: Form2):
    """Structure functions of A = F + E on the frame (F first), from the defining formula."""
    m, r = F.rank, E.rank
    out = {}
    for p in range(m + r):
        for q in range(p + 1, m + r):
            u, v = basis(m + r, p), basis(m + r, q)
            X, mu, Y, nu = u[:m], u[m:], v[:m], v[m:]
            W = vadd(E.bracket(mu, nu), n(X, nu), smul(-1, n(Y, mu)), z(X, Y))
            first = vsub(F.bracket(vadd(X, mat_apply(K, mu)), vadd(Y, mat_apply(K, nu))), mat_apply(K, W))
            out[(p, q)] = first + W
    return out


def jacobiator(A: Alg, u, v, w):
    b = A.bracket
    return vadd(b(u, b(v, w)), b(v, b(w, u)), b(w, b(u, v)))


def is_algebroid(A: Alg) -> bool:
    fr = A.frame()
    for i, j in combinations(range(A.rank), 2):
        lhs = vf_bracket(A.rho(fr[i]), A.rho(fr[j]), A.xs)
        if not vzero(vsub(lhs, A.rho(A.bracket(fr[i], fr[j])))):
            return False
    for i, j, k in combinations(range(A.rank), 3):
        if not vzero(jacobiator(A, fr[i], fr[j], fr[k])):
            return False
    return True


# -- converters from package objects ---------------------------------------

def expr(e):
    """A package scalar as a sympy expression (from its raw polynomial data)."""
    num = e.num.as_expr()
    return num if e.den is None else num / e.den.as_expr()


def syms(patch):
    return list(sp.symbols(" ".join(patch.names), seq=True))


def vec(section):
    return [expr(c) for c in section.components]


def alg(A) -> Alg:
    c = {}
    for a, b in combinations(range(A.rank), 2):
        c[(a, b)] = vec(A.table[a][b])
    return Alg(syms(A.patch), [vec(r) for r in A.anchor], c, rank=A.rank)


def conn(n, F: Alg) -> Conn:
    g = {}
    for al, row in enumerate(n.christoffel):
        for a, s in enumerate(row):
            g[(al, a)] = vec(s)
    return Conn(F, n.E.rank, g)


def form2(z) -> Form2:
    c = {}
    m = len(z.table)
    for i, j in combinations(range(m), 2):
        c[(i, j)] = vec(z.table[i][j])
    return Form2(m, z.E.rank, c)


def matrix(K):
    return [[expr(x) for x in row] for row in K.matrix]
