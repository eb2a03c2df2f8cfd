"""Independent oracles for the test suite.

Everything here is recomputed from first principles with plain integers:
exact dict polynomials, honest 3x3 matrix products, and a mod-p^M integer
model of the upper unitriangular group.  Nothing imports the package, so
agreement between these and the library is meaningful evidence.
"""

import itertools

# -- exact integer polynomials: dict[(e1,..,em)] -> int ----------------------


def poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for alpha, c in b.items():
        v = out.get(alpha, 0) + c
        if v:
            out[alpha] = v
        else:
            out.pop(alpha, None)
    return out


def poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for alpha, c in a.items():
        for beta, e in b.items():
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            v = out.get(gamma, 0) + c * e
            if v:
                out[gamma] = v
            else:
                out.pop(gamma, None)
    return out


def poly_eval(a: dict, point) -> int:
    acc = 0
    for alpha, c in a.items():
        term = c
        for q, e in zip(point, alpha):
            term *= q**e
        acc += term
    return acc


def poly_truncate(a: dict, D: int) -> dict:
    return {alpha: c for alpha, c in a.items() if sum(alpha) < D}


def geometric_inverse(D: int) -> dict:
    """y with x + y + x*y = 0, solved by iterating y = -x - x*y; the fixed
    point below degree D is reached after D rounds."""
    x = {(1,): -1}
    y: dict = {}
    for _ in range(D):
        y = poly_truncate(poly_add(x, poly_mul(x, y)), D)
    return y


# -- honest 3x3 matrix arithmetic mod q ---------------------------------------


def mat_mul(A, B, q):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) % q for j in range(3))
        for i in range(3))


def heis_mat(a, b, c, q):
    return ((1, a % q, c % q), (0, 1, b % q), (0, 0, 1))


def heis_coords(A):
    return (A[0][1], A[1][2], A[0][2])


def heis_inv_mat(A, q):
    # (I + N)^-1 = I - N + N^2 for strictly upper triangular N
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    N = tuple(tuple((A[i][j] - ident[i][j]) % q for j in range(3)) for i in range(3))
    N2 = mat_mul(N, N, q)
    return tuple(
        tuple((ident[i][j] - N[i][j] + N2[i][j]) % q for j in range(3))
        for i in range(3))


# -- integer model of the Heisenberg standard group quotient ------------------


class HeisQuotient:
    """Triples (a, b, c) of multiples of p^N mod p^M under matrix product."""

    def __init__(self, p: int, N: int, M: int):
        self.q = p**M
        vals = range(0, p**M, p**N)
        self.elements = [(a, b, c) for a in vals for b in vals for c in vals]
        self.identity = (0, 0, 0)

    def mul(self, x, y):
        A = mat_mul(heis_mat(*x, self.q), heis_mat(*y, self.q), self.q)
        return heis_coords(A)

    def inv(self, x):
        return heis_coords(heis_inv_mat(heis_mat(*x, self.q), self.q))

    def word_value(self, letters, args):
        acc = self.identity
        for gen, sign in letters:
            g = args[gen - 1]
            acc = self.mul(acc, g if sign > 0 else self.inv(g))
        return acc

    def image(self, letters, k):
        out = set()
        for combo in itertools.product(self.elements, repeat=k):
            out.add(self.word_value(letters, combo))
        return out

    def verbal(self, letters, k):
        image = self.image(letters, k)
        gens = image | {self.inv(g) for g in image}
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            cur = frontier.pop()
            for g in gens:
                nxt = self.mul(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen
