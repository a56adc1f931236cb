"""Tiny exact linear algebra over tuples of ints/Fractions.

Matrices are tuples of row tuples. Nothing here is clever; sizes are <= 8.
"""

from fractions import Fraction


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m))


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v, m):
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def bilinear(u, m, v):
    return dot(u, mat_vec(m, v))


def mat_pow(m, k):
    out = identity(len(m))
    for _ in range(k):
        out = mat_mul(out, m)
    return out


def inverse(m):
    """Gauss-Jordan inverse with Fractions; raises ZeroDivisionError if singular."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def solve(m, b):
    return mat_vec(inverse(m), b)


def normalize(x):
    """Turn integral Fractions back into ints so tuples compare and print cleanly."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def normalize_vec(v):
    return tuple(normalize(x) for x in v)


def normalize_mat(m):
    return tuple(normalize_vec(row) for row in m)
