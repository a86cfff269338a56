"""
The mod-2 homology representation used as a refutation oracle.

H_1(N_g; Z/2) has the crosscap core classes as basis and the diagonal
pairing. Twists act as transvections, u_i swaps two coordinates and T
shifts them cyclically. Matrices are uint8 arrays with entries in {0, 1}.
"""
from dataclasses import dataclass

import numpy as np

from core.words.letters import LetterKind

from .exceptions import HomologyError


def _as_bits(vector):
    return (np.asarray(vector, dtype=np.int64) & 1).astype(np.uint8)


def identity(g):
    return np.eye(g, dtype=np.uint8)


def class_vector(curve_id, table):
    return np.array(table.resolve(curve_id).h_class, dtype=np.uint8)


def pairing(x, y):
    x, y = _as_bits(x), _as_bits(y)
    if x.shape != y.shape:
        raise HomologyError(f"cannot pair vectors of lengths {x.size} and {y.size}")
    return int(np.dot(x.astype(np.int64), y.astype(np.int64)) % 2)


def transvection(a):
    """x -> x + <x, a> a"""
    a = _as_bits(a)
    return ((identity(a.size) + np.outer(a, a)) % 2).astype(np.uint8)


def rotation_matrix(g, k=1):
    # e_i -> e_{i+k}
    return np.roll(identity(g), k, axis=0)


def transposition_matrix(position, g):
    if not 1 <= position <= g - 1:
        raise HomologyError(f"u{position} is not defined at g={g}")
    matrix = identity(g)
    matrix[[position - 1, position]] = matrix[[position, position - 1]]
    return matrix


def generator_matrix(letter, table):
    g = table.genus
    if letter.kind is LetterKind.ROTATION:
        return rotation_matrix(g, letter.exponent)
    # twists and transpositions are involutions mod 2
    if letter.exponent % 2 == 0:
        return identity(g)
    if letter.kind is LetterKind.TRANSPOSITION:
        return transposition_matrix(letter.position, g)
    return transvection(class_vector(letter.curve, table))


def mat_mul(a, b):
    return ((a.astype(np.int64) @ b.astype(np.int64)) % 2).astype(np.uint8)


def word_matrix(word, table):
    result = identity(table.genus)
    for letter in word.letters:
        result = mat_mul(result, generator_matrix(letter, table))
    return result


def apply(matrix, vector):
    return ((matrix.astype(np.int64) @ _as_bits(vector).astype(np.int64)) % 2).astype(np.uint8)


def gf2_inverse(matrix):
    """Gauss-Jordan elimination on [M | I] over GF(2)."""
    m = _as_bits(matrix)
    n = m.shape[0]
    if m.shape != (n, n):
        raise HomologyError(f"cannot invert a {m.shape[0]}x{m.shape[1]} matrix")
    aug = np.concatenate([m, identity(n)], axis=1)
    for col in range(n):
        rows = np.where(aug[col:, col] == 1)[0]
        if rows.size == 0:
            raise HomologyError("matrix is singular over GF(2)")
        pivot = col + int(rows[0])
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        ones = np.where(aug[:, col] == 1)[0]
        ones = ones[ones != col]
        if ones.size:
            aug[ones, :] ^= aug[col, :]
    return aug[:, n:].copy()


def is_isometry(matrix):
    """The pairing is the dot product, so M preserves it iff M^T M = I."""
    return bool(np.array_equal(mat_mul(matrix.T, matrix), identity(matrix.shape[0])))


def commutes(a, b):
    return bool(np.array_equal(mat_mul(a, b), mat_mul(b, a)))


@dataclass(frozen=True)
class ConsistentMod2:
    consistent = True

    def __str__(self):
        return "ConsistentMod2"


@dataclass(frozen=True)
class RefutedMod2:
    """The two matrices differ on the basis vector e_witness (1-based)."""

    witness: int
    consistent = False

    def __str__(self):
        return f"RefutedMod2(e{self.witness})"


def oracle_check(w1, w2, table):
    """A necessary condition for w1 = w2 in the mapping class group; never a proof.

    Twists are involutions mod 2, so a claim that differs only in a twist sign
    always passes.
    """
    m1, m2 = word_matrix(w1, table), word_matrix(w2, table)
    differing = np.where(np.any(m1 != m2, axis=0))[0]
    if differing.size:
        return RefutedMod2(int(differing[0]) + 1)
    return ConsistentMod2()


def action_consistent(word, source, image, table):
    """Whether [image] = M_word [source] mod 2."""
    moved = apply(word_matrix(word, table), class_vector(source, table))
    return bool(np.array_equal(moved, class_vector(image, table)))


def dump_matrix(matrix):
    return "\n".join("".join(str(int(bit)) for bit in row) for row in matrix)


def parse_matrix(text):
    rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not rows or any(len(row) != len(rows) or set(row) - {"0", "1"} for row in rows):
        raise HomologyError("matrix dump must be a square of 0/1 rows")
    return np.array([[int(bit) for bit in row] for row in rows], dtype=np.uint8)
