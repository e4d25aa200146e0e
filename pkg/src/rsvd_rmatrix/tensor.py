"""Dense two-fold tensor products of N x N matrices.

A tensor is stored as an N^2 x N^2 matrix with row-major compound indices,
``(A (x) B)[i*N + k, j*N + l] = A[i, j] * B[k, l]``, which is exactly
``numpy.kron``.
"""
import numpy as np


def tensor(A, B):
    return np.kron(A, B)


def wedge(A, B):
    """A ^ B = A (x) B - B (x) A."""
    return np.kron(A, B) - np.kron(B, A)


def vee(A, B):
    """A v B = A (x) B + B (x) A."""
    return np.kron(A, B) + np.kron(B, A)


def _side(M):
    N = int(round(np.sqrt(M.shape[0])))
    if N * N != M.shape[0] or M.shape[0] != M.shape[1]:
        raise ValueError(f"not a two-fold tensor matrix: shape {M.shape}")
    return N


def swap(M):
    """Exchange the two tensor factors: M_12 -> M_21 = P M_12 P."""
    N = _side(M)
    return M.reshape(N, N, N, N).transpose(1, 0, 3, 2).reshape(N * N, N * N)


def left(L):
    """L_1 = L (x) 1."""
    return np.kron(L, np.eye(L.shape[0]))


def right(L):
    """L_2 = 1 (x) L."""
    return np.kron(np.eye(L.shape[0]), L)


def partial_trace_2(M):
    """Contract the second factor, tr_2(X (x) Y) = tr(Y) X."""
    N = _side(M)
    return np.einsum("ikjk->ij", M.reshape(N, N, N, N))


def swap_operator(N):
    """The permutation matrix P with P (x (x) y) = y (x) x."""
    P = np.zeros((N * N, N * N))
    for i in range(N):
        for k in range(N):
            P[i * N + k, k * N + i] = 1.0
    return P
