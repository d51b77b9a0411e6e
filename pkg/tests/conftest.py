"""Shared oracles, implemented independently of the package internals."""

import sys

import numpy as np
import pytest


def oracle_energy(spins) -> int:
    """Direct double-loop sidelobe energy."""
    n = len(spins)
    total = 0
    for k in range(1, n):
        c = sum(int(spins[i]) * int(spins[i + k]) for i in range(n - k))
        total += c * c
    return total


def oracle_autocorr(spins):
    n = len(spins)
    return [sum(int(spins[i]) * int(spins[i + k]) for i in range(n - k)) for k in range(1, n)]


_I = np.eye(2, dtype=complex)
_P = {
    "I": _I,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def oracle_dense_word(n, word):
    """Dense matrix of one Pauli word, built from scratch."""
    axes = dict(word)
    mat = np.array([[1.0 + 0j]])
    for q in range(1, n + 1):
        mat = np.kron(mat, _P[axes.get(q, "I")])
    return mat


def oracle_dense(op):
    mat = np.zeros((1 << op.n_qubits,) * 2, dtype=complex)
    for word, coeff in op.terms.items():
        mat += coeff * oracle_dense_word(op.n_qubits, word)
    return mat


def random_spins(rng, n):
    return (1 - 2 * rng.integers(0, 2, size=n)).astype(np.int8)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criterion lines after capture is released."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
