import numpy as np
import pytest

SIGMA = [np.eye(2, dtype=complex),
         np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]]),
         np.array([[1, 0], [0, -1]], dtype=complex)]

# Phi+, Psi+, Psi-, Phi- in the computational basis |00>,|01>,|10>,|11>
BELL_COLUMNS = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]],
                        dtype=complex).T / np.sqrt(2)


def kraus_output(q, mu, rho):
    """Direct two-use Pauli channel action, written out independently of the package."""
    q = np.asarray(q, float)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            p = (1 - mu) * q[i] * q[j] + (mu * q[i] if i == j else 0.0)
            k = np.kron(SIGMA[i], SIGMA[j])
            out += p * k @ rho @ k.conj().T
    return out


def bell_output(q, mu, a):
    psi = BELL_COLUMNS @ a
    rho = kraus_output(q, mu, np.outer(psi, psi.conj()))
    return BELL_COLUMNS.conj().T @ rho @ BELL_COLUMNS


def entropy_bits(m):
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_RESULTS = []


def record(criterion, ok, detail):
    _RESULTS.append((criterion, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    grouped = {}
    for crit, ok, detail in _RESULTS:
        grouped.setdefault(crit, []).append((ok, detail))
    for crit in sorted(grouped):
        items = grouped[crit]
        ok = all(o for o, _ in items)
        details = "; ".join(d for _, d in items)
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'} ({details})")
