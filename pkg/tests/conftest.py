import numpy as np
import pytest

from graphphase import DiGraph, RosaceSpec, gen_rosace, perturb
from graphphase.experiments import run_rosace

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool | None, detail: str) -> None:
    """Log one gate line; ``passed=None`` marks a skipped criterion."""
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"criterion {number} [{status}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def rosace_perturbation():
    return perturb(gen_rosace(RosaceSpec(20, 20)))


@pytest.fixture(scope="session")
def rosace_report():
    return run_rosace(RosaceSpec(20, 20))


def random_digraph(rng: np.random.Generator, n: int, density: float, dag: bool = False) -> DiGraph:
    """Erdos-Renyi digraph without self-loops, or a random DAG under a shuffled order."""
    mask = rng.random((n, n)) < density
    if dag:
        mask = np.tril(mask, -1)
        perm = rng.permutation(n)
        mask = mask[np.ix_(perm, perm)]
    else:
        np.fill_diagonal(mask, False)
    return DiGraph(mask.astype(float))
