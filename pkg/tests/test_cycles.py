import itertools

import numpy as np
import pytest

from conftest import random_digraph
from graphphase import (
    CycleCover,
    DiGraph,
    PreconditionError,
    RosaceSpec,
    acyclicity_index,
    extract_cycle_cover,
    gen_cycle,
    gen_path,
    gen_rosace,
    has_cycle_cover,
    perturb,
)
from graphphase.cycles import maximum_matching


def brute_force_max_covered(g: DiGraph) -> int:
    """Largest node count covered by vertex-disjoint cycles, by enumerating permutations.

    A node mapped to itself counts only if it carries a self-loop.
    """
    best = 0
    for perm in itertools.permutations(range(g.n)):
        ok = True
        covered = 0
        for v, w in enumerate(perm):
            if v == w:
                covered += g.has_edge(v, v)
            elif g.has_edge(v, w):
                covered += 1
            else:
                ok = False
                break
        if ok:
            best = max(best, covered)
    return best


def test_examples():
    assert has_cycle_cover(gen_cycle(3))
    assert not has_cycle_cover(gen_path(3))
    assert extract_cycle_cover(gen_cycle(4)).cycles == ((0, 1, 2, 3),)


def test_two_disjoint_two_cycles():
    g = DiGraph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    assert extract_cycle_cover(g).cycles == ((0, 1), (2, 3))


def test_acyclicity_examples():
    assert acyclicity_index(gen_path(3)).r == 3
    assert acyclicity_index(gen_cycle(3)).r == 0
    loop = DiGraph.from_edges(3, [(0, 1), (1, 2), (1, 1)])
    idx = acyclicity_index(loop)
    assert (idx.r, idx.max_covered) == (2, 1)
    assert brute_force_max_covered(loop) == 1


def test_self_loops_are_one_cycles():
    g = DiGraph(np.eye(3))
    assert extract_cycle_cover(g).cycles == ((0,), (1,), (2,))


def test_no_cover_is_precondition_error():
    with pytest.raises(PreconditionError):
        extract_cycle_cover(gen_path(4))


def test_perturbed_rosace_3_3():
    res = perturb(gen_rosace(RosaceSpec(3, 3)))
    cover = extract_cycle_cover(res.perturbed)
    cover.validate(res.perturbed)
    assert sorted(len(c) for c in cover.cycles) == [3, 3, 3]
    assert cover.to_json() == {"r": 0, "cycles": [list(c) for c in cover.cycles]}


def test_validate_catches_bad_cover():
    g = gen_cycle(4)
    with pytest.raises(AssertionError):
        CycleCover(((0, 2),)).validate(g)
    with pytest.raises(AssertionError):
        CycleCover(((0, 1, 2, 3),)).validate(gen_path(4))


def test_matching_needs_augmenting_paths():
    # greedy ascending choice 0->1 must be undone so that 1 can take 1->... only edges
    g = DiGraph.from_edges(3, [(0, 1), (0, 2), (1, 0), (2, 1)])
    succ = maximum_matching(g)
    assert sorted(succ.tolist()) == [0, 1, 2]
    extract_cycle_cover(g).validate(g)


@pytest.mark.parametrize("seed", range(40))
def test_matches_brute_force_and_equivalences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    mask = rng.random((n, n)) < rng.uniform(0.1, 0.6)
    g = DiGraph(mask.astype(float))
    idx = acyclicity_index(g)
    assert idx.max_covered == brute_force_max_covered(g)
    assert idx.r == n - idx.max_covered
    CycleCover(idx.cycles).validate(g, complete=False)
    assert sum(len(c) for c in idx.cycles) == idx.max_covered
    cover_exists = has_cycle_cover(g)
    assert cover_exists == (idx.r == 0)
    if cover_exists:
        extract_cycle_cover(g).validate(g)
    else:
        with pytest.raises(PreconditionError):
            extract_cycle_cover(g)


@pytest.mark.parametrize("seed", range(10))
def test_equivalences_larger(seed):
    rng = np.random.default_rng(500 + seed)
    g = random_digraph(rng, int(rng.integers(5, 21)), float(rng.uniform(0.05, 0.3)))
    assert has_cycle_cover(g) == (acyclicity_index(g).r == 0)


@pytest.mark.parametrize("seed", range(10))
def test_perturbed_graphs_admit_cover(seed):
    rng = np.random.default_rng(900 + seed)
    g = random_digraph(rng, int(rng.integers(2, 20)), float(rng.uniform(0.05, 0.4)), dag=seed % 2 == 0)
    p = perturb(g).perturbed
    assert has_cycle_cover(p)
    extract_cycle_cover(p).validate(p)
