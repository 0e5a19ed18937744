"""Acceptance criteria 1-12.

Each ``criterion_N`` returns ``(passed, detail)``.  Under pytest every
criterion is one test and the terminal summary lists one PASS/FAIL line per
criterion; ``python3 tests/test_acceptance.py`` prints the same lines.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import nx_random_regular  # noqa: E402
from test_embedder import random_operations  # noqa: E402

from treeroute import serialize as io  # noqa: E402
from treeroute.embedder import HallViolator, extract_bare_paths, hall_matching, is_bare  # noqa: E402
from treeroute.gadget import build_gadget, gadget_construction_sequence, verify_gadget  # noqa: E402
from treeroute.graph_core import (  # noqa: E402
    Matching,
    complete_graph,
    cycle_graph,
    graph_from_edges,
    is_valid_path_factor,
    path_graph,
    petersen_graph,
    verify_constructible,
)
from treeroute.pipeline import (  # noqa: E402
    PipelineConfig,
    cycle_factor,
    embed_spanning_tree,
    generate_random_regular,
    generate_tree,
    verify_cycle_factor,
    verify_embedding,
)
from treeroute.routing_template import build_template, route  # noqa: E402
from treeroute.sorting_network import (  # noqa: E402
    PROVIDERS,
    figure1_network,
    is_sorting_network,
    random_network,
)
from treeroute.spectral import check_lower_bound, mixing_audit, second_eigenvalue  # noqa: E402

GADGET_K = [2, 6, 10, 14, 18, 22, 26, 30]
SEEDS = range(10)
TREE_KINDS_E2E = ["path", "spider", "caterpillar"]
HOST_SIZES = [600, 1200]
CYCLE_HOST = (1200, 40)
CYCLE_K = 150

RESULTS: dict[int, tuple[bool, str]] = {}
# JSON bytes from the first run of criteria 4, 10 and 11, compared by criterion 12
OUTPUTS: dict[int, bytes] = {}


def criterion_1():
    start = time.perf_counter()
    failures = []
    for k in GADGET_K:
        g = build_gadget(k)
        report = verify_gadget(g)
        if not report.ok:
            failures.append(f"k={k} {report.first_failure}: {report.messages[report.first_failure]}")
        if g.graph.n != 2 * k * (k - 1) or len(g.P1) != k * (k - 1):
            failures.append(f"k={k} sizes {g.graph.n}, {len(g.P1)}")
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        failures.append(f"{elapsed:.2f}s")
    return not failures, "; ".join(failures) or f"8 gadgets verified in {elapsed:.2f}s"


def criterion_2():
    failures = []
    for k in GADGET_K:
        g = build_gadget(k)
        for z in (g.v_in1, g.v_in2):
            ok, msg = verify_constructible(g.graph, {z}, gadget_construction_sequence(g, z), k, 2 * k + 1)
            if not ok:
                failures.append(f"k={k} z={z}: {msg}")
    return not failures, "; ".join(failures) or "16 sequences constructible"


def criterion_3():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    disagreements = 0
    sorting = 0
    for _ in range(50):
        n = int(rng.integers(1, 9))
        net = random_network(n, int(rng.integers(0, 2 * n + 2)), rng)
        a, b = is_sorting_network(net), is_sorting_network(net, "perms")
        disagreements += a != b
        sorting += a
    fig = figure1_network()
    fig_ok = is_sorting_network(fig) and not is_sorting_network(fig.without_last_level())
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and fig_ok and elapsed < 10
    return ok, f"{disagreements} disagreements over 50 networks ({sorting} sorting), figure-1 {fig_ok}, {elapsed:.2f}s"


def _route_record(t, phi):
    f = route(t, phi)
    wanted = [(t.A[j], t.B[phi[j]]) for j in range(t.n_reg)]
    ok, msg = is_valid_path_factor(t.graph, f, wanted)
    lengths = {len(p) - 1 for p in f.paths}
    ok = ok and lengths == {t.ell} and t.ell == t.graph.n // t.n_reg - 1
    ok = ok and sorted(v for p in f.paths for v in p) == list(range(t.graph.n))
    return ok, msg, [list(p) for p in f.paths]


def criterion_4():
    start = time.perf_counter()
    bad = []
    record = {}
    count = 0
    for n_reg in (2, 3, 4, 5, 6):
        t = build_template(n_reg, 2)
        for phi in itertools.permutations(range(n_reg)):
            ok, msg, _ = _route_record(t, list(phi))
            count += 1
            if not ok:
                bad.append(f"n={n_reg} phi={phi}: {msg}")
    t = build_template(8, 2)
    rng = np.random.default_rng(4)
    routed = []
    for _ in range(500):
        phi = rng.permutation(8).tolist()
        ok, msg, paths = _route_record(t, phi)
        count += 1
        routed.append({"phi": phi, "paths": paths})
        if not ok:
            bad.append(f"n=8 phi={phi}: {msg}")
    record["n8"] = routed
    OUTPUTS.setdefault(4, io.dumps(record).encode())
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    return ok, "; ".join(bad[:3]) or f"{count} bijections routed in {elapsed:.1f}s"


def criterion_5():
    census_bad, degree_bad = [], []
    for provider in sorted(PROVIDERS):
        for k in (2, 6):
            for n_reg in range(2, 9):
                t = build_template(n_reg, k, provider=PROVIDERS[provider])
                want = n_reg * (t.depth * k * (k - 1) + (t.depth + 1) * k)
                if t.unpadded_size != want or t.graph.n != want:
                    census_bad.append(f"{provider} k={k} n={n_reg}: {t.graph.n} != {want}")
                if t.graph.max_degree != 4:
                    degree_bad.append(t.graph.max_degree)
    detail = "; ".join(census_bad[:3]) or "census exact on 28 templates"
    if degree_bad:
        detail += f"; Δ(G) = {sorted(set(degree_bad))} on {len(degree_bad)}/28 templates, 4 required"
    return not census_bad and not degree_bad, detail


def _dense_lambda(g) -> float:
    """Oracle: general (nonsymmetric) eigensolver on the dense adjacency matrix."""
    vals = np.sort(np.linalg.eigvals(g.adjacency_matrix(sparse=False).astype(float)).real)
    return float(max(abs(vals[-2]), abs(vals[0])))


def criterion_6():
    graphs = [complete_graph(4), cycle_graph(4), petersen_graph()]
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(10, 201))
        d = int(rng.integers(3, min(n - 1, 20)))
        if n * d % 2:
            n += 1
        graphs.append(nx_random_regular(n, d, int(rng.integers(1 << 30))))
    worst_err, bound_bad, violations = 0.0, 0, 0
    for i, g in enumerate(graphs):
        rep = second_eigenvalue(g)
        lam = _dense_lambda(g)
        worst_err = max(worst_err, abs(rep.lambda_hat - lam))
        bound_bad += not check_lower_bound(rep)
        violations += mixing_audit(g, lam, samples=10_000, seed=i).violation_count
    ok = worst_err <= 1e-6 and bound_bad == 0 and violations == 0
    return ok, f"max |Δλ| {worst_err:.1e}, bound failures {bound_bad}, mixing violations {violations} over {len(graphs)} graphs"


def criterion_7():
    totals = {"ops": 0, "connects": 0, "failures": 0}
    errors = []
    for seed in range(200):
        try:
            stats = random_operations(seed)
        except AssertionError as exc:
            errors.append(f"seed {seed}: {exc}")
            continue
        for key, val in stats.items():
            totals[key] += val
    detail = f"{totals['ops']} operations, {totals['connects']} connects, {totals['failures']} clean failures"
    return not errors, "; ".join(errors[:3]) or detail


def criterion_8():
    rng = np.random.default_rng(8)
    bad = 0
    found = {"matching": 0, "violator": 0}
    for _ in range(500):
        n = int(rng.integers(1, 201))
        p = float(rng.uniform(0.5, 12.0)) / n
        mask = rng.random((n, n)) < p
        rows, cols = np.nonzero(mask)
        g = graph_from_edges(2 * n, zip(rows.tolist(), (cols + n).tolist()))
        out = hall_matching(g, range(n), range(n, 2 * n))
        if isinstance(out, Matching):
            found["matching"] += 1
            left = {a for a, _ in out.pairs}
            right = {b for _, b in out.pairs}
            if not (len(out) == n and out.is_valid(g) and left == set(range(n)) and right == set(range(n, 2 * n))):
                bad += 1
        elif isinstance(out, HallViolator):
            found["violator"] += 1
            nb = {w for v in out.s_set for w in g.adj[v] if w >= n}
            if not (out.s_set and set(out.s_set) <= set(range(n)) and len(nb) < len(out.s_set)):
                bad += 1
        else:
            bad += 1
    return bad == 0, f"{found['matching']} matchings, {found['violator']} violators, {bad} invalid"


def _bare_ok(t, k):
    paths = extract_bare_paths(t, k)
    flat = [v for p in paths for v in p]
    leaves = sum(1 for v in range(t.n) if t.degree(v) == 1)
    bound = t.n / (k + 1) - (2 * leaves - 2)
    ok = len(flat) == len(set(flat)) and all(len(p) == k + 1 and is_bare(t, p) for p in paths)
    return ok and (bound <= 0 or len(paths) >= bound)


def criterion_9():
    rng = np.random.default_rng(9)
    bad = []
    kinds = ["path", "caterpillar", "broom", "random_bounded", "spider"]
    for i in range(100):
        kind = kinds[i % len(kinds)]
        n = int(rng.integers(2, 2001))
        k = int(rng.integers(1, 12))
        t = generate_tree(kind, n, 4, seed=int(rng.integers(1 << 30)))
        if not _bare_ok(t, k):
            bad.append(f"{kind} n={n} k={k}")
    edge = [(path_graph(n), k) for n in (2, 3, 4, 21, 100) for k in (1, 2, 3, 5)]
    edge += [(generate_tree("spider", 3 * 10 + 1, 3), 3), (generate_tree("spider", 4 * 7 + 1, 4), 2)]
    for t, k in edge:
        if not _bare_ok(t, k):
            bad.append(f"edge case n={t.n} k={k}")
    return not bad, "; ".join(bad[:3]) or f"100 random trees and {len(edge)} edge cases meet the bound"


def criterion_10():
    rows = []
    record = {}
    worst = 0.0
    failures = []
    for n in HOST_SIZES:
        for kind in TREE_KINDS_E2E:
            wins = 0
            for seed in SEEDS:
                g = generate_random_regular(n, 30, seed=seed)
                t = generate_tree(kind, n, 3, seed=seed)
                start = time.perf_counter()
                try:
                    res = embed_spanning_tree(g, t, PipelineConfig(seed=seed))
                    ok = verify_embedding(g, t, res.map)[0]
                    record[f"{kind}-{n}-{seed}"] = res.map
                except Exception as exc:  # a failed seed counts against the success rate
                    ok = False
                    failures.append(f"{kind}-{n}-{seed}: {exc}")
                elapsed = time.perf_counter() - start
                worst = max(worst, elapsed)
                wins += ok and elapsed < 120
            rows.append((kind, n, wins))
    OUTPUTS.setdefault(10, io.dumps(record).encode())
    ok = all(w >= 0.9 * len(SEEDS) for _, _, w in rows)
    detail = ", ".join(f"{k}/{n} {w}/{len(SEEDS)}" for k, n, w in rows) + f"; slowest {worst:.1f}s"
    if failures:
        detail += "; " + failures[0]
    return ok, detail


def criterion_11():
    n, d = CYCLE_HOST
    wins, worst = 0, 0.0
    record = {}
    for seed in SEEDS:
        g = generate_random_regular(n, d, seed=seed)
        start = time.perf_counter()
        try:
            cycles = cycle_factor(g, CYCLE_K, PipelineConfig(seed=seed))
            ok = verify_cycle_factor(g, cycles, CYCLE_K)[0]
            record[str(seed)] = cycles
        except Exception:
            ok = False
        elapsed = time.perf_counter() - start
        worst = max(worst, elapsed)
        wins += ok and elapsed < 120
    OUTPUTS.setdefault(11, io.dumps(record).encode())
    return wins >= 8, f"{wins}/{len(SEEDS)} verified C_{CYCLE_K}-factors on n={n}, d={d}; slowest {worst:.1f}s"


def criterion_12():
    firsts = {}
    for c, fn in ((4, criterion_4), (10, criterion_10), (11, criterion_11)):
        if c not in OUTPUTS:
            fn()
        firsts[c] = OUTPUTS.pop(c)
        fn()
        firsts[c] = (firsts[c], OUTPUTS[c])
    same = {c: a == b for c, (a, b) in firsts.items()}
    sizes = ", ".join(f"c{c} {len(a)} bytes {'identical' if same[c] else 'DIFFERENT'}" for c, (a, _) in firsts.items())
    return all(same.values()), sizes


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


@pytest.mark.slow
@pytest.mark.parametrize("number", list(CRITERIA))
def test_criterion(number):
    ok, detail = CRITERIA[number]()
    RESULTS[number] = (ok, detail)
    assert ok, f"criterion {number}: {detail}"


def report_lines() -> list[str]:
    return [
        f"criterion {i:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
        for i, (ok, detail) in sorted(RESULTS.items())
    ]


if __name__ == "__main__":
    for number, fn in CRITERIA.items():
        RESULTS[number] = fn()
        print(f"criterion {number:2d}: {'PASS' if RESULTS[number][0] else 'FAIL'} - {RESULTS[number][1]}", flush=True)
