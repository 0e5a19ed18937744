import json
import subprocess
import sys

import pytest

from treeroute import serialize as io
from treeroute.cli import main
from treeroute.graph_core import is_valid_path_factor, PathFactor
from treeroute.pipeline import DEFAULT_SEED, verify_embedding


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def load(path):
    return io.loads(path.read_text())


def test_gadget_k6(tmp_path, capsys):
    out = tmp_path / "g.json"
    dot = tmp_path / "g.dot"
    code, text, _ = run(["gadget", "--k", "6", "--out", str(out), "--dot", str(dot)], capsys)
    assert code == 0 and "60 vertices" in text
    data = load(out)
    assert data["graph"]["n"] == 60 and all(data["checks"].values())
    assert dot.read_text().startswith("graph gadget {")


def test_network_verify(capsys):
    code, text, _ = run(["network", "verify", "--builder", "odd-even", "--n", "8"], capsys)
    assert code == 0 and text.strip() == "sorting: true, depth: 6"


def test_network_build_then_verify_file(tmp_path, capsys):
    f = tmp_path / "net.json"
    assert run(["network", "build", "--builder", "brickwall", "--n", "5", "--out", str(f)], capsys)[0] == 0
    code, text, _ = run(["network", "verify", "--in", str(f), "--mode", "perms"], capsys)
    assert code == 0 and "sorting: true" in text


def test_network_apply(capsys):
    code, text, _ = run(["network", "apply", "--n", "4", "--perm", "2,1,4,3"], capsys)
    assert code == 0 and text.strip() == "final: 1,2,3,4"


def test_route_figure3_wiring(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["route", "--registers", "4", "--k", "2", "--phi", "4,1,2,3", "--out", str(out)], capsys)
    assert code == 0
    data = load(out)
    paths = [tuple(p) for p in data["paths"]]
    a, b = data["A"], data["B"]
    assert [(p[0], p[-1]) for p in paths] == [(a[0], b[3]), (a[1], b[0]), (a[2], b[1]), (a[3], b[2])]
    g = io.graph_from_dict(data["graph"])
    assert is_valid_path_factor(g, PathFactor(paths, frozenset(range(g.n))))[0]


def test_route_rejects_bad_phi(capsys):
    code, _, err = run(["route", "--registers", "3", "--phi", "1,1,2"], capsys)
    assert code == 2 and "permutation" in err


def test_host_tree_embed_verify_cycle(tmp_path, capsys):
    host, tree, emb = tmp_path / "h.json", tmp_path / "t.json", tmp_path / "e.json"
    assert run(["gen-host", "--n", "300", "--d", "30", "--seed", "2", "--out", str(host)], capsys)[0] == 0
    assert run(["gen-tree", "--kind", "spider", "--n", "300", "--seed", "2", "--out", str(tree)], capsys)[0] == 0
    code, text, _ = run(["embed", "--host", str(host), "--tree", str(tree), "--out", str(emb)], capsys)
    assert code == 0 and "embedded 300-vertex tree" in text
    g, t = io.graph_from_dict(load(host)), io.graph_from_dict(load(tree))
    assert verify_embedding(g, t, load(emb)["map"])[0]
    code, text, _ = run(["verify", "--host", str(host), "--tree", str(tree), "--map", str(emb)], capsys)
    assert code == 0 and text.startswith("valid: true")

    cyc = tmp_path / "c.json"
    code, text, _ = run(["cycle-factor", "--host", str(host), "--k", "100", "--out", str(cyc)], capsys)
    assert code == 0 and "3 cycles" in text
    dot = tmp_path / "c.dot"
    assert run(["export-dot", "--in", str(cyc), "--graph", str(host), "--out", str(dot)], capsys)[0] == 0
    assert "[color=" in dot.read_text()


def test_spectra(tmp_path, capsys):
    host = tmp_path / "h.json"
    run(["gen-host", "--n", "50", "--d", "4", "--out", str(host)], capsys)
    out = tmp_path / "s.json"
    code, text, _ = run(["spectra", "--host", str(host), "--out", str(out)], capsys)
    assert code == 0 and "lambda_hat" in text
    assert load(out)["lower_bound_holds"] is True


def test_embed_is_byte_identical(tmp_path, capsys):
    host, tree = tmp_path / "h.json", tmp_path / "t.json"
    run(["gen-host", "--n", "200", "--d", "30", "--seed", "4", "--out", str(host)], capsys)
    run(["gen-tree", "--kind", "caterpillar", "--n", "200", "--seed", "4", "--out", str(tree)], capsys)
    outs = []
    for i in range(2):
        f = tmp_path / f"e{i}.json"
        run(["embed", "--host", str(host), "--tree", str(tree), "--out", str(f)], capsys)
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_broken_map_fails_verify(tmp_path, capsys):
    host, tree, emb = tmp_path / "h.json", tmp_path / "t.json", tmp_path / "e.json"
    host.write_text(io.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}))
    tree.write_text(io.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}))
    emb.write_text(io.dumps({"map": [0, 2, 1]}))
    code, text, _ = run(["verify", "--host", str(host), "--tree", str(tree), "--map", str(emb)], capsys)
    assert code == 3 and "valid: false" in text


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 4,\n  "edges": [[0, 1],, ]}')
    code, _, err = run(["spectra", "--host", str(bad)], capsys)
    assert code == 2 and "line 2" in err and "column" in err


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run(["spectra", "--host", str(tmp_path / "none.json")], capsys)
    assert code == 2


def test_step_failure_exit_code(tmp_path, capsys):
    host, tree, cfg = tmp_path / "h.json", tmp_path / "t.json", tmp_path / "cfg.txt"
    run(["gen-host", "--n", "200", "--d", "30", "--seed", "3", "--out", str(host)], capsys)
    run(["gen-tree", "--kind", "random_bounded", "--n", "200", "--max-deg", "4", "--seed", "3", "--out", str(tree)], capsys)
    cfg.write_text("fallback = false\n")
    code, _, err = run(["embed", "--host", str(host), "--tree", str(tree), "--config", str(cfg)], capsys)
    assert code == 3 and "step0" in err


def test_unknown_config_key(tmp_path, capsys):
    host, tree, cfg = tmp_path / "h.json", tmp_path / "t.json", tmp_path / "cfg.txt"
    run(["gen-host", "--n", "20", "--d", "4", "--out", str(host)], capsys)
    run(["gen-tree", "--kind", "path", "--n", "20", "--out", str(tree)], capsys)
    cfg.write_text("warp = 9\n")
    code, _, err = run(["embed", "--host", str(host), "--tree", str(tree), "--config", str(cfg)], capsys)
    assert code == 2 and "warp" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gadget", "--k", "6", "--colour", "red"])
    assert exc.value.code == 2


def test_default_seed_in_help(capsys):
    with pytest.raises(SystemExit):
        main(["gen-host", "--help"])
    assert str(DEFAULT_SEED) in capsys.readouterr().out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "treeroute.cli", "network", "verify", "--n", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "sorting: true" in proc.stdout


def test_artifacts_round_trip(tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["route", "--registers", "3", "--phi", "2,3,1", "--out", str(out)], capsys)
    text = out.read_text()
    assert io.dumps(io.loads(text)) == text
    assert json.loads(text)["schema"] == "v1"
