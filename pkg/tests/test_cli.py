import csv
import io
import json
import socket
import threading
import time

import pytest

from thompson_kex.cli import run
from thompson_kex.words import NormalWord


def out(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_nf(capsys):
    assert out(capsys, ["nf", "x1 x0"])[:2] == (0, "x0 x2\n")
    assert out(capsys, ["nf", ""])[:2] == (0, "1\n")
    assert out(capsys, ["nf", "x2 x2^-1", "--oracle"])[:2] == (0, "1\n")
    assert out(capsys, ["--json", "nf", ""])[:2] == (0, '{"pos":[],"neg":[]}\n')
    assert out(capsys, ["nf", "x1^-1 x2 x1", "--json"])[1] == '{"pos":[3],"neg":[]}\n'
    assert out(capsys, ["nf", "x3", "--quiet"])[1] == ""


def test_usage_errors(capsys):
    assert out(capsys, ["nf", "y3"])[0] == 1
    with pytest.raises(SystemExit) as exc:
        run(["keygen", "--s", "3", "--M", "16"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run(["nf", "x0", "--bogus"])
    assert exc.value.code == 1


def test_runtime_error_exit_code(capsys):
    code, _, err = out(capsys, ["keygen", "--s", "3", "--M", "15", "--seed", "1", "--role", "alice"])
    assert code == 2 and "ProtocolError" in err


def test_keygen(capsys):
    code, text, _ = out(capsys, ["keygen", "--s", "4", "--M", "32", "--seed", "7", "--role", "bob", "--json"])
    assert code == 0
    bundle = json.loads(text)
    assert set(bundle) == {"role", "params", "private", "public_token"}
    NormalWord.from_json(bundle["public_token"])
    assert bundle["params"]["s"] == 4
    again = out(capsys, ["keygen", "--s", "4", "--M", "32", "--seed", "7", "--role", "bob", "--json"])[1]
    assert again == text


def test_kex_demo(capsys):
    code, text, _ = out(capsys, ["kex", "demo", "--s", "3", "--M", "64", "--seed-alice", "1", "--seed-bob", "2"])
    assert code == 0
    assert text.splitlines()[-1] == "K_equal: true"
    j1 = out(capsys, ["kex", "demo", "--s", "3", "--M", "64", "--seed-alice", "1", "--seed-bob", "2", "--json"])[1]
    j2 = out(capsys, ["--json", "kex", "demo", "--s", "3", "--M", "64", "--seed-alice", "1", "--seed-bob", "2"])[1]
    assert j1 == j2 and json.loads(j1)["K_equal"] is True


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def test_kex_serve_connect(capsys):
    port = _free_port()
    codes = {}
    t = threading.Thread(target=lambda: codes.__setitem__(
        "serve", run(["kex", "serve", "--port", str(port), "--seed", "3", "--quiet"])))
    t.start()
    argv = ["kex", "connect", "--port", str(port), "--s", "3", "--M", "32", "--seed", "4", "--json"]
    # Retry until the server thread is listening; a refused connection exits 2.
    for _ in range(50):
        code = run(argv)
        if code == 0:
            break
        time.sleep(0.1)
    t.join(10)
    assert code == 0 and codes["serve"] == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("{")]
    assert json.loads(lines[-1])["K_equal"] is True


def test_attack_json(capsys):
    code, text, _ = out(capsys, ["attack", "--s", "2", "--M", "4", "--seed", "1", "--max-nodes", "100000"])
    rep = json.loads(text)
    assert code == 0 and rep["outcome"] == "Success" and rep["verified"] is True
    code, text, err = out(capsys, ["attack", "--s", "3", "--M", "64", "--seed", "1",
                                   "--max-nodes", "200", "--require-success"])
    assert code == 2 and json.loads(text)["outcome"] == "BudgetExhausted"
    assert set(json.loads(text)) == set(rep) - {"verified"}


def test_attack_sweep(capsys, tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[2, 4], {"s": 2, "M": 6}]))
    summary = tmp_path / "summary.csv"
    plot = tmp_path / "sweep.png"
    code, text, _ = out(capsys, ["attack-sweep", "--grid", str(grid), "--trials", "3", "--seed", "5",
                                 "--summary", str(summary), "--plot", str(plot)])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["s", "M", "trial", "outcome", "nodes", "seconds"]
    assert len(rows) == 6
    assert len(list(csv.DictReader(summary.open()))) == 2
    assert plot.stat().st_size > 0
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    code, text, _ = out(capsys, ["attack-sweep", "--grid", str(empty), "--trials", "3", "--seed", "5"])
    assert code == 0 and text.strip() == "s,M,trial,outcome,nodes,seconds"
    assert out(capsys, ["attack-sweep", "--grid", str(tmp_path / "missing.json"), "--trials", "1",
                        "--seed", "1"])[0] == 1


def test_bench_nf(capsys, tmp_path):
    plot = tmp_path / "bench.png"
    code, text, _ = out(capsys, ["bench-nf", "--min-exp", "4", "--max-exp", "8", "--seed", "1",
                                 "--plot", str(plot)])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [int(r["length"]) for r in rows] == [16, 32, 64, 128, 256]
    assert list(rows[0]) == ["length", "letter_visits", "nanoseconds"]
    assert plot.stat().st_size > 0
    assert out(capsys, ["bench-nf", "--min-exp", "5", "--max-exp", "4", "--seed", "1"])[0] == 1
