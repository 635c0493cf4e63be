import json
import subprocess
import sys

import numpy as np
import pytest

from ratprony import io
from ratprony.cli import EXIT_INVALID, EXIT_NONCONVERGENCE, EXIT_OK, main
from ratprony.errors import InvalidInputError
from ratprony.hardy import CircleSampling, RationalAtomSet
from ratprony.prony import MomentSequence, RecoveryResult, match_poles

POLES = np.array([0.6, -0.3 + 0.4j])
COEF = np.array([1.0, 2.0 - 1j])


@pytest.fixture
def samples(tmp_path):
    path = tmp_path / "h.csv"
    io.write_sampling_csv(path, RationalAtomSet(POLES, COEF).sampling(1024))
    return path


def read_poles(path):
    data = io.read_json(path)
    return io.result_from_dict(data)


def test_points_round_trip(tmp_path):
    z = np.array([1 + 2j, -0.5, 1e-17j])
    io.write_points_csv(tmp_path / "p.csv", z)
    np.testing.assert_array_equal(io.read_points_csv(tmp_path / "p.csv"), z)


def test_sampling_round_trip_is_bitwise(tmp_path):
    H = RationalAtomSet(POLES, COEF).sampling(64)
    io.write_sampling_csv(tmp_path / "s.csv", H)
    back = io.read_sampling_csv(tmp_path / "s.csv")
    assert isinstance(back, CircleSampling)
    np.testing.assert_array_equal(back.values, H.values)


def test_moments_round_trip_and_checks(tmp_path):
    g = MomentSequence([1, 0.5j, -0.25])
    io.write_moments_csv(tmp_path / "g.csv", g)
    np.testing.assert_array_equal(io.read_moments_csv(tmp_path / "g.csv").values, g.values)
    (tmp_path / "gap.csv").write_text("m,re,im\n0,1,0\n2,1,0\n")
    with pytest.raises(InvalidInputError, match="without gaps"):
        io.read_moments_csv(tmp_path / "gap.csv")


@pytest.mark.parametrize("text, match", [
    ("", "empty"),
    ("x,y\n1,2\n", "header"),
    ("re,im\n1,2,3\n", "fields"),
    ("re,im\n1,abc\n", "non-numeric"),
])
def test_malformed_csv(tmp_path, text, match):
    (tmp_path / "bad.csv").write_text(text)
    with pytest.raises(InvalidInputError, match=match):
        io.read_points_csv(tmp_path / "bad.csv")


def test_json_encoding(tmp_path):
    res = RecoveryResult(POLES, COEF, {"cond": float("inf"), "rank": np.int64(2), "ok": np.bool_(True)})
    io.write_json(tmp_path / "r.json", res)
    data = io.read_json(tmp_path / "r.json")
    assert data["diagnostics"] == {"cond": None, "rank": 2, "ok": True}
    back = io.result_from_dict(data)
    np.testing.assert_array_equal(back.poles, POLES)
    np.testing.assert_array_equal(back.coefficients, COEF)


def test_cli_grop(samples, tmp_path):
    out = tmp_path / "r.json"
    assert main(["grop", str(samples), "--order", "2", "--out", str(out)]) == EXIT_OK
    res = read_poles(out)
    _, err = match_poles(res.poles, POLES)
    assert max(err) < 1e-10
    assert main(["grop", str(samples), "--order", "2", "--coefficients", "vandermonde",
                 "--format", "csv", "--out", str(tmp_path / "p.csv")]) == EXIT_OK
    assert io.read_points_csv(tmp_path / "p.csv").size == 2


def test_cli_rank_deficiency_and_bad_input(samples, tmp_path):
    assert main(["grop", str(samples), "--order", "4", "--out", str(tmp_path / "x")]) == EXIT_INVALID
    assert main(["grop", str(samples), "--order", "4", "--lenient",
                 "--out", str(tmp_path / "x")]) == EXIT_OK
    assert main(["grop", str(tmp_path / "missing.csv"), "--order", "2"]) == EXIT_INVALID
    assert main(["grop", str(samples)]) == EXIT_INVALID
    assert main(["grop", str(samples), "--order", "2", "--grid", "512"]) == EXIT_INVALID


def test_cli_bernoulli(samples, tmp_path):
    out = tmp_path / "b.json"
    assert main(["bernoulli", str(samples), "--count", "2", "--out", str(out)]) == EXIT_OK
    res = read_poles(out)
    np.testing.assert_allclose(res.poles, POLES, atol=1e-6)


def test_cli_bernoulli_nonconvergence(tmp_path):
    path = tmp_path / "eq.csv"
    io.write_sampling_csv(path, RationalAtomSet([0.5, -0.5], [1, 1]).sampling(1024))
    assert main(["bernoulli", str(path), "--kmax", "50", "--out", str(tmp_path / "o")]) \
        == EXIT_NONCONVERGENCE


def test_cli_classical_and_lift(tmp_path):
    n = np.arange(40)
    io.write_moments_csv(tmp_path / "g.csv", 3 * 1.5**n + (-2.0) ** n)
    out = tmp_path / "c.json"
    assert main(["classical", str(tmp_path / "g.csv"), "--order", "2", "--out", str(out)]) == EXIT_OK
    np.testing.assert_allclose(np.sort(read_poles(out).poles.real), [-2, 1.5], atol=1e-8)

    lifted = tmp_path / "lifted.csv"
    assert main(["lift", str(tmp_path / "g.csv"), "--weight", "4", "--grid", "512",
                 "--out", str(lifted)]) == EXIT_OK
    assert io.read_sampling_csv(lifted).n_grid == 512
    side = json.loads((tmp_path / "lifted.csv.json").read_text())
    assert side["w"] == 4.0 and side["K"] == 40
    assert main(["lift", str(tmp_path / "g.csv"), "--weight", "1.5", "--out",
                 str(tmp_path / "z.csv")]) == EXIT_INVALID


def test_cli_recover_linear(samples, tmp_path):
    io.write_points_csv(tmp_path / "poles.csv", POLES)
    out = tmp_path / "lin.json"
    assert main(["recover-linear", str(samples), "--poles", str(tmp_path / "poles.csv"),
                 "--out", str(out)]) == EXIT_OK
    data = io.read_json(out)
    c = np.array([complex(d["re"], d["im"]) for d in data["coefficients"]])
    np.testing.assert_allclose(c, COEF, atol=1e-10)


def test_cli_condnum(tmp_path):
    out = tmp_path / "cn.json"
    assert main(["condnum", "--order", "50", "--out", str(out)]) == EXIT_OK
    data = io.read_json(out)
    assert data["paper_experiment"] == "condition-number-study"
    assert data["ratio"] > 1
    assert main(["condnum", "--order", "20", "--format", "csv",
                 "--out", str(tmp_path / "cn.csv")]) == EXIT_OK
    assert (tmp_path / "cn.csv").read_text().startswith("key,value\n")


@pytest.mark.parametrize("method", ["grop", "gb", "classical"])
def test_cli_delay_demo(tmp_path, method):
    out = tmp_path / "d.csv"
    assert main(["delay-demo", "--method", method, "--format", "csv", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "set,re,im"
    assert sum(line.startswith("recovered") for line in lines) == 3


def test_cli_delay_demo_bad_step():
    assert main(["delay-demo", "--m0", "10"]) == EXIT_INVALID


@pytest.mark.parametrize("method", ["gb", "gop", "compare"])
def test_cli_rkhs_demo(tmp_path, method):
    out = tmp_path / "k.json"
    assert main(["rkhs-demo", "--method", method, "--out", str(out)]) == EXIT_OK
    assert io.read_json(out)["paper_experiment" if method == "compare" else "diagnostics"]


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_module_entry_point(samples):
    proc = subprocess.run([sys.executable, "-m", "ratprony", "grop", str(samples), "--order", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["poles"]) == 2
