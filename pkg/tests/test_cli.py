import json
import subprocess
import sys

import numpy as np
import pytest

from trischmidt import Indeterminate, PureState, ghz_state, w_state
from trischmidt.cli import (
    EXIT_DATA,
    EXIT_DECOMPOSABLE,
    EXIT_INDETERMINATE,
    EXIT_NOT_DECOMPOSABLE,
    EXIT_USAGE,
    load_state_file,
    main,
    parse_state_payload,
    state_payload,
)


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_state(tmp_path, name, state):
    path = tmp_path / name
    from trischmidt.cli import _dump_json

    path.write_text(_dump_json(state_payload(state)) + "\n", encoding="utf-8")
    return str(path)


def test_state_payload_round_trip():
    state = ghz_state((2, 2, 2))
    rebuilt = parse_state_payload(json.loads(json.dumps(state_payload(state))))
    assert rebuilt.dims == state.dims
    assert np.array_equal(rebuilt.amplitudes, state.amplitudes)


def test_gen_ghz_amplitudes(tmp_path, capsys):
    out_file = tmp_path / "ghz.json"
    code, out, _ = run_cli(["gen", "ghz", "--dims", "2,2,2", "-o", str(out_file)], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out_file.read_text())
    assert payload["dims"] == [2, 2, 2]
    amps = payload["amplitudes"]
    assert abs(amps[0][0] - 1 / np.sqrt(2)) < 1e-15
    assert abs(amps[7][0] - 1 / np.sqrt(2)) < 1e-15


def test_gen_w_amplitudes(capsys):
    code, out, _ = run_cli(["gen", "w", "--dims", "2,2,2"], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    t = np.array([complex(re, im) for re, im in payload["amplitudes"]]).reshape(2, 2, 2)
    for idx in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        assert abs(t[idx] - 1 / np.sqrt(3)) < 1e-15


def test_gen_is_byte_deterministic(capsys):
    args = ["gen", "haar", "--dims", "2,3,2", "--seed", "99"]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


def test_gen_requires_seed_for_random_kinds(capsys):
    code, _, err = run_cli(["gen", "haar", "--dims", "2,2,2"], capsys)
    assert code == EXIT_USAGE
    assert "--seed" in err
    code, _, err = run_cli(["gen", "schmidt", "--dims", "2,2,2", "--seed", "1"], capsys)
    assert code == EXIT_USAGE
    assert "--weights" in err


def test_gen_bad_weights_is_data_error(capsys):
    code, _, err = run_cli(
        ["gen", "schmidt", "--dims", "2,2,2", "--weights", "0.5,0.3,0.2", "--seed", "1"],
        capsys,
    )
    assert code == EXIT_DATA
    assert "BadWeights" in err


def test_check_ghz_exit_zero(tmp_path, capsys):
    path = write_state(tmp_path, "ghz.json", ghz_state((2, 2, 2)))
    code, out, _ = run_cli(["check", path], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    assert payload["verdict"]["decomposable"] is True
    assert np.max(np.abs(np.array(payload["weights"]) - 0.5)) < 1e-10
    assert payload["pivot_party"] == "A"


def test_check_w_exit_one_and_residual(tmp_path, capsys):
    path = write_state(tmp_path, "w.json", w_state((2, 2, 2)))
    code, out, _ = run_cli(["check", path], capsys)
    assert code == EXIT_NOT_DECOMPOSABLE
    payload = json.loads(out)
    assert payload["verdict"]["decomposable"] is False
    assert abs(payload["verdict"]["max_residual"] - 0.57735026918962584) < 1e-9
    assert payload["weights"] is None
    spec = payload["spectra"]
    for party in ("A", "B", "C"):
        assert np.max(np.abs(np.array(spec[party]) - [2 / 3, 1 / 3])) < 1e-10


def test_check_truncated_file_is_data_error(tmp_path, capsys):
    path = tmp_path / "trunc.json"
    path.write_text('{"dims": [2, 2, 2], "amplitudes": [[1.0, 0.0]]}', encoding="utf-8")
    code, out, err = run_cli(["check", str(path)], capsys)
    assert code == EXIT_DATA
    assert "DimensionMismatch" in err
    assert out == ""


def test_check_invalid_json_is_data_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, err = run_cli(["check", str(path)], capsys)
    assert code == EXIT_DATA
    assert "JSON" in err


def test_check_report_is_byte_deterministic(tmp_path, capsys):
    path = write_state(tmp_path, "s.json", ghz_state((2, 2, 2)))
    _, out1, _ = run_cli(["check", path], capsys)
    _, out2, _ = run_cli(["check", path], capsys)
    assert out1 == out2


def test_check_indeterminate_maps_to_exit_two(tmp_path, capsys, monkeypatch):
    import trischmidt.cli as cli_mod

    def fake_check(state, tol, pivot=None):
        raise Indeterminate("forced for the exit-code contract", analysis=None, max_residual=0.25)

    monkeypatch.setattr(cli_mod, "check", fake_check)
    path = write_state(tmp_path, "g.json", ghz_state((2, 2, 2)))
    code, out, _ = run_cli(["check", path], capsys)
    assert code == EXIT_INDETERMINATE
    payload = json.loads(out)
    assert payload["verdict"]["indeterminate"] is True
    assert payload["verdict"]["decomposable"] is None


def test_check_rejects_bipartite_input(tmp_path, capsys):
    bell = PureState((2, 2), np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
    path = write_state(tmp_path, "bell.json", bell)
    code, _, err = run_cli(["check", path], capsys)
    assert code == EXIT_DATA
    assert "tripartite" in err


def test_check_tolerance_flags_echoed(tmp_path, capsys):
    path = write_state(tmp_path, "g.json", ghz_state((2, 2, 2)))
    code, out, _ = run_cli(["check", path, "--tol-rank", "1e-6", "--tol-degen", "1e-5"], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    assert payload["tolerances"]["rank_rel"] == 1e-6
    assert payload["tolerances"]["degen_rel"] == 1e-5
    assert payload["tolerances"]["recon_abs"] == 1e-10


def test_check_all_pivots(tmp_path, capsys):
    path = write_state(tmp_path, "g.json", ghz_state((2, 2, 2)))
    code, out, _ = run_cli(["check", path, "--all-pivots"], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    for party in ("A", "B", "C"):
        assert payload["all_pivots"][party]["decomposable"] is True


def test_spectra_command(tmp_path, capsys):
    path = write_state(tmp_path, "w.json", w_state((2, 2, 2)))
    code, out, _ = run_cli(["spectra", path], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    assert "A_BC" in payload["spectrum_equal"]
    assert payload["spectrum_equal"]["A_BC"] is True
    assert np.max(np.abs(np.array(payload["spectra"]["A"]) - [2 / 3, 1 / 3])) < 1e-10
    assert "verdict" not in payload


def test_spectra_product_state(tmp_path, capsys):
    from trischmidt import product_state

    path = write_state(tmp_path, "p.json", product_state((2, 2, 2)))
    _, out, _ = run_cli(["spectra", path], capsys)
    payload = json.loads(out)
    for party in ("A", "B", "C"):
        assert payload["spectra"][party][0] == pytest.approx(1.0)


def test_decompose_bipartite_bell(tmp_path, capsys):
    bell = PureState((2, 2), np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
    path = write_state(tmp_path, "bell.json", bell)
    code, out, _ = run_cli(["decompose-bipartite", path], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    assert np.max(np.abs(np.array(payload["coefficients"]) - 0.70710678118654746)) < 1e-10
    assert abs(payload["entropy_bits"] - 1.0) < 1e-12


def test_decompose_bipartite_product_entropy_zero(tmp_path, capsys):
    prod = PureState((2, 2), np.array([1.0, 0.0, 0.0, 0.0]))
    path = write_state(tmp_path, "prod.json", prod)
    _, out, _ = run_cli(["decompose-bipartite", path], capsys)
    assert json.loads(out)["entropy_bits"] == 0.0


def test_decompose_bipartite_skewed_entropy(tmp_path, capsys):
    state = PureState((2, 2), np.array([np.sqrt(0.9), 0.0, 0.0, np.sqrt(0.1)]))
    path = write_state(tmp_path, "s.json", state)
    _, out, _ = run_cli(["decompose-bipartite", path], capsys)
    expected = -(0.9 * np.log2(0.9) + 0.1 * np.log2(0.1))
    got = json.loads(out)["entropy_bits"]
    assert abs(got - expected) < 1e-12
    assert abs(got - 0.46900) < 1e-4


def test_decompose_bipartite_rejects_tripartite(tmp_path, capsys):
    path = write_state(tmp_path, "g.json", ghz_state((2, 2, 2)))
    code, _, err = run_cli(["decompose-bipartite", path], capsys)
    assert code == EXIT_DATA
    assert "bipartite" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = run_cli(["no-such-command"], capsys)
    assert code == EXIT_USAGE
    code, _, _ = run_cli([], capsys)
    assert code == EXIT_USAGE


def test_gen_check_pipeline_in_process(tmp_path, capsys):
    state_args = [
        "gen", "schmidt", "--dims", "3,4,4", "--weights", "0.5,0.3,0.2", "--seed", "42",
        "-o", str(tmp_path / "sd.json"),
    ]
    code, _, _ = run_cli(state_args, capsys)
    assert code == EXIT_DECOMPOSABLE
    code, out, _ = run_cli(["check", str(tmp_path / "sd.json")], capsys)
    assert code == EXIT_DECOMPOSABLE
    payload = json.loads(out)
    weights = np.sort(np.array(payload["weights"]))[::-1]
    assert np.max(np.abs(weights - [0.5, 0.3, 0.2])) < 1e-8


def test_load_state_file_from_stdin(tmp_path, capsys, monkeypatch):
    import io

    from trischmidt.cli import _dump_json

    text = _dump_json(state_payload(w_state((2, 2, 2)))) + "\n"
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    state = load_state_file("-")
    assert state.dims == (2, 2, 2)


def test_subprocess_entry_point(tmp_path):
    gen = subprocess.run(
        [sys.executable, "-m", "trischmidt", "gen", "ghz", "--dims", "2,2,2"],
        capture_output=True, text=True,
    )
    assert gen.returncode == 0
    check_run = subprocess.run(
        [sys.executable, "-m", "trischmidt", "check", "-"],
        input=gen.stdout, capture_output=True, text=True,
    )
    assert check_run.returncode == 0
    payload = json.loads(check_run.stdout)
    assert payload["verdict"]["decomposable"] is True
    w_run = subprocess.run(
        [sys.executable, "-m", "trischmidt", "gen", "w", "--dims", "2,2,2"],
        capture_output=True, text=True,
    )
    reject = subprocess.run(
        [sys.executable, "-m", "trischmidt", "check", "-"],
        input=w_run.stdout, capture_output=True, text=True,
    )
    assert reject.returncode == 1
