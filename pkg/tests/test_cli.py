import csv
import io
import json
import logging

import pytest

from lkernel import cli
from lkernel.modforms import victor_miller_basis


def _drop_timings(obj):
    if isinstance(obj, dict):
        return {k: _drop_timings(v) for k, v in obj.items() if k != "timings_ms"}
    if isinstance(obj, list):
        return [_drop_timings(v) for v in obj]
    return obj


def test_verify_cor2_exit_zero(capsys):
    assert cli.main(["verify-cor2", "--k", "8", "--s", "3.6", "--sp", "1.4"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("ok") and "residual=" in out


@pytest.mark.parametrize("k", [4, 6])
def test_small_weight_names_missing_values(k, capsys):
    assert cli.main(["verify-theorem", "--k", str(k), "--s", "2", "--sp", "1"]) == 2
    assert f"no admissible (s, s') exist for k={k}" in capsys.readouterr().err


def test_violated_condition_is_named(capsys):
    # s + s' = 10 is even
    assert cli.main(["verify-theorem", "--k", "12", "--s", "7", "--sp", "3"]) == 2
    assert "odd" in capsys.readouterr().err


def test_cor2_rejects_weight_with_cusp_forms(capsys):
    assert cli.main(["verify-cor2", "--k", "12", "--s", "6.5", "--sp", "2.5"]) == 2


def test_impossible_tolerance_exits_three():
    cfg = cli.RunConfig("verify-cor2", grid=[(8, 3.6, 1.4)], tol=1e-30, box=16)
    status, records = cli.run(cfg)
    assert status == 3 and not records[0]["ok"]


def test_missing_sp_is_invalid(capsys):
    assert cli.main(["average", "--k", "12", "--s", "6.5"]) == 2


def test_empty_grid_rejected():
    with pytest.raises(ValueError):
        cli.RunConfig("average", grid=[])


def test_grid_formats():
    g = cli.parse_grid([[8, 3.6, 1.4], [10, 5.2, 1.3, 1.8, -1.3], {"k": 14, "s_re": 6.5, "sp_re": 2.5}])
    assert g == [(8, 3.6 + 0j, 1.4 + 0j), (10, 5.2 + 1.3j, 1.8 - 1.3j), (14, 6.5 + 0j, 2.5 + 0j)]
    with pytest.raises(ValueError):
        cli.parse_grid([[8, 1]])


def test_cache_round_trip_is_exact(tmp_path):
    first = cli.cache_expansions(12, 64, tmp_path)
    text = (tmp_path / "basis_k12.json").read_text()
    second = cli.cache_expansions(12, 64, tmp_path)
    assert [str(c) for c in first[0].coeffs] == [str(c) for c in second[0].coeffs]
    assert (tmp_path / "basis_k12.json").read_text() == text
    # the cached Delta agrees with a fresh computation
    assert second[0].coeffs == victor_miller_basis(12, 64)[0].coeffs


def test_cache_precision_upgrade(tmp_path):
    low = cli.cache_expansions(24, 20, tmp_path)
    high = cli.cache_expansions(24, 50, tmp_path)
    assert json.loads((tmp_path / "basis_k24.json").read_text())["prec"] == 50
    for g_low, g_high in zip(low, high):
        assert g_high.coeffs[: len(g_low.coeffs)] == g_low.coeffs
    # a lower request is served from the larger cache as a prefix
    again = cli.cache_expansions(24, 20, tmp_path)
    assert [g.coeffs for g in again] == [g.coeffs for g in low]


def test_corrupt_cache_recomputed_with_warning(tmp_path, caplog):
    (tmp_path / "basis_k16.json").write_text('{"k": 16, "basis": [{"weight": 16, "coe')
    with caplog.at_level(logging.WARNING, logger="lkernel"):
        basis = cli.cache_expansions(16, 30, tmp_path)
    assert "corrupt cache" in caplog.text
    assert basis[0].coeffs == victor_miller_basis(16, 30)[0].coeffs
    json.loads((tmp_path / "basis_k16.json").read_text())


def test_cache_does_not_change_results(tmp_path):
    grid = [(12, 6.5, 2.5)]
    plain = cli.run(cli.RunConfig("average", grid=grid, box=24))[1]
    cli.run(cli.RunConfig("average", grid=grid, box=24, cache=str(tmp_path)))
    cached = cli.run(cli.RunConfig("average", grid=grid, box=24, cache=str(tmp_path)))[1]
    assert _drop_timings(plain) == _drop_timings(cached)


def test_env_var_overrides_cache_flag(tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv("LKERNEL_CACHE", str(env_dir))
    args = cli.build_parser().parse_args(["average", "--k", "12", "--s", "6.5", "--sp", "2.5", "--cache", str(flag_dir)])
    assert cli.config_from_args(args).cache == str(env_dir)
    assert cli.main(["average", "--k", "12", "--s", "6.5", "--sp", "2.5", "--n-max", "16", "--cache", str(flag_dir)]) == 0
    assert (env_dir / "basis_k12.json").exists() and not flag_dir.exists()


GRID = [(8, 3.6, 1.4), (12, 5.8 + 1.2j, 3.2 - 1.2j), (16, 9.5, 3.5)]


def _write_grid(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps([[k, complex(s).real, complex(s).imag, complex(sp).real, complex(sp).imag] for k, s, sp in GRID]))
    return path


def test_csv_and_json_carry_the_same_numbers(tmp_path):
    grid = _write_grid(tmp_path)
    j, c = tmp_path / "out.json", tmp_path / "out.csv"
    base = ["table", "--grid", str(grid), "--n-max", "24"]
    assert cli.main(base + ["--format", "json", "--out", str(j)]) == 0
    assert cli.main(base + ["--format", "csv", "--out", str(c)]) == 0
    records = json.loads(j.read_text())
    rows = list(csv.DictReader(io.StringIO(c.read_text())))
    assert len(rows) == len(records) == len(GRID)
    for rec, row in zip(records, rows):
        flat = cli._flatten(rec)
        for key, val in flat.items():
            if isinstance(val, float) and "timings" not in key:
                assert row[key] == f"{val:.17g}"
                assert float(row[key]) == val


def test_json_is_deterministic_and_thread_independent(tmp_path):
    grid = _write_grid(tmp_path)
    outs = []
    for threads in ("1", "1", "3"):
        path = tmp_path / f"run{len(outs)}.json"
        assert cli.main(["verify-theorem", "--grid", str(grid), "--n-max", "24", "--threads", threads, "--out", str(path)]) == 0
        outs.append(json.dumps(_drop_timings(json.loads(path.read_text())), sort_keys=True))
    assert outs[0] == outs[1] == outs[2]


def test_report_schema(tmp_path):
    path = tmp_path / "r.json"
    assert cli.main(["verify-theorem", "--k", "12", "--s", "6.5", "--sp", "2.5", "--n-max", "24", "--out", str(path)]) == 0
    (rec,) = json.loads(path.read_text())
    assert set(rec["params"]) == {"k", "s_re", "s_im", "sp_re", "sp_im"}
    assert set(rec["terms"]) == {"t1", "t2", "t3", "t4", "total", "trunc_error"}
    assert all(len(rec["terms"][t]) == 2 for t in ("t1", "t2", "t3", "t4", "total"))
    assert len(rec["lhs_spectral"]) == 2 and rec["lhs_quadrature"] is None
    for key in ("residuals", "settings", "timings_ms"):
        assert isinstance(rec[key], dict)


def test_selftest_command(capsys):
    assert cli.main(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out
