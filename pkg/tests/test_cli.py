import json

import pytest

import main

SOLUTION_KEYS = {"a", "b", "c", "dimension", "ell", "ell_prime", "kappa0", "kappa1", "E0", "E1",
                 "alpha", "beta", "gamma", "residuals"}


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    # Keep any config.toml in the source tree out of the way
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("QES_RADIAL_DEBUG", raising=False)
    return tmp_path


async def run(capsys, *argv):
    code = await main.main(list(argv))
    return code, capsys.readouterr().out


def table(out):
    lines = out.splitlines()
    header = {}
    for line in lines:
        if line.startswith("# "):
            key, value = line[2:].split(": ", 1)
            header[key] = json.loads(value)
    start = lines.index("r,R") + 1
    rows = [tuple(float(x) for x in line.split(",")) for line in lines[start:]]
    return header, rows


@pytest.mark.asyncio
async def test_solve(capsys):
    code, out = await run(capsys, "solve", "--dim", "3", "--a", "1", "--ell", "0")
    assert code == 0
    record = json.loads(out)
    assert set(record) == SOLUTION_KEYS
    assert record["b"] == -11.25
    assert record["c"] == 3.515625
    assert record["kappa0"] == -1.5
    assert record["E0"] == -2.0
    assert record["E1"] == 6.0
    assert record["ell_prime"] is None
    assert record["residuals"]["constraint9"] == pytest.approx(0, abs=1e-9)


@pytest.mark.asyncio
async def test_solve_two_dimensions(capsys):
    code, out = await run(capsys, "solve", "--dim", "2", "--m", "0")
    assert code == 0
    record = json.loads(out)
    assert record["dimension"] == 2
    assert record["b"] == -12.0
    assert record["c"] == 4.0


@pytest.mark.asyncio
async def test_solve_cross(capsys):
    code, out = await run(capsys, "solve", "--ell", "0", "--ell-prime", "1")
    assert code == 0
    record = json.loads(out)
    assert record["b"] == pytest.approx(-4.2011, abs=1e-4)
    assert record["c"] == pytest.approx(0.75878, abs=1e-4)
    assert record["beta"] / record["alpha"] == pytest.approx(-1.47683, abs=1e-4)
    assert record["residuals"]["constraint9"] is None


@pytest.mark.asyncio
async def test_solve_no_solution(capsys):
    code, out = await run(capsys, "solve", "--ell", "2")
    assert code == 2
    assert json.loads(out)["error"] == "NoSolution"


@pytest.mark.asyncio
@pytest.mark.parametrize("a, b, c, expected", [
    ("1", "-11.25", "3.515625", 0),
    ("1", "0.04082", "0.18", 1),
    ("2", "-6", "1", 1),
])
async def test_check(capsys, a, b, c, expected):
    code, out = await run(capsys, "check", "--a", a, "--b", b, "--c", c, "--json")
    assert code == expected
    record = json.loads(out)
    assert record["all_satisfied"] == (expected == 0)


@pytest.mark.asyncio
async def test_check_text(capsys):
    code, out = await run(capsys, "check", "--b", "0.04082", "--c", "0.18")
    assert code == 1
    assert "satisfied:" in out
    assert "  excited: false" in out


@pytest.mark.asyncio
async def test_check_missing_c(capsys):
    code, out = await run(capsys, "check", "--b", "-11.25")
    assert code == 2
    assert json.loads(out)["error"] == "ValueError"


@pytest.mark.asyncio
async def test_radial_ground(capsys):
    code, out = await run(capsys, "radial", "--dim", "3", "--a", "1", "--ell", "0")
    assert code == 0
    header, rows = table(out)
    assert len(rows) == 512
    assert header["state"] == "ground"
    assert header["kappa"] == -1.5
    assert all(value > 0 for _, value in rows)


@pytest.mark.asyncio
async def test_radial_excited(capsys):
    code, out = await run(capsys, "radial", "--state", "excited", "--normalized")
    assert code == 0
    header, rows = table(out)
    assert header["normalized"] is True
    assert header["norm"] > 0
    flips = [i for i in range(len(rows) - 1) if (rows[i][1] < 0) != (rows[i + 1][1] < 0)]
    assert len(flips) == 1
    i = flips[0]
    assert rows[i][0] <= 1.17017 <= rows[i + 1][0]


@pytest.mark.asyncio
async def test_radial_two_dimensions(capsys):
    code, out = await run(capsys, "radial", "--dim", "2", "--m", "0", "--state", "excited")
    assert code == 0
    header, _ = table(out)
    assert header["dimension"] == 2
    assert header["kappa"] == 0.5
    assert header["E"] == 6.0


@pytest.mark.asyncio
async def test_radial_to_file(capsys, workdir):
    code, out = await run(capsys, "radial", "--output", "ground.csv")
    assert code == 0
    assert out == ""
    _, rows = table((workdir / "ground.csv").read_text())
    assert len(rows) == 512


@pytest.mark.asyncio
async def test_critique(capsys):
    code, out = await run(capsys, "critique")
    assert code == 0
    assert "legacy:" in out
    assert "corrected:" in out

    code, out = await run(capsys, "critique", "--json")
    record = json.loads(out)
    legacy = record["legacy"]
    assert legacy["ground_satisfied"] is True
    assert legacy["excited_satisfied"] is False
    assert legacy["excited_residual"] == pytest.approx(2.586404, abs=1e-6)
    assert legacy["candidate"]["max_coefficient_residual"] > 0.1
    assert legacy["candidate"]["ode_relative_residual_at_1"] > 1e-2
    assert record["corrected"]["b"] == -11.25


@pytest.mark.asyncio
async def test_verify(capsys):
    code, out = await run(capsys, "verify", "--dim", "3", "--a", "1", "--ell", "0")
    assert code == 0
    record = json.loads(out)
    assert record["verdict"] == "pass"
    assert record["tier"] == "exact"
    assert [report["state"] for report in record["reports"]] == ["ground", "excited"]


@pytest.mark.asyncio
async def test_verify_legacy_candidate(capsys):
    code, out = await run(capsys, "verify", "--b", "0.04082", "--c", "0.18", "--state", "excited",
                          "--alpha", "1", "--beta", "-0.1787", "--gamma", "0.8485")
    assert code == 1
    record = json.loads(out)
    assert record["tier"] == "rounded"
    assert record["reports"][0]["checks"]["residual"] is False


@pytest.mark.asyncio
async def test_deterministic(capsys):
    _, first = await run(capsys, "solve", "--ell", "0", "--ell-prime", "1")
    _, second = await run(capsys, "solve", "--ell", "0", "--ell-prime", "1")
    assert first == second


@pytest.mark.asyncio
async def test_m_needs_two_dimensions(capsys):
    with pytest.raises(SystemExit) as e:
        await main.main(["solve", "--dim", "3", "--m", "0"])
    assert e.value.code == 2


@pytest.mark.asyncio
async def test_missing_config(capsys):
    with pytest.raises(SystemExit) as e:
        await main.main(["solve", "--config", "nowhere.toml"])
    assert e.value.code == 2
    assert "not found" in capsys.readouterr().err


@pytest.mark.asyncio
async def test_config_file(capsys, workdir):
    (workdir / "config.toml").write_text("[OUTPUT]\nSAMPLES = 64\n")
    code, out = await run(capsys, "radial")
    assert code == 0
    _, rows = table(out)
    assert len(rows) == 64


@pytest.mark.asyncio
async def test_verify_two_dimensions(capsys):
    code, out = await run(capsys, "verify", "--dim", "2", "--a", "1", "--m", "0")
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


@pytest.mark.asyncio
async def test_table_header_reproduces_check(capsys):
    _, out = await run(capsys, "radial", "--state", "excited")
    header, _ = table(out)
    code, out = await run(capsys, "check", "--a", str(header["a"]), "--b", str(header["b"]),
                          "--c", str(header["c"]), "--json")
    record = json.loads(out)
    assert code == 0
    assert record["satisfied"]["ground"] == header["ground_satisfied"]
    assert record["satisfied"]["excited"] == header["excited_satisfied"]
    assert record["satisfied"]["constraint9"] == header["constraint9_satisfied"]


@pytest.mark.asyncio
async def test_solve_small_a(capsys):
    code, out = await run(capsys, "solve", "--a", "1e-5")
    assert code == 0
    record = json.loads(out)
    assert record["E0"] == pytest.approx(-2.0 * 1e-5 ** 0.5, rel=1e-8)


@pytest.mark.asyncio
async def test_radial_unwritable_output(capsys, workdir):
    code = await main.main(["radial", "--output", str(workdir / "missing" / "ground.csv")])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert '"error": "FileNotFoundError"' in captured.err
