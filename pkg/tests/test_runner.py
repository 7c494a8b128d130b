import importlib
import statistics
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oqs_interplay.records import QuantifierRecord, RunOutput, corr
from oqs_interplay.runner import cli
from oqs_interplay.runner.config import ConfigError, parse_config, time_grid
from oqs_interplay.runner.figures import FIGURES, figure_specs
from oqs_interplay.runner.output import csv_text, read_csv, write_csv, write_plot
from oqs_interplay.runner.run import SimulationError, run

run_module = importlib.import_module("oqs_interplay.runner.run")
from oqs_interplay.states import NS1

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_COLLISION = """\
model = collision
omega_s = 1.5
omega_r = 1
beta = 50
g_sr = 0.5
theta = 0.98 * pi / 2
tau = 0.5
n_collisions = {n}
"""


# ---------------------------------------------------------------- config


def test_parse_collision_reference_parameters():
    spec = parse_config(FIGURES["fig2_collision"])
    p = spec.parameters
    assert spec.model == "collision"
    assert p.theta == pytest.approx(0.98 * np.pi / 2, rel=1e-15)
    assert (p.omega_s, p.omega_r, p.beta, p.g_sr, p.tau, p.n_collisions) == (1.5, 1.0, 50.0, 0.5, 0.5, 100)
    assert p.initial_state == NS1
    assert spec.quadrature.n_theta == 64 and spec.quadrature.n_phi == 128


def test_theta_out_of_range_is_rejected():
    text = SMALL_COLLISION.format(n=3).replace("0.98 * pi / 2", "2.0")
    with pytest.raises(ConfigError, match="theta out of range"):
        parse_config(text)


def test_jcm_defaults():
    text = "\n".join(l for l in FIGURES["fig6_jcm"].splitlines() if not l.startswith("n_max"))
    p = parse_config(text).parameters
    assert p.n_max == 32
    assert p.t_grid[:3] == (0.0, 0.5, 1.0)
    assert len(p.t_grid) == 400


def test_section_header_stands_in_for_model():
    text = "[gad]\n" + "\n".join(FIGURES["fig5_gad"].splitlines()[1:])
    assert parse_config(text) == parse_config(FIGURES["fig5_gad"])


@pytest.mark.parametrize(
    "text,match",
    [
        ("omega_s = 1", "model"),
        ("model = boson", "model"),
        (SMALL_COLLISION.format(n=3) + "bogus = 1\n", "bogus"),
        (SMALL_COLLISION.format(n=3).replace("g_sr = 0.5\n", ""), "g_sr"),
        (SMALL_COLLISION.format(n=3).replace("beta = 50", "beta = hot"), "beta"),
        (SMALL_COLLISION.format(n="2.5"), "n_collisions"),
        (SMALL_COLLISION.format(n=3) + "tau = 1\n", "twice"),
        (SMALL_COLLISION.format(n=3) + "this line has no equals\n", "line"),
        (FIGURES["fig4_nmad"] + "t_step = 0.1\n", "mutually exclusive"),
        (FIGURES["fig6_jcm"] + "t_step = 0.1\n", "alias"),
        (FIGURES["fig5_gad"] + "quadrature = 4,8\n", "quadrature"),
        (FIGURES["fig5_gad"] + "initial_state = 1,1,1\n", "initial_state"),
        ("[gad]\nmodel = nmad\n", "conflicts"),
        (FIGURES["fig5_gad"].replace("dt = 1e-3", "dt = 1"), "dt"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_config_arithmetic_cannot_execute_code():
    with pytest.raises(ConfigError):
        parse_config(SMALL_COLLISION.format(n=3).replace("beta = 50", "beta = __import__('os').getpid()"))


def test_time_grid():
    assert time_grid("nmad", 2.0, None, 5) == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert time_grid("jcm", None, None, 3) == (0.0, 0.5, 1.0)
    assert time_grid("gad", None, 0.25, 3) == (0.0, 0.25, 0.5)
    assert time_grid("gad", None, None, 3) == (0.0, 50.0, 100.0)


def test_shipped_configs_match_builtin_figures():
    for name, spec in figure_specs().items():
        parsed = parse_config((CONFIGS / f"{name}.cfg").read_text())
        assert parsed.parameters == spec.parameters
        assert parsed.emit_plot


# ---------------------------------------------------------------- run


def test_single_collision_run():
    out = run(parse_config(SMALL_COLLISION.format(n=1)))
    assert out.series("abscissa").tolist() == [0.0, 1.0]
    assert abs(out[0].sigma) <= 1e-12
    assert out[1].sigma > 0
    for key in ("wigner_kernel", "quadrature", "log_base", "version", "model"):
        assert key in out.metadata
    assert out.metadata["log_base"] == "e"


def test_run_wraps_numeric_failures(monkeypatch):
    def boom(*_):
        raise ArithmeticError("entropy routes disagree")

    monkeypatch.setitem(run_module._ENGINES, "collision", boom)
    with pytest.raises(SimulationError, match="collision: entropy routes disagree"):
        run(parse_config(SMALL_COLLISION.format(n=1)))


# ---------------------------------------------------------------- records


def test_corr_examples():
    a = [0.1, 0.5, 0.2, 0.9]
    assert corr(a, a) == pytest.approx(1.0, abs=1e-15)
    assert corr(a, [-x for x in a]) == pytest.approx(-1.0, abs=1e-15)
    assert corr([1, 2, 3], [2, 4, 6.1]) == pytest.approx(statistics.correlation([1, 2, 3], [2, 4, 6.1]), abs=1e-14)
    assert corr([1, 2, 3], [2, 4, 6.1]) == pytest.approx(0.99990087, abs=1e-8)
    with pytest.raises(ValueError):
        corr([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        corr([1, 2], [1, 2])
    with pytest.raises(ValueError):
        corr([1, 2, 3], [1, 2])


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=40))
def test_corr_matches_statistics(pairs):
    a, b = zip(*pairs)
    if np.ptp(a) < 1e-6 or np.ptp(b) < 1e-6:
        return
    assert corr(a, b) == pytest.approx(statistics.correlation(a, b), abs=1e-9)


def test_record_validation():
    with pytest.raises(ValueError):
        QuantifierRecord(0.0, -0.1, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        QuantifierRecord(0.0, 0.1, 0.8, 0.0, 0.0)
    with pytest.raises(ValueError):
        RunOutput([QuantifierRecord(1.0, 0.1, 0.1, 0.0, 0.0), QuantifierRecord(1.0, 0.1, 0.1, 0.0, 0.0)], {})


# ---------------------------------------------------------------- output


@pytest.fixture(scope="module")
def small_run():
    return run(parse_config(SMALL_COLLISION.format(n=12)))


def test_csv_layout_and_round_trip(small_run, tmp_path):
    path = tmp_path / "run.csv"
    write_csv(small_run, path)
    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    assert body[0] == "abscissa,delta,entropy,sigma,ergotropy"
    assert len(body) == 1 + len(small_run)
    back = read_csv(path)
    for a, b in zip(small_run, back):
        assert np.allclose(a.as_tuple(), b.as_tuple(), rtol=1e-11, atol=0)
    assert back.metadata["model"] == "collision"


def test_csv_is_byte_deterministic(small_run, tmp_path):
    write_csv(run(parse_config(SMALL_COLLISION.format(n=12))), tmp_path / "a.csv")
    write_csv(small_run, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_svg_is_well_formed_and_deterministic(small_run, tmp_path):
    write_plot(small_run, tmp_path / "a.svg")
    write_plot(small_run, tmp_path / "b.svg")
    root = ET.parse(tmp_path / "a.svg").getroot()
    assert root.tag.endswith("svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


# ---------------------------------------------------------------- CLI


def _write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_cli_simulate_writes_csv_and_plot(tmp_path):
    cfg = _write(tmp_path, SMALL_COLLISION.format(n=5))
    code = cli.main(["simulate", str(cfg), "--csv", str(tmp_path / "o.csv"), "--plot", str(tmp_path / "o.svg")])
    assert code == 0
    assert len(read_csv(tmp_path / "o.csv")) == 6
    assert (tmp_path / "o.svg").stat().st_size > 0


def test_cli_simulate_to_stdout_with_quadrature_override(tmp_path, capsys):
    cfg = _write(tmp_path, SMALL_COLLISION.format(n=2))
    assert cli.main(["simulate", str(cfg), "--quadrature", "16,32"]) == 0
    text = capsys.readouterr().out
    assert "# quadrature = 16,32" in text
    assert text.rstrip().count("\n") >= 3


def test_cli_config_error_exit_code(tmp_path):
    cfg = _write(tmp_path, SMALL_COLLISION.format(n=2).replace("0.98 * pi / 2", "2.0"))
    assert cli.main(["simulate", str(cfg)]) == 1
    assert cli.main(["simulate", str(tmp_path / "missing.cfg")]) == 1


def test_cli_numeric_error_exit_code(tmp_path, monkeypatch):
    def boom(*_):
        raise FloatingPointError("overflow")

    monkeypatch.setitem(run_module._ENGINES, "collision", boom)
    cfg = _write(tmp_path, SMALL_COLLISION.format(n=2))
    assert cli.main(["simulate", str(cfg)]) == 2


def test_cli_rejects_bad_arguments():
    with pytest.raises(SystemExit):
        cli.main(["launch"])


def test_csv_with_a_single_record(tmp_path):
    out = run(parse_config(FIGURES["fig5_gad"].replace("n_samples = 400", "n_samples = 1")))
    write_csv(out, tmp_path / "one.csv")
    lines = (tmp_path / "one.csv").read_text().splitlines()
    assert sum(not l.startswith("#") for l in lines) == 2
    assert sum(l.startswith("#") for l in lines) == len(out.metadata)
    with pytest.raises(ValueError):
        write_plot(out, tmp_path / "one.svg")


def test_plot_of_constant_series(tmp_path):
    text = FIGURES["fig6_jcm"].replace("g = 0.5", "g = 0").replace("n_max = 32", "n_max = 6").replace("n_samples = 400", "n_samples = 5")
    out = run(parse_config(text))
    write_plot(out, tmp_path / "flat.svg")
    ET.parse(tmp_path / "flat.svg")
