import pytest

from henon_atlas.errors import SpecFileError
from henon_atlas.lyapunov import LyapunovConfig
from henon_atlas.manifold import TraceConfig
from henon_atlas.presets import PRESETS
from henon_atlas.specfile import parse_spec, read_spec


def test_preset_defaults():
    s = parse_spec("map.preset = lorenz-z2\n")
    m = s.henon_map()
    assert (m.A, m.B, m.C) == (-1.1, 0.7, 0.85)
    assert m.nonlinearity == PRESETS["lorenz-z2"].nonlinearity
    assert s.rect() == pytest.approx((-1.2, -1.0, 0.75, 0.95))
    assert s.resolution() == (64, 64)
    assert s.lyapunov_config() == LyapunovConfig()
    assert s.trace_config() == TraceConfig()


def test_full_spec():
    text = """
    # lorenz window
    map.preset = lorenz-z2
    params.A = -1.05   # override
    grid.A_min = -1.2
    grid.A_max = -1.0
    grid.C_min = 0.7
    grid.C_max = 0.9
    grid.W = 8
    grid.H = 4
    grid.overlay = false
    lyapunov.n_measure = 5000
    trace.max_points = 100
    output.figures = no
    """
    s = parse_spec(text)
    assert s.point_AC() == (-1.05, 0.85)
    assert s.rect() == (-1.2, -1.0, 0.7, 0.9)
    assert s.resolution() == (8, 4)
    assert s.grid["overlay"] is False
    assert s.lyapunov_config().n_measure == 5000
    assert s.trace_config().max_points == 100
    assert s.output["figures"] is False


def test_terms_replace_preset_nonlinearity():
    s = parse_spec("map.B = 0.5\nf.0.2 = -1\nmap.f.1.1 = 0.25\nparams.A = 0.1\n")
    m = s.henon_map()
    assert m.B == 0.5
    assert m.nonlinearity.terms == {(0, 2): -1.0, (1, 1): 0.25}
    assert (m.A, m.C) == (0.1, 0.0)


def test_named_point():
    s = parse_spec("map.preset = lorenz-z2\nmap.point = fig4b\n")
    assert s.point_AC() == PRESETS["lorenz-z2"].points["fig4b"]


def test_unknown_point():
    s = parse_spec("map.preset = lorenz-z2\nmap.point = nowhere\n")
    with pytest.raises(SpecFileError, match="no point"):
        s.point_AC()


@pytest.mark.parametrize("text, line", [
    ("map.preset = lorenz-z2\ngrid.depth = 3\n", 2),
    ("\n\nfoo = 1\n", 3),
    ("map.B = 0.5\nlyapunov.n_steps = 10\n", 2),
    ("map.preset = nope\n", 1),
    ("map.B = 0.5\nparams.A = abc\n", 2),
    ("map.B = 0.5\ngrid.W = 2.5\n", 2),
    ("map.B = 0.5\njust words\n", 2),
    ("map.B =\n", 1),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(SpecFileError) as info:
        parse_spec(text, "run.spec")
    assert info.value.line == line
    assert f"run.spec:{line}" in str(info.value)


def test_invalid_config_value():
    with pytest.raises(SpecFileError):
        parse_spec("map.B = 0.5\nlyapunov.n_measure = -1\n")


def test_missing_map():
    with pytest.raises(SpecFileError, match="no map"):
        parse_spec("params.A = 1\n").resolve_B()


def test_read_spec(tmp_path):
    p = tmp_path / "a.spec"
    p.write_text("map.preset = henon2d\n")
    assert read_spec(str(p)).resolve_B() == 0.0
    with pytest.raises(SpecFileError, match="cannot read"):
        read_spec(str(tmp_path / "missing.spec"))
