import pytest

from evochain.config import BUILTIN, ConfigError, builtin, load_config, parse_config

MINIMAL = """\
[chain]
family = M1

[function h]
pieces = 1/(s+1)

[function f]
pieces = 0

[function g]
pieces = 0
"""


def test_builtins_parse():
    for name in BUILTIN:
        cfg = builtin(name)
        assert cfg.chain().family in ("M1", "M2", "M3")
    assert builtin("example2").threshold == 10
    assert builtin("example3").mode == "2d"


def test_defaults_and_overrides():
    cfg = parse_config(MINIMAL)
    assert (cfg.resolution, cfg.tol_zero, cfg.tol_bisect, cfg.mode) == (4096, 1e-9, 1e-6, "1d")
    cfg2 = cfg.with_overrides(resolution=128, tol_zero=None)
    assert cfg2.resolution == 128 and cfg2.tol_zero == 1e-9


def test_variable_defaults_follow_function_name():
    chain = builtin("example3").chain()
    assert chain.functions["eta"].variable == "t"
    assert chain.functions["phi1"].variable == "s"


def test_perturbation_line():
    cfg = parse_config(MINIMAL.replace("family = M1", "family = M1\nperturb = 0 2 1.5"))
    assert cfg.perturbation == (0, 2, 1.5)


@pytest.mark.parametrize("text", [
    "no sections",
    MINIMAL.replace("M1", "M7"),
    MINIMAL.replace("[function g]\npieces = 0\n", ""),
    MINIMAL + "\n[function phi]\npieces = 1\n",
    MINIMAL.replace("pieces = 0", "pieces = 1/(", 1),
    MINIMAL.replace("pieces = 1/(s+1)", "pieces = x + 1"),
    MINIMAL + "\n[run]\nresolution = many\n",
    MINIMAL + "\n[run]\ncolour = blue\n",
    MINIMAL + "\n[run]\nmode = 3d\n",
    MINIMAL + "\n[other]\nx = 1\n",
    MINIMAL.replace("M1", "M2"),
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_from_disk(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text(MINIMAL, encoding="utf-8")
    assert load_config(path).family == "M1"
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")
