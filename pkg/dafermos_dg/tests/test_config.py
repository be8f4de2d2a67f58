"""RunConfig resolution from defaults, config files and flags."""

import pydantic
import pytest

from dafermos_dg.config import Experiment, InitialData, RunConfig, parse_config, read_config_file
from dafermos_dg.errors import UsageError
from dafermos_dg.solver import Scheme


def test_defaults():
    config = parse_config("run")
    assert config.experiment is Experiment.RUN
    assert config.scheme is Scheme.DDG
    assert config.ic is InitialData.SINE_SHOCK
    assert (config.p, config.n_cells, config.cfl, config.t_end) == (6, 20, 0.5, 1.0)
    assert config.out_path is None


def test_flags_override_defaults():
    config = parse_config("run", {"scheme": "drkdg", "p": 3, "n_cells": 40, "cfl": None})
    assert config.scheme is Scheme.DRKDG
    assert (config.p, config.n_cells, config.cfl) == (3, 40, 0.5)


def test_converge_defaults():
    config = parse_config("converge")
    assert config.ic is InitialData.SMOOTH
    assert config.t_end == 8.0
    assert config.levels == (10, 15, 20, 25, 30)
    config = parse_config("converge", {"t_end": 2.0, "ic": "sine-shock"})
    assert (config.t_end, config.ic) == (2.0, InitialData.SINE_SHOCK)


def test_schedule():
    config = parse_config("run", {"t_end": 2.0, "outputs": 4})
    assert config.schedule() == (0.5, 1.0, 1.5, 2.0)
    config = parse_config("run", {"output_times": [0.3, 0.9]})
    assert config.schedule() == (0.3, 0.9)


def test_missing_experiment():
    with pytest.raises(UsageError, match="experiment"):
        parse_config(None)


@pytest.mark.parametrize(
    "overrides, field",
    [
        ({"cfl": -1.0}, "cfl"),
        ({"p": 0}, "p"),
        ({"p": "abc"}, "p"),
        ({"n_cells": 0}, "n_cells"),
        ({"scheme": "weno"}, "scheme"),
        ({"ic": "square"}, "ic"),
        ({"t_end": 0.0}, "t_end"),
    ],
)
def test_invalid_values_name_the_field(overrides, field):
    with pytest.raises(UsageError, match=field):
        parse_config("run", overrides)


def test_cross_field_rules():
    with pytest.raises(UsageError, match="not available"):
        parse_config("entropy", {"scheme": "drkdg"})
    with pytest.raises(UsageError, match="godunov"):
        parse_config("run", {"scheme": "godunov", "cfl": 2.0})
    with pytest.raises(UsageError, match="output_times"):
        parse_config("run", {"output_times": [0.5, 0.2]})
    with pytest.raises(UsageError, match="levels"):
        parse_config("converge", {"levels": [10]})
    with pytest.raises(UsageError):
        parse_config("explore")


def test_config_is_frozen():
    config = parse_config("run")
    with pytest.raises(pydantic.ValidationError):
        config.p = 3
    assert isinstance(config, RunConfig)


def test_config_file(tmp_path):
    path = tmp_path / "study.cfg"
    path.write_text(
        "# blow-up study\n"
        "experiment = blowup\n"
        "scheme = vanilla-dg   # uncorrected\n"
        "p-list = 2, 4\n"
        "cfl_list = 0.5,1,8\n"
        "n = 12\n"
        "t-end = 0.3\n"
    )
    assert read_config_file(path)["p_list"] == ["2", "4"]
    config = parse_config(None, {"n_cells": 16}, path)
    assert config.experiment is Experiment.BLOWUP
    assert config.scheme is Scheme.VANILLA_DG
    assert config.p_list == (2, 4)
    assert config.cfl_list == (0.5, 1.0, 8.0)
    assert config.t_end == 0.3
    assert config.n_cells == 16


def test_config_file_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("experiment = run\nresolution = 3\n")
    with pytest.raises(UsageError, match="resolution"):
        parse_config(None, {}, path)
    path.write_text("experiment run\n")
    with pytest.raises(UsageError, match="line 1"):
        parse_config(None, {}, path)
    with pytest.raises(UsageError, match="config"):
        parse_config("run", {}, tmp_path / "missing.cfg")


def test_json_round_trip():
    config = parse_config("dafermos", {"reference_cells": 500})
    assert RunConfig.model_validate_json(config.to_json()) == config
