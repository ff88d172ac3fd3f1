from concurrent.futures import ThreadPoolExecutor

import pytest

import bellprocess.process.sampler as sampler_module
from bellprocess.config import get_config, reset_config, set_config
from bellprocess.process import SamplerConfig, sample_ensemble
from cli.models import OutputSettings


def test_overrides_are_merged_and_reset():
    set_config({"node_eps": 1e-9})
    assert get_config()["node_eps"] == 1e-9
    assert SamplerConfig().node_eps == 1e-9
    reset_config()
    assert get_config()["node_eps"] == 1e-12


@pytest.mark.parametrize("override", [{"no_such_key": 1}, {"node_eps": 0.0}, {"jobs": 0}, {"hbar": -1.0}])
def test_bad_overrides_leave_settings_untouched(override):
    before = get_config()
    with pytest.raises(ValueError, match="invalid bellprocess settings"):
        set_config(override)
    assert get_config() == before


def test_results_dir_feeds_the_output_directory():
    set_config({"results_dir": "/tmp/elsewhere"})
    assert OutputSettings().directory == "/tmp/elsewhere"
    assert OutputSettings(directory="here").directory == "here"


def test_configured_jobs_size_the_worker_pool(rabi, monkeypatch):
    seen = []

    class RecordingPool(ThreadPoolExecutor):
        def __init__(self, max_workers=None, **kwargs):
            seen.append(max_workers)
            super().__init__(max_workers=max_workers, **kwargs)

    monkeypatch.setattr(sampler_module, "ThreadPoolExecutor", RecordingPool)
    set_config({"jobs": 2})
    sample_ensemble(rabi, 4, SamplerConfig(seed=1), horizon=0.5)
    sample_ensemble(rabi, 4, SamplerConfig(seed=1), horizon=0.5, jobs=3)
    assert seen == [2, 3]
