# tests/test_config.py
"""
Unit tests for configuration management
"""
import math
import os
from pathlib import Path
from unittest.mock import patch

import pytest

from src.config.experiment_config import CASE_PRESETS, ExperimentConfig
from src.models.data_models import ControlKnob, EvolutionMode
from src.utils.error_handler import ConfigurationError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class TestExperimentConfig:
    """Test cases for ExperimentConfig class"""

    def test_default_config_is_case_a(self):
        """Test creating config with default values"""
        config = ExperimentConfig()
        assert config.case == "A"
        assert config.omega_z == -2.0
        assert config.omega_x == 0.09
        assert config.control == "j2"
        assert config.total_time == 800.0
        assert config.steps == 8
        assert config.evolution == "exact"
        assert config == ExperimentConfig.for_case("A")

    def test_case_b_preset(self):
        config = ExperimentConfig.for_case("B")
        assert (config.omega_z, config.omega_x, config.control) == (0.0, 0.12, "j3")
        assert config.sharpness == CASE_PRESETS["B"]["sharpness"]
        assert config.t2_eff == 0.6

    def test_custom_starts_from_case_a(self):
        config = ExperimentConfig.for_case("custom")
        assert config.case == "custom"
        assert config.omega_z == -2.0

    def test_unknown_case(self):
        with pytest.raises(ConfigurationError, match="unknown case 'C'"):
            ExperimentConfig.for_case("C")

    def test_builders(self):
        config = ExperimentConfig.for_case("A")
        assert config.schedule().tau == pytest.approx(100.0)
        assert config.schedule().control == ControlKnob.J2
        assert config.decoherence_params().step_physical_duration == pytest.approx(0.146 / 8)
        assert config.nmr_system().coupling(2, 1) == 100.0
        assert config.evolution_mode() == EvolutionMode.EXACT
        assert config.hamiltonian_params().j2 == 0.0

    def test_to_dict_drops_infinite_t1(self):
        data = ExperimentConfig().to_dict()
        assert data["t1"] is None
        assert data["case"] == "A"


class TestOverrides:
    """Test cases for layered overrides"""

    def test_run_settings_can_change(self):
        config = ExperimentConfig.for_case("B").with_overrides(steps=32, total_time=40.0)
        assert config.steps == 32
        assert config.schedule().tau == pytest.approx(1.25)

    def test_named_case_fixes_hamiltonian(self):
        with pytest.raises(ConfigurationError, match="case A fixes j3; use case 'custom'"):
            ExperimentConfig.for_case("A").with_overrides(j3=1.0)

    def test_unchanged_protected_value_allowed(self):
        config = ExperimentConfig.for_case("A").with_overrides(omega_z=-2.0)
        assert config.omega_z == -2.0

    def test_custom_case_is_free(self):
        config = ExperimentConfig.for_case("custom").with_overrides(j3=1.0, control="j3")
        assert config.j3 == 1.0

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError, match="unknown configuration keys: bogus"):
            ExperimentConfig().with_overrides(bogus=1)

    def test_disabled_decoherence(self):
        assert ExperimentConfig().with_overrides(decoherence_enabled=False).decoherence_params() is None


class TestConfigFiles:
    """Test cases for flat section.key = value files"""

    def test_case_b_file(self):
        config = ExperimentConfig.from_file(str(CONFIG_DIR / "case_b.conf"))
        assert config.case == "B"
        assert config.total_time == 20.0
        assert config.sharpness == 5.0
        assert config.j23 == 75.0

    def test_custom_file(self):
        config = ExperimentConfig.from_file(str(CONFIG_DIR / "custom_mixed.conf"))
        assert config.case == "custom"
        assert config.control == "j3"
        assert config.j2 == 0.3
        assert config.evolution == "trotter"
        assert config.substeps == 4
        assert config.decoherence_params() is None
        assert config.validate()

    def test_file_layered_on_base(self, tmp_path):
        path = tmp_path / "short.conf"
        path.write_text("schedule.M = 16\n")
        config = ExperimentConfig.from_file(str(path), ExperimentConfig.for_case("B"))
        assert config.case == "B"
        assert config.steps == 16

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("schedule.M = 8\nschedule.speed = 3\n")
        with pytest.raises(ConfigurationError, match="invalid config file"):
            ExperimentConfig.from_file(str(path))

    def test_bad_value_rejected(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("schedule.M = 0\n")
        with pytest.raises(ConfigurationError, match="invalid config file"):
            ExperimentConfig.from_file(str(path))

    def test_named_case_file_cannot_move_endpoints(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("experiment.case = A\nschedule.c_end = 3.0\n")
        with pytest.raises(ConfigurationError, match="case A fixes c_end"):
            ExperimentConfig.from_file(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="config file not found"):
            ExperimentConfig.from_file(str(tmp_path / "nope.conf"))


class TestEnvironment:
    """Test cases for SPINSIM_* variables"""

    @patch.dict(os.environ, {
        'SPINSIM_CASE': 'B',
        'SPINSIM_M': '16',
        'SPINSIM_T': '40',
        'SPINSIM_DECOHERENCE': 'false',
        'SPINSIM_EVOLUTION': 'trotter',
    })
    def test_config_from_env(self):
        """Test loading configuration from environment variables"""
        config = ExperimentConfig.from_env()
        assert config.case == "B"
        assert config.steps == 16
        assert config.total_time == 40.0
        assert config.decoherence_enabled is False
        assert config.evolution == "trotter"

    @patch.dict(os.environ, {'SPINSIM_M': 'many'})
    def test_invalid_env_value(self):
        with pytest.raises(ConfigurationError, match="invalid value for steps"):
            ExperimentConfig.from_env()

    @patch.dict(os.environ, {'SPINSIM_WORKERS': '2'})
    def test_env_keeps_base_case(self):
        config = ExperimentConfig.from_env(ExperimentConfig.for_case("B"))
        assert config.case == "B"
        assert config.workers == 2


class TestValidation:
    """Test cases for validate"""

    def test_valid_presets(self):
        assert ExperimentConfig.for_case("A").validate()
        assert ExperimentConfig.for_case("B").validate()

    def test_invalid_evolution(self):
        assert not ExperimentConfig().with_overrides(evolution="magic").validate()

    def test_invalid_steps(self):
        assert not ExperimentConfig().with_overrides(steps=0).validate()

    def test_t2_limited_by_t1(self):
        assert not ExperimentConfig().with_overrides(t1=0.05).validate()

    def test_invalid_ghz_threshold(self):
        assert not ExperimentConfig().with_overrides(ghz_threshold=1.5).validate()

    def test_infinite_t1_default(self):
        assert math.isinf(ExperimentConfig().t1)
