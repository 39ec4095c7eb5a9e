"""Scenario configs, the scenario runner, property suites and the command line."""
from .config import ConfigError, ScenarioConfig, echo_config, load_config, parse_config
from .scenarios import SCENARIOS, ScenarioResult, load_scenario, run_scenario
from .suites import SuiteResult, verify_all

__all__ = ["ConfigError", "SCENARIOS", "ScenarioConfig", "ScenarioResult", "SuiteResult", "echo_config",
           "load_config", "load_scenario", "parse_config", "run_scenario", "verify_all"]
