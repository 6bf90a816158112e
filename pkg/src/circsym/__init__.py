"""Optimal tests of circular reflective symmetry against k-sine-skewed
alternatives, with exact samplers, parametric bootstrap and Monte Carlo
power studies."""

__version__ = "0.1.0"

from .distributions import BaseFamily, FisherBlock, SineSkewedModel, fisher_block
from .estimators import circular_summary, mean_direction, mean_resultant_length
from .sampling import sample_base, sample_sine_skewed
from .symtests import TestReport, asymptotic_local_power, run_test
from .bootstrap import BootstrapConfig, bootstrap_test
from .powerstudy import StudyConfig, run_power_study

__all__ = [
    "BaseFamily",
    "BootstrapConfig",
    "FisherBlock",
    "SineSkewedModel",
    "StudyConfig",
    "TestReport",
    "asymptotic_local_power",
    "bootstrap_test",
    "circular_summary",
    "fisher_block",
    "mean_direction",
    "mean_resultant_length",
    "run_power_study",
    "run_test",
    "sample_base",
    "sample_sine_skewed",
]
