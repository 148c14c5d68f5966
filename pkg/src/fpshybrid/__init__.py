"""Hybrid precoding with fixed phase shifters and a dynamic switch network."""

from .config import AnalogArchitecture, ChannelParams, ConfigError, SystemConfig
from .channel import ChannelRealization, array_response, generate_channel
from .digital import (DigitalCombinerSet, DigitalPrecoderTarget,
                      InfeasibleDimensionsError, bd_digital_precoder)
from .core import (AltMinState, DegenerateTargetError, GroupSolution,
                   PhaseBank, StoppingRule, SwitchUpdate, altmin,
                   assemble_analog, build_phase_bank, group_solve, init_fdd,
                   solve_switch_and_alpha, update_fdd)
from .cancellation import (Combiners, HybridSolution, ZeroPowerError,
                           bd_second_layer, build_hybrid_solution,
                           design_hybrid_combiners, effective_channel,
                           normalize_kappa)
from .evaluation import (DigitalSolution, EvaluationReport, HardwareProfile,
                         SingularCombinerError, hardware_profiles, power_total,
                         random_switch_baseline, random_switch_solve,
                         spectral_efficiency)
from .oracles import (OracleResult, brute_force_alpha_switch,
                      exhaustive_codebook_precoder)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
