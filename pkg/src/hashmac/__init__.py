"""Desk-scale laboratory for coset codes on multiple-access channels."""

from .channel import Dmc, deterministic_dmc, sample_channel
from .codec import (AllCosetsEmptyError, CosetSpec, EmptyCosetError,
                    EncodeTarget, build_T_subset, min_div_decode, min_div_encode)
from .empirical import (EmpiricalType, cond_empirical, empirical, enumerate_types,
                        is_cond_typical, is_typical, joint_empirical, seq_cond_entropy,
                        seq_entropy, seq_mutual_multi, type_class_size)
from .ensembles import (BinLabel, CollisionEstimate, EnsembleSpec, HashParams,
                        collision_prob, crp_bound, crp_test, estimate_hash_params,
                        multi_crp_bound, multi_params, occupancy_factor,
                        product_params, sample, saturation_bound, saturation_test)
from .gf import (FieldSpec, LinearLabel, apply_label, enumerate_coset,
                 stack_labels)
from .prob import (CondPmf, Pmf, cond_divergence, cond_entropy, cond_mutual_info,
                   divergence, entropy, mutual_info)
from .regions import (JointLaw, RatePoint, RateSplit, eps_feasible, in_region_han,
                      in_region_private, in_region_sw, in_region_ts, joint_han,
                      joint_private, joint_sw, joint_ts, mutual_information,
                      rate_split)
from .scenarios import (CodeInstance, InfeasibleRateError, SimulationResult,
                        TrialResult, build_private_code, build_superposition_code,
                        decode_private, decode_superposition, encode_private,
                        encode_superposition, reduce_common_to_private,
                        saturation_audit, search_code, simulate_error)
from .slack import (cond_entropy_slack, cond_typical_size_slack, entropy_slack,
                    feasibility_slack, joint_typicality_radius, type_count_penalty,
                    typical_size_slack)

__version__ = "0.1.0"
