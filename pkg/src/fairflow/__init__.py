"""Fair probabilistic committee voting with exact network flows."""

from fairflow.axioms import (
    AxiomVerdict,
    check_gfs,
    check_gfs_oracle,
    check_grp,
    check_grp_oracle,
    check_pjr,
    check_strong_ufs,
    grp_rhs,
    utilitarian_welfare,
)
from fairflow.bbw import (
    PaymentFunction,
    bbw_lottery,
    complete_to_max_flow,
    flow_from_payments,
    mes,
    verify_affordability,
)
from fairflow.core import (
    FractionalCommittee,
    ImpartialCulture,
    Instance,
    Lottery,
    PartyList,
    Resampling,
    generate_instance,
    lottery_marginals,
    utility,
    utility_profile,
)
from fairflow.flownet import (
    EntitlementNetwork,
    Flow,
    committee_of_flow,
    max_flow,
    min_cost_max_flow,
    min_cut_value_oracle,
    network_representation,
    residual,
    restrict,
)
from fairflow.gcut import build_dummy_network, excludable_utility, gcut, sample_grp_committee
from fairflow.lottery import decompose, sample
from fairflow.rut import rebalanced_max_flow, rut, run_rut

__version__ = "0.1.0"

__all__ = [
    "AxiomVerdict",
    "EntitlementNetwork",
    "Flow",
    "FractionalCommittee",
    "ImpartialCulture",
    "Instance",
    "Lottery",
    "PartyList",
    "PaymentFunction",
    "Resampling",
    "bbw_lottery",
    "build_dummy_network",
    "check_gfs",
    "check_gfs_oracle",
    "check_grp",
    "check_grp_oracle",
    "check_pjr",
    "check_strong_ufs",
    "committee_of_flow",
    "complete_to_max_flow",
    "decompose",
    "excludable_utility",
    "flow_from_payments",
    "gcut",
    "generate_instance",
    "grp_rhs",
    "lottery_marginals",
    "max_flow",
    "mes",
    "min_cost_max_flow",
    "min_cut_value_oracle",
    "network_representation",
    "rebalanced_max_flow",
    "residual",
    "restrict",
    "run_rut",
    "rut",
    "sample",
    "sample_grp_committee",
    "utilitarian_welfare",
    "utility",
    "utility_profile",
    "verify_affordability",
]
