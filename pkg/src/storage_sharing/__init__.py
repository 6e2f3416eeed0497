"""Peer-to-peer sharing of household storage under ToU pricing and net metering.

Cost functions, the closed-form core allocation, P2P settlement and
verification tooling for the cooperative storage-sharing game.
"""
from .costs import (
    CostBreakdown,
    coalition_cost,
    cost_net_metering,
    cost_no_storage,
    cost_storage_no_capital,
    cost_storage_with_capital,
)
from .game import (
    Allocation,
    CoreReport,
    PropertyReport,
    Regime,
    allocate,
    check_core,
    check_subadditivity,
    individual_savings,
)
from .model import CoalitionView, CommunityDay, HouseholdDay, aggregate
from .settlement import TradeLedger, TradePosition, savings_consistency, settle_day
from .tariff import CASE_STUDY_TARIFF, Tariff, ValidationResult, Violation, validate_tariff

__version__ = "0.1.0"
