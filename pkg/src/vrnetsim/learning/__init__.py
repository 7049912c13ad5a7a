"""Per-SBS learning agents and the period loop."""

from vrnetsim.learning.actions import Allocation, enumerate_actions, owner_table
from vrnetsim.learning.esn import EsnAgent, build_input, cyclic_reservoir
from vrnetsim.learning.loop import PeriodMetrics, convergence_iteration, run_period
from vrnetsim.learning.policy import EpsilonSchedule, LearningRate, select_action
from vrnetsim.learning.qlearning import QAgent

__all__ = [
    "Allocation", "EpsilonSchedule", "EsnAgent", "LearningRate", "PeriodMetrics", "QAgent",
    "build_input", "convergence_iteration", "cyclic_reservoir", "enumerate_actions",
    "owner_table", "run_period", "select_action",
]
