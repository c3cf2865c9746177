"""Multi-resource cloud pricing: demand, pricing plans, fairness and barrier optimization.

Instances and horizons are plain dicts in the same layout as the JSON files used by the
command-line tool.
"""

import json

from . import _core
from ._core import (
    InfeasibleError,
    InputError,
    beta_fairness,
    beta_lambda_fairness,
    kmeans,
    net_utility,
    optimal_demand,
    verify,
)

__all__ = [
    "InfeasibleError",
    "InputError",
    "beta_fairness",
    "beta_lambda_fairness",
    "bundled_price",
    "concavity_weight_bound",
    "evaluate",
    "kmeans",
    "net_utility",
    "optimal_demand",
    "optimize",
    "reference_instance",
    "schedule",
    "sweep",
    "verify",
]


def reference_instance(cpu=6.0, mem=6.0, gamma=1.0):
    """The three-type, two-resource market used throughout the experiments."""
    return json.loads(_core.reference_instance_json(cpu, mem, gamma))


def optimize(instance, plan="resource", nu=0.0, beta=2.0, tol=1e-6):
    """Barrier-method optimum of nu * revenue + beta-fairness over the plan's prices."""
    return json.loads(_core.optimize_json(json.dumps(instance), plan, nu, beta, tol))


def evaluate(instance, plan, prices):
    return json.loads(_core.evaluate_json(json.dumps(instance), plan, list(prices)))


def bundled_price(instance):
    return _core.bundled_price(json.dumps(instance))


def concavity_weight_bound(instance, beta):
    return _core.concavity_weight_bound(json.dumps(instance), beta)


def sweep(instance, parameter, start, stop, steps=2, nus=(0.0,), beta=2.0,
          plans=("bundled", "resource", "differentiated")):
    """CSV text with one row per (grid value, nu, plan)."""
    return _core.sweep_csv(json.dumps(instance), parameter, start, stop, steps, list(nus), beta,
                           list(plans))


def schedule(horizon, plan="resource", beta=2.0, gamma=1.0, tol=1e-6):
    return json.loads(_core.schedule_json(json.dumps(horizon), plan, beta, gamma, tol))
