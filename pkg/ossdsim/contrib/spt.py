# -*- coding: utf-8 -*-
"""
Smallest-effort-first queue ordering: the Dynamic policy starts the
project with the least estimated effort first. FIFO runs keep arrival order.

  ossd-run run --patch=ossdsim.contrib.spt
"""

from functools import wraps

from ossdsim.tasks import scheduling


__all__ = [
    'patch',
    'effort_score_wrapper',
]


def effort_score_wrapper(priority_score):
    @wraps(priority_score)
    def _priority_score(p, t_days, developers, policy):
        if not any(policy.weights()):
            return priority_score(p, t_days, developers, policy)
        # ties keep arrival order
        return -p.estimated_effort

    return _priority_score


def patch(task_name):
    scheduling.priority_score = effort_score_wrapper(scheduling.priority_score)
