# -*- coding: utf-8 -*-
"""
Earliest-deadline-first queue ordering. Replaces the weighted priority
score of the Dynamic policy with one that ranks projects only by how soon
their deadline falls. FIFO runs are left alone. Use it with --patch:

  ossd-run run --patch=ossdsim.contrib.edd
"""

from functools import wraps

from ossdsim.tasks import scheduling


__all__ = [
    'patch',
    'deadline_score_wrapper',
]


def deadline_score_wrapper(priority_score):
    @wraps(priority_score)
    def _priority_score(p, t_days, developers, policy):
        if not any(policy.weights()):
            return priority_score(p, t_days, developers, policy)
        # later deadline, lower score
        return -p.deadline_day

    return _priority_score


def patch(task_name):
    scheduling.priority_score = deadline_score_wrapper(scheduling.priority_score)
