#!/usr/bin/env python
#  -*- coding: utf-8 -*-
"""Small helpers shared by the roundlab modules and the command line"""

import os
import hashlib
from multiprocessing import Pool

from .exceptions import DomainError

# Environment variable used when the number of jobs is not given explicitly
JOBS_ENV_VAR = 'ROUNDNESS_LAB_JOBS'


def resolve_jobs(jobs=None):
    """Returns the number of worker processes to use.

    Parameters
    ----------
    jobs : int, optional
        Explicit number of jobs. If None, the ROUNDNESS_LAB_JOBS environment variable is used, and 1 if it is not
        set either.

    Returns
    -------
    int
    """
    if jobs is None:
        env_value = os.environ.get(JOBS_ENV_VAR, '').strip()
        if not env_value:
            return 1
        try:
            jobs = int(env_value)
        except ValueError:
            raise DomainError('%s must be an integer, got "%s"' % (JOBS_ENV_VAR, env_value))
    jobs = int(jobs)
    if jobs < 1:
        raise DomainError('Number of jobs must be at least 1, got %d' % jobs)
    return jobs


def pool_map(func, tasks, jobs=1):
    """Maps func over tasks, in worker processes when jobs > 1.

    Results are returned in the order of tasks whatever the completion order. func must be a module level function
    so that it can be pickled.
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        # In process, easier to debug
        return [func(task) for task in tasks]
    with Pool(processes=min(jobs, len(tasks))) as pool:
        return pool.map(func, tasks)


def split_budget(budget, nb_workers):
    """Splits an iteration budget between workers, the remainder going to the first ones"""
    base, remainder = divmod(int(budget), int(nb_workers))
    return [base + (1 if i < remainder else 0) for i in range(nb_workers)]


def sha256_file(filename):
    """Returns the hex sha256 digest of a file"""
    digest = hashlib.sha256()
    with open(filename, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()
