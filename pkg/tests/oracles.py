"""Independent reference implementations used as test oracles.

Nothing here imports the package's algorithms: closed forms come straight
from scipy.special, and relation algebra is brute force over small sets.
"""

from __future__ import annotations

import itertools
import math

from scipy.special import expit, ndtr


def logit_p(v: float, s: float = 1.0) -> float:
    return float(expit(v / s))


def probit_p(v: float, sigma: float = 1.0) -> float:
    return float(ndtr(v / sigma))


def dkw(n: int, alpha: float = 1e-3) -> float:
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def logit_rt_cdf_chosen(t, v: float, s: float = 1.0, kappa: float = 1.0):
    """F(x,y)(t) for a logit model with v = u(x)-u(y) and r(w) = kappa/w."""
    w = kappa / t
    return float(expit((v - w) / s) / expit(v / s))


def closure(edges: set) -> set:
    """Warshall closure over explicit vertex set."""
    nodes = {a for e in edges for a in e}
    reach = set(edges)
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if (i, k) in reach and (k, j) in reach:
                    reach.add((i, j))
    return reach


def asym(edges: set) -> set:
    return {(a, b) for a, b in edges if (b, a) not in edges}


def all_simple_cycles(edges: set, nodes) -> list[tuple]:
    out = []
    nodes = sorted(nodes)
    for k in range(1, len(nodes) + 1):
        for perm in itertools.permutations(nodes, k):
            if perm[0] != min(perm):
                continue
            cyc = perm + (perm[0],)
            if all((cyc[i], cyc[i + 1]) in edges for i in range(k)):
                out.append(cyc)
    return out


def strict_cycle_exists(weak: set, strict: set) -> bool:
    """Enumerate simple cycles and look for one using a strict or asymmetric edge."""
    hard = set(strict) | asym(weak)
    nodes = {a for e in weak for a in e}
    for cyc in all_simple_cycles(weak, nodes):
        if any((cyc[i], cyc[i + 1]) in hard for i in range(len(cyc) - 1)):
            return True
    return False
