"""Independent reference implementations used to check the library.

These deliberately take the slow, literal route (year-by-year cash
flows, explicit loops) and share no code with ``graphcost``.
"""

import math


def npv(rate, flows):
    """Net present value of end-of-year flows; ``flows[0]`` is at t=0."""
    return sum(f / (1.0 + rate) ** t for t, f in enumerate(flows))


def crf_by_npv(rate, years):
    # level payment A with sum_t A/(1+r)^t == 1 over t = 1..years
    return 1.0 / sum(1.0 / (1.0 + rate) ** t for t in range(1, years + 1))


def project_flows(price, capex, opex, capacity, years):
    return [-capex] + [(price - opex) * capacity] * years


def irr_by_npv(price, capex, opex, capacity, years, lo=0.0, hi=10.0, iters=200):
    flows = project_flows(price, capex, opex, capacity, years)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if npv(mid, flows) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def feed_by_loop(yields, k):
    """Tonnes entering stage ``k`` per tonne out of the last stage."""
    t = 1.0
    for y in reversed(yields[k:]):
        t = t / y
    return t


def lines_by_search(feed, tph, uptime, hours=8760):
    n = 0
    while n * tph * hours * uptime < feed:
        n += 1
    return n


def power_scale(cost, size, ref_size, exponent):
    return cost * math.exp(exponent * math.log(size / ref_size))
