#!/usr/bin/env python3
"""Independent reference values for the unit tests.

Everything here is recomputed from the model definitions with exact
fractions (or scipy quadrature), without touching the C++ library. The test
suite freezes the printed values.
"""
import json
import math
from fractions import Fraction as F

from scipy import integrate, stats


def theta(c):
    c = F(c)
    return (1 + 1 / c) ** math.floor(c) - 1


def queue_step(q, coded, u1, u2, arrivals):
    return (q[0] - coded - u1 + arrivals[0], q[1] - coded - u2 + arrivals[1])


def slot_cost(c, q, coded, u1, u2):
    after = queue_step(q, coded, u1, u2, (0, 0))
    return c * (coded + u1 + u2), after[0] + after[1]


def two_sided_pd(c, a1, a2, slots):
    th, c = theta(c), F(c)
    x, active, primal_z, dual, traj = [], [], F(0), 0, []
    for t in range(1, slots + 1):
        n1 = a1[t - 1] if t <= len(a1) else 0
        n2 = a2[t - 1] if t <= len(a2) else 0
        for _ in range(n1):
            x.append(F(0))
            active.append(len(x) - 1)
        for _ in range(n2):
            if active:
                active.pop()
        for i in active:
            if x[i] < 1:
                primal_z += 1 - x[i]
                x[i] = x[i] * (1 + 1 / c) + 1 / (th * c)
                dual += 1
                traj.append((t, i + 1, x[i]))
    return c * sum(x) + primal_z, dual, traj, x


def one_sided_pd(c, n1, q2_slots, slots):
    th, c = theta(c), F(c)
    x = [F(0)] * n1
    primal_z, dual, totals = F(0), 0, []
    for t in range(1, slots + 1):
        n2 = sum(1 for s in q2_slots if s <= t)
        touched = False
        for i in range(n2, n1):
            if x[i] < 1:
                primal_z += 1 - x[i]
                x[i] = x[i] * (1 + 1 / c) + 1 / (th * c)
                touched = True
        if touched:
            dual += n1 - n2
        totals.append(sum(x))
    return c * sum(x) + primal_z, dual, totals


def crossing_slots(totals, u):
    out, shift = [], 0
    for t, tot in enumerate(totals, start=1):
        while u + shift < tot:
            out.append(t)
            shift += 1
    return out


def one_sided_opt(c, n1, q2_slots, horizon):
    end = horizon + math.floor(c) + 1
    costs = []
    for x in range(n1 + 1):
        hold = sum(max(n1 - sum(1 for s in q2_slots if s <= t) - x, 0) for t in range(1, end + 1))
        costs.append(F(c) * x + hold)
    best = min(costs)
    return best, costs.index(best), costs


def ski_threshold_costs(c, last_day):
    """Threshold policy on one Q1 packet at slot 1 and one Q2 packet at last_day."""
    end = last_day + math.floor(c) + 1
    out = []
    for th1 in range(0, math.ceil(c) + 1):
        q1 = q2 = 0
        total = 0
        for t in range(1, end + 1):
            q1 += 1 if t == 1 else 0
            q2 += 1 if t == last_day else 0
            coded = min(q1, q2)
            q1 -= coded
            q2 -= coded
            u1 = q1 if q1 > th1 else 0
            u2 = q2
            q1 -= u1
            q2 -= u2
            total += c * (coded + u1 + u2) + q1 + q2
        out.append(total - c)
    return out


def truncated_mean(p, s2):
    s = math.sqrt(s2)
    f = lambda v: min(max(v, 0.0), 1.0) * stats.norm.pdf(v, p, s)
    val, _ = integrate.quad(f, p - 12 * s, p + 12 * s, points=[0.0, 1.0], limit=200)
    return val


def spread(a):
    out, backlog = [], 0
    for v in a:
        backlog += v
        now = 1 if backlog else 0
        out.append(now)
        backlog -= now
    return out


def route(qw, owner_q1, a1, a2):
    same, other = (a1, a2) if owner_q1 else (a2, a1)
    waiting = qw + same
    coded = min(waiting, other)
    if other > waiting:
        return coded, other - waiting, not owner_q1, True
    return coded, waiting - coded, owner_q1, False


def line_two_relays(c, th_relay1, th_relay2, slots):
    """Two relays; one packet injected at each end in slot 1; one-slot hops."""
    ths = [th_relay1, th_relay2]
    q = [[0, 0], [0, 0]]
    inbound = [[0, 0], [0, 0]]
    cost = [0, 0]
    coded_total = 0
    right_sink, left_sink = [], []
    for t in range(1, slots + 1):
        nxt = [[0, 0], [0, 0]]
        for k in range(2):
            a1 = (1 if t == 1 else 0) if k == 0 else inbound[k][0]
            a2 = (1 if t == 1 else 0) if k == 1 else inbound[k][1]
            q[k][0] += a1
            q[k][1] += a2
            coded = 1 if q[k][0] and q[k][1] else 0
            u1 = u2 = 0
            if not coded:
                if q[k][0] > ths[k][0]:
                    u1 = 1
                elif q[k][1] > ths[k][1]:
                    u2 = 1
            q[k][0] -= coded + u1
            q[k][1] -= coded + u2
            cost[k] += c * (coded + u1 + u2) + q[k][0] + q[k][1]
            coded_total += coded
            right, left = coded + u1, coded + u2
            if k == 1:
                right_sink += [t] * right
            else:
                nxt[1][0] += right
            if k == 0:
                left_sink += [t] * left
            else:
                nxt[0][1] += left
        inbound = nxt
    return cost, coded_total, right_sink, left_sink


def main():
    out = {}
    out["queue_step_(2,7)_D2coded_A(1,1)"] = queue_step((2, 7), 2, 0, 0, (1, 1))
    out["slot_cost_C5_(5,3)_3coded_1u1"] = slot_cost(5, (5, 3), 3, 1, 0)
    out["slot_cost_C2_(1,1)_1coded"] = slot_cost(2, (1, 1), 1, 0, 0)
    out["effective_cost"] = [2 * 4 - 6, 2 * 4 - 9]
    out["theta"] = {str(c): str(theta(c)) for c in (F(3, 2), 2, 10)}
    out["bound_C2"] = str(1 + 1 / theta(2))
    out["bound_C10"] = float(1 + 1 / theta(10))
    primal, dual, traj, x = two_sided_pd(2, [1, 0, 1], [], 8)
    out["slots_1_3_C2"] = {"primal": str(primal), "dual": dual, "ratio": str(primal / dual),
                       "trajectory": [(t, i, str(v)) for t, i, v in traj]}
    p, d, totals = one_sided_pd(2, 1, [1], 4)
    out["one_sided_N1_C2_q2_slot1"] = [str(p), d]
    p, d, totals = one_sided_pd(2, 1, [], 4)
    out["one_sided_N1_C2_totals"] = [str(v) for v in totals]
    out["one_sided_N1_C2_cross_u0.3"] = crossing_slots(totals, F(3, 10))
    out["one_sided_N1_C2_cross_u0.7"] = crossing_slots(totals, F(7, 10))
    _, _, traj, _ = two_sided_pd(2, [1, 0, 1], [], 8)
    totals2 = []
    by_slot = {}
    for t, i, v in traj:
        by_slot.setdefault(t, []).append((i, v))
    xs = {}
    for t in range(1, 9):
        for i, v in by_slot.get(t, []):
            xs[i] = v
        totals2.append(sum(xs.values()))
    out["slots_1_3_C2_cross_u0.5"] = crossing_slots(totals2, F(1, 2))
    out["opt_N1_1_T3_C4"] = [str(v) if isinstance(v, F) else v for v in one_sided_opt(4, 1, [3], 3)[:2]]
    best, xstar, costs = one_sided_opt(3, 2, [2, 5], 5)
    out["opt_N1_2_q2_2_5_C3"] = [str(best), xstar, [str(c) for c in costs]]
    out["ski_opt_T1_C4"] = str(one_sided_opt(4, 1, [1], 1)[0])
    out["ski_opt_T6_C5"] = str(one_sided_opt(5, 1, [6], 6)[0])
    out["ski_always_wait_T7_C3"] = (7 - 1) + 3
    out["ski_threshold_costs_T8_C5"] = ski_threshold_costs(5, 8)
    out["ski_threshold_costs_T3_C5"] = ski_threshold_costs(5, 3)
    out["truncated_mean_p0.5_s2"] = truncated_mean(0.5, 2.0)
    out["truncated_mean_p0.1_s2"] = truncated_mean(0.1, 2.0)
    out["truncated_mean_p0.3_s0.5"] = truncated_mean(0.3, 0.5)
    out["spread_0300"] = spread([0, 3, 0, 0])
    out["route_qw2_q1_arr(1,5)"] = route(2, True, 1, 5)
    out["route_qw3_q1_arr(0,2)"] = route(3, True, 0, 2)
    th5 = theta(5)
    # Each coded pair adds 1/(theta*C) to the running total; the first pair
    # whose total exceeds u goes out uncoded.
    out["alternating_pairs_before_cross_C5_u0.99"] = next(
        k for k in range(1, 100) if F(k + 1) / (th5 * 5) > F(99, 100))
    out["line_two_relays_C5"] = line_two_relays(5, (1, 0), (0, 0), 6)
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
