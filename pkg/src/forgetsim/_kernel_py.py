"""Pure-Python stepping kernel.

This is the reference implementation of the inner loop; forgetsim._kernel is
the compiled twin. The two must stay bit-for-bit identical: same operation
order, libm exp on both sides, the same splitmix64 draws, and sequential
(left-to-right) sums. Any change here must be mirrored in _kernel.pyx.

State crossing the call boundary lives in small numpy arrays so one stepping
state can be advanced repeatedly (the trainer service does this):

    fstate: float64[6]  t, busy_remaining, auto_rate, auto_next, sum_gamma, sum_tau
    istate: int64[5]    step, active (0 = idle, else 1-based), rr_next, fixed_pos, win_cursor
    rstate: uint64[1]   splitmix64 state

Event kinds: 1 present, 2 set auto rate, 3 pause auto, 4 probe.
Rejection codes: 1 busy, 2 outside lesson window.
Status codes: 0 ok, 1 access-log capacity hit, 2 sample capacity hit.
"""
from __future__ import annotations

import math

BACKEND_NAME = "python"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _draw(rng: int, n: int) -> tuple[int, int]:
    # splitmix64 + modulo rejection; mirrors prng.next_index
    thr = ((1 << 64) - n) % n
    while True:
        rng = (rng + _GOLDEN) & _MASK64
        x = rng
        x = ((x ^ (x >> 30)) * _MIX1) & _MASK64
        x = ((x ^ (x >> 27)) * _MIX2) & _MASK64
        x ^= x >> 31
        if x >= thr:
            return (x % n) + 1, rng


def run_interval(
    z, s, gamma_cur, tau_cur, factor,
    fstate, istate, rstate,
    t_stop, dt,
    cfac, gamma0, beta, tau_inf, a, b,
    win_start, win_end,
    busy_kind, policy_kind, auto_enabled,
    fixed_times, fixed_elems,
    ev_time, ev_kind, ev_arg,
    sample_every,
    out_t, out_ztot, out_mtau, out_mgamma, out_active, out_pe,
    acc_t, acc_elem, acc_s,
    rej_idx, rej_code,
    probe_idx, probe_t, probe_z,
):
    """Advance the state until t >= t_stop; returns (ns, na, nr, np, status).

    Step order: clock/busy bookkeeping, window cursor, due control events,
    policy access, decay, sample. A fired access logs its realized time,
    then either jumps the clock by tau (busy_kind 0) or opens an effort
    interval of length tau (busy_kind 1 exempts the active element from
    decay, busy_kind 2 does not).
    """
    n = len(z)
    zl = z.tolist()
    sl = s.tolist()
    gl = gamma_cur.tolist()
    tl = tau_cur.tolist()
    fl = factor.tolist()
    ws = win_start.tolist()
    we = win_end.tolist()
    n_win = len(ws)
    ft = fixed_times.tolist()
    fe = fixed_elems.tolist()
    n_fixed = len(ft)
    et = ev_time.tolist()
    ek = ev_kind.tolist()
    ea = ev_arg.tolist()
    n_ev = len(et)

    t = float(fstate[0])
    busy = float(fstate[1])
    rate = float(fstate[2])
    auto_next = float(fstate[3])
    sum_g = float(fstate[4])
    sum_t = float(fstate[5])
    step = int(istate[0])
    active = int(istate[1])
    rr_next = int(istate[2])
    fixed_pos = int(istate[3])
    wc = int(istate[4])
    rng = int(rstate[0])

    cap_s = len(out_t)
    cap_a = len(acc_t)
    per_el = out_pe.shape[0] > 0
    ns = na = nr = npr = 0
    ev_pos = 0
    status = 0
    freeze = busy_kind == 1
    skip = busy_kind == 0

    def fire(j: int) -> bool:
        nonlocal t, busy, active, wc, sum_g, sum_t, na, status
        if na >= cap_a:
            status = 1
            return False
        sj = sl[j - 1] + 1
        sl[j - 1] = sj
        zl[j - 1] = 1.0
        g = gamma0 * math.exp(-sj / beta)
        gl[j - 1] = g
        fl[j - 1] = 1.0 - g * cfac
        tau_j = tau_inf + a * math.exp(-sj / b)
        tl[j - 1] = tau_j
        # sums recomputed fresh: running updates would cancel catastrophically
        # once mean gamma falls tens of orders below gamma0
        acc = 0.0
        for v in gl:
            acc += v
        sum_g = acc
        acc = 0.0
        for v in tl:
            acc += v
        sum_t = acc
        acc_t[na] = t
        acc_elem[na] = j
        acc_s[na] = sj
        na += 1
        if skip:
            t += tau_j
            while wc < n_win and t >= we[wc]:
                wc += 1
        else:
            busy = tau_j
            active = j
        return True

    while t < t_stop:
        t += dt
        step += 1
        if busy > 0.0:
            busy -= dt
            if busy <= 0.0:
                active = 0
        while wc < n_win and t >= we[wc]:
            wc += 1

        # due control events, in submission order
        while ev_pos < n_ev and et[ev_pos] <= t:
            kind = ek[ev_pos]
            if kind == 1:
                if busy > 0.0:
                    rej_idx[nr] = ev_pos
                    rej_code[nr] = 1
                    nr += 1
                elif not (wc < n_win and t >= ws[wc]):
                    rej_idx[nr] = ev_pos
                    rej_code[nr] = 2
                    nr += 1
                else:
                    fire(int(ea[ev_pos]))
            elif kind == 2:
                rate = ea[ev_pos]
                auto_next = t + 1.0 / rate if rate > 0.0 else math.inf
            elif kind == 3:
                rate = 0.0
                auto_next = math.inf
            elif kind == 4:
                probe_idx[npr] = ev_pos
                probe_t[npr] = t
                probe_z[npr] = zl[int(ea[ev_pos]) - 1]
                npr += 1
            ev_pos += 1
        if status:
            break

        # policy access (at most one per step, except FixedTimes under a
        # clock-jumping busy policy, where consecutive due entries fire
        # back-to-back exactly as queued presentations would)
        if policy_kind == 1:
            while (
                fixed_pos < n_fixed
                and busy <= 0.0
                and wc < n_win
                and t >= ws[wc]
                and t >= ft[fixed_pos]
            ):
                j = fe[fixed_pos]
                fixed_pos += 1
                if not fire(j):
                    break
        elif policy_kind == 2:
            if busy <= 0.0 and wc < n_win and t >= ws[wc]:
                j, rng = _draw(rng, n)
                fire(j)
        elif policy_kind == 3:
            if busy <= 0.0 and wc < n_win and t >= ws[wc]:
                j = rr_next
                rr_next = j % n + 1
                fire(j)
        elif auto_enabled and rate > 0.0 and busy <= 0.0 and t >= auto_next:
            if wc < n_win and t >= ws[wc]:
                j, rng = _draw(rng, n)
                if fire(j):
                    auto_next = t + 1.0 / rate
        if status:
            break

        # decay; the busy policy governs effort intervals, idle time decays all
        if busy > 0.0:
            if freeze:
                act = active - 1
                for i in range(n):
                    if i != act:
                        zl[i] *= fl[i]
            else:
                for i in range(n):
                    zl[i] *= fl[i]
        else:
            for i in range(n):
                zl[i] *= fl[i]

        if step % sample_every == 0:
            if ns >= cap_s:
                status = 2
                break
            acc = 0.0
            for v in zl:
                acc += v
            out_t[ns] = t
            out_ztot[ns] = acc
            out_mtau[ns] = sum_t / n
            out_mgamma[ns] = sum_g / n
            out_active[ns] = active
            if per_el:
                out_pe[ns] = zl
            ns += 1

    z[:] = zl
    s[:] = sl
    gamma_cur[:] = gl
    tau_cur[:] = tl
    factor[:] = fl
    fstate[0] = t
    fstate[1] = busy
    fstate[2] = rate
    fstate[3] = auto_next
    fstate[4] = sum_g
    fstate[5] = sum_t
    istate[0] = step
    istate[1] = active
    istate[2] = rr_next
    istate[3] = fixed_pos
    istate[4] = wc
    rstate[0] = rng
    return ns, na, nr, npr, status
