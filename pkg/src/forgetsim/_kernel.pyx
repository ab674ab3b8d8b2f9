# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stepping kernel.

Bit-for-bit twin of forgetsim._kernel_py.run_interval: same operation order,
libm exp, the same splitmix64 draws, sequential sums. Any change here must be
mirrored there. See _kernel_py for the state-layout and event documentation.
"""
from libc.math cimport exp, INFINITY

BACKEND_NAME = "compiled"


cdef inline unsigned long long _next_u64(unsigned long long* rng) nogil:
    cdef unsigned long long x
    rng[0] = rng[0] + <unsigned long long>0x9E3779B97F4A7C15
    x = rng[0]
    x = (x ^ (x >> 30)) * <unsigned long long>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <unsigned long long>0x94D049BB133111EB
    return x ^ (x >> 31)


cdef inline long long _draw(unsigned long long* rng, long long n) nogil:
    # splitmix64 + modulo rejection; mirrors prng.next_index
    cdef unsigned long long un = <unsigned long long>n
    cdef unsigned long long thr = ((<unsigned long long>0) - un) % un
    cdef unsigned long long u
    while True:
        u = _next_u64(rng)
        if u >= thr:
            return <long long>(u % un) + 1


ctypedef struct LoopState:
    double t
    double busy
    double rate
    double auto_next
    double sum_g
    double sum_t
    long long step
    long long active
    long long rr_next
    long long fixed_pos
    long long wc
    long long na
    long long ns
    long long nr
    long long npr
    long long status
    unsigned long long rng


cdef inline bint _fire(
    LoopState* st, long long j,
    double[::1] z, long long[::1] s,
    double[::1] gamma_cur, double[::1] tau_cur, double[::1] factor,
    double gamma0, double beta, double cfac,
    double tau_inf, double a, double b,
    bint skip,
    double[::1] win_end, Py_ssize_t n_win,
    double[::1] acc_t, long long[::1] acc_elem, long long[::1] acc_s,
    Py_ssize_t cap_a, Py_ssize_t n,
) nogil:
    cdef long long sj
    cdef double g, tau_j, acc
    cdef Py_ssize_t i
    if st.na >= cap_a:
        st.status = 1
        return False
    sj = s[j - 1] + 1
    s[j - 1] = sj
    z[j - 1] = 1.0
    g = gamma0 * exp(-<double>sj / beta)
    gamma_cur[j - 1] = g
    factor[j - 1] = 1.0 - g * cfac
    tau_j = tau_inf + a * exp(-<double>sj / b)
    tau_cur[j - 1] = tau_j
    # sums recomputed fresh: running updates would cancel catastrophically
    # once mean gamma falls tens of orders below gamma0
    acc = 0.0
    for i in range(n):
        acc += gamma_cur[i]
    st.sum_g = acc
    acc = 0.0
    for i in range(n):
        acc += tau_cur[i]
    st.sum_t = acc
    acc_t[st.na] = st.t
    acc_elem[st.na] = j
    acc_s[st.na] = sj
    st.na += 1
    if skip:
        st.t += tau_j
        while st.wc < n_win and st.t >= win_end[st.wc]:
            st.wc += 1
    else:
        st.busy = tau_j
        st.active = j
    return True


def run_interval(
    double[::1] z, long long[::1] s,
    double[::1] gamma_cur, double[::1] tau_cur, double[::1] factor,
    double[::1] fstate, long long[::1] istate, unsigned long long[::1] rstate,
    double t_stop, double dt,
    double cfac, double gamma0, double beta,
    double tau_inf, double a, double b,
    double[::1] win_start, double[::1] win_end,
    long long busy_kind, long long policy_kind, long long auto_enabled,
    double[::1] fixed_times, long long[::1] fixed_elems,
    double[::1] ev_time, long long[::1] ev_kind, double[::1] ev_arg,
    long long sample_every,
    double[::1] out_t, double[::1] out_ztot, double[::1] out_mtau,
    double[::1] out_mgamma, long long[::1] out_active,
    double[:, ::1] out_pe,
    double[::1] acc_t, long long[::1] acc_elem, long long[::1] acc_s,
    long long[::1] rej_idx, long long[::1] rej_code,
    long long[::1] probe_idx, double[::1] probe_t, double[::1] probe_z,
):
    """Advance the state until t >= t_stop; returns (ns, na, nr, np, status)."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t n_win = win_start.shape[0]
    cdef Py_ssize_t n_fixed = fixed_times.shape[0]
    cdef Py_ssize_t n_ev = ev_time.shape[0]
    cdef Py_ssize_t cap_s = out_t.shape[0]
    cdef Py_ssize_t cap_a = acc_t.shape[0]
    cdef bint per_el = out_pe.shape[0] > 0
    cdef bint freeze = busy_kind == 1
    cdef bint skip = busy_kind == 0
    cdef long long n_ll = <long long>n

    cdef LoopState st
    st.t = fstate[0]
    st.busy = fstate[1]
    st.rate = fstate[2]
    st.auto_next = fstate[3]
    st.sum_g = fstate[4]
    st.sum_t = fstate[5]
    st.step = istate[0]
    st.active = istate[1]
    st.rr_next = istate[2]
    st.fixed_pos = istate[3]
    st.wc = istate[4]
    st.na = 0
    st.ns = 0
    st.nr = 0
    st.npr = 0
    st.status = 0
    st.rng = rstate[0]

    cdef Py_ssize_t ev_pos = 0
    cdef long long kind, j, act
    cdef double acc
    cdef Py_ssize_t i

    with nogil:
        while st.t < t_stop:
            st.t += dt
            st.step += 1
            if st.busy > 0.0:
                st.busy -= dt
                if st.busy <= 0.0:
                    st.active = 0
            while st.wc < n_win and st.t >= win_end[st.wc]:
                st.wc += 1

            # due control events, in submission order
            while ev_pos < n_ev and ev_time[ev_pos] <= st.t:
                kind = ev_kind[ev_pos]
                if kind == 1:
                    if st.busy > 0.0:
                        rej_idx[st.nr] = ev_pos
                        rej_code[st.nr] = 1
                        st.nr += 1
                    elif not (st.wc < n_win and st.t >= win_start[st.wc]):
                        rej_idx[st.nr] = ev_pos
                        rej_code[st.nr] = 2
                        st.nr += 1
                    else:
                        _fire(&st, <long long>ev_arg[ev_pos],
                              z, s, gamma_cur, tau_cur, factor,
                              gamma0, beta, cfac, tau_inf, a, b,
                              skip, win_end, n_win,
                              acc_t, acc_elem, acc_s, cap_a, n)
                elif kind == 2:
                    st.rate = ev_arg[ev_pos]
                    if st.rate > 0.0:
                        st.auto_next = st.t + 1.0 / st.rate
                    else:
                        st.auto_next = INFINITY
                elif kind == 3:
                    st.rate = 0.0
                    st.auto_next = INFINITY
                elif kind == 4:
                    probe_idx[st.npr] = ev_pos
                    probe_t[st.npr] = st.t
                    probe_z[st.npr] = z[<long long>ev_arg[ev_pos] - 1]
                    st.npr += 1
                ev_pos += 1
            if st.status:
                break

            # policy access (at most one per step, except FixedTimes under a
            # clock-jumping busy policy, where consecutive due entries fire
            # back-to-back exactly as queued presentations would)
            if policy_kind == 1:
                while (st.fixed_pos < n_fixed and st.busy <= 0.0
                       and st.wc < n_win and st.t >= win_start[st.wc]
                       and st.t >= fixed_times[st.fixed_pos]):
                    j = fixed_elems[st.fixed_pos]
                    st.fixed_pos += 1
                    if not _fire(&st, j,
                                 z, s, gamma_cur, tau_cur, factor,
                                 gamma0, beta, cfac, tau_inf, a, b,
                                 skip, win_end, n_win,
                                 acc_t, acc_elem, acc_s, cap_a, n):
                        break
            elif policy_kind == 2:
                if st.busy <= 0.0 and st.wc < n_win and st.t >= win_start[st.wc]:
                    j = _draw(&st.rng, n_ll)
                    _fire(&st, j,
                          z, s, gamma_cur, tau_cur, factor,
                          gamma0, beta, cfac, tau_inf, a, b,
                          skip, win_end, n_win,
                          acc_t, acc_elem, acc_s, cap_a, n)
            elif policy_kind == 3:
                if st.busy <= 0.0 and st.wc < n_win and st.t >= win_start[st.wc]:
                    j = st.rr_next
                    st.rr_next = j % n_ll + 1
                    _fire(&st, j,
                          z, s, gamma_cur, tau_cur, factor,
                          gamma0, beta, cfac, tau_inf, a, b,
                          skip, win_end, n_win,
                          acc_t, acc_elem, acc_s, cap_a, n)
            elif auto_enabled and st.rate > 0.0 and st.busy <= 0.0 and st.t >= st.auto_next:
                if st.wc < n_win and st.t >= win_start[st.wc]:
                    j = _draw(&st.rng, n_ll)
                    if _fire(&st, j,
                             z, s, gamma_cur, tau_cur, factor,
                             gamma0, beta, cfac, tau_inf, a, b,
                             skip, win_end, n_win,
                             acc_t, acc_elem, acc_s, cap_a, n):
                        st.auto_next = st.t + 1.0 / st.rate
            if st.status:
                break

            # decay; the busy policy governs effort intervals, idle time decays all
            if st.busy > 0.0:
                if freeze:
                    act = st.active - 1
                    for i in range(n):
                        if i != act:
                            z[i] *= factor[i]
                else:
                    for i in range(n):
                        z[i] *= factor[i]
            else:
                for i in range(n):
                    z[i] *= factor[i]

            if st.step % sample_every == 0:
                if st.ns >= cap_s:
                    st.status = 2
                    break
                acc = 0.0
                for i in range(n):
                    acc += z[i]
                out_t[st.ns] = st.t
                out_ztot[st.ns] = acc
                out_mtau[st.ns] = st.sum_t / n
                out_mgamma[st.ns] = st.sum_g / n
                out_active[st.ns] = st.active
                if per_el:
                    for i in range(n):
                        out_pe[st.ns, i] = z[i]
                st.ns += 1

    fstate[0] = st.t
    fstate[1] = st.busy
    fstate[2] = st.rate
    fstate[3] = st.auto_next
    fstate[4] = st.sum_g
    fstate[5] = st.sum_t
    istate[0] = st.step
    istate[1] = st.active
    istate[2] = st.rr_next
    istate[3] = st.fixed_pos
    istate[4] = st.wc
    rstate[0] = st.rng
    return st.ns, st.na, st.nr, st.npr, st.status
