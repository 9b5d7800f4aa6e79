# cython: language_level=3, boundscheck=False, cdivision=True
"""Cython simulation kernels.

Mirror of tmsca._kernels_py; see that module for the RNG recurrence and
the state/transition code tables. Compiled with -ffp-contract=off so the
double arithmetic matches the pure-Python backend bit for bit.
"""

from libc.stdint cimport uint64_t

cdef uint64_t MULT = 2685821657736338717ULL
cdef double INV53 = 1.0 / 9007199254740992.0  # 2**-53

GOV_CRUISE = 0
GOV_ALERTED = 1
GOV_AUTO_BRAKE = 2

TR_NONE = 0
TR_ALERT_RAISED = 1
TR_ALERT_CLEARED = 2
TR_BRAKE_ENGAGED = 3
TR_BRAKE_RELEASED = 4


cpdef tuple rng_next(uint64_t state):
    """Advance the xorshift64* state; returns (new_state, output_u64)."""
    state ^= state >> 12
    state ^= state << 25
    state ^= state >> 27
    return state, <uint64_t>(state * MULT)


cpdef tuple rng_uniform(uint64_t state, double lo, double hi):
    """One draw mapped to [lo, hi); returns (new_state, value)."""
    state ^= state >> 12
    state ^= state << 25
    state ^= state >> 27
    cdef uint64_t out = <uint64_t>(state * MULT)
    return state, lo + (hi - lo) * ((out >> 11) * INV53)


cpdef tuple governor_step_core(int gov, double deadline, double speed,
                               double pos, double clamp, double throttle,
                               double v_max, double margin, double grace_s,
                               double accel, double decel, double now,
                               double dt):
    """One governor transition + kinematics step for a single vehicle.

    Returns (gov, deadline, speed, pos, transition).
    """
    cdef int transition = TR_NONE
    cdef double threshold = clamp * (1.0 + margin)
    cdef double target

    if gov == 0:  # cruise
        if speed > threshold:
            gov = 1
            deadline = now + grace_s
            transition = 1
    elif gov == 1:  # alerted
        if speed <= threshold:
            gov = 0
            transition = 2
        elif now >= deadline:
            gov = 2
            transition = 3
    else:  # auto_brake
        if speed <= 0.0:
            gov = 0
            transition = 4

    if gov == 2:
        speed = speed - decel * dt
        if speed < 0.0:
            speed = 0.0
    else:
        target = throttle * v_max
        if clamp < target:
            target = clamp
        if speed < target:
            speed = speed + accel * dt
            if speed > target:
                speed = target
        elif speed > target:
            speed = speed - accel * dt
            if speed < target:
                speed = target

    pos = pos + speed * dt
    return gov, deadline, speed, pos, transition
