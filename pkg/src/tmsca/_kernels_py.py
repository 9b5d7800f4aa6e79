"""Pure-Python simulation kernels.

These are the hot inner-loop primitives: the seeded pseudo-random
generator used for beacon jitter and the per-vehicle governor/kinematics
step. A Cython build of the same functions lives in ``tmsca._kernels_c``;
``tmsca.kernels`` picks one at import time. Both backends must produce
bit-identical results — every operation here is plain IEEE-754 double or
wrapping 64-bit unsigned arithmetic, applied in a fixed order.

RNG recurrence (xorshift64*, one draw per call, state must be nonzero):

    s ^= s >> 12
    s ^= (s << 25) mod 2^64
    s ^= s >> 27
    output = (s * 2685821657736338717) mod 2^64

A uniform double in [0, 1) is ``(output >> 11) * 2**-53``.

Governor state codes: 0 = cruise, 1 = alerted, 2 = auto_brake.
Transition codes: 0 none, 1 alert raised, 2 alert cleared,
3 auto-brake engaged, 4 auto-brake released.
"""

_MASK64 = (1 << 64) - 1
_MULT = 2685821657736338717  # 0x2545F4914F6CDD1D
_INV53 = 2.0 ** -53

GOV_CRUISE = 0
GOV_ALERTED = 1
GOV_AUTO_BRAKE = 2

TR_NONE = 0
TR_ALERT_RAISED = 1
TR_ALERT_CLEARED = 2
TR_BRAKE_ENGAGED = 3
TR_BRAKE_RELEASED = 4


def rng_next(state):
    """Advance the xorshift64* state; returns (new_state, output_u64)."""
    state ^= state >> 12
    state ^= (state << 25) & _MASK64
    state ^= state >> 27
    return state, (state * _MULT) & _MASK64


def rng_uniform(state, lo, hi):
    """One draw mapped to [lo, hi); returns (new_state, value)."""
    state, out = rng_next(state)
    return state, lo + (hi - lo) * ((out >> 11) * _INV53)


def governor_step_core(gov, deadline, speed, pos, clamp, throttle,
                       v_max, margin, grace_s, accel, decel, now, dt):
    """One governor transition + kinematics step for a single vehicle.

    Transitions are evaluated on the incoming speed, then kinematics run
    under the resulting state; position integrates the post-step speed.
    Returns (gov, deadline, speed, pos, transition).
    """
    transition = TR_NONE
    threshold = clamp * (1.0 + margin)

    if gov == GOV_CRUISE:
        if speed > threshold:
            gov = GOV_ALERTED
            deadline = now + grace_s
            transition = TR_ALERT_RAISED
    elif gov == GOV_ALERTED:
        if speed <= threshold:
            gov = GOV_CRUISE
            transition = TR_ALERT_CLEARED
        elif now >= deadline:
            gov = GOV_AUTO_BRAKE
            transition = TR_BRAKE_ENGAGED
    else:  # GOV_AUTO_BRAKE
        if speed <= 0.0:
            gov = GOV_CRUISE
            transition = TR_BRAKE_RELEASED

    if gov == GOV_AUTO_BRAKE:
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
