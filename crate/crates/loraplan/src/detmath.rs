//! Elementary functions built from exactly-rounded IEEE-754 operations only
//! (+, -, *, /, sqrt), so seeded draws are bit-identical on every platform.
//!
//! libm implementations of ln/cos may differ in the last ulp between systems;
//! the shadowing field's determinism contract cannot depend on them. Accuracy
//! here is ~1e-15 relative, far below the model's dB resolution.

/// Natural logarithm for finite positive inputs.
pub(crate) fn ln(x: f64) -> f64 {
    debug_assert!(x > 0.0 && x.is_finite());
    // x = m * 2^e, m in [1, 2), then pull m toward 1 so the series converges fast.
    let bits = x.to_bits();
    let mut e = ((bits >> 52) & 0x7FF) as i64 - 1023;
    let mut m = f64::from_bits((bits & 0x000F_FFFF_FFFF_FFFF) | 0x3FF0_0000_0000_0000);
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    // ln m = 2 atanh(s), s = (m-1)/(m+1), |s| <= 0.1716
    let s = (m - 1.0) / (m + 1.0);
    let s2 = s * s;
    let mut power = s;
    let mut acc = s;
    for k in 1..=12u32 {
        power *= s2;
        acc += power / f64::from(2 * k + 1);
    }
    (e as f64) * std::f64::consts::LN_2 + 2.0 * acc
}

/// cos(2*pi*u) for u in [0, 1).
pub(crate) fn cos_2pi(u: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&u));
    let mut u = u;
    let mut sign = 1.0;
    // Fold to [0, 1/4] turn; both subtractions are exact (Sterbenz).
    if u >= 0.5 {
        u -= 0.5;
        sign = -sign;
    }
    if u >= 0.25 {
        u = 0.5 - u;
        sign = -sign;
    }
    let theta = 2.0 * std::f64::consts::PI * u; // theta in [0, pi/2]
    let t2 = theta * theta;
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 1..=12u32 {
        term *= -t2 / f64::from((2 * k - 1) * (2 * k));
        acc += term;
    }
    sign * acc
}
