//! Scalar float functions for `no_std` builds, backed by `libm`.

pub use core::f64::consts::PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log10(x: f64) -> f64 {
    libm::log10(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Normalized sinc, `sin(pi t) / (pi t)`, with exact values at integers.
pub fn sinc(t: f64) -> f64 {
    sinc_of_sum(t, 0.0)
}

/// `sinc(a + b)` for the exact real sum `a + b` (no rounding of the argument).
///
/// Evaluated in double-double arithmetic: the argument is reduced exactly to
/// `r = a + b - k` with integer `k`, so that `sin(pi t) = (-1)^k sin(pi r)`,
/// and both `sin(pi r)` and the quotient are carried to about 100 bits before
/// the final rounding. The naive `sin(pi * t) / (pi * t)` loses accuracy near
/// the zeros because `pi * t` is rounded before the sine.
pub fn sinc_of_sum(a: f64, b: f64) -> f64 {
    let t = dd::two_sum(a, b);
    if t == (0.0, 0.0) {
        return 1.0;
    }
    let k = round(t.0);
    if t.1 == 0.0 && t.0 == k {
        return 0.0;
    }
    // t.0 - k is exact: k is the integer nearest to t.0
    let r = dd::add((t.0 - k, 0.0), (t.1, 0.0));
    let mut s = dd::sin(dd::mul(dd::PI, r));
    if k - 2.0 * floor(k / 2.0) != 0.0 {
        s = dd::neg(s);
    }
    dd::to_f64(dd::div(s, dd::mul(dd::PI, t)))
}

/// Minimal double-double arithmetic: a value is an unevaluated sum `hi + lo`
/// with `|lo| <= ulp(hi) / 2`.
mod dd {
    pub type DD = (f64, f64);

    pub const PI: DD = (core::f64::consts::PI, 1.2246467991473532e-16);

    pub fn two_sum(a: f64, b: f64) -> DD {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> DD {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_prod(a: f64, b: f64) -> DD {
        let p = a * b;
        (p, libm::fma(a, b, -p))
    }

    pub fn neg(a: DD) -> DD {
        (-a.0, -a.1)
    }

    pub fn add(a: DD, b: DD) -> DD {
        let (s, e) = two_sum(a.0, b.0);
        let (t, f) = two_sum(a.1, b.1);
        let (s, e) = quick_two_sum(s, e + t);
        quick_two_sum(s, e + f)
    }

    pub fn mul(a: DD, b: DD) -> DD {
        let (p, e) = two_prod(a.0, b.0);
        quick_two_sum(p, e + (a.0 * b.1 + a.1 * b.0))
    }

    pub fn mul_f64(a: DD, b: f64) -> DD {
        let (p, e) = two_prod(a.0, b);
        quick_two_sum(p, e + a.1 * b)
    }

    pub fn div(a: DD, b: DD) -> DD {
        let q1 = a.0 / b.0;
        let r = add(a, neg(mul_f64(b, q1)));
        let q2 = r.0 / b.0;
        let r = add(r, neg(mul_f64(b, q2)));
        let q3 = r.0 / b.0;
        add(quick_two_sum(q1, q2), (q3, 0.0))
    }

    pub fn div_f64(a: DD, b: f64) -> DD {
        div(a, (b, 0.0))
    }

    /// Taylor series of `sin(x)`, accurate for `|x| <= pi / 2`.
    pub fn sin(x: DD) -> DD {
        let x2 = mul(x, x);
        let mut term = x;
        let mut sum = x;
        let mut k = 1.0;
        while libm::fabs(term.0) > 1e-34 * libm::fabs(sum.0) && k < 60.0 {
            term = neg(div_f64(mul(term, x2), (k + 1.0) * (k + 2.0)));
            sum = add(sum, term);
            k += 2.0;
        }
        sum
    }

    pub fn to_f64(a: DD) -> f64 {
        a.0 + a.1
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn sine_of_pi_over_six_is_one_half() {
            let s = sin(div_f64(PI, 6.0));
            assert!(libm::fabs(s.0 - 0.5) + libm::fabs(s.1) < 1e-30);
        }

        #[test]
        fn division_recovers_factor() {
            let q = div(mul_f64(PI, 3.0), PI);
            assert!(libm::fabs(q.0 - 3.0) + libm::fabs(q.1) < 1e-30);
        }
    }
}
