//! Number formatting shared by every command.

use iqpsim::PartitionValue;
use num_complex::Complex64;

/// Twelve decimals; `0 < |x| < 1e-4` switches to scientific notation with
/// twelve significant digits.
pub fn real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:.11e}")
    } else {
        format!("{x:.12}")
    }
}

pub fn complex(z: Complex64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", real(z.re), real(im.abs()))
}

/// `mantissa · 2^exp2` written out even when it overflows an `f64`.
pub fn partition(z: &PartitionValue) -> String {
    let v = z.value();
    if v.re.is_finite() && v.im.is_finite() && (z.is_zero() || v.norm() > f64::MIN_POSITIVE) {
        return complex(v);
    }
    let part = |x: f64| {
        if x == 0.0 {
            return "0.00000000000e0".to_string();
        }
        let l = x.abs().log10() + z.exp2() as f64 * std::f64::consts::LOG10_2;
        let mut e = l.floor();
        let mut d = 10f64.powf(l - e);
        if format!("{d:.11}").starts_with("10") {
            d /= 10.0;
            e += 1.0;
        }
        let s = if x < 0.0 { "-" } else { "" };
        format!("{s}{d:.11}e{e}")
    };
    let m = z.mantissa();
    let im = part(m.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", part(m.re))
}
