//! Angle literals: decimal radians or rational multiples of pi.

use std::f64::consts::PI;

const MAX_DENOMINATOR: i64 = 64;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn pi_multiple(numerator: i64, denominator: i64) -> f64 {
    numerator as f64 * PI / denominator as f64
}

/// Parses `0.25`, `-1e-3`, `pi`, `-pi/2`, `3pi/4` or `3*pi/4`.
pub fn parse_angle(token: &str) -> Option<f64> {
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, token.strip_prefix('+').unwrap_or(token)),
    };
    if let Some(at) = body.find("pi") {
        let coefficient = body[..at].strip_suffix('*').unwrap_or(&body[..at]);
        let numerator: i64 = if coefficient.is_empty() {
            1
        } else if coefficient.bytes().all(|b| b.is_ascii_digit()) {
            coefficient.parse().ok()?
        } else {
            return None;
        };
        let rest = &body[at + 2..];
        let denominator: i64 = if rest.is_empty() {
            1
        } else {
            let digits = rest.strip_prefix('/')?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok()?
        };
        if denominator == 0 {
            return None;
        }
        return Some(pi_multiple(sign * numerator, denominator));
    }
    if body.starts_with(['+', '-'])
        || !body
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'-' | b'+'))
    {
        return None;
    }
    let value: f64 = body.parse().ok()?;
    value.is_finite().then_some(sign as f64 * value)
}

/// Canonical text for an angle: a pi fraction when the value is exactly one
/// (as `parse_angle` would compute it), otherwise the shortest decimal that
/// round-trips.
pub fn format_angle(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let turns = value / PI;
    for denominator in 1..=MAX_DENOMINATOR {
        let numerator = (turns * denominator as f64).round();
        if numerator == 0.0 || numerator.abs() > 1e6 {
            continue;
        }
        let numerator = numerator as i64;
        if gcd(numerator, denominator) != 1 || pi_multiple(numerator, denominator) != value {
            continue;
        }
        let head = match numerator {
            1 => "pi".to_string(),
            -1 => "-pi".to_string(),
            n => format!("{n}pi"),
        };
        return if denominator == 1 {
            head
        } else {
            format!("{head}/{denominator}")
        };
    }
    format!("{value:?}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pi_fractions() {
        assert_eq!(parse_angle("pi/4"), Some(PI / 4.0));
        assert_eq!(parse_angle("3pi/2"), Some(3.0 * PI / 2.0));
        assert_eq!(parse_angle("3*pi/2"), Some(3.0 * PI / 2.0));
        assert_eq!(parse_angle("-pi"), Some(-PI));
        assert_eq!(parse_angle("0.5"), Some(0.5));
        assert_eq!(parse_angle("-1e-3"), Some(-1e-3));
        for bad in ["", "pi/", "pi/0", "2.5pi", "x", "pi4", "inf", "NaN", "pi/-2", "--1"] {
            assert_eq!(parse_angle(bad), None, "{bad}");
        }
    }

    #[test]
    fn canonical_formatting() {
        assert_eq!(format_angle(PI / 4.0), "pi/4");
        assert_eq!(format_angle(PI), "pi");
        assert_eq!(format_angle(-PI / 2.0), "-pi/2");
        assert_eq!(format_angle(3.0 * PI / 2.0), "3pi/2");
        assert_eq!(format_angle(0.0), "0");
        assert_eq!(format_angle(0.3), "0.3");
    }

    proptest! {
        #[test]
        fn format_round_trips(x in -10.0f64..10.0) {
            prop_assert_eq!(parse_angle(&format_angle(x)), Some(x));
        }

        #[test]
        fn fractions_round_trip(n in -200i64..200, d in 1i64..64) {
            let x = pi_multiple(n, d);
            prop_assert_eq!(parse_angle(&format_angle(x)), Some(x));
        }
    }
}
