/// Decimal rendering used in every CSV: the shortest string that round-trips
/// to the same `f64` (never more than 17 significant digits), plain notation
/// for moderate magnitudes and scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, -2.0 * 2f64.sqrt(), 1e-300, 6.02e23, 1.0 / 3.0, 123456.789, 5e-6] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let digits = s
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(|c| c.is_ascii_digit())
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 17, "{s}");
        }
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(1e-7), "1e-7");
    }
}
