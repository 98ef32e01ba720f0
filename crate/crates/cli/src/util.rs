use std::fmt::Write as _;

/// Render a float with 6 significant digits, plain decimal where readable.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Build one RFC-4180 CSV line (CRLF-terminated; fields quoted only when
/// they need it).
pub fn csv_line(fields: &[String]) -> String {
    let mut line = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        if f.contains([',', '"', '\n', '\r']) {
            let escaped = f.replace('"', "\"\"");
            let _ = write!(line, "\"{escaped}\"");
        } else {
            line.push_str(f);
        }
    }
    line.push_str("\r\n");
    line
}

pub fn unix_ms() -> u128 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats() {
        assert_eq!(sig6(6.308231), "6.30823");
        assert_eq!(sig6(0.00030142091), "0.000301421");
        assert_eq!(sig6(20.0), "20.0000");
        assert_eq!(sig6(3.0142e-7), "3.01420e-7");
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        assert_eq!(csv_line(&["a".into(), "1.5".into()]), "a,1.5\r\n");
        assert_eq!(csv_line(&["a,b".into()]), "\"a,b\"\r\n");
    }
}
