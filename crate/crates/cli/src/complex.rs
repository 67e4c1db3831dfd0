//! `RE+IMj` complex literals.

use num_complex::Complex64;

/// Parses `36.5+21.3j`, `28.2-6.5j`, `-4j`, `50` (a trailing `i` works too).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex literal {s:?}; expected RE+IMj");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['j', 'i', 'J', 'I']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not an exponent sign or the leading one
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_complex("36.5+21.3j").unwrap(), Complex64::new(36.5, 21.3));
        assert_eq!(parse_complex("28.2-6.5j").unwrap(), Complex64::new(28.2, -6.5));
        assert_eq!(parse_complex("-4j").unwrap(), Complex64::new(0.0, -4.0));
        assert_eq!(parse_complex("50").unwrap(), Complex64::new(50.0, 0.0));
        assert_eq!(parse_complex("1e-3-2.5e+2j").unwrap(), Complex64::new(1e-3, -250.0));
        assert_eq!(parse_complex("-1-j").unwrap(), Complex64::new(-1.0, -1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2k").is_err());
        assert!(parse_complex("").is_err());
    }
}
