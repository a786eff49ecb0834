//! Parsing of `--r-set`-style value lists.

use crate::error::CliError;

/// `a,b,c` or an inclusive equispaced range `lo:hi:count`.
pub fn parse_reals(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Usage(format!("{flag}: {what} in '{text}'"));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let [lo, hi, count] = parts[..] else {
            return Err(bad("a range needs the form lo:hi:count"));
        };
        let lo: f64 = lo.parse().map_err(|_| bad("unreadable lower end"))?;
        let hi: f64 = hi.parse().map_err(|_| bad("unreadable upper end"))?;
        let count: usize = count.parse().map_err(|_| bad("unreadable count"))?;
        match count {
            0 => return Err(bad("count must be at least 1")),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(&format!("unreadable value '{s}'"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

/// Like [`parse_reals`], but every value must be a positive integer.
pub fn parse_orders(flag: &str, text: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for v in parse_reals(flag, text)? {
        let rounded = v.round();
        if rounded < 1.0 || (v - rounded).abs() > 1e-9 || rounded > 9.0e15 {
            return Err(CliError::Usage(format!(
                "{flag}: n values must be positive integers (got {v})"
            )));
        }
        out.push(rounded as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_reals("--r-set", "3, 4.5,10").unwrap(), vec![3.0, 4.5, 10.0]);
        assert_eq!(parse_reals("--r-set", "2:4:3").unwrap(), vec![2.0, 3.0, 4.0]);
        assert_eq!(parse_reals("--r-set", "7:9:1").unwrap(), vec![7.0]);
        assert_eq!(parse_orders("--n-set", "1:10:4").unwrap(), vec![1, 4, 7, 10]);
        assert!(parse_reals("--r-set", "1:2").is_err());
        assert!(parse_reals("--r-set", "1:2:0").is_err());
        assert!(parse_reals("--r-set", "a,b").is_err());
        assert!(parse_orders("--n-set", "1.5").is_err());
        assert!(parse_orders("--n-set", "0").is_err());
    }
}
