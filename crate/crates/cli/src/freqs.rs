//! Frequency list syntax: comma-separated values in Hz, where an item may be
//! `logspace:a:b:n` for `n` points from 10^a to 10^b.

pub fn parse_frequencies(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some(spec) = item.strip_prefix("logspace:") {
            let parts: Vec<&str> = spec.split(':').collect();
            let [a, b, n] = parts.as_slice() else {
                return Err(format!("expected logspace:a:b:n, found `{item}`"));
            };
            let a: f64 = a.parse().map_err(|_| format!("bad exponent `{a}`"))?;
            let b: f64 = b.parse().map_err(|_| format!("bad exponent `{b}`"))?;
            let n: usize = n.parse().map_err(|_| format!("bad point count `{n}`"))?;
            match n {
                0 => return Err("logspace needs at least one point".into()),
                1 => out.push(10f64.powf(a)),
                _ => out.extend((0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))),
            }
        } else {
            out.push(item.parse().map_err(|_| format!("bad frequency `{item}`"))?);
        }
    }
    if out.is_empty() {
        return Err("empty frequency list".into());
    }
    if let Some(bad) = out.iter().find(|f| !(f.is_finite() && **f >= 0.0)) {
        return Err(format!("frequencies must be finite and >= 0, found {bad}"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_logspace() {
        assert_eq!(parse_frequencies("0, 10,1e6").unwrap(), vec![0.0, 10.0, 1e6]);
        let f = parse_frequencies("0,logspace:-6:12:19").unwrap();
        assert_eq!(f.len(), 20);
        assert_eq!(f[0], 0.0);
        for (k, v) in f[1..].iter().enumerate() {
            let expected = 10f64.powi(k as i32 - 6);
            assert!((v - expected).abs() <= 1e-12 * expected);
        }
        assert_eq!(parse_frequencies("logspace:3:3:1").unwrap(), vec![1e3]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "-1", "logspace:1:2", "logspace:1:2:0", "inf"] {
            assert!(parse_frequencies(bad).is_err(), "{bad}");
        }
    }
}
