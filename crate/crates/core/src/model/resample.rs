use crate::error::{Error, Result};

/// Linear interpolation of `curve` onto `target_len` points, both indexed by
/// the normalized position `t = i / (len - 1)`. Endpoints are preserved.
pub fn resample_curve(curve: &[f64], target_len: usize) -> Result<Vec<f64>> {
    let a = curve.len();
    if a < 2 || target_len < 2 {
        return Err(Error::InvalidCurve(format!(
            "resampling needs at least 2 points on both sides, got {a} -> {target_len}"
        )));
    }
    if a == target_len {
        return Ok(curve.to_vec());
    }
    let scale = (a - 1) as f64 / (target_len - 1) as f64;
    let mut out = Vec::with_capacity(target_len);
    for j in 0..target_len {
        if j == target_len - 1 {
            out.push(curve[a - 1]);
            continue;
        }
        let x = j as f64 * scale;
        let i = (x.floor() as usize).min(a - 2);
        let frac = x - i as f64;
        out.push(curve[i] + (curve[i + 1] - curve[i]) * frac);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_constant() {
        let c = [0.3, 0.9, 0.1, 1.0];
        assert_eq!(resample_curve(&c, 4).unwrap(), c.to_vec());
        for b in [2, 3, 17, 256] {
            assert!(resample_curve(&[0.42; 7], b)
                .unwrap()
                .iter()
                .all(|&v| (v - 0.42).abs() < 1e-15));
        }
    }

    #[test]
    fn ramp_is_exact() {
        let ramp: Vec<f64> = (0..5).map(|i| i as f64 / 4.0).collect();
        let out = resample_curve(&ramp, 9).unwrap();
        for (j, v) in out.iter().enumerate() {
            assert!((v - j as f64 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn endpoints_and_errors() {
        let c = [0.5, 0.2, 0.7, 0.9, 1.0];
        let down = resample_curve(&c, 3).unwrap();
        assert_eq!((down[0], down[2]), (0.5, 1.0));
        assert!((down[1] - 0.7).abs() < 1e-15);
        assert!(resample_curve(&[1.0], 4).is_err());
        assert!(resample_curve(&c, 1).is_err());
    }
}
