use crate::{Error, Result};

/// Sign-change roots of `f` on `[lo, hi]`, ascending.
///
/// The interval is scanned with step `resolution`; each bracket is bisected
/// until it is narrower than `1e-12` or cannot shrink further. Zeros that do
/// not change sign are not reported.
pub fn real_roots(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, resolution: f64) -> Result<Vec<f64>> {
    if !(hi > lo) || !(resolution > 0.0) || resolution >= hi - lo {
        return Err(Error::Argument(format!(
            "need lo < hi and 0 < resolution < hi - lo, got [{lo}, {hi}] with {resolution}"
        )));
    }
    let n = ((hi - lo) / resolution).ceil() as usize;
    let node = |k: usize| if k == n { hi } else { lo + (hi - lo) * k as f64 / n as f64 };

    let mut roots = Vec::new();
    let mut t0 = lo;
    let mut f0 = f(t0)?;
    if f0 == 0.0 {
        roots.push(t0);
    }
    for k in 1..=n {
        let t1 = node(k);
        let f1 = f(t1)?;
        if f1 == 0.0 {
            roots.push(t1);
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(&f, t0, t1, f0)?);
        }
        t0 = t1;
        f0 = f1;
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    for _ in 0..200 {
        if b - a <= 1e-12 {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_zeros() {
        let r = real_roots(|t| Ok(t.cos()), 0.0, 10.0, 0.1).unwrap();
        assert_eq!(r.len(), 3);
        for (k, t) in r.iter().enumerate() {
            assert!((t - (PI / 2.0 + k as f64 * PI)).abs() < 1e-11);
        }
    }

    #[test]
    fn no_real_zeros() {
        assert!(real_roots(|t| Ok(t * t + 1.0), -5.0, 5.0, 0.01).unwrap().is_empty());
    }

    #[test]
    fn every_root_of_cos_kt() {
        for k in 1..=3 {
            let kf = k as f64;
            let r = real_roots(|t| Ok((kf * t).cos()), 0.0, 20.0, 0.05).unwrap();
            let expected: Vec<f64> = (0..)
                .map(|n| (PI / 2.0 + n as f64 * PI) / kf)
                .take_while(|t| *t <= 20.0)
                .collect();
            assert_eq!(r.len(), expected.len());
            for (a, b) in r.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn exact_grid_zero_reported_once() {
        let r = real_roots(|t| Ok(t - 1.0), 0.0, 2.0, 0.5).unwrap();
        assert_eq!(r, vec![1.0]);
    }

    #[test]
    fn bad_arguments() {
        assert!(real_roots(|t| Ok(t), 1.0, 0.0, 0.1).is_err());
        assert!(real_roots(|t| Ok(t), 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn evaluator_errors_propagate() {
        let r = real_roots(|t| if t > 0.5 { Err(Error::NonFinite { t }) } else { Ok(t) }, 0.0, 1.0, 0.1);
        assert!(r.is_err());
    }
}
