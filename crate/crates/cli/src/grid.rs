//! Per-point criterion landscapes written as CSV.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use oplab_core::funclib::{inner_from_hb, InnerFn};
use oplab_core::kernels::l_gram;
use oplab_core::numerics::sector_points;
use oplab_core::{Error, Result};

use crate::config::Setup;
use crate::format::g17;
use crate::CliError;

pub const WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Q1,
    Q2,
    Q3,
    Ratio,
    LMineig,
}

impl std::str::FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Q1" => Ok(Quantity::Q1),
            "Q2" => Ok(Quantity::Q2),
            "Q3" => Ok(Quantity::Q3),
            "ratio" => Ok(Quantity::Ratio),
            "L_mineig" => Ok(Quantity::LMineig),
            _ => Err(format!("unknown quantity {s:?}; expected one of Q1, Q2, Q3, ratio, L_mineig")),
        }
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Precondition(format!("quantity needs space.{what}")))
}

/// Values of `q` at every sector-grid point, in grid order.
pub fn values(s: &Setup, q: Quantity) -> Result<Vec<(Complex64, f64)>> {
    let pts = sector_points(&s.grid);
    let q1 = |z: Complex64| -> Result<f64> { Ok(z.im / s.phi.eval_upper(z)?.im) };
    let out: Result<Vec<f64>> = match q {
        Quantity::Q1 => pts.iter().map(|&z| q1(z)).collect(),
        Quantity::Q2 => {
            let chi = need(&s.chi, "chi")?;
            pts.iter().map(|&z| Ok(q1(z)? * chi.one_minus_mod_sq(s.phi.eval_upper(z)?)?)).collect()
        }
        Quantity::Q3 => {
            let e = need(&s.e, "E")?;
            let chi: InnerFn = inner_from_hb(e);
            pts.iter()
                .map(|&z| {
                    let w = s.phi.eval_upper(z)?;
                    let ln_num = e.ln_abs(w)?;
                    if ln_num < (1e-300f64).ln() {
                        return Ok(f64::NAN);
                    }
                    let ln_ratio = 2.0 * (ln_num - e.ln_abs(z)?);
                    Ok(q1(z)? * ln_ratio.exp() * chi.one_minus_mod_sq(w)? / chi.one_minus_mod_sq(z)?)
                })
                .collect()
        }
        Quantity::Ratio => {
            let e = need(&s.e, "E")?;
            pts.iter().map(|&z| Ok((e.ln_abs(s.phi.eval(z)?)? - e.ln_abs(z)?).exp())).collect()
        }
        Quantity::LMineig => {
            let chi = need(&s.chi, "chi")?;
            let n = pts.len();
            let w = WINDOW.min(n);
            (0..n)
                .map(|i| {
                    let start = i.min(n - w);
                    let m = l_gram(chi, &s.phi, s.options.lambda, &pts[start..start + w])?;
                    Ok(m.psd_check(1e-9)?.min_eigenvalue)
                })
                .collect()
        }
    };
    Ok(pts.into_iter().zip(out?).collect())
}

pub fn to_csv(rows: &[(Complex64, f64)]) -> String {
    let mut s = String::from("x,y,value\n");
    for (z, v) in rows {
        let _ = writeln!(s, "{},{},{}", g17(z.re), g17(z.im), g17(*v));
    }
    s
}

pub fn write_csv(path: &Path, rows: &[(Complex64, f64)]) -> std::result::Result<(), CliError> {
    std::fs::write(path, to_csv(rows)).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
