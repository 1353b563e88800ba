use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Largest dimension accepted by the dense eigensolvers.
pub const MAX_DIM: usize = 200;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Argument("matrix rows must all have length n".into()));
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { Complex64::new(d[i], 0.0) } else { ZERO })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `A - A^H`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `(A + A^H)/2`.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, s: f64) -> Self {
        CMatrix { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!(self.n, other.n);
        CMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum()).collect()
    }

    /// `v^H A v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        self.mul_vec(v).iter().zip(v).map(|(av, x)| x.conj() * av).sum()
    }

    /// Principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Spectrum of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`; orthonormal.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `max_k ‖A v_k − λ_k v_k‖ / ‖A‖_F`.
    pub residual: f64,
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.dim() == 0 {
        return Err(Error::Argument("empty matrix".into()));
    }
    if m.dim() > MAX_DIM {
        return Err(Error::Argument(format!("dimension {} exceeds the dense cap {MAX_DIM}", m.dim())));
    }
    if m.data.iter().any(|z| !z.is_finite()) {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    let defect = m.hermitian_defect();
    if defect > 1e-10 * m.frobenius() {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    Ok(())
}

/// Cyclic Jacobi on a dense real symmetric matrix (row-major, destroyed).
/// Returns eigenvalues and the eigenvector matrix (columns), unsorted.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[p * n + q].abs()).sum();
        if off == 0.0 {
            break;
        }
        let tresh = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 { -t } else { t }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                let rot = |m: &mut [f64], i1: usize, i2: usize| {
                    let g = m[i1];
                    let h = m[i2];
                    m[i1] = g - s * (h + g * tau);
                    m[i2] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rot(a, j * n + p, j * n + q);
                }
                for j in (p + 1)..q {
                    rot(a, p * n + j, j * n + q);
                }
                for j in (q + 1)..n {
                    rot(a, p * n + j, q * n + j);
                }
                for j in 0..n {
                    rot(&mut v, j * n + p, j * n + q);
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    (d, v)
}

fn cdot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// All eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
///
/// The `n × n` complex problem is solved as the `2n × 2n` real symmetric
/// problem `[[X, −Y], [Y, X]]`, whose spectrum is that of `X + iY` with every
/// eigenvalue doubled. Complex eigenvectors are recovered from the real ones
/// and orthonormalised within each doubled pair.
pub fn herm_eig(m: &CMatrix) -> Result<EigenResult> {
    check_hermitian(m)?;
    let n = m.dim();
    let h = m.hermitized();
    let nn = 2 * n;
    let mut real = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            real[i * nn + j] = z.re;
            real[(i + n) * nn + (j + n)] = z.re;
            real[i * nn + (j + n)] = -z.im;
            real[(i + n) * nn + j] = z.im;
        }
    }
    let (vals, vecs) = jacobi_symmetric(&mut real, nn);
    let mut order: Vec<usize> = (0..nn).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));

    // sorted real eigenvalues come in doubled pairs; each pair yields one
    // complex eigenvector, the candidate that survives projection best
    let complex_of = |k: usize| -> Vec<Complex64> {
        (0..n).map(|i| Complex64::new(vecs[i * nn + k], vecs[(i + n) * nn + k])).collect()
    };
    let mut kept: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    for pair in order.chunks(2) {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for &k in pair {
            let mut c = complex_of(k);
            for _ in 0..2 {
                for u in &kept {
                    let p = cdot(u, &c);
                    for (ci, ui) in c.iter_mut().zip(u) {
                        *ci -= p * ui;
                    }
                }
            }
            let norm = cdot(&c, &c).re.sqrt();
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, c));
            }
        }
        let (norm, mut c) = best.expect("pairs are non-empty");
        if !(norm > 1e-3) {
            return Err(Error::Internal(format!("eigenvector recovery failed (residual norm {norm:e})")));
        }
        c.iter_mut().for_each(|x| *x /= norm);
        let lambda = pair.iter().map(|&k| vals[k]).sum::<f64>() / pair.len() as f64;
        kept.push(c.clone());
        pairs.push((lambda, c));
    }

    let scale = h.frobenius().max(f64::MIN_POSITIVE);
    let mut residual: f64 = 0.0;
    for (lambda, v) in &pairs {
        let av = h.mul_vec(v);
        let r = av.iter().zip(v).map(|(a, x)| (a - lambda * x).norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(r / scale);
    }
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenResult { eigenvalues, eigenvectors, residual })
}

/// Lower-triangular `L` with `A = L L^H`; `None` if `A` is not numerically
/// positive definite.
pub fn cholesky(a: &CMatrix) -> Option<CMatrix> {
    let n = a.dim();
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Solve `L X = B` for lower-triangular `L`.
fn forward_solve(l: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = l.dim();
    let mut x = b.clone();
    for col in 0..n {
        for i in 0..n {
            let mut s = x[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    x
}

/// Largest generalised eigenvalue and the regularisation it needed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenEig {
    pub value: f64,
    /// Multiple of `trace(g)/n` added to the diagonal of `g`.
    pub jitter: f64,
}

/// Largest `λ` with `m v = λ g v`.
///
/// `g + jitter·trace(g)/n·I` is Cholesky-factored, escalating the jitter by
/// ×10 up to `1e-8`. Jitter only enlarges `g`, so the result can only shrink.
pub fn gen_eig_max_detailed(m: &CMatrix, g: &CMatrix, jitter: f64) -> Result<GenEig> {
    if m.dim() != g.dim() {
        return Err(Error::Argument("pencil matrices differ in size".into()));
    }
    check_hermitian(m)?;
    check_hermitian(g)?;
    let n = g.dim();
    let base = g.trace().re / n as f64;
    if !(base > 0.0) {
        return Err(Error::Argument("g must have positive trace".into()));
    }
    let mut level = jitter.max(0.0);
    let l = loop {
        let shifted = g.hermitized().add(&CMatrix::identity(n).scaled(level * base));
        if let Some(l) = cholesky(&shifted) {
            break l;
        }
        level = if level == 0.0 { 1e-12 } else { level * 10.0 };
        if level > 1e-8 * (1.0 + 1e-9) {
            return Err(Error::Conditioning { jitter: level / 10.0 });
        }
    };
    // L^{-1} M L^{-H} = L^{-1} (L^{-1} M)^H since M is Hermitian
    let x = forward_solve(&l, &m.hermitized());
    let w = forward_solve(&l, &x.conj_transpose()).hermitized();
    let eig = herm_eig(&w)?;
    Ok(GenEig { value: *eig.eigenvalues.last().expect("n > 0"), jitter: level })
}

pub fn gen_eig_max(m: &CMatrix, g: &CMatrix, jitter: f64) -> Result<f64> {
    gen_eig_max_detailed(m, g, jitter).map(|r| r.value)
}

/// Positive-semidefiniteness verdict, relative to `|trace|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdVerdict {
    pub pass: bool,
    pub min_eigenvalue: f64,
    pub trace: f64,
    /// Eigenvector of the smallest eigenvalue, on failure.
    #[serde(skip)]
    pub witness: Option<Vec<Complex64>>,
}

pub fn psd_check(m: &CMatrix, tol_scale: f64) -> Result<PsdVerdict> {
    let eig = herm_eig(m)?;
    let trace = m.trace().re;
    let min_eigenvalue = eig.eigenvalues[0];
    let pass = min_eigenvalue >= -tol_scale * trace.abs();
    Ok(PsdVerdict {
        pass,
        min_eigenvalue,
        trace,
        witness: if pass { None } else { Some(eig.eigenvectors[0].clone()) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a.hermitized()
    }

    #[test]
    fn identity_spectrum() {
        let r = herm_eig(&CMatrix::identity(3)).unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
        assert!(r.eigenvalues.iter().all(|l| (l - 1.0).abs() < 1e-15));
        assert!(r.residual < 1e-14);
    }

    #[test]
    fn two_by_two() {
        let m = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]).unwrap();
        let r = herm_eig(&m).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_of_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = random_hermitian(50, &mut rng);
        let r = herm_eig(&m).unwrap();
        assert!(r.residual < 1e-10);
        // A = Σ λ v v^H
        let mut rec = CMatrix::zeros(50);
        for (l, v) in r.eigenvalues.iter().zip(&r.eigenvectors) {
            for i in 0..50 {
                for j in 0..50 {
                    rec[(i, j)] += *l * v[i] * v[j].conj();
                }
            }
        }
        let diff = CMatrix::from_fn(50, |i, j| rec[(i, j)] - m[(i, j)]).frobenius();
        assert!(diff <= 1e-9 * m.frobenius());
        let tr: f64 = r.eigenvalues.iter().sum();
        assert!((tr - m.trace().re).abs() <= 1e-10 * m.frobenius());
    }

    fn random_unitary(n: usize, rng: &mut impl Rng) -> Vec<Vec<Complex64>> {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        while cols.len() < n {
            let mut v: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            for _ in 0..2 {
                for u in &cols {
                    let p = cdot(u, &v);
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
                }
            }
            let norm = cdot(&v, &v).re.sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        cols
    }

    #[test]
    fn clustered_spectrum_keeps_the_top() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 40;
        let mut lambda: Vec<f64> = (0..n - 3).map(|k| 1e-14 * (1.0 + 1e-3 * k as f64)).collect();
        lambda.extend([0.5, 7.0, 40.0]);
        let u = random_unitary(n, &mut rng);
        let m = CMatrix::from_fn(n, |i, j| (0..n).map(|k| lambda[k] * u[k][i] * u[k][j].conj()).sum()).hermitized();
        let r = herm_eig(&m).unwrap();
        for (got, want) in r.eigenvalues.iter().zip(&lambda) {
            assert!((got - want).abs() < 1e-12 * 40.0, "{got} vs {want}");
        }
        assert!((r.eigenvalues[n - 1] - 40.0).abs() < 1e-11);
    }

    #[test]
    fn degenerate_spectrum_keeps_full_basis() {
        let m = CMatrix::from_real_diag(&[2.0, 2.0, 2.0, -1.0]);
        let r = herm_eig(&m).unwrap();
        assert_eq!(r.eigenvalues.len(), 4);
        assert!(r.residual < 1e-14);
        for a in 0..4 {
            for b in 0..4 {
                let d = cdot(&r.eigenvectors[a], &r.eigenvectors[b]);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((d - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn congruence_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_hermitian(12, &mut rng);
        let a = herm_eig(&m).unwrap();
        let b = herm_eig(&m.scaled(3.5)).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((3.5 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn generalized_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = CMatrix::from_fn(6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let g = b.matmul(&b.conj_transpose()).add(&CMatrix::identity(6).scaled(0.1));
        assert!((gen_eig_max(&g, &g, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!((gen_eig_max(&g.scaled(2.0), &g, 1e-12).unwrap() - 2.0).abs() < 1e-10);
        let m = CMatrix::from_real_diag(&[1.0, 5.0]);
        assert!((gen_eig_max(&m, &CMatrix::identity(2), 1e-12).unwrap() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn generalized_is_monotone_in_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let b = CMatrix::from_fn(8, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let g = b.matmul(&b.conj_transpose()).add(&CMatrix::identity(8).scaled(0.05));
            let m = random_hermitian(8, &mut rng);
            let p = CMatrix::from_fn(8, |_, _| c(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)));
            let bump = p.matmul(&p.conj_transpose());
            let before = gen_eig_max(&m, &g, 1e-12).unwrap();
            let after = gen_eig_max(&m.add(&bump), &g, 1e-12).unwrap();
            assert!(after >= before - 1e-10 * before.abs().max(1.0));
        }
    }

    #[test]
    fn singular_g_needs_jitter() {
        let ones = CMatrix::from_fn(3, |_, _| c(1.0, 0.0));
        let r = gen_eig_max_detailed(&ones, &ones, 0.0).unwrap();
        assert!(r.jitter > 0.0);
        assert!(r.value <= 1.0 + 1e-9);
    }

    #[test]
    fn hopeless_g_is_a_conditioning_error() {
        let g = CMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(gen_eig_max(&CMatrix::identity(2), &g, 1e-12), Err(Error::Conditioning { .. })));
    }

    #[test]
    fn psd_examples() {
        let m = CMatrix::from_real_diag(&[1.0, -1e-3]);
        let v = psd_check(&m, 1e-9).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        assert!(w[0].norm() < 1e-12 && (w[1].norm() - 1.0).abs() < 1e-12);
        assert!(psd_check(&CMatrix::identity(4), 1e-9).unwrap().pass);
    }
}
