//! Ground truth from explicit random matrices: entrywise GUE construction and
//! a small dense Hermitian eigensolver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub const MAX_ORACLE_N: usize = 64;
const MAX_SWEEPS: usize = 100;

/// Normalization of the ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Weight `e^{-tr H^2 / 2}`; spectrum on about `[-2 sqrt n, 2 sqrt n]`.
    #[default]
    Unscaled,
    /// Weight `e^{-(n/2) tr H^2}`; spectrum on about `[-2, 2]`.
    Intro,
}

impl Convention {
    /// Factor that maps unscaled eigenvalues to this convention.
    pub fn scale(self, n: usize) -> f64 {
        match self {
            Convention::Unscaled => 1.0,
            Convention::Intro => 1.0 / (n as f64).sqrt(),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Unscaled => "unscaled",
            Convention::Intro => "intro",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unscaled" => Ok(Convention::Unscaled),
            "intro" => Ok(Convention::Intro),
            other => Err(Error::param(format!("convention must be 'unscaled' or 'intro', got '{other}'"))),
        }
    }
}

/// Dense Hermitian matrix stored as real and imaginary parts, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl HermitianMatrix {
    /// Builds from the upper triangle (including the diagonal) of `re` and
    /// `im`; the lower triangle is filled by conjugation and the diagonal
    /// imaginary part is dropped.
    pub fn from_upper(n: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != n * n || im.len() != n * n {
            return Err(Error::param(format!("expected {} entries per part", n * n)));
        }
        let mut m = HermitianMatrix { n, re: re.to_vec(), im: im.to_vec() };
        for i in 0..n {
            m.im[i * n + i] = 0.0;
            for j in i + 1..n {
                m.re[j * n + i] = m.re[i * n + j];
                m.im[j * n + i] = -m.im[i * n + j];
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut re = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            re[i * n + i] = v;
        }
        HermitianMatrix { n, re, im: vec![0.0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` as `(re, im)`.
    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[i * self.n + j], self.im[i * self.n + j])
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.re[i * self.n + i]).sum()
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            self.im[i * n + i] == 0.0
                && (0..n).all(|j| self.re[i * n + j] == self.re[j * n + i] && self.im[i * n + j] == -self.im[j * n + i])
        })
    }

    fn scale(&mut self, factor: f64) {
        self.re.iter_mut().for_each(|v| *v *= factor);
        self.im.iter_mut().for_each(|v| *v *= factor);
    }
}

/// GUE matrix drawn entrywise: unit-variance real diagonal, off-diagonal real
/// and imaginary parts of variance 1/2 each (unscaled), all divided by
/// `sqrt(n)` in the intro convention.
pub fn sample_gue_matrix(n: usize, convention: Convention, stream: &mut RandomStream) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::param("matrix dimension must be at least 1"));
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for i in 0..n {
        re[i * n + i] = stream.standard_normal();
        for j in i + 1..n {
            re[i * n + j] = half * stream.standard_normal();
            im[i * n + j] = half * stream.standard_normal();
        }
    }
    let mut m = HermitianMatrix::from_upper(n, &re, &im)?;
    if convention == Convention::Intro {
        m.scale(convention.scale(n));
    }
    Ok(m)
}

/// Eigenvalues in ascending order.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled; cyclic Jacobi
/// sweeps diagonalize it and each doubled pair is averaged.
pub fn eigenvalues_small(matrix: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = matrix.n;
    if n > MAX_ORACLE_N {
        return Err(Error::param(format!("oracle eigensolver is limited to n <= {MAX_ORACLE_N}, got {n}")));
    }
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = matrix.get(i, j);
            a[i * m + j] = re;
            a[(i + n) * m + (j + n)] = re;
            a[i * m + (j + n)] = -im;
            a[(i + n) * m + j] = im;
        }
    }
    let mut doubled = jacobi_eigenvalues(&mut a, m)?;
    doubled.sort_by(f64::total_cmp);
    Ok(doubled.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect())
}

fn jacobi_eigenvalues(a: &mut [f64], m: usize) -> Result<Vec<f64>> {
    let frob: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = 1e-15 * frob.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..m)
            .flat_map(|p| (p + 1..m).map(move |q| (p, q)))
            .map(|(p, q)| a[p * m + q] * a[p * m + q])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            return Ok((0..m).map(|i| a[i * m + i]).collect());
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Numerical(format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")))
}

/// Numerical maximum of `prod_{i<j} (x_j - x_i)` over `0 = x_1 < ... < x_n = 1`:
/// an exhaustive grid over the interior points, then coordinate-wise
/// golden-section polishing. Exponential in `n`; meant for `n <= 6`.
pub fn vandermonde_max_search(n: usize) -> Result<f64> {
    if !(2..=6).contains(&n) {
        return Err(Error::param(format!("search is limited to 2 <= n <= 6, got {n}")));
    }
    let interior = n - 2;
    let objective = |inner: &[f64]| -> f64 {
        let mut pts = vec![0.0];
        pts.extend_from_slice(inner);
        pts.push(1.0);
        let mut log_prod = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let gap = pts[j] - pts[i];
                if gap <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                log_prod += gap.ln();
            }
        }
        log_prod
    };
    let steps = 60;
    let mut best = vec![0.0; interior];
    let mut best_val = objective(&best);
    let mut idx = vec![1usize; interior];
    while !idx.is_empty() {
        let cand: Vec<f64> = idx.iter().map(|&i| i as f64 / steps as f64).collect();
        let v = objective(&cand);
        if v > best_val {
            best_val = v;
            best = cand;
        }
        let mut d = 0;
        while d < interior {
            idx[d] += 1;
            if idx[d] < steps {
                break;
            }
            idx[d] = 1;
            d += 1;
        }
        if d == interior {
            break;
        }
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        for d in 0..interior {
            let mut lo = if d == 0 { 0.0 } else { best[d - 1] };
            let mut hi = if d + 1 == interior { 1.0 } else { best[d + 1] };
            let eval = |t: f64, best: &[f64]| {
                let mut c = best.to_vec();
                c[d] = t;
                objective(&c)
            };
            for _ in 0..100 {
                let a = hi - g * (hi - lo);
                let b = lo + g * (hi - lo);
                if eval(a, &best) > eval(b, &best) {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            best[d] = 0.5 * (lo + hi);
        }
    }
    Ok(objective(&best).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_two_sample, Moments};

    #[test]
    fn diagonal_matrix() {
        let ev = eigenvalues_small(&HermitianMatrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let mut s = RandomStream::new(10);
        for _ in 0..200 {
            let (a, b, c, d) = (s.standard_normal(), s.standard_normal(), s.standard_normal(), s.standard_normal());
            let m = HermitianMatrix::from_upper(2, &[a, b, 0.0, d], &[0.0, c, 0.0, 0.0]).unwrap();
            let ev = eigenvalues_small(&m).unwrap();
            let r = (((a - d) / 2.0).powi(2) + b * b + c * c).sqrt();
            assert!((ev[0] - ((a + d) / 2.0 - r)).abs() < 1e-12);
            assert!((ev[1] - ((a + d) / 2.0 + r)).abs() < 1e-12);
        }
    }

    #[test]
    fn spectra_sum_to_trace_and_matrices_are_hermitian() {
        let mut s = RandomStream::new(11);
        for n in [1usize, 2, 5, 16, 40] {
            let m = sample_gue_matrix(n, Convention::Unscaled, &mut s).unwrap();
            assert!(m.is_hermitian());
            let ev = eigenvalues_small(&m).unwrap();
            assert_eq!(ev.len(), n);
            let radius = ev.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!((ev.iter().sum::<f64>() - m.trace()).abs() < 1e-10 * radius.max(1.0));
            assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        }
        let big = HermitianMatrix::diagonal(&vec![0.0; 65]);
        assert!(eigenvalues_small(&big).is_err());
    }

    #[test]
    fn n_one_is_standard_normal() {
        let mut a = RandomStream::new(12);
        let mut b = RandomStream::new(12);
        let m = sample_gue_matrix(1, Convention::Unscaled, &mut a).unwrap();
        assert_eq!(m.get(0, 0), (b.standard_normal(), 0.0));
    }

    #[test]
    fn trace_variance_is_n() {
        let mut s = RandomStream::new(13);
        let traces: Vec<f64> = (0..100_000)
            .map(|_| sample_gue_matrix(4, Convention::Unscaled, &mut s).unwrap().trace())
            .collect();
        let m = Moments::of(&traces);
        assert!((m.variance - 4.0).abs() < 3.0 * m.variance_stderr, "{m:?}");
    }

    #[test]
    fn intro_convention_is_rescaled_unscaled() {
        let n = 5;
        let mut a = RandomStream::new(14);
        let mut b = RandomStream::new(15);
        let mut unscaled = Vec::new();
        let mut intro = Vec::new();
        for _ in 0..10_000 {
            let u = eigenvalues_small(&sample_gue_matrix(n, Convention::Unscaled, &mut a).unwrap()).unwrap();
            unscaled.extend(u.iter().map(|v| v / (n as f64).sqrt()));
            intro.extend(eigenvalues_small(&sample_gue_matrix(n, Convention::Intro, &mut b).unwrap()).unwrap());
        }
        assert!(ks_two_sample(&unscaled, &intro).unwrap().passes(0.01));
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("intro".parse::<Convention>().unwrap(), Convention::Intro);
        assert!("scaled".parse::<Convention>().is_err());
        assert_eq!(Convention::Intro.scale(4), 0.5);
    }
}
