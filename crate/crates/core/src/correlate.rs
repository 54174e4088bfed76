//! Periodic and aperiodic ambiguity functions, autocorrelations, and the
//! PSL/ISL sidelobe metrics.
//!
//! Conventions (0-based, `ω = e^{-2πi/n}`):
//!
//! * periodic:  `A_p[k, ℓ] = (1/n) Σ_j x_{(j+k) mod n} · conj(x_j) · ω^{jℓ}`
//! * aperiodic: `A_a[k, ℓ] = Σ_{j=0}^{n-1-k} x_{j+k} · conj(x_j) · ω^{jℓ}`
//!
//! The autocorrelations are the `ℓ = 0` columns. Both the direct sums and
//! FFT-based evaluations are available through [`Method`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::seq::ComplexSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Explicit double (or triple, for grids) loops.
    Direct,
    Fft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// Cyclic indexing, `1/n` normalization.
    Periodic,
    /// Zero extension, unnormalized.
    Aperiodic,
}

impl GridKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridKind::Periodic => "periodic",
            GridKind::Aperiodic => "aperiodic",
        }
    }
}

impl std::str::FromStr for GridKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "periodic" => Ok(GridKind::Periodic),
            "aperiodic" => Ok(GridKind::Aperiodic),
            other => Err(format!("unknown grid kind '{other}' (expected periodic or aperiodic)")),
        }
    }
}

/// `n × n` ambiguity values, row `k` = time shift, column `ℓ` = frequency shift.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbiguityGrid {
    n: usize,
    kind: GridKind,
    values: Vec<Complex64>,
}

impl AmbiguityGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.values[k * self.n + l]
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.n..(k + 1) * self.n]
    }

    /// The `ℓ = 0` column.
    pub fn zero_doppler(&self) -> Vec<Complex64> {
        (0..self.n).map(|k| self.get(k, 0)).collect()
    }

    /// `|A[k, ℓ]| / |A[0, 0]|`, row-major. An all-zero grid is returned as is.
    pub fn normalized_magnitudes(&self) -> Vec<f64> {
        let peak = self.values[0].norm();
        let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
        self.values.iter().map(|z| z.norm() * scale).collect()
    }

    /// Largest normalized magnitude away from `(0, 0)`.
    pub fn max_off_origin(&self) -> f64 {
        self.normalized_magnitudes().into_iter().skip(1).fold(0.0, f64::max)
    }

    /// `Σ |A[k, ℓ]|²` over the whole grid.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidelobeMetrics {
    pub psl: f64,
    pub isl: f64,
}

/// `e^{-2πi m/n}` for `m = 0..n`.
fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n).map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 / n as f64)).collect()
}

pub fn periodic_autocorrelation(x: &ComplexSeq) -> Vec<Complex64> {
    periodic_autocorrelation_with(x, Method::Direct)
}

pub fn periodic_autocorrelation_with(x: &ComplexSeq, method: Method) -> Vec<Complex64> {
    let n = x.len();
    let xs = x.entries();
    let inv_n = 1.0 / n as f64;
    match method {
        Method::Direct => (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += xs[(j + k) % n] * xs[j].conj();
                }
                acc * inv_n
            })
            .collect(),
        Method::Fft => {
            let mut planner = FftPlanner::new();
            let mut buf = xs.to_vec();
            planner.plan_fft_forward(n).process(&mut buf);
            // |X_m|² transforms back to n·Σ_j x_{j+k} conj(x_j).
            for z in buf.iter_mut() {
                *z = Complex64::new(z.norm_sqr(), 0.0);
            }
            planner.plan_fft_inverse(n).process(&mut buf);
            let scale = inv_n * inv_n;
            buf.into_iter().map(|z| z * scale).collect()
        }
    }
}

pub fn aperiodic_autocorrelation(x: &ComplexSeq) -> Vec<Complex64> {
    aperiodic_autocorrelation_with(x, Method::Direct)
}

pub fn aperiodic_autocorrelation_with(x: &ComplexSeq, method: Method) -> Vec<Complex64> {
    let n = x.len();
    let xs = x.entries();
    match method {
        Method::Direct => (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n - k {
                    acc += xs[j + k] * xs[j].conj();
                }
                acc
            })
            .collect(),
        Method::Fft => {
            let size = (2 * n - 1).next_power_of_two();
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            buf[..n].copy_from_slice(xs);
            let mut planner = FftPlanner::new();
            planner.plan_fft_forward(size).process(&mut buf);
            for z in buf.iter_mut() {
                *z = Complex64::new(z.norm_sqr(), 0.0);
            }
            planner.plan_fft_inverse(size).process(&mut buf);
            let scale = 1.0 / size as f64;
            buf.into_iter().take(n).map(|z| z * scale).collect()
        }
    }
}

pub fn periodic_ambiguity(x: &ComplexSeq) -> AmbiguityGrid {
    ambiguity(x, GridKind::Periodic, Method::Fft)
}

pub fn periodic_ambiguity_with(x: &ComplexSeq, method: Method) -> AmbiguityGrid {
    ambiguity(x, GridKind::Periodic, method)
}

pub fn aperiodic_ambiguity(x: &ComplexSeq) -> AmbiguityGrid {
    ambiguity(x, GridKind::Aperiodic, Method::Fft)
}

pub fn aperiodic_ambiguity_with(x: &ComplexSeq, method: Method) -> AmbiguityGrid {
    ambiguity(x, GridKind::Aperiodic, method)
}

pub fn ambiguity(x: &ComplexSeq, kind: GridKind, method: Method) -> AmbiguityGrid {
    let n = x.len();
    let xs = x.entries();
    let zero = Complex64::new(0.0, 0.0);
    let scale = match kind {
        GridKind::Periodic => 1.0 / n as f64,
        GridKind::Aperiodic => 1.0,
    };
    let lag_product = |k: usize, j: usize| -> Complex64 {
        match kind {
            GridKind::Periodic => xs[(j + k) % n] * xs[j].conj(),
            GridKind::Aperiodic if j + k < n => xs[j + k] * xs[j].conj(),
            GridKind::Aperiodic => zero,
        }
    };

    let mut values = vec![zero; n * n];
    match method {
        Method::Direct => {
            let roots = twiddles(n);
            for k in 0..n {
                for l in 0..n {
                    let mut acc = zero;
                    for j in 0..n {
                        acc += lag_product(k, j) * roots[(j * l) % n];
                    }
                    values[k * n + l] = acc * scale;
                }
            }
        }
        Method::Fft => {
            let fft = FftPlanner::new().plan_fft_forward(n);
            let mut scratch = vec![zero; fft.get_inplace_scratch_len()];
            for (k, row) in values.chunks_exact_mut(n).enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = lag_product(k, j);
                }
                fft.process_with_scratch(row, &mut scratch);
                for v in row.iter_mut() {
                    *v *= scale;
                }
            }
        }
    }
    AmbiguityGrid { n, kind, values }
}

/// PSL and ISL of the aperiodic autocorrelation, normalized by `|A_a[0]|`.
pub fn sidelobe_metrics(x: &ComplexSeq) -> SidelobeMetrics {
    let acf = aperiodic_autocorrelation(x);
    let peak = acf[0].norm();
    let max_side = acf.iter().skip(1).map(|z| z.norm()).fold(0.0, f64::max);
    let side_energy: f64 = acf.iter().skip(1).map(|z| z.norm_sqr()).sum();
    SidelobeMetrics { psl: max_side / peak, isl: side_energy / (peak * peak) }
}
