//! First modulus of continuity on a uniform grid and its least concave
//! majorant.

use crate::error::{Error, Result};
use crate::operator::Function;

pub const DEFAULT_GRID: usize = 1024;

/// Samples `f(i/N)`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_function(f: &Function, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("grid size N={n} must be at least 2")));
        }
        let values = (0..=n).map(|i| f.try_eval(i as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { values })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Precondition("a grid function needs at least 3 samples".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!("non-finite sample {v}")));
        }
        Ok(GridFunction { values })
    }

    /// Number of grid intervals N.
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `omega[j]` is the largest `|f_i - f_k|` over index pairs with `|i - k| <= j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusCurve {
    omega: Vec<f64>,
}

impl ModulusCurve {
    pub fn intervals(&self) -> usize {
        self.omega.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.omega
    }

    pub fn t(&self, j: usize) -> f64 {
        j as f64 / self.intervals() as f64
    }
}

/// Sliding-window oscillation for every window length.
///
/// `hi[i]` and `lo[i]` hold the max and min of the window starting at `i`;
/// growing every window by one sample per step costs O(N) per length.
pub fn modulus_curve(f: &GridFunction) -> ModulusCurve {
    let v = &f.values;
    let n = v.len() - 1;
    let mut hi = v.clone();
    let mut lo = v.clone();
    let mut omega = vec![0.0f64; n + 1];
    for j in 1..=n {
        let mut best = omega[j - 1];
        for i in 0..=n - j {
            let next = v[i + j];
            if next > hi[i] {
                hi[i] = next;
            }
            if next < lo[i] {
                lo[i] = next;
            }
            best = best.max(hi[i] - lo[i]);
        }
        omega[j] = best;
    }
    ModulusCurve { omega }
}

/// Upper concave envelope of a modulus curve, as hull vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveMajorant {
    /// Grid indices and values of the hull vertices, increasing in index.
    vertices: Vec<(usize, f64)>,
    omega: Vec<f64>,
}

impl ConcaveMajorant {
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let n = self.intervals() as f64;
        self.vertices.iter().map(|&(j, w)| (j as f64 / n, w)).collect()
    }

    pub fn vertex_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().map(|v| v.0)
    }

    pub fn intervals(&self) -> usize {
        self.omega.len() - 1
    }

    /// Value at `t >= 0`, constant past `t = 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("majorant argument t={t} must be >= 0")));
        }
        let n = self.intervals();
        if t >= 1.0 {
            return Ok(self.vertices.last().expect("hull is non-empty").1);
        }
        let s = t * n as f64;
        let k = self.vertices.partition_point(|&(j, _)| (j as f64) <= s);
        let (ja, wa) = self.vertices[k - 1];
        if ja as f64 == s {
            return Ok(wa);
        }
        let (jb, wb) = self.vertices[k];
        let value = wa + (wb - wa) * ((s - ja as f64) / (jb - ja) as f64);
        // rounding guard for grid nodes on merged collinear segments
        let j = s.round();
        if j == s {
            return Ok(value.max(self.omega[j as usize]));
        }
        Ok(value)
    }
}

/// Monotone-chain upper hull of `(j, omega_j)`; collinear points are merged.
pub fn least_concave_majorant(c: &ModulusCurve) -> ConcaveMajorant {
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for (j, &w) in c.omega.iter().enumerate() {
        while hull.len() >= 2 {
            let (jo, wo) = hull[hull.len() - 2];
            let (ja, wa) = hull[hull.len() - 1];
            let cross = (ja - jo) as f64 * (w - wo) - (wa - wo) * (j - jo) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((j, w));
    }
    ConcaveMajorant { vertices: hull, omega: c.omega.clone() }
}

pub fn eval_majorant(m: &ConcaveMajorant, t: f64) -> Result<f64> {
    m.eval(t)
}

/// Samples `f` on an `n`-interval grid and returns its majorant.
pub fn majorant_of(f: &Function, n: usize) -> Result<ConcaveMajorant> {
    Ok(least_concave_majorant(&modulus_curve(&GridFunction::from_function(f, n)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(v: &[f64]) -> Vec<f64> {
        let n = v.len() - 1;
        (0..=n)
            .map(|j| {
                let mut best: f64 = 0.0;
                for i in 0..=n {
                    for k in i..=(i + j).min(n) {
                        best = best.max((v[i] - v[k]).abs());
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn constant_and_linear() {
        let c = modulus_curve(&GridFunction::from_function(&Function::constant(3.0), 16).unwrap());
        assert!(c.values().iter().all(|&w| w == 0.0));
        let n = 64;
        let c = modulus_curve(&GridFunction::from_function(&Function::e1(), n).unwrap());
        for (j, w) in c.values().iter().enumerate() {
            assert!((w - j as f64 / n as f64).abs() < 1e-15);
        }
        let m = least_concave_majorant(&c);
        assert_eq!(m.vertices(), vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(m.eval(0.5).unwrap(), 0.5);
        assert_eq!(m.eval(0.0).unwrap(), 0.0);
        assert_eq!(m.eval(1.5).unwrap(), 1.0);
        assert!(matches!(m.eval(-0.1), Err(Error::Domain(_))));
        assert!(m.eval(f64::NAN).is_err());
    }

    #[test]
    fn abs_kink_matches_brute_force() {
        let n = 64;
        let f = Function::new(|x| (x - 0.5).abs());
        let g = GridFunction::from_function(&f, n).unwrap();
        let c = modulus_curve(&g);
        assert_eq!(c.values(), brute_force(g.values()).as_slice());
        for (j, w) in c.values().iter().enumerate() {
            assert!((w - (j as f64 / n as f64).min(0.5)).abs() < 1e-15);
        }
        let m = least_concave_majorant(&c);
        assert_eq!(m.vertices(), vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.5)]);
        assert!((m.eval(0.25).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn random_samples_match_brute_force() {
        let v: Vec<f64> = (0..40).map(|i| ((i * 7919) % 31) as f64 / 7.0 - (i as f64).sin()).collect();
        let g = GridFunction::from_values(v.clone()).unwrap();
        assert_eq!(modulus_curve(&g).values(), brute_force(&v).as_slice());
    }

    #[test]
    fn majorant_properties_on_wiggly_function() {
        let f = Function::new(|x| (9.0 * x).sin() + 0.3 * (x - 0.3).abs());
        let c = modulus_curve(&GridFunction::from_function(&f, 256).unwrap());
        let m = least_concave_majorant(&c);
        let w = c.values();
        for j in 0..=256 {
            let t = c.t(j);
            let v = m.eval(t).unwrap();
            assert!(v >= w[j]);
            if j > 0 {
                assert!(v <= 2.0 * w[j] + 1e-12);
            }
        }
        for j in m.vertex_indices() {
            assert_eq!(m.eval(c.t(j)).unwrap(), w[j]);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFunction::from_function(&Function::e1(), 1).is_err());
        assert!(GridFunction::from_values(vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(GridFunction::from_function(&Function::new(|x| 1.0 / x), 8).is_err());
    }
}
