//! Gauss-Jacobi quadrature on [0, 1].
//!
//! Nodes and weights come from the Golub-Welsch eigenproblem of the Jacobi
//! matrix, solved with implicit QL while tracking only the first component
//! of each eigenvector. Weights are returned normalized to unit mass, so a
//! rule for `t^alpha (1-t)^beta` integrates against the Beta(alpha+1, beta+1)
//! probability density and no Gamma function is ever evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub node_count: usize,
    /// Kernel exponents within this distance of -1 are treated as the
    /// degenerate point-mass limit.
    pub absolute_tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            node_count: 80,
            absolute_tolerance: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(Error::ParameterDomain(format!(
                "quadrature node count {} < 2",
                self.node_count
            )));
        }
        if !(self.absolute_tolerance > 0.0) {
            return Err(Error::ParameterDomain(
                "quadrature tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Smallest node count that integrates polynomials of degree `deg` exactly.
    pub fn nodes_for_degree(deg: usize) -> usize {
        deg / 2 + 1
    }
}

/// A Gauss rule for the normalized weight `t^alpha (1-t)^beta` on [0, 1].
#[derive(Debug, Clone)]
pub struct GaussJacobiRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussJacobiRule {
    pub fn new(node_count: usize, alpha: f64, beta: f64) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::ParameterDomain("empty quadrature rule".into()));
        }
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InternalInvariant(format!(
                "Jacobi exponents must exceed -1 (got alpha={alpha}, beta={beta})"
            )));
        }
        // On [-1, 1] with y = 2t - 1 the weight is (1-y)^beta (1+y)^alpha.
        let (ja, jb) = (beta, alpha);
        let s = ja + jb;
        let n = node_count;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n];
        diag[0] = (jb - ja) / (s + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let two_k_s = 2.0 * kf + s;
            diag[k] = (jb * jb - ja * ja) / (two_k_s * (two_k_s + 2.0));
        }
        for k in 1..n {
            let kf = k as f64;
            let two_k_s = 2.0 * kf + s;
            let b2 = if k == 1 {
                // the (s + 1) factor cancels analytically
                4.0 * (1.0 + ja) * (1.0 + jb) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                4.0 * kf * (kf + ja) * (kf + jb) * (kf + s)
                    / (two_k_s * two_k_s * (two_k_s + 1.0) * (two_k_s - 1.0))
            };
            off[k - 1] = b2.sqrt();
        }
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        tridiagonal_ql(&mut diag, &mut off, &mut first)?;

        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(&first)
            .map(|(&y, &z)| (0.5 * (y + 1.0), z * z))
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(GaussJacobiRule {
            nodes: pairs.iter().map(|p| p.0.clamp(0.0, 1.0)).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }

    /// Gauss-Legendre on [0, 1], weights summing to 1.
    pub fn legendre(node_count: usize) -> Result<Self> {
        Self::new(node_count, 0.0, 0.0)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Normalized integral of `h` against the rule's weight.
    pub fn integrate<F>(&self, mut h: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut acc = 0.0;
        let mut mass = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * h(t)?;
            mass += w;
        }
        Ok(acc / mass)
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `diag` holds the diagonal, `off[i]` couples rows `i` and `i+1` (the last
/// entry is ignored), and `z` is rotated alongside so that on return it holds
/// the first row of the eigenvector matrix when it started as `e_0`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NumericalConsistency(
                    "QL iteration did not converge".into(),
                ));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Composite Gauss-Legendre over [0, 1] with equal panels.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(panels: usize, points_per_panel: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::ParameterDomain("composite rule needs a panel".into()));
        }
        let base = GaussJacobiRule::legendre(points_per_panel)?;
        let h = 1.0 / panels as f64;
        let mut nodes = Vec::with_capacity(panels * points_per_panel);
        let mut weights = Vec::with_capacity(panels * points_per_panel);
        for p in 0..panels {
            let left = p as f64 * h;
            for (&t, &w) in base.nodes().iter().zip(base.weights()) {
                nodes.push(left + h * t);
                weights.push(h * w);
            }
        }
        Ok(CompositeRule { nodes, weights })
    }

    /// Integral of `h` over [0, 1], summed with Neumaier compensation.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut h: F) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let term = w * h(t);
            let next = sum + term;
            comp += if sum.abs() >= term.abs() { (sum - next) + term } else { (term - next) + sum };
            sum = next;
        }
        sum + comp
    }
}

impl Default for CompositeRule {
    fn default() -> Self {
        CompositeRule::new(256, 8).expect("static rule")
    }
}
