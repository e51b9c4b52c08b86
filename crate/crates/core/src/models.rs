//! Closed-form mean-field solutions: the two-state model with its tanh fixed
//! point and the q-state model with its explicit critical-point family. These
//! serve as independent analytic oracles for the generic variational
//! machinery.

use crate::error::{Error, Result};
use crate::measure::CylinderMeasure;
use crate::symbolic::Word;

/// Tolerance for deciding that an inverse temperature sits exactly at the
/// critical point.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Two-state mean-field solution at inverse temperature beta: the
/// magnetization fixed point, the + marginal, and the limiting measure.
#[derive(Debug, Clone)]
pub struct CwSolution {
    pub beta: f64,
    /// Largest solution of xi = tanh(beta xi); zero for beta <= 1.
    pub xi: f64,
    /// Probability of the + symbol under the magnetized product measure.
    pub p_plus: f64,
    pub limit: CylinderMeasure,
}

/// Largest root of x = tanh(beta x) on (0, 1], by bisection.
fn tanh_fixed_point(beta: f64) -> f64 {
    let g = |x: f64| x - (beta * x).tanh();
    let (mut a, mut b) = (1e-12, 1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Solve the two-state model: uniform below beta = 1, a symmetric pair of
/// magnetized product measures above.
pub fn cw_solution(beta: f64) -> Result<CwSolution> {
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    let xi = if beta <= 1.0 {
        0.0
    } else {
        tanh_fixed_point(beta)
    };
    let p_plus = 0.5 * (1.0 + xi);
    let limit = if xi == 0.0 {
        CylinderMeasure::uniform(2)
    } else {
        CylinderMeasure::Mixture {
            parts: vec![
                (
                    0.5,
                    CylinderMeasure::Product {
                        weights: vec![p_plus, 1.0 - p_plus],
                    },
                ),
                (
                    0.5,
                    CylinderMeasure::Product {
                        weights: vec![1.0 - p_plus, p_plus],
                    },
                ),
            ],
        }
    };
    Ok(CwSolution {
        beta,
        xi,
        p_plus,
        limit,
    })
}

/// Pressure of the spin observable at parameter beta: log 2 + log cosh beta.
pub fn cw_pressure_closed(beta: f64) -> f64 {
    2.0f64.ln() + beta.cosh().ln()
}

/// Critical inverse temperature of the q-state model,
/// 2 (q-1) log(q-1) / (q-2).
pub fn cwp_beta_c(q: usize) -> Result<f64> {
    if q < 3 {
        return Err(Error::Usage(format!(
            "the q-state critical temperature needs q >= 3 (got {q}); q = 2 is the two-state model"
        )));
    }
    let qf = q as f64;
    Ok(2.0 * (qf - 1.0) * (qf - 1.0).ln() / (qf - 2.0))
}

/// Order parameter of the q-state model: zero below the critical point,
/// otherwise the largest root of s = (e^(beta s) - 1)/(e^(beta s) + q - 1),
/// bracketed downward from s = 1.
pub fn cwp_s(q: usize, beta: f64) -> Result<f64> {
    let beta_c = cwp_beta_c(q)?;
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    if beta < beta_c - CRITICAL_TOL {
        return Ok(0.0);
    }
    let qf = q as f64;
    let h = |s: f64| {
        let e = (beta * s).exp();
        s - (e - 1.0) / (e + qf - 1.0)
    };
    // scan down from 1 for the sign change of the decreasing crossing
    let floor = (qf - 2.0) / (qf - 1.0) - 1e-9;
    let mut b: f64 = 1.0 - 1e-12;
    let mut a: f64 = b;
    let step = 1e-3;
    loop {
        a = (a - step).max(floor);
        if h(a) < 0.0 {
            break;
        }
        if a <= floor {
            // at the critical point the root sits at the floor itself
            break;
        }
        b = a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if h(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Equilibrium measure of b * (indicator of symbol k) on q symbols:
/// the product measure weighting symbol k by e^b, so a p-cylinder gets
/// e^(b count) / (e^b + q - 1)^p.
pub fn cwp_dgm_cylinder(q: usize, b: f64, k: usize, w: &Word) -> Result<f64> {
    if k < 1 || k > q {
        return Err(Error::Usage(format!(
            "symbol index k = {k} outside 1..={q}"
        )));
    }
    if w.symbols().iter().any(|&s| s as usize >= q) {
        return Err(Error::Usage(
            "word uses symbols outside the alphabet".into(),
        ));
    }
    let count = w.symbols().iter().filter(|&&s| s as usize == k - 1).count();
    let p = w.len() as i32;
    Ok((b * count as f64).exp() / (b.exp() + q as f64 - 1.0).powi(p))
}

/// Regime of the q-state model relative to its critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwpRegime {
    Sub,
    Super,
    Critical,
}

impl CwpRegime {
    pub fn label(&self) -> &'static str {
        match self {
            CwpRegime::Sub => "sub",
            CwpRegime::Super => "super",
            CwpRegime::Critical => "critical",
        }
    }
}

fn regime(q: usize, beta: f64) -> Result<CwpRegime> {
    let beta_c = cwp_beta_c(q)?;
    if (beta - beta_c).abs() <= CRITICAL_TOL {
        Ok(CwpRegime::Critical)
    } else if beta < beta_c {
        Ok(CwpRegime::Sub)
    } else {
        Ok(CwpRegime::Super)
    }
}

/// Full q-state solution: critical data, order parameter and the limiting
/// mixture of magnetized product measures.
#[derive(Debug, Clone)]
pub struct CwpSolution {
    pub q: usize,
    pub beta: f64,
    pub beta_c: f64,
    pub s: f64,
    pub regime: CwpRegime,
    /// Mixture weights of the uniform and magnetized parts; only set at
    /// criticality.
    pub weight_a: Option<f64>,
    pub weight_b: Option<f64>,
    pub limit: CylinderMeasure,
}

/// The product measure weighting symbol k (1-based) by e^b among q symbols.
fn magnetized_product(q: usize, b: f64, k: usize) -> CylinderMeasure {
    let denom = b.exp() + q as f64 - 1.0;
    let weights = (1..=q)
        .map(|j| if j == k { b.exp() / denom } else { 1.0 / denom })
        .collect();
    CylinderMeasure::Product { weights }
}

/// Mixture constants of the critical-temperature limit.
fn critical_weights(q: usize, beta_c: f64) -> (f64, f64) {
    let qf = q as f64;
    let e = (qf - 2.0) / 2.0;
    let a = (1.0 - beta_c / (qf * (qf - 1.0))).powf(e);
    let b = (1.0 - beta_c / qf).powf(e);
    (a, b)
}

pub fn cwp_solution(q: usize, beta: f64) -> Result<CwpSolution> {
    let beta_c = cwp_beta_c(q)?;
    let reg = regime(q, beta)?;
    let s = cwp_s(q, beta)?;
    let (weight_a, weight_b, limit) = match reg {
        CwpRegime::Sub => (None, None, CylinderMeasure::uniform(q)),
        CwpRegime::Super => {
            let parts = (1..=q)
                .map(|k| (1.0 / q as f64, magnetized_product(q, beta * s, k)))
                .collect();
            (None, None, CylinderMeasure::Mixture { parts })
        }
        CwpRegime::Critical => {
            let (a, b) = critical_weights(q, beta_c);
            let total = a + q as f64 * b;
            let mut parts = vec![(a / total, CylinderMeasure::uniform(q))];
            for k in 1..=q {
                parts.push((b / total, magnetized_product(q, beta_c * s, k)));
            }
            (Some(a), Some(b), CylinderMeasure::Mixture { parts })
        }
    };
    Ok(CwpSolution {
        q,
        beta,
        beta_c,
        s,
        regime: reg,
        weight_a,
        weight_b,
        limit,
    })
}

/// Global maximizers of the mean-field free-energy landscape
/// z -> -(beta/2)|z|^2 + log sum_k e^(beta z_k) on R^q: the uniform point
/// below criticality, the q magnetized points above, all q + 1 at the
/// critical temperature.
pub fn cwp_critical_points(q: usize, beta: f64) -> Result<Vec<Vec<f64>>> {
    let reg = regime(q, beta)?;
    let s = cwp_s(q, beta)?;
    let qf = q as f64;
    let uniform = vec![1.0 / qf; q];
    let magnetized = |k: usize| -> Vec<f64> {
        (0..q)
            .map(|j| {
                if j == k {
                    (1.0 + (qf - 1.0) * s) / qf
                } else {
                    (1.0 - s) / qf
                }
            })
            .collect()
    };
    Ok(match reg {
        CwpRegime::Sub => vec![uniform],
        CwpRegime::Super => (0..q).map(magnetized).collect(),
        CwpRegime::Critical => {
            let mut pts = vec![uniform];
            pts.extend((0..q).map(magnetized));
            pts
        }
    })
}

/// Gradient of the free-energy landscape at a point, for residual checks.
pub fn cwp_gradient(q: usize, beta: f64, z: &[f64]) -> Vec<f64> {
    let denom: f64 = z.iter().map(|&zk| (beta * zk).exp()).sum();
    (0..q)
        .map(|i| -beta * z[i] + beta * (beta * z[i]).exp() / denom)
        .collect()
}

/// Which maximizer family the Hessian is requested at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwpPoint {
    /// The uniform point.
    Nu0,
    /// A magnetized point (they share their spectrum by symmetry).
    Nu1,
}

/// Eigenvalue magnitudes of the (negative-definite) free-energy Hessian at a
/// maximizer, in the closed forms used by the critical mixture weights:
/// at the uniform point beta (simple) and beta (q - beta)/q with multiplicity
/// q - 1; at a magnetized point beta, beta - beta^2 q a b, and
/// beta - beta^2 b with multiplicity q - 2, where a and b are the two
/// marginal weights.
pub fn cwp_hessian_eigs(q: usize, beta: f64, which: CwpPoint) -> Result<Vec<f64>> {
    let beta_c = cwp_beta_c(q)?;
    let qf = q as f64;
    match which {
        CwpPoint::Nu0 => {
            let mut eigs = vec![beta];
            eigs.extend(std::iter::repeat_n(beta * (qf - beta) / qf, q - 1));
            Ok(eigs)
        }
        CwpPoint::Nu1 => {
            if beta < beta_c - CRITICAL_TOL {
                return Err(Error::Usage(format!(
                    "magnetized maximizers exist only for beta >= beta_c = {beta_c}"
                )));
            }
            let s = cwp_s(q, beta)?;
            let a = (1.0 + (qf - 1.0) * s) / qf;
            let b = (1.0 - s) / qf;
            let mut eigs = vec![beta, beta - beta * beta * qf * a * b];
            eigs.extend(std::iter::repeat_n(beta - beta * beta * b, q - 2));
            Ok(eigs)
        }
    }
}

/// Limit of the finite-size Gibbs probabilities of the cylinder [w]: uniform
/// below criticality, the symmetric magnetized mixture above, and the
/// Hessian-weighted combination of both exactly at the critical point.
pub fn cwp_limit_cylinder(q: usize, beta: f64, w: &Word) -> Result<f64> {
    if w.symbols().iter().any(|&s| s as usize >= q) {
        return Err(Error::Usage(
            "word uses symbols outside the alphabet".into(),
        ));
    }
    let reg = regime(q, beta)?;
    let qf = q as f64;
    let p = w.len() as i32;
    let counts = |w: &Word| -> Vec<usize> {
        let mut c = vec![0usize; q];
        for &s in w.symbols() {
            c[s as usize] += 1;
        }
        c
    };
    match reg {
        CwpRegime::Sub => Ok(qf.powi(-p)),
        CwpRegime::Super => {
            let s = cwp_s(q, beta)?;
            let denom = (beta * s).exp() + qf - 1.0;
            let sum: f64 = counts(w).iter().map(|&l| (beta * s * l as f64).exp()).sum();
            Ok(sum / (qf * denom.powi(p)))
        }
        CwpRegime::Critical => {
            let beta_c = cwp_beta_c(q)?;
            let s = cwp_s(q, beta_c)?;
            let (a, b) = critical_weights(q, beta_c);
            let denom = (beta_c * s).exp() + qf - 1.0;
            let sum: f64 = counts(w)
                .iter()
                .map(|&l| (beta_c * s * l as f64).exp())
                .sum();
            Ok((a * qf.powi(-p) + b * sum / denom.powi(p)) / (a + qf * b))
        }
    }
}
