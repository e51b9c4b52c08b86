//! Transfer operator of a locally constant potential on the full shift,
//! realized as a nonnegative primitive matrix over block states, together
//! with its Perron data: leading eigenvalue (whose log is the pressure),
//! eigenfunction and eigenmeasure, and the cylinder evaluators built on them.
//!
//! A potential of memory m is lifted to effective memory m' = max(m, 2) so
//! that states are always the nonempty words of length m' - 1. For the
//! weighted sum over shift preimages this gives a matrix with exactly q
//! nonzero entries per row: prepend a symbol, drop the last one.

use crate::error::{Error, Result};
use crate::numerics::{logsumexp, logsumexp2};
use crate::symbolic::{Alphabet, LocallyConstantPotential, Word};

/// Default cap on the number of block states q^(m'-1).
pub const DEFAULT_STATE_CAP: usize = 4096;

/// |xi| * sup-norm beyond which the parameter is rejected outright.
const XI_RANGE_LIMIT: f64 = 1e5;

/// |xi| * sup-norm beyond which matrix applications run in log domain.
const LOG_MODE_THRESHOLD: f64 = 300.0;

const POWER_ITER_CAP: usize = 100_000;
const POWER_ITER_RTOL: f64 = 1e-14;
const RESIDUAL_LIMIT: f64 = 1e-12;

/// The transfer operator at parameter `xi`, stored structurally: the entry
/// from row state u to column state w is exp(xi * psi(a u)) when
/// w = a . (u minus its last symbol) for some symbol a, and 0 otherwise.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pot: LocallyConstantPotential, // lifted to memory state_len + 1
    xi: f64,
    state_len: usize,
    dim: usize,
    /// exp(xi * table) when in plain mode, empty in log mode
    exp_weights: Vec<f64>,
    log_mode: bool,
}

/// Build the transfer matrix for `pot` at parameter `xi` with the default
/// state cap.
pub fn build_transfer(pot: &LocallyConstantPotential, xi: f64) -> Result<TransferMatrix> {
    build_transfer_with_cap(pot, xi, DEFAULT_STATE_CAP)
}

/// Build with an explicit cap on q^(m'-1).
pub fn build_transfer_with_cap(
    pot: &LocallyConstantPotential,
    xi: f64,
    state_cap: usize,
) -> Result<TransferMatrix> {
    if !xi.is_finite() {
        return Err(Error::Range(format!("non-finite transfer parameter {xi}")));
    }
    if xi.abs() * pot.sup_norm() > XI_RANGE_LIMIT {
        return Err(Error::Range(format!(
            "|xi|*A = {:e} exceeds the exponent range limit {XI_RANGE_LIMIT:e}",
            xi.abs() * pot.sup_norm()
        )));
    }
    let m_eff = pot.memory().max(2);
    let state_len = m_eff - 1;
    let dim = pot
        .alphabet()
        .word_count(state_len, state_cap as u64)
        .map_err(|_| {
            Error::Capacity(format!(
                "q^(m'-1) states exceed the cap {state_cap} (q = {}, m' = {m_eff})",
                pot.alphabet().len()
            ))
        })? as usize;
    let pot = pot.lift(m_eff);
    let log_mode = xi.abs() * pot.sup_norm() > LOG_MODE_THRESHOLD;
    let exp_weights = if log_mode {
        Vec::new()
    } else {
        pot.table().iter().map(|&v| (xi * v).exp()).collect()
    };
    Ok(TransferMatrix {
        pot,
        xi,
        state_len,
        dim,
        exp_weights,
        log_mode,
    })
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn state_len(&self) -> usize {
        self.state_len
    }

    pub fn log_mode(&self) -> bool {
        self.log_mode
    }

    /// The lifted potential backing this matrix.
    pub fn potential(&self) -> &LocallyConstantPotential {
        &self.pot
    }

    #[inline]
    fn q(&self) -> usize {
        self.pot.alphabet().len()
    }

    /// log of the weight attached to prepending symbol `a` to row state `u`.
    #[inline]
    fn log_weight(&self, a: usize, u: usize) -> f64 {
        self.xi * self.pot.table()[a * self.dim + u]
    }

    /// Column state reached from row state `u` by prepending symbol `a`.
    #[inline]
    fn column(&self, a: usize, u: usize) -> usize {
        a * (self.dim / self.q()) + u / self.q()
    }

    /// Dense entry accessor (row u, column w); zero off the structural
    /// pattern.
    pub fn entry(&self, u: usize, w: usize) -> f64 {
        let q = self.q();
        let head = self.dim / q;
        let a = w / head;
        if w % head == u / q {
            self.log_weight(a, u).exp()
        } else {
            0.0
        }
    }

    /// out[u] = sum_a exp(xi psi(a u)) v[column(a, u)]
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        debug_assert!(!self.log_mode);
        for (u, slot) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for a in 0..self.q() {
                s += self.exp_weights[a * self.dim + u] * v[self.column(a, u)];
            }
            *slot = s;
        }
    }

    /// Transposed application: out[w] = sum over rows u feeding column w.
    pub fn apply_transpose(&self, v: &[f64], out: &mut [f64]) {
        debug_assert!(!self.log_mode);
        let q = self.q();
        let head = self.dim / q;
        for (w, slot) in out.iter_mut().enumerate() {
            // rows u = (w without its first symbol) . b for each symbol b,
            // with weight psi on the full word w . b
            let tail = (w % head) * q;
            let mut s = 0.0;
            for b in 0..q {
                s += self.exp_weights[w * q + b] * v[tail + b];
            }
            *slot = s;
        }
    }

    /// Log-domain application: out[u] = LSE_a(xi psi(a u) + v[column(a, u)]).
    pub fn log_apply(&self, v: &[f64], out: &mut [f64]) {
        for u in 0..self.dim {
            let mut s = f64::NEG_INFINITY;
            for a in 0..self.q() {
                s = logsumexp2(s, self.log_weight(a, u) + v[self.column(a, u)]);
            }
            out[u] = s;
        }
    }

    pub fn log_apply_transpose(&self, v: &[f64], out: &mut [f64]) {
        let q = self.q();
        let head = self.dim / q;
        for (w, slot) in out.iter_mut().enumerate() {
            let tail = (w % head) * q;
            let mut s = f64::NEG_INFINITY;
            for b in 0..q {
                s = logsumexp2(s, self.xi * self.pot.table()[w * q + b] + v[tail + b]);
            }
            *slot = s;
        }
    }
}

/// Perron data of a transfer matrix: leading eigenvalue, right eigenfunction
/// H, left eigenmeasure nu, and normalizations sum(nu) = 1 and
/// sum(H nu) = 1 so that H d(nu) is a probability.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pot: LocallyConstantPotential, // lifted
    xi: f64,
    state_len: usize,
    /// Leading eigenvalue; may overflow to infinity for extreme xi*A, in
    /// which case `log_lambda` stays meaningful.
    pub lambda: f64,
    /// log of the leading eigenvalue; the pressure of xi * psi.
    pub log_lambda: f64,
    /// Right Perron vector over states.
    pub h: Vec<f64>,
    /// Left Perron probability vector over states (the eigenmeasure on
    /// (m'-1)-cylinders).
    pub nu: Vec<f64>,
    log_h: Vec<f64>,
    log_nu: Vec<f64>,
    /// Power-iteration contraction ratio, a rough |lambda_2|/lambda estimate.
    pub gap: f64,
}

struct PowerOutcome {
    log_lambda: f64,
    log_vec: Vec<f64>,
    gap: f64,
    residual: f64,
}

/// Power iteration on the positive cone, in plain or log domain. Returns the
/// log eigenvalue, the log eigenvector normalized to LSE 0, the contraction
/// ratio and the final relative residual.
fn power_iterate(mat: &TransferMatrix, transpose: bool) -> Result<PowerOutcome> {
    let dim = mat.dim();
    let mut v: Vec<f64>;
    let mut w = vec![0.0; dim];
    let mut gap = 1e-16;
    let mut prev_diff = f64::INFINITY;
    if mat.log_mode() {
        v = vec![-(dim as f64).ln(); dim];
        let mut log_lambda = 0.0;
        let mut residual = f64::INFINITY;
        for _ in 0..POWER_ITER_CAP {
            if transpose {
                mat.log_apply_transpose(&v, &mut w);
            } else {
                mat.log_apply(&v, &mut w);
            }
            // log Rayleigh quotient
            let num = logsumexp(&v.iter().zip(&w).map(|(&a, &b)| a + b).collect::<Vec<_>>());
            let den = logsumexp(&v.iter().map(|&a| 2.0 * a).collect::<Vec<_>>());
            log_lambda = num - den;
            residual = v
                .iter()
                .zip(&w)
                .map(|(&lv, &lw)| ((lw - log_lambda - lv).exp() - 1.0).abs())
                .fold(0.0f64, f64::max);
            let scale = logsumexp(&w);
            for x in w.iter_mut() {
                *x -= scale;
            }
            let diff = v
                .iter()
                .zip(&w)
                .map(|(&a, &b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if prev_diff.is_finite() && prev_diff > 0.0 && diff > 0.0 {
                gap = (diff / prev_diff).clamp(1e-16, 1.0 - 1e-16);
            }
            prev_diff = diff;
            std::mem::swap(&mut v, &mut w);
            if residual <= POWER_ITER_RTOL {
                break;
            }
        }
        if residual > RESIDUAL_LIMIT {
            return Err(Error::Numeric {
                msg: format!("power iteration did not converge within {POWER_ITER_CAP} iterations"),
                residual,
            });
        }
        Ok(PowerOutcome {
            log_lambda,
            log_vec: v,
            gap,
            residual,
        })
    } else {
        v = vec![1.0 / dim as f64; dim];
        let mut lambda = 0.0;
        let mut residual = f64::INFINITY;
        for _ in 0..POWER_ITER_CAP {
            if transpose {
                mat.apply_transpose(&v, &mut w);
            } else {
                mat.apply(&v, &mut w);
            }
            let num: f64 = v.iter().zip(&w).map(|(&a, &b)| a * b).sum();
            let den: f64 = v.iter().map(|&a| a * a).sum();
            lambda = num / den;
            let vmax = v.iter().cloned().fold(0.0f64, f64::max);
            residual = v
                .iter()
                .zip(&w)
                .map(|(&a, &b)| (b - lambda * a).abs())
                .fold(0.0f64, f64::max)
                / (lambda * vmax);
            let sum: f64 = w.iter().sum();
            for x in w.iter_mut() {
                *x /= sum;
            }
            let diff = v
                .iter()
                .zip(&w)
                .map(|(&a, &b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if prev_diff.is_finite() && prev_diff > 0.0 && diff > 0.0 {
                gap = (diff / prev_diff).clamp(1e-16, 1.0 - 1e-16);
            }
            prev_diff = diff;
            std::mem::swap(&mut v, &mut w);
            if residual <= POWER_ITER_RTOL {
                break;
            }
        }
        if residual > RESIDUAL_LIMIT {
            return Err(Error::Numeric {
                msg: format!("power iteration did not converge within {POWER_ITER_CAP} iterations"),
                residual,
            });
        }
        let log_vec = v.iter().map(|&x| x.ln()).collect();
        Ok(PowerOutcome {
            log_lambda: lambda.ln(),
            log_vec,
            gap,
            residual,
        })
    }
}

/// Extract the Perron triple of a transfer matrix.
pub fn solve_spectral(mat: &TransferMatrix) -> Result<SpectralData> {
    let right = power_iterate(mat, false)?;
    let left = power_iterate(mat, true)?;
    let log_lambda = right.log_lambda;

    // nu normalized to a probability, then H against nu
    let mut log_nu = left.log_vec;
    let nu_scale = logsumexp(&log_nu);
    for x in log_nu.iter_mut() {
        *x -= nu_scale;
    }
    let mut log_h = right.log_vec;
    let c = logsumexp(
        &log_h
            .iter()
            .zip(&log_nu)
            .map(|(&a, &b)| a + b)
            .collect::<Vec<_>>(),
    );
    for x in log_h.iter_mut() {
        *x -= c;
    }
    let h: Vec<f64> = log_h.iter().map(|&x| x.exp()).collect();
    let nu: Vec<f64> = log_nu.iter().map(|&x| x.exp()).collect();
    if log_h.iter().chain(&log_nu).any(|x| !x.is_finite()) {
        return Err(Error::Numeric {
            msg: "Perron vector has a non-finite component".into(),
            residual: right.residual.max(left.residual),
        });
    }
    Ok(SpectralData {
        pot: mat.potential().clone(),
        xi: mat.xi(),
        state_len: mat.state_len(),
        lambda: log_lambda.exp(),
        log_lambda,
        h,
        nu,
        log_h,
        log_nu,
        gap: right.gap.max(left.gap),
    })
}

/// Pressure of t * psi: the log of the leading transfer eigenvalue.
pub fn pressure(pot: &LocallyConstantPotential, t: f64) -> Result<f64> {
    Ok(solve_spectral(&build_transfer(pot, t)?)?.log_lambda)
}

impl SpectralData {
    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn state_len(&self) -> usize {
        self.state_len
    }

    /// Effective memory m' of the lifted potential.
    pub fn memory(&self) -> usize {
        self.state_len + 1
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pot.alphabet()
    }

    /// The lifted potential this data was solved for.
    pub fn potential(&self) -> &LocallyConstantPotential {
        &self.pot
    }

    /// The pressure log(lambda).
    pub fn pressure(&self) -> f64 {
        self.log_lambda
    }

    #[inline]
    fn state_rank(&self, block: &[u8]) -> usize {
        let q = self.pot.alphabet().len();
        block.iter().fold(0usize, |r, &s| r * q + s as usize)
    }

    /// log of the eigenmeasure of the cylinder [w].
    fn log_conformal(&self, w: &Word) -> f64 {
        let sym = w.symbols();
        let n = sym.len();
        let sl = self.state_len;
        let m_eff = sl + 1;
        if n >= sl {
            let terms = n - sl;
            let mut s = 0.0;
            for i in 0..terms {
                s += self.pot.eval(&sym[i..i + m_eff]);
            }
            let tail = self.state_rank(&sym[n - sl..]);
            -(terms as f64) * self.log_lambda + self.xi * s + self.log_nu[tail]
        } else {
            // sum of nu over all states extending w; the states with prefix w
            // form a contiguous rank block
            let q = self.pot.alphabet().len();
            let free = q.pow((sl - n) as u32);
            let base = self.state_rank(sym) * free;
            logsumexp(&self.log_nu[base..base + free])
        }
    }

    /// Eigenmeasure (conformal measure) of the cylinder [w].
    pub fn conformal_cylinder(&self, w: &Word) -> f64 {
        self.log_conformal(w).exp()
    }

    /// log of the eigenmeasure of [w]; stays finite when the probability
    /// itself underflows at extreme parameters.
    pub fn log_conformal_cylinder(&self, w: &Word) -> f64 {
        self.log_conformal(w)
    }

    /// Equilibrium measure H d(nu) of the cylinder [w]; shift invariant.
    pub fn dgm_cylinder(&self, w: &Word) -> f64 {
        let sym = w.symbols();
        let n = sym.len();
        let sl = self.state_len;
        if n >= sl {
            let head = self.state_rank(&sym[..sl]);
            (self.log_h[head] + self.log_conformal(w)).exp()
        } else {
            let q = self.pot.alphabet().len();
            let free = q.pow((sl - n) as u32);
            let base = self.state_rank(sym) * free;
            let terms: Vec<f64> = (base..base + free)
                .map(|s| self.log_h[s] + self.log_nu[s])
                .collect();
            logsumexp(&terms).exp()
        }
    }

    /// Integral of a locally constant observable against the equilibrium
    /// measure, summed exactly over cylinders of the joint memory length.
    pub fn dgm_expectation(&self, g: &LocallyConstantPotential) -> Result<f64> {
        if g.alphabet() != self.pot.alphabet() {
            return Err(Error::Usage(
                "observable alphabet differs from the potential alphabet".into(),
            ));
        }
        let len = g.memory().max(self.memory());
        self.pot.alphabet().word_count(len, 1 << 26)?;
        let mut s = 0.0;
        for w in self.pot.alphabet().words_of_length(len) {
            s += g.eval(w.symbols()) * self.dgm_cylinder(&w);
        }
        Ok(s)
    }

    /// Mean of the eigenfunction H under the uniform product measure.
    pub fn mean_h_uniform(&self) -> f64 {
        self.h.iter().sum::<f64>() / self.h.len() as f64
    }

    /// log of the eigenfunction, finite even when the linear entries
    /// under- or overflow at extreme parameters.
    pub fn log_h(&self) -> &[f64] {
        &self.log_h
    }

    /// log of the eigenmeasure over states.
    pub fn log_nu(&self) -> &[f64] {
        &self.log_nu
    }
}
