//! Stationary Markov measures of finite order, used as a test family for
//! variational principles: entropy rate plus potential averages are compared
//! against pressure values.

use crate::error::{Error, Result};
use crate::symbolic::{Alphabet, LocallyConstantPotential};
use crate::transfer::SpectralData;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A stationary Markov chain of order r on the states Lambda^r. Transitions
/// go from a state to the state obtained by dropping its first symbol and
/// appending the emitted one, so the kernel is stored as one probability row
/// over symbols per state.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    alphabet: Alphabet,
    order: usize,
    /// kernel[u * q + b] = P(emit symbol b | state u)
    kernel: Vec<f64>,
    /// stationary distribution over states
    pi: Vec<f64>,
}

impl MarkovMeasure {
    /// Wrap a transition kernel given as `states x symbols` rows. Rows are
    /// renormalized exactly; the stationary vector is computed by iteration.
    pub fn new(alphabet: Alphabet, order: usize, mut kernel: Vec<f64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::Usage("markov order must be at least 1".into()));
        }
        let q = alphabet.len();
        let states = alphabet.word_count(order, 1 << 24)? as usize;
        if kernel.len() != states * q {
            return Err(Error::Format(format!(
                "kernel has {} entries, expected {}",
                kernel.len(),
                states * q
            )));
        }
        if kernel.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::Value(
                "kernel entries must be finite and nonnegative".into(),
            ));
        }
        for row in kernel.chunks_mut(q) {
            let s: f64 = row.iter().sum();
            if s <= 0.0 || s.is_nan() {
                return Err(Error::Value("kernel row with zero mass".into()));
            }
            for x in row.iter_mut() {
                *x /= s;
            }
        }
        let pi = stationary(&kernel, states, q, order)?;
        Ok(MarkovMeasure {
            alphabet,
            order,
            kernel,
            pi,
        })
    }

    /// Seeded random chain with strictly positive transitions.
    pub fn random(alphabet: Alphabet, order: usize, seed: u64) -> Result<Self> {
        let q = alphabet.len();
        let states = alphabet.word_count(order, 1 << 24)? as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel: Vec<f64> = (0..states * q).map(|_| rng.gen_range(0.02..1.0)).collect();
        MarkovMeasure::new(alphabet, order, kernel)
    }

    /// The chain induced by an equilibrium measure: states are the solved
    /// blocks, transition probabilities are ratios of cylinder measures.
    pub fn from_dgm(spec: &SpectralData) -> Result<Self> {
        let order = spec.state_len();
        let q = spec.alphabet().len();
        let states = spec.alphabet().word_count(order, 1 << 24)? as usize;
        let mut kernel = vec![0.0; states * q];
        for (rank, row) in kernel.chunks_mut(q).enumerate() {
            let u = spec.alphabet().word_from_rank(rank as u64, order);
            let mu_u = spec.dgm_cylinder(&u);
            for (b, x) in row.iter_mut().enumerate() {
                *x = spec.dgm_cylinder(&u.append(b as u8)) / mu_u;
            }
        }
        MarkovMeasure::new(spec.alphabet().clone(), order, kernel)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn stationary_vector(&self) -> &[f64] {
        &self.pi
    }

    pub fn transition(&self, state: usize, symbol: usize) -> f64 {
        self.kernel[state * self.alphabet.len() + symbol]
    }

    /// Measure of the cylinder [w] for |w| >= order.
    pub fn cylinder(&self, symbols: &[u8]) -> f64 {
        let q = self.alphabet.len();
        let r = self.order;
        debug_assert!(symbols.len() >= r);
        let mut state = symbols[..r]
            .iter()
            .fold(0usize, |acc, &s| acc * q + s as usize);
        let states = self.pi.len();
        let mut p = self.pi[state];
        for &b in &symbols[r..] {
            p *= self.kernel[state * q + b as usize];
            state = (state * q) % states + b as usize;
        }
        p
    }

    /// Entropy rate -sum_u pi_u sum_b K(u, b) log K(u, b).
    pub fn entropy_rate(&self) -> f64 {
        let q = self.alphabet.len();
        let mut h = 0.0;
        for (u, &p) in self.pi.iter().enumerate() {
            for b in 0..q {
                let k = self.kernel[u * q + b];
                if k > 0.0 {
                    h -= p * k * k.ln();
                }
            }
        }
        h
    }

    /// Average of a locally constant observable under the chain. The chain
    /// order must cover the observable memory (r >= m - 1).
    pub fn expectation(&self, pot: &LocallyConstantPotential) -> Result<f64> {
        if pot.alphabet() != &self.alphabet {
            return Err(Error::Usage(
                "observable alphabet differs from the chain alphabet".into(),
            ));
        }
        if self.order + 1 < pot.memory() {
            return Err(Error::Usage(format!(
                "chain order {} too small for observable memory {}",
                self.order,
                pot.memory()
            )));
        }
        let len = self.order + 1;
        let mut s = 0.0;
        for w in self.alphabet.words_of_length(len) {
            s += pot.eval(w.symbols()) * self.cylinder(w.symbols());
        }
        Ok(s)
    }
}

/// Stationary distribution of the state chain by power iteration.
fn stationary(kernel: &[f64], states: usize, q: usize, _order: usize) -> Result<Vec<f64>> {
    let mut pi = vec![1.0 / states as f64; states];
    let mut next = vec![0.0; states];
    for _ in 0..200_000 {
        next.iter_mut().for_each(|x| *x = 0.0);
        for u in 0..states {
            let pu = pi[u];
            let base = (u * q) % states;
            for b in 0..q {
                next[base + b] += pu * kernel[u * q + b];
            }
        }
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= s);
        let diff = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if diff < 1e-16 {
            break;
        }
    }
    // residual check: pi K = pi
    let mut res = 0.0f64;
    next.iter_mut().for_each(|x| *x = 0.0);
    for u in 0..states {
        let base = (u * q) % states;
        for b in 0..q {
            next[base + b] += pi[u] * kernel[u * q + b];
        }
    }
    for (a, b) in pi.iter().zip(&next) {
        res = res.max((a - b).abs());
    }
    if res > 1e-12 {
        return Err(Error::Numeric {
            msg: "stationary distribution iteration did not converge".into(),
            residual: res,
        });
    }
    // strictly positive kernels give strictly positive pi; degenerate chains
    // may legitimately concentrate on a sub-family of states
    if pi.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::Numeric {
            msg: "stationary distribution has an invalid component".into(),
            residual: res,
        });
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{build_transfer, solve_spectral};

    #[test]
    fn uniform_chain_entropy_is_log_q() {
        for q in 2..=4 {
            let a = Alphabet::potts(q).unwrap();
            let states = q;
            let kernel = vec![1.0 / q as f64; states * q];
            let mm = MarkovMeasure::new(a, 1, kernel).unwrap();
            assert!((mm.entropy_rate() - (q as f64).ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn stationary_vector_is_stationary_and_positive() {
        for seed in 0..20 {
            let mm = MarkovMeasure::random(Alphabet::spin(), 2, seed).unwrap();
            let pi = mm.stationary_vector();
            assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            assert!(pi.iter().all(|&p| p > 0.0));
            let q = 2;
            let states = pi.len();
            let mut img = vec![0.0; states];
            for u in 0..states {
                for b in 0..q {
                    img[(u * q) % states + b] += pi[u] * mm.transition(u, b);
                }
            }
            for (a, b) in pi.iter().zip(&img) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cylinder_probabilities_are_consistent() {
        let mm = MarkovMeasure::random(Alphabet::spin(), 1, 11).unwrap();
        // additivity over one-symbol extensions
        for w in Alphabet::spin().words_of_length(3) {
            let total: f64 = (0..2u8)
                .map(|b| {
                    let mut sym = w.symbols().to_vec();
                    sym.push(b);
                    mm.cylinder(&sym)
                })
                .sum();
            assert!((total - mm.cylinder(w.symbols())).abs() < 1e-14);
        }
    }

    #[test]
    fn expectation_order_mismatch_is_usage_error() {
        let mm = MarkovMeasure::random(Alphabet::spin(), 1, 5).unwrap();
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 3, 5).unwrap();
        assert!(matches!(mm.expectation(&pot), Err(Error::Usage(_))));
    }

    #[test]
    fn dgm_chain_reproduces_equilibrium_statistics() {
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 7).unwrap();
        let t = 0.9;
        let spec = solve_spectral(&build_transfer(&pot, t).unwrap()).unwrap();
        let mm = MarkovMeasure::from_dgm(&spec).unwrap();
        // the induced chain has the same potential average
        let e_chain = mm.expectation(&pot).unwrap();
        let e_dgm = spec.dgm_expectation(&pot).unwrap();
        assert!((e_chain - e_dgm).abs() < 1e-12);
        // and entropy + t * average equals the pressure
        let lhs = mm.entropy_rate() + t * e_chain;
        assert!((lhs - spec.pressure()).abs() < 1e-10);
    }
}
