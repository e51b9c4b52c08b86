//! Cylinder measures: probability assignments on finite words that are
//! additive under extension. Product measures, spectral measures backed by
//! Perron data, and finite mixtures.

use crate::error::{Error, Result};
use crate::symbolic::Word;
use crate::transfer::SpectralData;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum CylinderMeasure {
    /// Product measure with one weight per symbol.
    Product { weights: Vec<f64> },
    /// Eigenmeasure (conformal) or equilibrium measure of a solved transfer
    /// operator.
    Spectral {
        data: Arc<SpectralData>,
        /// when set, evaluate the equilibrium measure H d(nu) instead of nu
        dgm: bool,
    },
    /// Convex combination of measures.
    Mixture { parts: Vec<(f64, CylinderMeasure)> },
}

impl CylinderMeasure {
    /// Uniform product measure on q symbols.
    pub fn uniform(q: usize) -> Self {
        CylinderMeasure::Product {
            weights: vec![1.0 / q as f64; q],
        }
    }

    pub fn product(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Usage("product measure needs q >= 2 weights".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::Value(
                "product weights must be finite and >= 0".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Value(format!(
                "product weights sum to {sum}, expected 1"
            )));
        }
        Ok(CylinderMeasure::Product { weights })
    }

    pub fn spectral(data: Arc<SpectralData>, dgm: bool) -> Self {
        CylinderMeasure::Spectral { data, dgm }
    }

    pub fn mixture(parts: Vec<(f64, CylinderMeasure)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Usage("mixture needs at least one part".into()));
        }
        if parts.iter().any(|(c, _)| *c < 0.0 || !c.is_finite()) {
            return Err(Error::Value(
                "mixture weights must be finite and >= 0".into(),
            ));
        }
        let sum: f64 = parts.iter().map(|(c, _)| c).sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Value(format!(
                "mixture weights sum to {sum}, expected 1"
            )));
        }
        Ok(CylinderMeasure::Mixture { parts })
    }

    /// Probability of the cylinder [w]. The empty word is the whole space.
    pub fn cylinder(&self, w: &Word) -> f64 {
        match self {
            CylinderMeasure::Product { weights } => {
                w.symbols().iter().map(|&s| weights[s as usize]).product()
            }
            CylinderMeasure::Spectral { data, dgm } => {
                if *dgm {
                    data.dgm_cylinder(w)
                } else {
                    data.conformal_cylinder(w)
                }
            }
            CylinderMeasure::Mixture { parts } => {
                parts.iter().map(|(c, m)| c * m.cylinder(w)).sum()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, LocallyConstantPotential};
    use crate::transfer::{build_transfer, solve_spectral};

    #[test]
    fn empty_word_has_probability_one() {
        let a = Alphabet::potts(3).unwrap();
        let uniform = CylinderMeasure::uniform(3);
        let spec = Arc::new(
            solve_spectral(
                &build_transfer(
                    &LocallyConstantPotential::potts_indicator(3, 1).unwrap(),
                    0.4,
                )
                .unwrap(),
            )
            .unwrap(),
        );
        let mix = CylinderMeasure::mixture(vec![
            (0.25, uniform.clone()),
            (0.75, CylinderMeasure::spectral(spec, false)),
        ])
        .unwrap();
        let empty = Word::empty();
        assert_eq!(uniform.cylinder(&empty), 1.0);
        assert!((mix.cylinder(&empty) - 1.0).abs() < 1e-14);
        let _ = a;
    }

    #[test]
    fn additivity_of_each_variant() {
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 3).unwrap();
        let spec = Arc::new(solve_spectral(&build_transfer(&pot, 0.8).unwrap()).unwrap());
        let measures = [
            CylinderMeasure::product(vec![0.3, 0.7]).unwrap(),
            CylinderMeasure::spectral(spec.clone(), false),
            CylinderMeasure::spectral(spec.clone(), true),
            CylinderMeasure::mixture(vec![
                (0.5, CylinderMeasure::uniform(2)),
                (0.5, CylinderMeasure::spectral(spec, true)),
            ])
            .unwrap(),
        ];
        let a = Alphabet::spin();
        for m in &measures {
            for p in 0..4 {
                for w in a.words_of_length(p) {
                    let total: f64 = (0..2u8).map(|s| m.cylinder(&w.append(s))).sum();
                    assert!(
                        (total - m.cylinder(&w)).abs() < 1e-13,
                        "additivity failed at {:?}",
                        a.format_word(&w)
                    );
                }
            }
        }
    }

    #[test]
    fn mixture_weight_validation() {
        assert!(CylinderMeasure::mixture(vec![(0.5, CylinderMeasure::uniform(2))]).is_err());
        assert!(CylinderMeasure::product(vec![0.5, 0.6]).is_err());
        assert!(CylinderMeasure::product(vec![-0.1, 1.1]).is_err());
    }
}
