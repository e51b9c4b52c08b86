//! Numerical thermodynamic formalism for full shifts with locally constant
//! potentials: transfer-operator pressure, the quadratic-pressure variational
//! problem and its limiting mixtures of conformal measures, closed-form
//! mean-field solutions, and exact finite-n Gibbs oracles to verify the
//! predicted weak limits.

pub mod error;
pub mod markov;
pub mod measure;
pub mod models;
pub(crate) mod numerics;
pub mod oracle;
pub mod quadratic;
pub mod symbolic;
pub mod transfer;

pub use error::{Error, Result};
pub use markov::MarkovMeasure;
pub use measure::CylinderMeasure;
pub use quadratic::{QuadraticOptions, QuadraticSolution};
pub use symbolic::{Alphabet, LocallyConstantPotential, Word};
pub use transfer::SpectralData;
