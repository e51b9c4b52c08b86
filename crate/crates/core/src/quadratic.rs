//! The quadratic-pressure variational problem.
//!
//! For an inverse temperature beta, the measures maximizing
//! entropy + (beta/2) (integral of psi)^2 are equilibrium states of the
//! scaled potentials beta t psi at the global maxima t_1..t_J of the
//! auxiliary profile t -> P(beta t psi) - (beta/2) t^2. This module locates
//! those maxima, classifies how degenerate each one is, computes the mixture
//! weights of the limiting measure and cross-checks everything against the
//! Legendre envelope of the entropy.

use crate::error::{Error, Result};
use crate::markov::MarkovMeasure;
use crate::measure::CylinderMeasure;
use crate::symbolic::LocallyConstantPotential;
use crate::transfer::{build_transfer, pressure, solve_spectral, SpectralData};
use std::sync::Arc;

/// Tunable tolerances of the variational solver.
#[derive(Debug, Clone)]
pub struct QuadraticOptions {
    /// Maxima within this distance of the global value are kept. `None`
    /// scales 1e-9 by max(1, |value|).
    pub tol_value: Option<f64>,
    /// Minimal separation between reported maxima.
    pub tol_sep: f64,
    /// Points of the initial scan grid (kept odd so 0 is a grid point).
    pub grid_points: usize,
    /// A derivative must fall below -threshold to set the Laplace order.
    pub laplace_threshold: f64,
    /// Required stationarity residual |E(psi) - t| at each maximum.
    pub stationarity_tol: f64,
    /// Run the Legendre-envelope consistency check inside `solve_quadratic`.
    pub verify_envelope: bool,
    /// Grid size of that check.
    pub envelope_grid: usize,
}

impl Default for QuadraticOptions {
    fn default() -> Self {
        QuadraticOptions {
            tol_value: None,
            tol_sep: 1e-6,
            grid_points: 2001,
            laplace_threshold: 1e-6,
            stationarity_tol: 1e-10,
            verify_envelope: true,
            envelope_grid: 101,
        }
    }
}

/// Everything known about the maximizers: locations, degeneracy orders,
/// mixture weights, the spectral data at each scaled parameter, and the
/// quadratic pressure itself.
#[derive(Debug, Clone)]
pub struct QuadraticSolution {
    pub beta: f64,
    /// The potential the problem was solved for.
    pub pot: LocallyConstantPotential,
    /// Sorted maxima of the auxiliary profile.
    pub t_list: Vec<f64>,
    /// The common profile value: the quadratic pressure.
    pub value: f64,
    /// Laplace order (least even k with negative k-th derivative) per maximum.
    pub k_list: Vec<u32>,
    /// The k-th derivative value backing each order.
    pub derivatives: Vec<f64>,
    /// K = max of k_list.
    pub max_order: u32,
    /// Indices with k = K; only these carry weight.
    pub active: Vec<usize>,
    /// Mixture weights, summing to 1, zero off the active set.
    pub c_list: Vec<f64>,
    /// Perron data at xi = beta * t_j.
    pub spectra: Vec<Arc<SpectralData>>,
}

/// The auxiliary profile P(beta t psi) - (beta/2) t^2.
pub fn auxiliary_profile(pot: &LocallyConstantPotential, beta: f64, t: f64) -> Result<f64> {
    Ok(pressure(pot, beta * t)? - 0.5 * beta * t * t)
}

/// Interval certain to contain every maximizer: stationarity forces
/// each maximum to be a potential average, so [-A, A] plus a small margin.
pub fn search_interval(pot: &LocallyConstantPotential, beta: f64) -> (f64, f64) {
    debug_assert!(beta > 0.0);
    let a = pot.sup_norm();
    let delta = 1e-6 * a.max(1.0);
    (-(a + delta), a + delta)
}

/// Symmetric grid over the search interval: grid[i] = -grid[n-1-i] exactly,
/// with 0 in the middle.
fn scan_grid(half_width: f64, points: usize) -> Vec<f64> {
    let n = if points.is_multiple_of(2) {
        points + 1
    } else {
        points
    };
    let half = (n / 2) as f64;
    (0..n)
        .map(|i| (i as f64 - half) / half * half_width)
        .collect()
}

/// Potential average under the equilibrium state at beta * t, minus t. The
/// maximizers are exactly the downward zero crossings of this residual.
fn stationarity_residual(pot: &LocallyConstantPotential, beta: f64, t: f64) -> Result<f64> {
    let spec = solve_spectral(&build_transfer(pot, beta * t)?)?;
    Ok(spec.dgm_expectation(pot)? - t)
}

/// Locate all global maxima of the auxiliary profile: scan a grid, refine
/// each bracketed candidate by bisection on the stationarity residual, then
/// merge and filter by value.
pub fn find_maxima(
    pot: &LocallyConstantPotential,
    beta: f64,
    opts: &QuadraticOptions,
) -> Result<Vec<f64>> {
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    let (lo, hi) = search_interval(pot, beta);
    debug_assert_eq!(lo, -hi);
    let grid = scan_grid(hi, opts.grid_points);
    let phi: Vec<f64> = grid
        .iter()
        .map(|&t| auxiliary_profile(pot, beta, t))
        .collect::<Result<Vec<_>>>()?;

    let mut candidates = Vec::new();
    for i in 1..grid.len() - 1 {
        if phi[i] >= phi[i - 1] && phi[i] >= phi[i + 1] {
            candidates.push(i);
        }
    }
    if candidates.is_empty() {
        return Err(Error::Resolution(
            "no interior maximum on the scan grid; refine the grid".into(),
        ));
    }

    let mut refined = Vec::new();
    for &i in &candidates {
        if let Some(t) = refine_maximum(pot, beta, grid[i - 1], grid[i], grid[i + 1], opts)? {
            refined.push(t);
        }
    }
    if refined.is_empty() {
        return Err(Error::Resolution(
            "no grid candidate refined to a stationary maximum; refine the grid".into(),
        ));
    }
    refined.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // merge clusters closer than tol_sep, keeping the best profile value
    let mut merged: Vec<f64> = Vec::new();
    let mut cluster: Vec<f64> = Vec::new();
    let flush = |cluster: &mut Vec<f64>, merged: &mut Vec<f64>| -> Result<()> {
        if cluster.is_empty() {
            return Ok(());
        }
        let mut best = cluster[0];
        let mut best_phi = f64::NEG_INFINITY;
        for &t in cluster.iter() {
            let v = auxiliary_profile(pot, beta, t)?;
            let better = v > best_phi
                || (v == best_phi && (t.abs() < best.abs() || (t.abs() == best.abs() && t > best)));
            if better {
                best = t;
                best_phi = v;
            }
        }
        merged.push(best);
        cluster.clear();
        Ok(())
    };
    for &t in &refined {
        if let Some(&last) = cluster.last() {
            if t - last > opts.tol_sep {
                flush(&mut cluster, &mut merged)?;
            }
        }
        cluster.push(t);
    }
    flush(&mut cluster, &mut merged)?;

    // keep only points within tol_value of the global maximum
    let values: Vec<f64> = merged
        .iter()
        .map(|&t| auxiliary_profile(pot, beta, t))
        .collect::<Result<Vec<_>>>()?;
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol_v = opts.tol_value.unwrap_or(1e-9 * vmax.abs().max(1.0));
    let result: Vec<f64> = merged
        .into_iter()
        .zip(values)
        .filter(|&(_, v)| v >= vmax - tol_v)
        .map(|(t, _)| t)
        .collect();
    Ok(result)
}

/// Bisection on the stationarity residual inside a grid bracket. Candidates
/// without a decreasing crossing are plateau ties of the scan and are
/// dropped; a genuine bracket that still cannot reach the residual is a
/// resolution failure.
fn refine_maximum(
    pot: &LocallyConstantPotential,
    beta: f64,
    a0: f64,
    mid0: f64,
    b0: f64,
    opts: &QuadraticOptions,
) -> Result<Option<f64>> {
    let tol = opts.stationarity_tol;
    let ga = stationarity_residual(pot, beta, a0)?;
    if ga.abs() <= tol {
        return Ok(Some(a0));
    }
    let gb = stationarity_residual(pot, beta, b0)?;
    if gb.abs() <= tol {
        return Ok(Some(b0));
    }
    if !(ga > 0.0 && gb < 0.0) {
        let gm = stationarity_residual(pot, beta, mid0)?;
        if gm.abs() <= tol {
            return Ok(Some(mid0));
        }
        return Ok(None);
    }
    let (mut a, mut b) = (a0, b0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = stationarity_residual(pot, beta, mid)?;
        if gm.abs() <= tol {
            return Ok(Some(mid));
        }
        if gm > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::Resolution(format!(
        "stationarity residual did not reach {tol:e} within the bracket [{a0}, {b0}]"
    )))
}

/// Central finite-difference stencils for even derivatives, with error
/// O(h^2) before extrapolation.
fn even_derivative_stencil(
    pot: &LocallyConstantPotential,
    beta: f64,
    t: f64,
    order: u32,
    h: f64,
) -> Result<f64> {
    let coeffs: &[(i32, f64)] = match order {
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        6 => &[
            (-3, 1.0),
            (-2, -6.0),
            (-1, 15.0),
            (0, -20.0),
            (1, 15.0),
            (2, -6.0),
            (3, 1.0),
        ],
        _ => unreachable!(),
    };
    let mut s = 0.0;
    for &(off, c) in coeffs {
        s += c * auxiliary_profile(pot, beta, t + off as f64 * h)?;
    }
    Ok(s / h.powi(order as i32))
}

/// Two-level Richardson extrapolation of an O(h^2) estimate.
fn richardson(
    pot: &LocallyConstantPotential,
    beta: f64,
    t: f64,
    order: u32,
    h: f64,
) -> Result<f64> {
    let d1 = even_derivative_stencil(pot, beta, t, order, h)?;
    let d2 = even_derivative_stencil(pot, beta, t, order, h / 2.0)?;
    let d4 = even_derivative_stencil(pot, beta, t, order, h / 4.0)?;
    let r1a = (4.0 * d2 - d1) / 3.0;
    let r1b = (4.0 * d4 - d2) / 3.0;
    Ok((16.0 * r1b - r1a) / 15.0)
}

/// Degeneracy order of a maximum: the least even k in {2, 4, 6} whose
/// derivative of the profile is below -threshold, together with that
/// derivative value. Flatter maxima are reported as an error rather than
/// guessed at.
pub fn laplace_order(
    pot: &LocallyConstantPotential,
    beta: f64,
    t: f64,
    threshold: f64,
) -> Result<(u32, f64)> {
    let scale = pot.sup_norm().max(1.0);
    for &order in &[2u32, 4] {
        let d = richardson(pot, beta, t, order, 1e-2 * scale)?;
        if d < -threshold {
            return Ok((order, d));
        }
    }
    // the 6th-order stencil divides by h^6, so a larger step is needed to
    // stay above rounding noise; no extrapolation at this order
    let d = even_derivative_stencil(pot, beta, t, 6, 0.1 * scale)?;
    if d < -threshold {
        return Ok((6, d));
    }
    Err(Error::FlatMaximum { t })
}

/// Mixture weights from the eigenfunction means and the profile derivatives:
/// only maxima of the top order K contribute, proportionally to
/// mean(H) / |derivative|^(1/K).
pub fn mixture_weights(mean_h: &[f64], k_list: &[u32], derivatives: &[f64]) -> Vec<f64> {
    let top = k_list.iter().cloned().max().unwrap_or(2);
    let raw: Vec<f64> = k_list
        .iter()
        .zip(derivatives)
        .zip(mean_h)
        .map(|((&k, &d), &m)| {
            if k == top {
                m / d.abs().powf(1.0 / top as f64)
            } else {
                0.0
            }
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Solve the full variational problem at inverse temperature beta.
pub fn solve_quadratic(
    pot: &LocallyConstantPotential,
    beta: f64,
    opts: &QuadraticOptions,
) -> Result<QuadraticSolution> {
    let t_list = find_maxima(pot, beta, opts)?;
    let mut spectra = Vec::with_capacity(t_list.len());
    let mut k_list = Vec::with_capacity(t_list.len());
    let mut derivatives = Vec::with_capacity(t_list.len());
    let mut value = f64::NEG_INFINITY;
    for &t in &t_list {
        let spec = solve_spectral(&build_transfer(pot, beta * t)?)?;
        let resid = (spec.dgm_expectation(pot)? - t).abs();
        if resid > opts.stationarity_tol {
            return Err(Error::Numeric {
                msg: format!("maximum t = {t} fails the stationarity relation"),
                residual: resid,
            });
        }
        value = value.max(spec.pressure() - 0.5 * beta * t * t);
        spectra.push(Arc::new(spec));
        let (k, d) = laplace_order(pot, beta, t, opts.laplace_threshold)?;
        k_list.push(k);
        derivatives.push(d);
    }
    let mean_h: Vec<f64> = spectra.iter().map(|s| s.mean_h_uniform()).collect();
    let c_list = mixture_weights(&mean_h, &k_list, &derivatives);
    let max_order = k_list.iter().cloned().max().unwrap();
    let active: Vec<usize> = k_list
        .iter()
        .enumerate()
        .filter(|(_, &k)| k == max_order)
        .map(|(i, _)| i)
        .collect();

    if opts.verify_envelope {
        verify_envelope(pot, beta, &t_list, value, opts.envelope_grid)?;
    }

    Ok(QuadraticSolution {
        beta,
        pot: pot.clone(),
        t_list,
        value,
        k_list,
        derivatives,
        max_order,
        active,
        c_list,
        spectra,
    })
}

/// The predicted weak limit: the c-weighted mixture of the eigenmeasures
/// (conformal measures, not the equilibrium measures) at the maxima.
pub fn limit_measure(sol: &QuadraticSolution) -> CylinderMeasure {
    let parts = sol
        .spectra
        .iter()
        .zip(&sol.c_list)
        .map(|(spec, &c)| (c, CylinderMeasure::spectral(spec.clone(), false)))
        .collect();
    CylinderMeasure::Mixture { parts }
}

/// Bracket for the Legendre minimization wide enough to contain beta * z for
/// every z in the search interval.
pub fn envelope_bracket(pot: &LocallyConstantPotential, beta: f64) -> (f64, f64) {
    let r = beta * pot.sup_norm() + 4.0;
    (-r, r)
}

/// Largest entropy compatible with a prescribed potential average z,
/// obtained as inf_t { P(t psi) - t z } by Legendre duality. Returns negative
/// infinity outside [-A, A]. The inner function is convex in t, so a ternary
/// search over the bracket refines the infimum.
pub fn constrained_entropy(
    pot: &LocallyConstantPotential,
    z: f64,
    bracket: (f64, f64),
) -> Result<f64> {
    if z.abs() > pot.sup_norm() {
        return Ok(f64::NEG_INFINITY);
    }
    let f = |t: f64| -> Result<f64> { Ok(pressure(pot, t)? - t * z) };
    let (mut a, mut b) = bracket;
    while b - a > 1e-10 {
        let third = (b - a) / 3.0;
        let t1 = a + third;
        let t2 = b - third;
        if f(t1)? <= f(t2)? {
            b = t2;
        } else {
            a = t1;
        }
    }
    f(0.5 * (a + b))
}

/// Check that the entropy envelope never exceeds the profile and that the
/// two maxima agree: the envelope-side functional phibar(z) =
/// H(z) + (beta/2) z^2 satisfies phibar <= profile pointwise with equality
/// at the maximizers.
fn verify_envelope(
    pot: &LocallyConstantPotential,
    beta: f64,
    t_list: &[f64],
    value: f64,
    grid_points: usize,
) -> Result<()> {
    let bracket = envelope_bracket(pot, beta);
    let a = pot.sup_norm();
    let mut zs = scan_grid(a, grid_points);
    zs.extend_from_slice(t_list);
    let mut max_phibar = f64::NEG_INFINITY;
    for &z in &zs {
        let phibar = constrained_entropy(pot, z, bracket)? + 0.5 * beta * z * z;
        let phi = auxiliary_profile(pot, beta, z)?;
        if phibar > phi + 1e-9 {
            return Err(Error::Numeric {
                msg: format!("entropy envelope exceeds the profile at z = {z}"),
                residual: phibar - phi,
            });
        }
        max_phibar = max_phibar.max(phibar);
    }
    if (max_phibar - value).abs() > 1e-8 {
        return Err(Error::Numeric {
            msg: "envelope maximum disagrees with the quadratic pressure".into(),
            residual: (max_phibar - value).abs(),
        });
    }
    Ok(())
}

/// Quadratic free energy of a Markov chain: entropy rate plus
/// (beta/2) times the squared potential average.
pub fn markov_free_energy(
    mm: &MarkovMeasure,
    pot: &LocallyConstantPotential,
    beta: f64,
) -> Result<f64> {
    let avg = mm.expectation(pot)?;
    Ok(mm.entropy_rate() + 0.5 * beta * avg * avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{Alphabet, Word};

    fn zero_pot() -> LocallyConstantPotential {
        LocallyConstantPotential::from_table(Alphabet::spin(), 1, vec![0.0, 0.0]).unwrap()
    }

    fn cw() -> LocallyConstantPotential {
        LocallyConstantPotential::cw()
    }

    /// Independent fixed-point oracle: the positive solution of
    /// xi = tanh(beta xi) by bisection.
    fn tanh_fixed_point(beta: f64) -> f64 {
        let g = |x: f64| x - (beta * x).tanh();
        let (mut a, mut b) = (1e-12, 1.0);
        assert!(g(a) < 0.0 && g(b) > 0.0);
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

    #[test]
    fn profile_zero_potential_is_parabola() {
        let pot = zero_pot();
        for &(beta, t) in &[(0.5, 0.3), (2.0, -0.8), (1.0, 0.0)] {
            let got = auxiliary_profile(&pot, beta, t).unwrap();
            let expected = 2.0f64.ln() - 0.5 * beta * t * t;
            assert!((got - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn profile_cw_closed_form() {
        for &(beta, t) in &[(0.5, 0.2), (2.0, 0.9), (1.0, -0.4)] {
            let got = auxiliary_profile(&cw(), beta, t).unwrap();
            let expected = 2.0f64.ln() + (beta * t).cosh().ln() - 0.5 * beta * t * t;
            assert!((got - expected).abs() < 1e-12);
        }
        assert!((auxiliary_profile(&cw(), 2.0, 0.0).unwrap() - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn search_interval_examples() {
        let (lo, hi) = search_interval(&cw(), 1.0);
        assert!((hi - (1.0 + 1e-6)).abs() < 1e-15 && lo == -hi);
        let (lo0, hi0) = search_interval(&zero_pot(), 2.0);
        assert!((hi0 - 1e-6).abs() < 1e-18 && lo0 == -hi0);
        let table = vec![2.5, -1.0];
        let pot = LocallyConstantPotential::from_table(Alphabet::spin(), 1, table).unwrap();
        let (_, hi25) = search_interval(&pot, 1.0);
        assert!((hi25 - 2.5 * (1.0 + 1e-6)).abs() < 1e-9);
    }

    #[test]
    fn find_maxima_cw_subcritical_single_zero() {
        let ts = find_maxima(&cw(), 0.5, &QuadraticOptions::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts[0].abs() < 1e-9);
    }

    #[test]
    fn find_maxima_cw_supercritical_pair() {
        let ts = find_maxima(&cw(), 2.0, &QuadraticOptions::default()).unwrap();
        assert_eq!(ts.len(), 2);
        let xi = tanh_fixed_point(2.0);
        assert!((ts[0] + xi).abs() < 1e-9, "{} vs -{}", ts[0], xi);
        assert!((ts[1] - xi).abs() < 1e-9);
        assert!((xi - 0.957504).abs() < 1e-6);
    }

    #[test]
    fn find_maxima_zero_potential() {
        let ts = find_maxima(&zero_pot(), 3.0, &QuadraticOptions::default()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0], 0.0);
    }

    #[test]
    fn laplace_order_cw_quadratic() {
        let (k, d) = laplace_order(&cw(), 0.5, 0.0, 1e-6).unwrap();
        assert_eq!(k, 2);
        assert!((d - (-0.25)).abs() < 1e-6, "{d}");
    }

    #[test]
    fn laplace_order_cw_quartic_at_critical_beta() {
        let (k, d) = laplace_order(&cw(), 1.0, 0.0, 1e-6).unwrap();
        assert_eq!(k, 4);
        assert!((d - (-2.0)).abs() < 1e-3, "{d}");
    }

    #[test]
    fn laplace_order_pure_parabola() {
        let (k, d) = laplace_order(&zero_pot(), 1.0, 0.0, 1e-6).unwrap();
        assert_eq!(k, 2);
        assert!((d - (-1.0)).abs() < 1e-8);
    }

    #[test]
    fn mixture_weight_rules() {
        assert_eq!(mixture_weights(&[1.0], &[2], &[-0.3]), vec![1.0]);
        let sym = mixture_weights(&[1.0, 1.0], &[2, 2], &[-0.7, -0.7]);
        assert_eq!(sym, vec![0.5, 0.5]);
        let deg = mixture_weights(&[1.0, 1.0], &[2, 4], &[-0.7, -0.2]);
        assert_eq!(deg, vec![0.0, 1.0]);
    }

    #[test]
    fn solve_zero_potential() {
        let sol = solve_quadratic(&zero_pot(), 3.0, &QuadraticOptions::default()).unwrap();
        assert_eq!(sol.t_list, vec![0.0]);
        assert!((sol.value - 2.0f64.ln()).abs() < 1e-12);
        assert_eq!(sol.c_list, vec![1.0]);
    }

    #[test]
    fn solve_cw_supercritical() {
        let sol = solve_quadratic(&cw(), 2.0, &QuadraticOptions::default()).unwrap();
        assert_eq!(sol.t_list.len(), 2);
        let xi = tanh_fixed_point(2.0);
        // quadratic pressure from the independently located fixed point
        let expected = 2.0f64.ln() + (2.0 * xi).cosh().ln() - xi * xi;
        assert!(
            (sol.value - expected).abs() < 1e-10,
            "{} vs {expected}",
            sol.value
        );
        assert!((sol.c_list[0] - 0.5).abs() < 1e-9);
        assert!((sol.c_list[1] - 0.5).abs() < 1e-9);
        assert_eq!(sol.k_list, vec![2, 2]);
        for (j, &t) in sol.t_list.iter().enumerate() {
            let resid = (sol.spectra[j].dgm_expectation(&cw()).unwrap() - t).abs();
            assert!(resid <= 1e-10);
        }
    }

    #[test]
    fn solve_cw_at_transition_is_quartic() {
        let sol = solve_quadratic(&cw(), 1.0, &QuadraticOptions::default()).unwrap();
        assert_eq!(sol.t_list.len(), 1);
        assert!(sol.t_list[0].abs() < 1e-3);
        assert_eq!(sol.k_list, vec![4]);
        assert!((sol.value - 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn limit_measure_zero_potential_uniform() {
        let sol = solve_quadratic(&zero_pot(), 1.5, &QuadraticOptions::default()).unwrap();
        let m = limit_measure(&sol);
        for w in Alphabet::spin().words_of_length(3) {
            assert!((m.cylinder(&w) - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_measure_cw_mixture_values() {
        let sol = solve_quadratic(&cw(), 2.0, &QuadraticOptions::default()).unwrap();
        let m = limit_measure(&sol);
        let a = Alphabet::spin();
        let plus = Word::new(vec![0], &a).unwrap();
        assert!((m.cylinder(&plus) - 0.5).abs() < 1e-10);
        // both signs of the fixed point contribute p^2 and (1-p)^2
        let xi = tanh_fixed_point(2.0);
        let p = 0.5 * (1.0 + xi);
        let expected = 0.5 * (p * p + (1.0 - p) * (1.0 - p));
        let pp = Word::new(vec![0, 0], &a).unwrap();
        assert!((m.cylinder(&pp) - expected).abs() < 1e-9);
        assert!((expected - 0.479204).abs() < 1e-6);
    }

    #[test]
    fn constrained_entropy_zero_potential() {
        let h = constrained_entropy(&zero_pot(), 0.0, (-5.0, 5.0)).unwrap();
        assert!((h - 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn constrained_entropy_cw_closed_form() {
        // stationarity tanh t = z gives the binary entropy of (1+z)/2
        let bracket = (-8.0, 8.0);
        for &z in &[0.0, 0.3, -0.6, 0.9] {
            let got = constrained_entropy(&cw(), z, bracket).unwrap();
            let expected = 2.0f64.ln() - 0.5 * (1.0 - z * z).ln() - z * z.atanh();
            assert!(
                (got - expected).abs() < 1e-9,
                "z = {z}: {got} vs {expected}"
            );
        }
        let outside = constrained_entropy(&cw(), 1.5, bracket).unwrap();
        assert_eq!(outside, f64::NEG_INFINITY);
    }

    #[test]
    fn markov_free_energy_examples() {
        let uniform2 = MarkovMeasure::new(Alphabet::spin(), 1, vec![0.5; 4]).unwrap();
        assert!(
            (markov_free_energy(&uniform2, &zero_pot(), 1.7).unwrap() - 2.0f64.ln()).abs() < 1e-13
        );
        assert!((markov_free_energy(&uniform2, &cw(), 2.0).unwrap() - 2.0f64.ln()).abs() < 1e-13);
        // chain pinned at the + symbol: zero entropy, unit average
        let delta = MarkovMeasure::new(Alphabet::spin(), 1, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!((markov_free_energy(&delta, &cw(), 2.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn negating_the_table_mirrors_the_solution() {
        let pot = cw();
        let neg = pot.negated();
        let opts = QuadraticOptions::default();
        let sol = solve_quadratic(&pot, 2.0, &opts).unwrap();
        let sol_neg = solve_quadratic(&neg, 2.0, &opts).unwrap();
        let mirrored: Vec<f64> = sol.t_list.iter().rev().map(|&t| -t).collect();
        assert_eq!(sol_neg.t_list, mirrored);
        let reversed: Vec<f64> = sol.c_list.iter().rev().cloned().collect();
        assert_eq!(sol_neg.c_list, reversed);
    }
}
