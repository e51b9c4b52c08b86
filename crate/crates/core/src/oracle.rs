//! Exact finite-n evaluation of the probabilistic Gibbs measures: the
//! Boltzmann reweighting of the uniform product measure by the mean-field
//! energy. Four deterministic routes are provided — full enumeration,
//! binomial and multinomial collapses for the two mean-field models, and a
//! Gaussian-linearization quadrature driven by the transfer operator — so
//! that predictions of the limiting measures can be checked against ground
//! truth at finite n.

use crate::error::{Error, Result};
use crate::measure::CylinderMeasure;
use crate::numerics::{gauss_legendre, logsumexp2, KahanSum, LogSumAcc};
use crate::symbolic::{Alphabet, LocallyConstantPotential, Word};
use crate::transfer::DEFAULT_STATE_CAP;

/// Caps and tolerances of the oracle evaluators.
#[derive(Debug, Clone)]
pub struct OracleOptions {
    /// Largest number of words enumerated by the exact method.
    pub enum_cap: u64,
    /// Largest number of count vectors enumerated by the multinomial
    /// collapse.
    pub composition_cap: u64,
    /// Quadrature stops once doubling the node count moves the result by
    /// less than this.
    pub quad_tol: f64,
    pub quad_min_nodes: usize,
    pub quad_max_nodes: usize,
    /// Cap on the block dimension of the quadrature representation.
    pub state_cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            enum_cap: 1 << 26,
            composition_cap: 100_000_000,
            quad_tol: 1e-10,
            quad_min_nodes: 128,
            quad_max_nodes: 8192,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Exact Gibbs probability of the cylinder [w] by full enumeration: both the
/// constrained and the total sums run over all words of length n + m - 1 in
/// log domain. For two-symbol alphabets the enumeration pairs every word
/// with its symbol flip, so observables of flip-antisymmetric potentials
/// come out exactly symmetric.
pub fn pgm_exact(
    pot: &LocallyConstantPotential,
    beta: f64,
    n: u64,
    w: &Word,
    opts: &OracleOptions,
) -> Result<f64> {
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    if (w.len() as u64) > n {
        return Err(Error::Usage(format!(
            "cylinder length {} exceeds n = {n}",
            w.len()
        )));
    }
    let m = pot.memory();
    let full_len = n as usize + m - 1;
    pot.alphabet()
        .word_count(full_len, opts.enum_cap)
        .map_err(|_| {
            Error::Capacity(format!(
                "q^(n+m-1) = q^{full_len} exceeds the enumeration cap {}; \
             use a collapse or quadrature method",
                opts.enum_cap
            ))
        })?;
    let scale = beta / (2.0 * n as f64);
    let log_num = enumerate_sum(pot, scale, n as usize, full_len, w.symbols());
    let log_den = enumerate_sum(pot, scale, n as usize, full_len, &[]);
    Ok((log_num - log_den).exp())
}

/// log of the sum of exp(scale * S_n^2) over all length `full_len` words
/// with the given prefix.
fn enumerate_sum(
    pot: &LocallyConstantPotential,
    scale: f64,
    n: usize,
    full_len: usize,
    prefix: &[u8],
) -> f64 {
    let q = pot.alphabet().len();
    let mut acc = LogSumAcc::new();
    let mut buf = vec![0u8; full_len];
    buf[..prefix.len()].copy_from_slice(prefix);
    if q == 2 {
        let mut twin = buf.clone();
        paired_walk(
            pot,
            scale,
            n,
            full_len,
            prefix.len(),
            &mut buf,
            &mut twin,
            prefix.len(),
            prefix_birkhoff(pot, prefix, n),
            prefix_birkhoff(pot, prefix, n),
            true,
            &mut acc,
        );
    } else {
        plain_walk(
            pot,
            scale,
            n,
            full_len,
            &mut buf,
            prefix.len(),
            prefix_birkhoff(pot, prefix, n),
            &mut acc,
        );
    }
    acc.total()
}

/// Partial Birkhoff sum over the windows fully contained in the prefix.
fn prefix_birkhoff(pot: &LocallyConstantPotential, prefix: &[u8], n: usize) -> f64 {
    let m = pot.memory();
    let mut s = 0.0;
    if prefix.len() >= m {
        for i in 0..=(prefix.len() - m).min(n - 1) {
            s += pot.eval(&prefix[i..i + m]);
        }
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn plain_walk(
    pot: &LocallyConstantPotential,
    scale: f64,
    n: usize,
    full_len: usize,
    buf: &mut [u8],
    depth: usize,
    partial: f64,
    acc: &mut LogSumAcc,
) {
    if depth == full_len {
        acc.add(scale * partial * partial);
        return;
    }
    let q = pot.alphabet().len() as u8;
    let m = pot.memory();
    for a in 0..q {
        buf[depth] = a;
        let mut s = partial;
        // window ending at this position completes once depth + 1 >= m,
        // and only the first n windows count
        if depth + 1 >= m && depth + 1 - m < n {
            s += pot.eval(&buf[depth + 1 - m..depth + 1]);
        }
        plain_walk(pot, scale, n, full_len, buf, depth + 1, s, acc);
    }
}

/// Two-symbol walk enumerating each free suffix together with its complement
/// so that the pair sum is independent of a global symbol flip. The first
/// free position is pinned to symbol 0 on the main path.
#[allow(clippy::too_many_arguments)]
fn paired_walk(
    pot: &LocallyConstantPotential,
    scale: f64,
    n: usize,
    full_len: usize,
    prefix_len: usize,
    buf: &mut [u8],
    twin: &mut [u8],
    depth: usize,
    partial: f64,
    partial_twin: f64,
    first_free: bool,
    acc: &mut LogSumAcc,
) {
    if depth == full_len {
        if prefix_len == full_len {
            acc.add(scale * partial * partial);
        } else {
            let t1 = scale * partial * partial;
            let t2 = scale * partial_twin * partial_twin;
            acc.add(logsumexp2(t1, t2));
        }
        return;
    }
    let m = pot.memory();
    let symbols: &[u8] = if first_free { &[0] } else { &[0, 1] };
    for &a in symbols {
        buf[depth] = a;
        twin[depth] = 1 - a;
        let mut s = partial;
        let mut st = partial_twin;
        if depth + 1 >= m && depth + 1 - m < n {
            s += pot.eval(&buf[depth + 1 - m..depth + 1]);
            st += pot.eval(&twin[depth + 1 - m..depth + 1]);
        }
        paired_walk(
            pot,
            scale,
            n,
            full_len,
            prefix_len,
            buf,
            twin,
            depth + 1,
            s,
            st,
            false,
            acc,
        );
    }
}

/// Gibbs probability for the two-state mean-field model by binomial
/// collapse over the count of + symbols among the free positions. The
/// prefix enters only through its spin sum, taken in absolute value, so a
/// global spin flip of the cylinder gives the bit-identical result.
pub fn pgm_cw_collapse(beta: f64, n: u64, w: &Word) -> Result<f64> {
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    let p = w.len() as u64;
    if p > n {
        return Err(Error::Usage(format!("cylinder length {p} exceeds n = {n}")));
    }
    if w.symbols().iter().any(|&s| s > 1) {
        return Err(Error::Usage(
            "cylinder is not over the spin alphabet".into(),
        ));
    }
    // spin sum of the prefix: symbol 0 is +, symbol 1 is -
    let sp: i64 = w
        .symbols()
        .iter()
        .map(|&s| if s == 0 { 1i64 } else { -1i64 })
        .sum();
    let log_num = cw_sum(beta, n, n - p, sp.abs());
    let log_den = cw_sum(beta, n, n, 0);
    Ok((log_num - log_den).exp())
}

/// log sum over k of C(free, k) exp(beta (sp + 2k - free)^2 / (2n)).
fn cw_sum(beta: f64, n: u64, free: u64, sp: i64) -> f64 {
    let scale = beta / (2.0 * n as f64);
    let mut acc = LogSumAcc::new();
    let mut log_binom = KahanSum::new();
    for k in 0..=free {
        let mag = sp + 2 * k as i64 - free as i64;
        let x = mag as f64;
        acc.add(log_binom.value() + scale * x * x);
        if k < free {
            log_binom.add(((free - k) as f64).ln());
            log_binom.add(-((k + 1) as f64).ln());
        }
    }
    acc.total()
}

/// Gibbs probability for the q-state mean-field model by multinomial
/// collapse over the count vectors of the free positions. The cylinder
/// enters only through its sorted symbol counts, so permuting the alphabet
/// gives the bit-identical result.
pub fn pgm_cwp_collapse(
    q: usize,
    beta: f64,
    n: u64,
    w: &Word,
    opts: &OracleOptions,
) -> Result<f64> {
    if !(2..=5).contains(&q) {
        return Err(Error::Usage(format!(
            "multinomial collapse supports 2 <= q <= 5, got {q}"
        )));
    }
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    let p = w.len() as u64;
    if p > n {
        return Err(Error::Usage(format!("cylinder length {p} exceeds n = {n}")));
    }
    if w.symbols().iter().any(|&s| s as usize >= q) {
        return Err(Error::Usage("cylinder symbol outside the alphabet".into()));
    }
    let free = n - p;
    let combos = compositions_count(free, q);
    if combos > opts.composition_cap {
        return Err(Error::Capacity(format!(
            "C(n-p+q-1, q-1) = {combos} count vectors exceed the cap {}",
            opts.composition_cap
        )));
    }
    let mut counts = vec![0u64; q];
    for &s in w.symbols() {
        counts[s as usize] += 1;
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let log_num = cwp_sum(q, beta, n, free, &counts);
    let log_den = cwp_sum(q, beta, n, n, &vec![0u64; q]);
    Ok((log_num - log_den).exp())
}

fn compositions_count(free: u64, q: usize) -> u64 {
    // C(free + q - 1, q - 1), saturating
    let mut c: u64 = 1;
    for i in 1..q as u64 {
        c = c.saturating_mul(free + i) / i;
    }
    c
}

/// log sum over count vectors k of the free symbols of
/// multinomial(free; k) exp(beta |counts + k|^2 / (2n)).
fn cwp_sum(q: usize, beta: f64, n: u64, free: u64, counts: &[u64]) -> f64 {
    let scale = beta / (2.0 * n as f64);
    // factorial table via compensated summation
    let mut lnfact = Vec::with_capacity(free as usize + 1);
    let mut k = KahanSum::new();
    lnfact.push(0.0);
    for i in 1..=free {
        k.add((i as f64).ln());
        lnfact.push(k.value());
    }
    let mut acc = LogSumAcc::new();
    let mut vec_k = vec![0u64; q];
    compose(
        q, scale, free, counts, &lnfact, &mut vec_k, 0, free, &mut acc,
    );
    acc.total()
}

#[allow(clippy::too_many_arguments)]
fn compose(
    q: usize,
    scale: f64,
    free: u64,
    counts: &[u64],
    lnfact: &[f64],
    vec_k: &mut [u64],
    pos: usize,
    rem: u64,
    acc: &mut LogSumAcc,
) {
    if pos == q - 1 {
        vec_k[pos] = rem;
        let mut norm2 = 0u64;
        let mut log_coeff = lnfact[free as usize];
        for i in 0..q {
            let total = counts[i] + vec_k[i];
            norm2 += total * total;
            log_coeff -= lnfact[vec_k[i] as usize];
        }
        acc.add(log_coeff + scale * norm2 as f64);
        return;
    }
    for k in 0..=rem {
        vec_k[pos] = k;
        compose(q, scale, free, counts, lnfact, vec_k, pos + 1, rem - k, acc);
    }
}

/// Gibbs probability via the Gaussian linearization of the squared Birkhoff
/// sum: the cylinder weight becomes a ratio of two integrals of
/// exp(-n beta z^2 / 2) times an exact transfer-power term, evaluated by
/// Gauss-Legendre quadrature with node doubling until stable.
pub fn pgm_quadrature(
    pot: &LocallyConstantPotential,
    beta: f64,
    n: u64,
    w: &Word,
    opts: &OracleOptions,
) -> Result<f64> {
    if beta <= 0.0 || beta.is_nan() {
        return Err(Error::Usage(format!("beta must be positive, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    if (w.len() as u64) > n {
        return Err(Error::Usage(format!(
            "cylinder length {} exceeds n = {n}",
            w.len()
        )));
    }
    let q = pot.alphabet().len();
    let m_eff = pot.memory().max(2);
    let block_len = w.len().max(m_eff - 1);
    let dim = pot
        .alphabet()
        .word_count(block_len, opts.state_cap as u64)
        .map_err(|_| {
            Error::Capacity(format!(
                "q^{block_len} block states exceed the cap {}",
                opts.state_cap
            ))
        })? as usize;
    let lifted = pot.lift(m_eff);
    let a = pot.sup_norm();
    let log_q = (q as f64).ln();
    // truncation from the positive root of (beta/4) Z^2 - beta A Z - log q
    let z_max = (beta * a + (beta * beta * a * a + beta * log_q).sqrt()) / (beta / 2.0);

    let op = BlockOperator {
        pot: &lifted,
        q,
        dim,
        head: dim / q,
        weight_div: dim / q.pow((m_eff - 1) as u32),
    };
    // indicator of the cylinder on block states: a contiguous rank range
    let prefix_rank = w.symbols().iter().fold(0usize, |r, &s| r * q + s as usize);
    let span = q.pow((block_len - w.len()) as u32);
    let lo = prefix_rank * span;

    let mut prev: Option<f64> = None;
    let mut nodes = opts.quad_min_nodes;
    let mut last_change = f64::INFINITY;
    while nodes <= opts.quad_max_nodes {
        let rule = gauss_legendre(nodes);
        let (xs, ws) = rule.as_ref();
        let mut acc_n = LogSumAcc::new();
        let mut acc_d = LogSumAcc::new();
        for (&x, &wt) in xs.iter().zip(ws) {
            let z = z_max * x;
            let xi = beta * z;
            let envelope = -0.5 * n as f64 * beta * z * z - n as f64 * log_q;
            let log_w = wt.ln();
            let inner_n = op.log_power_mass(xi, n, Some((lo, lo + span)));
            let inner_d = op.log_power_mass(xi, n, None);
            acc_n.add(log_w + envelope + inner_n);
            acc_d.add(log_w + envelope + inner_d);
        }
        let ratio = (acc_n.total() - acc_d.total()).exp();
        if let Some(prev) = prev {
            last_change = (ratio - prev).abs();
            if last_change <= opts.quad_tol {
                return Ok(ratio);
            }
        }
        prev = Some(ratio);
        nodes *= 2;
    }
    Err(Error::Numeric {
        msg: format!(
            "quadrature still moving after {} nodes",
            opts.quad_max_nodes
        ),
        residual: last_change,
    })
}

/// Transfer application lifted to blocks of `block_len` symbols, in log
/// domain, starting from the indicator of a rank range.
struct BlockOperator<'a> {
    pot: &'a LocallyConstantPotential, // lifted to effective memory
    q: usize,
    dim: usize,
    head: usize,
    /// divide a block rank by this to read its first m'-1 symbols
    weight_div: usize,
}

impl BlockOperator<'_> {
    /// log of the uniform average over blocks of n transfer applications to
    /// the indicator of `range` (whole space when None).
    fn log_power_mass(&self, xi: f64, n: u64, range: Option<(usize, usize)>) -> f64 {
        let mut v = vec![f64::NEG_INFINITY; self.dim];
        match range {
            Some((lo, hi)) => v[lo..hi].fill(0.0),
            None => v.fill(0.0),
        }
        let mut out = vec![0.0; self.dim];
        let table = self.pot.table();
        let weight_states = table.len() / self.q; // q^(m'-1)
        for _ in 0..n {
            for (u, slot) in out.iter_mut().enumerate() {
                let u_first = u / self.weight_div;
                let col_tail = u / self.q;
                let mut s = f64::NEG_INFINITY;
                for a in 0..self.q {
                    let lw = xi * table[a * weight_states + u_first];
                    s = logsumexp2(s, lw + v[a * self.head + col_tail]);
                }
                *slot = s;
            }
            std::mem::swap(&mut v, &mut out);
        }
        let mut acc = LogSumAcc::new();
        for &x in &v {
            acc.add(x);
        }
        acc.total() - (self.dim as f64).ln()
    }
}

/// Which oracle route evaluates the finite-n measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Exact,
    CwCollapse,
    CwpCollapse,
    Quadrature,
}

impl OracleMethod {
    pub fn label(&self) -> &'static str {
        match self {
            OracleMethod::Exact => "exact",
            OracleMethod::CwCollapse => "cw-collapse",
            OracleMethod::CwpCollapse => "cwp-collapse",
            OracleMethod::Quadrature => "quadrature",
        }
    }
}

/// A bound oracle: method plus everything it needs except n and the
/// cylinder.
pub enum PgmEvaluator<'a> {
    Exact {
        pot: &'a LocallyConstantPotential,
        beta: f64,
        opts: OracleOptions,
    },
    CwCollapse {
        beta: f64,
    },
    CwpCollapse {
        q: usize,
        beta: f64,
        opts: OracleOptions,
    },
    Quadrature {
        pot: &'a LocallyConstantPotential,
        beta: f64,
        opts: OracleOptions,
    },
}

impl PgmEvaluator<'_> {
    pub fn probability(&self, n: u64, w: &Word) -> Result<f64> {
        match self {
            PgmEvaluator::Exact { pot, beta, opts } => pgm_exact(pot, *beta, n, w, opts),
            PgmEvaluator::CwCollapse { beta } => pgm_cw_collapse(*beta, n, w),
            PgmEvaluator::CwpCollapse { q, beta, opts } => pgm_cwp_collapse(*q, *beta, n, w, opts),
            PgmEvaluator::Quadrature { pot, beta, opts } => pgm_quadrature(pot, *beta, n, w, opts),
        }
    }

    pub fn method(&self) -> OracleMethod {
        match self {
            PgmEvaluator::Exact { .. } => OracleMethod::Exact,
            PgmEvaluator::CwCollapse { .. } => OracleMethod::CwCollapse,
            PgmEvaluator::CwpCollapse { .. } => OracleMethod::CwpCollapse,
            PgmEvaluator::Quadrature { .. } => OracleMethod::Quadrature,
        }
    }
}

/// One comparison of a finite-n oracle value against the predicted limit.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: u64,
    pub cylinder: String,
    pub oracle: f64,
    pub predicted: f64,
    pub gap: f64,
    pub method: &'static str,
}

/// Evaluate the oracle along an n-schedule for each cylinder and tabulate
/// the gaps to the predicted limit. Rows are ordered cylinder-major in input
/// order.
pub fn convergence_report(
    eval: &PgmEvaluator,
    predicted: &CylinderMeasure,
    alphabet: &Alphabet,
    cylinders: &[Word],
    schedule: &[u64],
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(cylinders.len() * schedule.len());
    for w in cylinders {
        let limit = predicted.cylinder(w);
        for &n in schedule {
            let oracle = eval.probability(n, w)?;
            rows.push(ConvergenceRow {
                n,
                cylinder: alphabet.format_word(w),
                oracle,
                predicted: limit,
                gap: (oracle - limit).abs(),
                method: eval.method().label(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::Alphabet;

    fn opts() -> OracleOptions {
        OracleOptions::default()
    }

    fn spin_word(s: &str) -> Word {
        Alphabet::spin().word_from_str(s).unwrap()
    }

    #[test]
    fn exact_tiny_beta_is_uniform() {
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 7).unwrap();
        let w = spin_word("+-");
        let p = pgm_exact(&pot, 1e-12, 8, &w, &opts()).unwrap();
        assert!((p - 0.25).abs() < 1e-10);
    }

    #[test]
    fn exact_cw_small_case_by_hand() {
        // n = 2: four words with energies exp(beta S^2 / 4), S in {2,0,0,-2}
        let cw = LocallyConstantPotential::cw();
        let beta: f64 = 2.0;
        let e = (beta * 4.0 / 4.0).exp();
        let expected_plus = (e + 1.0) / (2.0 * e + 2.0);
        let p = pgm_exact(&cw, beta, 2, &spin_word("+"), &opts()).unwrap();
        assert!((p - expected_plus).abs() < 1e-14);
        assert!((p - 0.5).abs() < 1e-14);
        let ppp = pgm_exact(&cw, beta, 2, &spin_word("++"), &opts()).unwrap();
        assert!((ppp - e / (2.0 * e + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn exact_flip_symmetry_is_bitwise() {
        let cw = LocallyConstantPotential::cw();
        for s in ["+", "++", "+-", "++-", "+--"] {
            let flipped: String = s
                .chars()
                .map(|c| if c == '+' { '-' } else { '+' })
                .collect();
            let a = pgm_exact(&cw, 1.7, 9, &spin_word(s), &opts()).unwrap();
            let b = pgm_exact(&cw, 1.7, 9, &spin_word(&flipped), &opts()).unwrap();
            assert_eq!(a, b, "flip symmetry broken for {s}");
        }
    }

    #[test]
    fn exact_matches_cw_collapse() {
        let cw = LocallyConstantPotential::cw();
        for &beta in &[0.5, 1.0, 2.0] {
            for s in ["+", "-", "++", "+-", "++-", "-+-"] {
                let w = spin_word(s);
                for &n in &[3u64, 7, 12, 18, 20] {
                    if (w.len() as u64) > n {
                        continue;
                    }
                    let e = pgm_exact(&cw, beta, n, &w, &opts()).unwrap();
                    let c = pgm_cw_collapse(beta, n, &w).unwrap();
                    assert!((e - c).abs() < 1e-12, "beta={beta} n={n} w={s}: {e} vs {c}");
                }
            }
        }
    }

    #[test]
    fn exact_capacity_error() {
        let pot = LocallyConstantPotential::cw();
        let small = OracleOptions {
            enum_cap: 1 << 10,
            ..opts()
        };
        assert!(matches!(
            pgm_exact(&pot, 1.0, 50, &spin_word("+"), &small),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn cw_collapse_tiny_beta() {
        let p = pgm_cw_collapse(1e-12, 10_000, &spin_word("++")).unwrap();
        assert!((p - 0.25).abs() < 1e-8);
    }

    #[test]
    fn cw_collapse_single_symbol_is_half() {
        for &(beta, n) in &[(0.5, 100u64), (2.0, 1001), (3.7, 12345)] {
            let plus = pgm_cw_collapse(beta, n, &spin_word("+")).unwrap();
            let minus = pgm_cw_collapse(beta, n, &spin_word("-")).unwrap();
            assert_eq!(plus, minus, "flip symmetry must be bitwise");
            assert!((plus - 0.5).abs() < 1e-12, "{plus}");
        }
    }

    #[test]
    fn cw_collapse_flip_symmetry_longer_words() {
        let a = pgm_cw_collapse(1.8, 5000, &spin_word("++-")).unwrap();
        let b = pgm_cw_collapse(1.8, 5000, &spin_word("--+")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cwp_collapse_tiny_beta() {
        let a = Alphabet::potts(3).unwrap();
        let w = a.word_from_str("1").unwrap();
        let p = pgm_cwp_collapse(3, 1e-12, 100, &w, &opts()).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn cwp_collapse_single_symbol_is_uniform() {
        let a = Alphabet::potts(3).unwrap();
        let vals: Vec<f64> = ["1", "2", "3"]
            .iter()
            .map(|s| pgm_cwp_collapse(3, 3.1, 500, &a.word_from_str(s).unwrap(), &opts()).unwrap())
            .collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[1], vals[2]);
        assert!((vals[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cwp_collapse_permutation_symmetry_is_bitwise() {
        let a = Alphabet::potts(3).unwrap();
        // swapping symbols 1 <-> 3 maps "112" to "332"
        let x = pgm_cwp_collapse(3, 3.5, 300, &a.word_from_str("112").unwrap(), &opts()).unwrap();
        let y = pgm_cwp_collapse(3, 3.5, 300, &a.word_from_str("332").unwrap(), &opts()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn cwp_collapse_capacity_error() {
        let a = Alphabet::potts(5).unwrap();
        let w = a.word_from_str("1").unwrap();
        assert!(matches!(
            pgm_cwp_collapse(5, 1.0, 100_000, &w, &opts()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn cwp_collapse_matches_exact_small() {
        // the q-state pairwise-match energy equals the norm of the count
        // vector; cross-check the multinomial collapse against a direct sum
        let q = 3usize;
        let beta = 1.4;
        let n = 7u64;
        let a = Alphabet::potts(q).unwrap();
        let w = a.word_from_str("12").unwrap();
        let direct = |prefix: &[u8]| -> f64 {
            let mut acc = LogSumAcc::new();
            let free = n as usize - prefix.len();
            let total = (q as u64).pow(free as u32);
            for r in 0..total {
                let mut counts = vec![0u64; q];
                for &s in prefix {
                    counts[s as usize] += 1;
                }
                let mut x = r;
                for _ in 0..free {
                    counts[(x % q as u64) as usize] += 1;
                    x /= q as u64;
                }
                let norm2: u64 = counts.iter().map(|&c| c * c).sum();
                acc.add(beta * norm2 as f64 / (2.0 * n as f64));
            }
            acc.total()
        };
        let expected = (direct(w.symbols()) - direct(&[])).exp();
        let got = pgm_cwp_collapse(q, beta, n, &w, &opts()).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn quadrature_zero_potential_is_uniform() {
        let zero =
            LocallyConstantPotential::from_table(Alphabet::spin(), 1, vec![0.0, 0.0]).unwrap();
        for s in ["+", "+-"] {
            let w = spin_word(s);
            let p = pgm_quadrature(&zero, 1.3, 40, &w, &opts()).unwrap();
            assert!(
                (p - 0.5f64.powi(w.len() as i32)).abs() < 1e-12,
                "w = {s}: {p}"
            );
        }
    }

    #[test]
    fn quadrature_matches_exact_generic_potential() {
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 7).unwrap();
        let beta = 1.5;
        for s in ["+", "++", "+-"] {
            let w = spin_word(s);
            let e = pgm_exact(&pot, beta, 18, &w, &opts()).unwrap();
            let qd = pgm_quadrature(&pot, beta, 18, &w, &opts()).unwrap();
            assert!(
                (e - qd).abs() < 1e-8,
                "w = {s}: exact {e} vs quadrature {qd}"
            );
        }
    }

    #[test]
    fn quadrature_matches_cw_collapse_larger_n() {
        let cw = LocallyConstantPotential::cw();
        let w = spin_word("++");
        let c = pgm_cw_collapse(2.0, 200, &w).unwrap();
        let qd = pgm_quadrature(&cw, 2.0, 200, &w, &opts()).unwrap();
        assert!((c - qd).abs() < 1e-8, "{c} vs {qd}");
    }

    #[test]
    fn normalization_of_every_method() {
        let a = Alphabet::spin();
        let cw = LocallyConstantPotential::cw();
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 7).unwrap();
        for p in 1..=3usize {
            let words: Vec<Word> = a.words_of_length(p).collect();
            let sum_exact: f64 = words
                .iter()
                .map(|w| pgm_exact(&pot, 1.5, 10, w, &opts()).unwrap())
                .sum();
            assert!((sum_exact - 1.0).abs() < 1e-10, "exact p={p}: {sum_exact}");
            let sum_cw: f64 = words
                .iter()
                .map(|w| pgm_cw_collapse(2.0, 400, w).unwrap())
                .sum();
            assert!((sum_cw - 1.0).abs() < 1e-10, "collapse p={p}: {sum_cw}");
            let sum_quad: f64 = words
                .iter()
                .map(|w| pgm_quadrature(&cw, 2.0, 60, w, &opts()).unwrap())
                .sum();
            assert!(
                (sum_quad - 1.0).abs() < 1e-10,
                "quadrature p={p}: {sum_quad}"
            );
        }
        let ap = Alphabet::potts(3).unwrap();
        for p in 1..=3usize {
            let sum_cwp: f64 = ap
                .words_of_length(p)
                .map(|w| pgm_cwp_collapse(3, 3.5, 200, &w, &opts()).unwrap())
                .sum();
            assert!((sum_cwp - 1.0).abs() < 1e-10, "cwp p={p}: {sum_cwp}");
        }
    }

    #[test]
    fn convergence_report_rows_and_gaps() {
        let a = Alphabet::spin();
        let eval = PgmEvaluator::CwCollapse { beta: 0.5 };
        let predicted = CylinderMeasure::uniform(2);
        let cylinders = vec![spin_word("++")];
        let schedule = vec![100u64, 1_000, 10_000];
        let rows = convergence_report(&eval, &predicted, &a, &cylinders, &schedule).unwrap();
        assert_eq!(rows.len(), 3);
        for pair in rows.windows(2) {
            assert!(
                pair[1].gap <= pair[0].gap * 1.2 + 1e-12,
                "gaps should shrink: {} then {}",
                pair[0].gap,
                pair[1].gap
            );
        }
        assert!(rows[2].gap < 5e-3);
        assert_eq!(rows[0].method, "cw-collapse");
        assert_eq!(rows[0].cylinder, "++");
    }
}
