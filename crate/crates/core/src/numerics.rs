//! Small numeric kernels shared across the crate: stable log-sum-exp,
//! compensated summation and Gauss-Legendre nodes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// log(e^a + e^b) without overflow.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// log Σ e^{x_i} over a slice.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Streaming log-sum-exp accumulator. Keeps a running maximum and a scaled,
/// compensated mantissa sum so that streams of millions of log-terms fold in
/// O(1) memory without drift.
#[derive(Debug, Clone)]
pub struct LogSumAcc {
    max: f64,
    sum: f64,
    comp: f64,
}

impl LogSumAcc {
    pub fn new() -> Self {
        LogSumAcc {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    #[inline]
    fn compensated_add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Add a term given as log(value).
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.compensated_add((x - self.max).exp());
        } else {
            let f = (self.max - x).exp();
            self.sum *= f;
            self.comp *= f;
            self.compensated_add(1.0);
            self.max = x;
        }
    }

    /// log of the accumulated total.
    pub fn total(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + (self.sum + self.comp).ln()
        }
    }
}

impl Default for LogSumAcc {
    fn default() -> Self {
        Self::new()
    }
}

/// Kahan-Babuska compensated sum. Used where long running sums of logs
/// would otherwise accumulate rounding drift.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    s: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum { s: 0.0, c: 0.0 }
    }

    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Legendre polynomial P_n and derivative P'_n at x, by the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Chebyshev initial guesses. Nodes come out exactly
/// antisymmetric because only one half is computed and then mirrored.
fn gauss_legendre_raw(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_pair(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // cos of angles near pi/2 gives the node closest to zero last
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

type NodeWeights = Arc<(Vec<f64>, Vec<f64>)>;

/// Cached Gauss-Legendre rule of a given node count.
pub fn gauss_legendre(n: usize) -> NodeWeights {
    static CACHE: OnceLock<Mutex<HashMap<usize, NodeWeights>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(gauss_legendre_raw(n)))
        .clone()
}
