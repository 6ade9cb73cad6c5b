//! Binomial tail sums in log space.
//!
//! Tails are accumulated outward from the boundary term using the pmf ratio
//! recurrence, always on the side of the mode that does not contain it, so
//! the sum has monotonically shrinking terms and stops early. When the
//! requested tail contains the mode the complement is summed instead.

/// `ln C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    let (n, k) = (n as f64, k as f64);
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// `ln [C(n, j) x^j (1-x)^(n-j)]` for `x` in (0, 1).
pub fn ln_pmf(n: u64, j: u64, x: f64) -> f64 {
    ln_choose(n, j) + j as f64 * libm::log(x) + (n - j) as f64 * libm::log1p(-x)
}

/// `P(X >= j)` for `X ~ Binomial(n, x)`, `x` in (0, 1).
pub fn upper_tail(n: u64, j: u64, x: f64) -> f64 {
    debug_assert!(x > 0.0 && x < 1.0);
    if j == 0 {
        return 1.0;
    }
    if j > n {
        return 0.0;
    }
    let mode = libm::floor((n + 1) as f64 * x) as u64;
    let ln_odds = libm::log(x) - libm::log1p(-x);
    if j > mode {
        // sum_{i=j}^{n}, terms decrease with i
        let lead = ln_pmf(n, j, x);
        let mut ln_rel = 0.0;
        let mut total = 1.0;
        for i in j..n {
            ln_rel += libm::log((n - i) as f64) - libm::log((i + 1) as f64) + ln_odds;
            let term = libm::exp(ln_rel);
            total += term;
            if term < total * 1e-17 {
                break;
            }
        }
        clamp01(libm::exp(lead) * total)
    } else {
        // 1 - sum_{i=0}^{j-1}, terms decrease as i falls
        let lead = ln_pmf(n, j - 1, x);
        let mut ln_rel = 0.0;
        let mut total = 1.0;
        let mut i = j - 1;
        while i > 0 {
            ln_rel += libm::log(i as f64) - libm::log((n - i + 1) as f64) - ln_odds;
            let term = libm::exp(ln_rel);
            total += term;
            if term < total * 1e-17 {
                break;
            }
            i -= 1;
        }
        clamp01(1.0 - libm::exp(lead) * total)
    }
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}
