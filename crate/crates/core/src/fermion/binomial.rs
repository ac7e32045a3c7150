use std::f64::consts::TAU;

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `ln n! − [(n + ½) ln n − n + ½ ln 2π]`, the Stirling remainder.
fn stirling_error(n: usize) -> f64 {
    if n <= 15 {
        let x = n as f64;
        return ln_factorial(n as u64) - (x + 0.5) * x.ln() + x - 0.5 * TAU.ln();
    }
    let x = n as f64;
    let x2 = x * x;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2) / x
}

/// `x ln(x/m) + m − x` without cancellation when `x ≈ m`.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut term = 2.0 * x * v;
        let v2 = v * v;
        for j in 1.. {
            term *= v2;
            let next = s + term / (2 * j + 1) as f64;
            if next == s {
                break;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln c^K_n(p)` for `0 < p < 1`, in saddle-point form: the large
/// `ln K!`-sized terms cancel analytically rather than numerically.
fn ln_term(k: usize, n: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    let kf = k as f64;
    if n == 0 {
        return kf * (-p).ln_1p();
    }
    if n == k {
        return kf * p.ln();
    }
    let (nf, rf) = (n as f64, (k - n) as f64);
    let lc = stirling_error(k) - stirling_error(n) - stirling_error(k - n) - deviance(nf, kf * p) - deviance(rf, kf * q);
    lc - 0.5 * (TAU * nf * rf / kf).ln()
}

/// `c^K_n(p) = C(K, n) p^n (1−p)^{K−n}`, accumulated in log space.
pub fn binom(k: usize, n: usize, p: f64) -> Result<f64> {
    if n > k {
        return Err(Error::InvalidIndex { n, k });
    }
    check_p(p)?;
    if p == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if n == k { 1.0 } else { 0.0 });
    }
    Ok(ln_term(k, n, p).exp())
}

/// `c^K_n(p)` for `n = 0..=K`, with the largest log term subtracted before
/// exponentiation and the row renormalized.
pub fn binom_row(k: usize, p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    if p == 0.0 || p == 1.0 {
        return (0..=k).map(|n| binom(k, n, p)).collect();
    }
    let logs: Vec<f64> = (0..=k).map(|n| ln_term(k, n, p)).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let row: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = row.iter().sum();
    Ok(row.into_iter().map(|x| x / total).collect())
}
