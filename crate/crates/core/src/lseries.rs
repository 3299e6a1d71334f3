//! The L-function side: integral models, point counts a_p, the completed
//! L-function at s = 2, and L'(E, 0).
//!
//! For integer k the model Y² = X(X² + (k²/4 - 2)X + 1) clears to integer
//! coefficients by (X, Y) = (u/4, v/8) when k is odd and identically when k
//! is even.  The resulting model is reduced by exhaustive Weierstrass
//! substitutions whenever p¹² divides the discriminant, after which a_p is
//! counted in O(p) with a quadratic-character table (brute force at p = 2).
//!
//! With Λ(s) = (√N/2π)^s Γ(s) L(s) and Λ(s) = w Λ(2-s), the value L'(E, 0)
//! equals w Λ(2), and splitting the Mellin integral at y = t gives
//!
//! ```text
//! Λ_t(2) = Σ_n a_n [ e^{-c t}(1 + c t)/c² + w E₁(c/t) ],   c = 2πn/√N,
//! ```
//!
//! independent of t exactly when (N, w) are the true conductor and sign —
//! which is how `conductor_scan` finds them.

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Integer Weierstrass data for E_k, k ∈ ℤ \ {0, ±4}.
#[derive(Debug, Clone)]
pub struct IntegralModel {
    pub k: i64,
    /// v² = u³ + A u² + B u + C with (X, Y) = (u/d², v/d³).
    pub a_short: (i64, i64, i64),
    /// Scaling denominator d (1 for even k, 2 for odd k).
    pub scale_d: i64,
    /// Discriminant of the short model.
    pub disc: i128,
    /// Reduced general model [a1, a2, a3, a4, a6] used for counting.
    pub min_model: [i64; 5],
    /// Discriminant of the reduced model.
    pub disc_min: i128,
}

fn disc_of(m: &[i64; 5]) -> i128 {
    let [a1, a2, a3, a4, a6] = m.map(i128::from);
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
}

/// One reduction step u = p²u' + r, v = p³v' + s p²u' + t, if an integral
/// image exists.
fn try_reduce(m: &[i64; 5], p: i64) -> Option<[i64; 5]> {
    let [a1, a2, a3, a4, a6] = m.map(i128::from);
    let pp = i128::from(p);
    for r in 0..pp * pp {
        for s in 0..pp {
            for t in 0..pp * pp * pp {
                let n1 = a1 + 2 * s;
                let n2 = a2 - s * a1 + 3 * r - s * s;
                let n3 = a3 + r * a1 + 2 * t;
                let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
                let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
                let (p1, p2, p3, p4, p6) =
                    (pp, pp * pp, pp * pp * pp, pp * pp * pp * pp, pp.pow(6));
                if n1 % p1 == 0 && n2 % p2 == 0 && n3 % p3 == 0 && n4 % p4 == 0 && n6 % p6 == 0 {
                    return Some([
                        (n1 / p1) as i64,
                        (n2 / p2) as i64,
                        (n3 / p3) as i64,
                        (n4 / p4) as i64,
                        (n6 / p6) as i64,
                    ]);
                }
            }
        }
    }
    None
}

/// Integral model for E_k; errors on singular k ∈ {0, ±4}.
pub fn integral_model(k: i64) -> Result<IntegralModel> {
    if k == 0 || k == 4 || k == -4 {
        return Err(Error::BadLSeriesParameter { k });
    }
    let (a_short, scale_d) = if k % 2 == 0 {
        ((k * k / 4 - 2, 1, 0), 1)
    } else {
        ((k * k - 8, 16, 0), 2)
    };
    let start = [0, a_short.0, 0, a_short.1, a_short.2];
    let disc = disc_of(&start);
    let mut min_model = start;
    let mut disc_min = disc;
    let mut changed = true;
    while changed {
        changed = false;
        for p in [2i64, 3, 5, 7] {
            let p12 = i128::from(p).pow(12);
            if disc_min % p12 == 0 {
                if let Some(m) = try_reduce(&min_model, p) {
                    min_model = m;
                    disc_min = disc_of(&m);
                    changed = true;
                }
            }
        }
    }
    Ok(IntegralModel { k, a_short, scale_d, disc, min_model, disc_min })
}

/// a_p by point counting on the reduced model.
///
/// Good reduction: a_p = p + 1 - #E(F_p).  Bad reduction: a_p = p - #E^ns
/// (ns = nonsingular points including O), which is ±1 for split/nonsplit
/// multiplicative and 0 for additive reduction.
pub fn a_p(m: &IntegralModel, p: u32) -> i64 {
    let pi = i64::from(p);
    let bad = m.disc_min % i128::from(p) == 0;
    if p == 2 {
        let md = m.min_model.map(|x| x.rem_euclid(2));
        let [a1, a2, a3, a4, a6] = md;
        let mut ns = 0i64;
        for x in 0..2i64 {
            for y in 0..2i64 {
                let f = (y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6)
                    .rem_euclid(2);
                if f == 0 {
                    let fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4).rem_euclid(2);
                    let fy = (2 * y + a1 * x + a3).rem_euclid(2);
                    if bad && fx == 0 && fy == 0 {
                        continue;
                    }
                    ns += 1;
                }
            }
        }
        return if bad { 2 - (ns + 1) } else { 2 + 1 - (ns + 1) };
    }
    // odd p: complete the square, (2y + a1x + a3)² = 4x³ + b2x² + 2b4x + b6
    let [a1, a2, a3, a4, a6] = m.min_model.map(|x| x.rem_euclid(pi));
    let b2 = (a1 * a1 + 4 * a2).rem_euclid(pi);
    let b4 = (2 * a4 + a1 * a3).rem_euclid(pi);
    let b6 = (a3 * a3 + 4 * a6).rem_euclid(pi);
    let mut square = vec![false; p as usize];
    for i in 0..pi {
        square[((i * i) % pi) as usize] = true;
    }
    let chi = |v: i64| -> i64 {
        let v = v.rem_euclid(pi);
        if v == 0 {
            0
        } else if square[v as usize] {
            1
        } else {
            -1
        }
    };
    let mut chi_sum = 0i64;
    let mut singular = 0i64;
    for x in 0..pi {
        let f = (((4 * x + b2) % pi * x + 2 * b4) % pi * x + b6).rem_euclid(pi);
        chi_sum += chi(f);
        if bad && f == 0 {
            let fp = (12 * x % pi * x + 2 * b2 * x + 2 * b4).rem_euclid(pi);
            if fp == 0 {
                singular += 1;
            }
        }
    }
    let ap = if bad { singular - 1 - chi_sum } else { -chi_sum };
    debug_assert!(
        bad || (ap * ap) as f64 <= 4.0 * p as f64,
        "Hasse bound violated at p = {p}: a_p = {ap}"
    );
    ap
}

/// Sieve of a_n for n <= n_max from prime data (Hecke recurrence at good
/// primes, a_{p^e} = a_p^e at bad ones, multiplicativity everywhere).
pub fn a_n_list(m: &IntegralModel, n_max: usize) -> Vec<i64> {
    let mut a = vec![0i64; n_max + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    let mut spf = vec![0u32; n_max + 1]; // smallest prime factor
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut pe = p;
        let mut e = 1u32;
        let mut rest = n / p;
        while rest % p == 0 {
            rest /= p;
            pe *= p;
            e += 1;
        }
        if rest > 1 {
            a[n] = a[pe] * a[rest]; // coprime split
            continue;
        }
        // n = p^e
        if e == 1 {
            a[n] = a_p(m, p as u32);
        } else if m.disc_min % (p as i128) == 0 {
            a[n] = a[p].pow(e);
        } else {
            a[n] = a[p] * a[pe / p] - (p as i64) * a[pe / p / p];
        }
    }
    a
}

/// Exponential integral E₁(x) for x > 0.
pub fn exp_integral_e1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        // series: E1 = -gamma - ln x + sum (-1)^{k+1} x^k/(k k!)
        const EULER_GAMMA: f64 = 0.5772156649015328606;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * (sum.abs() + 1.0) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // continued fraction e^{-x}/(x+1- 1/(x+3- 4/(x+5- 9/(...))))
        // evaluated by the modified Lentz algorithm
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200u32 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x).exp() * h
    }
}

/// Λ_t(2) for the candidate pair (N, w).
pub fn lambda2(a: &[i64], n_conductor: u64, w: i32, t: f64) -> f64 {
    let sqrt_n = (n_conductor as f64).sqrt();
    let mut sum = 0.0;
    for (n, an) in a.iter().enumerate().skip(1) {
        let c = 2.0 * PI * n as f64 / sqrt_n;
        if c * t.min(1.0 / t) > 45.0 {
            break;
        }
        let term = (-c * t).exp() * (1.0 + c * t) / (c * c) + w as f64 * exp_integral_e1(c / t);
        sum += *an as f64 * term;
    }
    sum
}

/// Terms needed so the weight e^{-2πn/√N} falls below 1e-14.
pub fn default_n_max(n_conductor: u64) -> usize {
    let sqrt_n = (n_conductor as f64).sqrt();
    ((45.0 / 1.25) * sqrt_n / (2.0 * PI)).ceil() as usize + 10
}

/// Divisor-of-the-discriminant candidates for the conductor.
pub fn default_candidates(m: &IntegralModel) -> Vec<u64> {
    let d = m.disc_min.unsigned_abs();
    let mut primes = Vec::new();
    let mut dd = d;
    let mut p = 2u128;
    while p * p <= dd {
        if dd % p == 0 {
            primes.push(p as u64);
            while dd % p == 0 {
                dd /= p;
            }
        }
        p += 1;
    }
    if dd > 1 {
        primes.push(dd as u64);
    }
    let mut cands = vec![1u64];
    for p in primes {
        let e_max = (0..).take_while(|e| d % u128::from(p).pow(e + 1) == 0).count() as u32 + 2;
        let e_max = e_max.min(8);
        let mut next = Vec::new();
        for c in &cands {
            let mut pe = 1u64;
            for _ in 0..=e_max {
                next.push(c * pe);
                pe = pe.saturating_mul(p);
                if *c > u64::MAX / pe.max(1) {
                    break;
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        cands = next;
    }
    cands.retain(|&n| n > 0 && n < 1_000_000);
    cands.sort_unstable();
    cands
}

/// Functional-equation residual of (N, w): the spread of Λ_t(2) over test
/// arguments t.
pub fn fe_residual(a: &[i64], n_conductor: u64, w: i32) -> f64 {
    let base = lambda2(a, n_conductor, w, 1.0);
    let mut worst = 0.0f64;
    for t in [1.1, 1.31] {
        worst = worst.max((lambda2(a, n_conductor, w, t) - base).abs());
    }
    worst / (1.0 + base.abs())
}

/// Scan candidate conductors; the true (N, w) is the unique pair whose
/// completed L-value is split-point independent.
pub fn conductor_scan(m: &IntegralModel, candidates: &[u64]) -> Result<(u64, i32)> {
    let n_max_all = candidates.iter().map(|&n| default_n_max(n)).max().unwrap_or(64);
    let a = a_n_list(m, n_max_all);
    let mut passing = Vec::new();
    for &n in candidates {
        for w in [1i32, -1] {
            if fe_residual(&a, n, w) < 1e-6 {
                passing.push((n, w));
            }
        }
    }
    match passing.len() {
        0 => Err(Error::ConductorScan(format!(
            "no candidate conductor passes for k = {} (tried {})",
            m.k,
            candidates.len()
        ))),
        1 => Ok(passing[0]),
        _ => Err(Error::ConductorScan(format!(
            "ambiguous conductor for k = {}: {passing:?}",
            m.k
        ))),
    }
}

/// L'(E, 0) = w Λ(2) for a verified (N, w).
pub fn l_prime_at_zero(m: &IntegralModel, n_conductor: u64, w: i32, n_max: usize) -> f64 {
    let a = a_n_list(m, n_max);
    w as f64 * lambda2(&a, n_conductor, w, 1.0)
}

// --- a_p cache -------------------------------------------------------------

/// Plain-text cache: first line "k=<k>", then "p a_p" lines.
pub fn write_ap_cache(dir: &Path, m: &IntegralModel, a: &[(u32, i64)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::File::create(cache_path(dir, m.k))?;
    writeln!(f, "k={}", m.k)?;
    for (p, ap) in a {
        writeln!(f, "{p} {ap}")?;
    }
    Ok(())
}

pub fn read_ap_cache(dir: &Path, k: i64) -> Result<Option<Vec<(u32, i64)>>> {
    let path = cache_path(dir, k);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(first) if first.trim() == format!("k={k}") => {}
        _ => return Ok(None),
    }
    let mut out = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        if let (Some(p), Some(ap)) = (it.next(), it.next()) {
            if let (Ok(p), Ok(ap)) = (p.parse(), ap.parse()) {
                out.push((p, ap));
            }
        }
    }
    Ok(Some(out))
}

fn cache_path(dir: &Path, k: i64) -> PathBuf {
    dir.join(format!("ap_k{k}.txt"))
}

/// Conductor cache: lines "k N w".
pub fn read_conductor_cache(dir: &Path, k: i64) -> Option<(u64, i32)> {
    let text = std::fs::read_to_string(dir.join("conductors.txt")).ok()?;
    for line in text.lines() {
        let mut it = line.split_whitespace();
        if let (Some(kk), Some(n), Some(w)) = (it.next(), it.next(), it.next()) {
            if kk.parse::<i64>() == Ok(k) {
                if let (Ok(n), Ok(w)) = (n.parse(), w.parse()) {
                    return Some((n, w));
                }
            }
        }
    }
    None
}

pub fn append_conductor_cache(dir: &Path, k: i64, n: u64, w: i32) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("conductors.txt"))?;
    writeln!(f, "{k} {n} {w}")?;
    Ok(())
}
