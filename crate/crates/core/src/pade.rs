//! Pade summation of truncated power series, one complex coefficient sequence
//! at a time.
//!
//! The [M/N] approximant a(x)/b(x) with b_0 = 1 is determined by the standard
//! linear system on the denominator coefficients. Two stabilizations are
//! applied, both exact covariances of the Pade table:
//!
//! * Growth rescaling: series arising from the envelope recursion can grow
//!   like |c_l| ~ g^l with g spanning many decades, which makes the raw
//!   denominator (Hankel) system artificially ill-scaled. We substitute
//!   x = s x' with s = 1 / max_{l >= 1} |c_l|^(1/l), which maps the rescaled
//!   coefficients into O(1) and leaves the value of the approximant unchanged
//!   in exact arithmetic.
//! * Rank-tolerant elimination: when the series is exactly rational of lower
//!   degree (e.g. geometric), the denominator system is singular but
//!   consistent; the classical Pade-block theory says any basic solution
//!   reproduces the reduced rational. Full-pivot elimination detects rank
//!   deficiency (pivot ratio below 1e-13), checks consistency of the trailing
//!   equations, and completes with free variables set to zero. An
//!   inconsistent system, a vanishing denominator at the evaluation point, or
//!   non-finite values fall back to the plain Taylor sum, and the caller is
//!   told so it can keep a diagnostic count.

use num_complex::Complex64;

/// Default numerator/denominator split with M + N = L: equal halves for even
/// L, numerator one higher for odd L.
pub fn default_split(l: usize) -> (usize, usize) {
    if l % 2 == 0 {
        (l / 2, l / 2)
    } else {
        (l / 2 + 1, l / 2)
    }
}

/// Horner evaluation of the truncated Taylor series at `x`.
pub fn taylor_eval(coeffs: &[Complex64], x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn horner(coeffs: &[Complex64], x: f64) -> Complex64 {
    taylor_eval(coeffs, x)
}

/// Evaluate the [M/N] Pade approximant of the series at `x`. Returns the
/// value and `true` when the Taylor fallback was taken instead.
///
/// `coeffs` must hold at least M + N + 1 entries; the approximant is built
/// from the first M + N + 1, while a fallback sums everything provided.
pub fn pade_eval(coeffs: &[Complex64], x: f64, m: usize, n: usize) -> (Complex64, bool) {
    let l = m + n;
    assert!(
        coeffs.len() > l,
        "need at least M + N + 1 = {} coefficients, got {}",
        l + 1,
        coeffs.len()
    );
    let c = &coeffs[..=l];
    if c.iter().all(|z| z.norm_sqr() == 0.0) {
        return (Complex64::new(0.0, 0.0), false);
    }

    // Growth rescaling x = s x'.
    let mut g: f64 = 0.0;
    for (li, z) in c.iter().enumerate().skip(1) {
        let a = z.norm();
        if a > 0.0 {
            g = g.max(a.powf(1.0 / li as f64));
        }
    }
    if g == 0.0 {
        // Constant series: the approximant is the constant.
        return (c[0], false);
    }
    let s = 1.0 / g;
    let cs: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(li, z)| z * s.powi(li as i32))
        .collect();
    let xp = x * g;

    let b = if n == 0 {
        Some(vec![Complex64::new(1.0, 0.0)])
    } else {
        solve_denominator(&cs, m, n)
    };
    let Some(b) = b else {
        return (taylor_eval(coeffs, x), true);
    };

    // Numerator by convolution: a_k = sum_{j<=min(k,N)} b_j c_{k-j}.
    let a: Vec<Complex64> = (0..=m)
        .map(|k| {
            (0..=k.min(n))
                .map(|j| b[j] * cs[k - j])
                .sum::<Complex64>()
        })
        .collect();

    let num = horner(&a, xp);
    let den = horner(&b, xp);
    // Guard against evaluating on top of a spurious pole: the denominator
    // must not be the result of catastrophic cancellation.
    let den_scale: f64 = b
        .iter()
        .enumerate()
        .map(|(k, bk)| bk.norm() * xp.abs().powi(k as i32))
        .sum();
    if !num.is_finite() || !den.is_finite() || den.norm() < 1e-10 * den_scale {
        return (taylor_eval(coeffs, x), true);
    }
    let value = num / den;
    if !value.is_finite() {
        return (taylor_eval(coeffs, x), true);
    }
    (value, false)
}

/// Denominator coefficients [1, b_1, .., b_N] from the linear system
/// sum_{j=1..N} c_{m+i-j} b_j = -c_{m+i}, i = 1..N (c with negative index is
/// zero). Returns None when the system is singular and inconsistent.
fn solve_denominator(cs: &[Complex64], m: usize, n: usize) -> Option<Vec<Complex64>> {
    let mut mat = vec![Complex64::new(0.0, 0.0); n * n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..=n {
        for j in 1..=n {
            let idx = m as i64 + i as i64 - j as i64;
            if idx >= 0 {
                mat[(i - 1) * n + (j - 1)] = cs[idx as usize];
            }
        }
        rhs[i - 1] = -cs[m + i];
    }
    let x = solve_full_pivot(mat, rhs, n)?;
    let mut b = Vec::with_capacity(n + 1);
    b.push(Complex64::new(1.0, 0.0));
    b.extend(x);
    Some(b)
}

/// Full-pivot Gaussian elimination with rank-tolerant completion: on rank
/// deficiency the trailing right-hand side must be consistent (relative to
/// the initial data scale), in which case free variables are set to zero.
fn solve_full_pivot(
    mut a: Vec<Complex64>,
    mut b: Vec<Complex64>,
    n: usize,
) -> Option<Vec<Complex64>> {
    if n == 0 {
        return Some(Vec::new());
    }
    let scale0 = a
        .iter()
        .chain(b.iter())
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    if scale0 == 0.0 {
        // Zero matrix and zero rhs: x = 0 works.
        return Some(vec![Complex64::new(0.0, 0.0); n]);
    }

    let mut col_of = (0..n).collect::<Vec<usize>>(); // col_of[k] = original column in slot k
    let mut first_pivot = 0.0f64;
    let mut rank = n;

    for step in 0..n {
        // Locate the largest remaining entry.
        let (mut pi, mut pj, mut pmax) = (step, step, 0.0f64);
        for i in step..n {
            for j in step..n {
                let v = a[i * n + j].norm();
                if v > pmax {
                    pmax = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if step == 0 {
            first_pivot = pmax;
        }
        if pmax == 0.0 || pmax < 1e-13 * first_pivot {
            rank = step;
            break;
        }
        if pi != step {
            for j in 0..n {
                a.swap(step * n + j, pi * n + j);
            }
            b.swap(step, pi);
        }
        if pj != step {
            for i in 0..n {
                a.swap(i * n + step, i * n + pj);
            }
            col_of.swap(step, pj);
        }
        let pivot = a[step * n + step];
        for i in step + 1..n {
            let factor = a[i * n + step] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            a[i * n + step] = Complex64::new(0.0, 0.0);
            for j in step + 1..n {
                let upd = a[step * n + j] * factor;
                a[i * n + j] -= upd;
            }
            let upd = b[step] * factor;
            b[i] -= upd;
        }
    }

    if rank < n {
        // Consistency of the eliminated trailing equations.
        for bi in b.iter().take(n).skip(rank) {
            if bi.norm() > 1e-12 * scale0 {
                return None;
            }
        }
    }

    // Back-substitute the leading rank x rank triangle, free variables zero.
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..rank).rev() {
        let mut acc = b[i];
        for j in i + 1..rank {
            acc -= a[i * n + j] * y[j];
        }
        y[i] = acc / a[i * n + i];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        x[col_of[k]] = y[k];
    }
    Some(x)
}
