//! Numerical certification that the bound F is convex on its domain
//! {xᵢ ≥ 0, |x|² ≤ ¼}.
//!
//! F splits as Σₖ Fₖ with Fₖ(x) = g₂²[H_C(r) − f(r) log g₂²], r = |x| and
//! g₂ = xₖ/r.  Convexity of each Fₖ reduces, via Sylvester's criterion on a
//! 2×2 block plus a scalar η on the orthogonal complement, to the sign of
//! three quantities α, η and αγ−β² built from the partial derivatives
//! G_nm = ∂ⁿ_{g₁}∂ᵐ_{g₂}Fₖ.  This module evaluates those closed forms on a
//! grid, checks the auxiliary polynomial p(z) that controls η, and samples
//! finite-difference Hessians of F itself as an end-to-end cross-check.
//!
//! Internally everything is computed in natural log; base conversion scales
//! all entropy-like quantities uniformly and cannot change any sign verdict.

use serde::Serialize;

use crate::bounds::FirstRowVector;
use crate::error::{Error, Result};
use crate::linalg;
use crate::{xlogx, LogBase};

/// Below this distance from the endpoints of [0, ½] the closed-form
/// derivatives are replaced by one-sided finite differences.
pub const ENDPOINT_FD_ZONE: f64 = 1e-6;

/// Certificate threshold: the grid minima must not dip below this.
pub const CERT_FLOOR: f64 = -1e-9;

/// H_C, f and their first two derivatives at one r.
///
/// H_C is entropy-like and carries the log base; f = ½(1−√(1−4r²)) is a
/// probability and does not.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HcF {
    pub hc: f64,
    pub f: f64,
    pub hc_p: f64,
    pub hc_pp: f64,
    pub f_p: f64,
    pub f_pp: f64,
}

/// Raw natural-log data used by both the public op and the grid scan.
#[derive(Clone, Copy)]
struct HcFNats {
    hc: f64,
    f: f64,
    hc_p: f64,
    hc_pp: f64,
    f_p: f64,
    f_pp: f64,
}

/// Closed forms, stable across the whole open interval:
/// b = (1−q)/2 is evaluated as 2r²/(1+q) and ln(a) as ln_1p(−b); near q = 0
/// the log ratio ln(a/b) = 2q + 2q³/3 + … switches to its series.
fn hc_f_nats(r: f64) -> HcFNats {
    debug_assert!((0.0..=0.5).contains(&r));
    let q2 = (1.0 - 4.0 * r * r).max(0.0);
    let q = q2.sqrt();
    let b = 2.0 * r * r / (1.0 + q); // = (1-q)/2 without cancellation
    let a = 1.0 - b;
    let ln_a = (-b).ln_1p();
    let ln_b = if b > 0.0 { b.ln() } else { 0.0 };
    let hc = -(a * ln_a) - if b > 0.0 { b * ln_b } else { 0.0 };

    let (hc_p, hc_pp);
    if q < 1e-5 {
        // ln(a/b)/q = 2 + 2q^2/3 + 2q^4/5 + ...
        let lab_over_q = 2.0 + 2.0 * q2 / 3.0 + 2.0 * q2 * q2 / 5.0;
        hc_p = 2.0 * r * lab_over_q;
        // (2/q^3) ln(a/b) - 4/q^2 = 4/3 + (4/5) q^2 + ...
        hc_pp = 4.0 / 3.0 + 0.8 * q2;
    } else {
        let lab = ln_a - ln_b;
        hc_p = 2.0 * r / q * lab;
        hc_pp = 2.0 / (q2 * q) * lab - 4.0 / q2;
    }
    let f_p = if q > 0.0 { 2.0 * r / q } else { f64::INFINITY };
    let f_pp = if q > 0.0 { 2.0 / (q2 * q) } else { f64::INFINITY };
    HcFNats {
        hc,
        f: b,
        hc_p,
        hc_pp,
        f_p,
        f_pp,
    }
}

/// H_C(r), f(r) and derivatives on [0, ½].
///
/// Within [`ENDPOINT_FD_ZONE`] of either endpoint the derivatives fall back
/// to one-sided finite differences (f′ and f″ genuinely diverge at r = ½;
/// the fallback reports large finite approximations instead of infinities).
pub fn hc_and_f(r: f64, base: LogBase) -> Result<HcF> {
    if !(0.0..=0.5).contains(&r) {
        return Err(Error::domain(format!("r={r} outside [0, 1/2]")));
    }
    let scale = base.scale();
    let data = hc_f_nats(r);
    let near_edge = r < ENDPOINT_FD_ZONE || r > 0.5 - ENDPOINT_FD_ZONE;
    let (hc_p, hc_pp, f_p, f_pp) = if near_edge {
        let h = ENDPOINT_FD_ZONE;
        // Step into the interior from whichever endpoint we sit at.
        let sign = if r < 0.25 { 1.0 } else { -1.0 };
        let v0 = hc_f_nats(r);
        let v1 = hc_f_nats(r + sign * h);
        let v2 = hc_f_nats(r + sign * 2.0 * h);
        let d1 = |f0: f64, f1: f64| sign * (f1 - f0) / h;
        let d2 = |f0: f64, f1: f64, f2: f64| (f2 - 2.0 * f1 + f0) / (h * h);
        (
            d1(v0.hc, v1.hc),
            d2(v0.hc, v1.hc, v2.hc),
            d1(v0.f, v1.f),
            d2(v0.f, v1.f, v2.f),
        )
    } else {
        (data.hc_p, data.hc_pp, data.f_p, data.f_pp)
    };
    Ok(HcF {
        hc: data.hc * scale,
        f: data.f,
        hc_p: hc_p * scale,
        hc_pp: hc_pp * scale,
        f_p,
        f_pp,
    })
}

/// All Sylvester data at one grid point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvexityPoint {
    pub r: f64,
    pub g2: f64,
    pub hc: f64,
    pub f: f64,
    pub hc_p: f64,
    pub hc_pp: f64,
    pub f_p: f64,
    pub f_pp: f64,
    pub g10: f64,
    pub g01: f64,
    pub g20: f64,
    pub g11: f64,
    pub g02: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
    pub det: f64,
}

fn sylvester_nats(r: f64, g2: f64) -> ConvexityPoint {
    let d = hc_f_nats(r);
    let lg = 2.0 * g2.ln();
    let g2sq = g2 * g2;
    let g10 = g2sq * (d.hc_p - d.f_p * lg);
    let g01 = 2.0 * g2 * (d.hc - d.f * (1.0 + lg));
    let g20 = g2sq * (d.hc_pp - d.f_pp * lg);
    let g11 = 2.0 * g2 * (d.hc_p - d.f_p * (1.0 + lg));
    let g02 = 2.0 * (d.hc - d.f * (3.0 + lg));
    let alpha = g20;
    let beta = (1.0 - g2sq).max(0.0).sqrt() / r * (g11 - g01 / r);
    let eta = (r * g10 - g2 * g01) / (r * r);
    let gamma = (1.0 - g2sq) / (r * r) * g02 + eta;
    let det = alpha * gamma - beta * beta;
    ConvexityPoint {
        r,
        g2,
        hc: d.hc,
        f: d.f,
        hc_p: d.hc_p,
        hc_pp: d.hc_pp,
        f_p: d.f_p,
        f_pp: d.f_pp,
        g10,
        g01,
        g20,
        g11,
        g02,
        alpha,
        beta,
        gamma,
        eta,
        det,
    }
}

/// Gradient/Hessian entries and the Sylvester quantities α, β, γ, η, det at
/// one point of the open domain r ∈ (0, ½), g₂ ∈ (0, 1].
pub fn sylvester_point(r: f64, g2: f64, base: LogBase) -> Result<ConvexityPoint> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::domain(format!("r={r} outside (0, 1/2)")));
    }
    if !(g2 > 0.0 && g2 <= 1.0) {
        return Err(Error::domain(format!("g2={g2} outside (0, 1]")));
    }
    let s = base.scale();
    let mut p = sylvester_nats(r, g2);
    p.hc *= s;
    p.hc_p *= s;
    p.hc_pp *= s;
    p.g10 *= s;
    p.g01 *= s;
    p.g20 *= s;
    p.g11 *= s;
    p.g02 *= s;
    p.alpha *= s;
    p.beta *= s;
    p.gamma *= s;
    p.eta *= s;
    p.det = p.alpha * p.gamma - p.beta * p.beta;
    Ok(p)
}

/// Outcome of the grid scan.
#[derive(Clone, Debug, Serialize)]
pub struct GridCertificate {
    pub grid_size: usize,
    pub margin_eps: f64,
    pub min_alpha: f64,
    pub min_eta: f64,
    pub min_det: f64,
    pub pass: bool,
    /// Points where α, η or det dipped below the certificate floor.
    pub failures: Vec<(f64, f64)>,
    /// Observational only: det non-decreasing in r along every g₂ line.
    pub det_monotone_in_r: bool,
    pub log_base: LogBase,
}

struct RowScan {
    min_alpha: f64,
    min_eta: f64,
    min_det: f64,
    failures: Vec<(f64, f64)>,
    monotone: bool,
}

/// Scan an n×n grid over (ε, ½−ε) × (ε, 1] and certify the Sylvester signs.
///
/// The verdict is `pass` iff min α, min η and min det all stay above
/// [`CERT_FLOOR`]. Monotonicity of det in r is recorded but never gates the
/// verdict. Grid lines are independent; with the `parallel` feature they are
/// scanned concurrently and reduced in a fixed order.
pub fn scan_grid(n: usize, eps: f64, base: LogBase) -> Result<GridCertificate> {
    if n < 100 {
        return Err(Error::domain(format!("grid size {n} below minimum 100")));
    }
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::domain(format!("eps={eps} outside (0, 1e-3]")));
    }
    let r_lo = eps;
    let r_hi = 0.5 - eps;
    let scan_g2_line = |j: usize| -> RowScan {
        let g2 = eps + (1.0 - eps) * j as f64 / (n - 1) as f64;
        let mut out = RowScan {
            min_alpha: f64::INFINITY,
            min_eta: f64::INFINITY,
            min_det: f64::INFINITY,
            failures: Vec::new(),
            monotone: true,
        };
        let mut prev_det = f64::NEG_INFINITY;
        for i in 0..n {
            let r = r_lo + (r_hi - r_lo) * i as f64 / (n - 1) as f64;
            let p = sylvester_nats(r, g2);
            out.min_alpha = out.min_alpha.min(p.alpha);
            out.min_eta = out.min_eta.min(p.eta);
            out.min_det = out.min_det.min(p.det);
            if p.alpha < CERT_FLOOR || p.eta < CERT_FLOOR || p.det < CERT_FLOOR {
                out.failures.push((r, g2));
            }
            if p.det < prev_det - 1e-12 {
                out.monotone = false;
            }
            prev_det = p.det;
        }
        out
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<RowScan> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(scan_g2_line).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<RowScan> = (0..n).map(scan_g2_line).collect();

    let s = base.scale();
    let mut cert = GridCertificate {
        grid_size: n,
        margin_eps: eps,
        min_alpha: f64::INFINITY,
        min_eta: f64::INFINITY,
        min_det: f64::INFINITY,
        pass: false,
        failures: Vec::new(),
        det_monotone_in_r: true,
        log_base: base,
    };
    for row in rows {
        cert.min_alpha = cert.min_alpha.min(row.min_alpha);
        cert.min_eta = cert.min_eta.min(row.min_eta);
        cert.min_det = cert.min_det.min(row.min_det);
        cert.failures.extend(row.failures);
        cert.det_monotone_in_r &= row.monotone;
    }
    cert.min_alpha *= s;
    cert.min_eta *= s;
    cert.min_det *= s * s;
    cert.pass =
        cert.min_alpha >= CERT_FLOOR && cert.min_eta >= CERT_FLOOR && cert.min_det >= CERT_FLOOR;
    Ok(cert)
}

/// One row of the optional heatmap dump.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridRow {
    pub r: f64,
    pub g2: f64,
    pub alpha: f64,
    pub eta: f64,
    pub det: f64,
}

/// Materialize the grid as rows (r, g₂, α, η, det) for CSV export.
pub fn grid_rows(n: usize, eps: f64, base: LogBase) -> Result<Vec<GridRow>> {
    if n < 2 {
        return Err(Error::domain("grid size must be at least 2"));
    }
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::domain(format!("eps={eps} outside (0, 1e-3]")));
    }
    let s = base.scale();
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        let g2 = eps + (1.0 - eps) * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let r = eps + (0.5 - 2.0 * eps) * i as f64 / (n - 1) as f64;
            let p = sylvester_nats(r, g2);
            rows.push(GridRow {
                r,
                g2,
                alpha: p.alpha * s,
                eta: p.eta * s,
                det: p.det * s * s,
            });
        }
    }
    Ok(rows)
}

/// p(z) = (2z−1)(r H_C′ − 2H_C + 2f) with r² = z(1−z), for z ∈ [½, 1].
///
/// Vanishes at both endpoints and stays non-negative in between, which is
/// what makes η ≥ 0.
pub fn p_of_z(z: f64, base: LogBase) -> Result<f64> {
    if !(0.5..=1.0).contains(&z) {
        return Err(Error::domain(format!("z={z} outside [1/2, 1]")));
    }
    if z == 0.5 || z == 1.0 {
        return Ok(0.0);
    }
    let r = (z * (1.0 - z)).sqrt();
    let d = hc_f_nats(r);
    Ok((2.0 * z - 1.0) * (r * d.hc_p - 2.0 * d.hc + 2.0 * d.f) * base.scale())
}

/// The two bracketed contributions to η, both non-negative on (0, ½).
pub fn eta_brackets(r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::domain(format!("r={r} outside (0, 1/2)")));
    }
    let d = hc_f_nats(r);
    Ok((
        r * d.f_p - 2.0 * d.f,
        r * d.hc_p - 2.0 * d.hc + 2.0 * d.f,
    ))
}

/// Interior margin required of finite-difference probe points.
pub const FD_MARGIN: f64 = 1e-4;
/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// Minimum eigenvalue of the central finite-difference Hessian of F at x.
///
/// Requires an interior point: |x|² ≤ ¼ − 1e-4 and every component above
/// 1e-4. Probe points that still graze the boundary are evaluated with the
/// continuous extension of F (|x|² clamped to ¼).
pub fn hessian_fd_check(x: &FirstRowVector, base: LogBase) -> Result<f64> {
    let m: Vec<f64> = x.components().iter().map(|c| c.norm()).collect();
    if x.norm_sq() > 0.25 - FD_MARGIN {
        return Err(Error::domain(format!(
            "|x|^2 = {} too close to the boundary 1/4",
            x.norm_sq()
        )));
    }
    if m.iter().any(|&v| v <= FD_MARGIN) {
        return Err(Error::domain("components must exceed 1e-4"));
    }
    let k = m.len();
    let f = |probe: &[f64]| f_clamped(probe, base);
    let h = FD_STEP;
    let mut hess = vec![0.0; k * k];
    let f0 = f(&m);
    for i in 0..k {
        for j in i..k {
            let val = if i == j {
                let mut plus = m.clone();
                plus[i] += h;
                let mut minus = m.clone();
                minus[i] -= h;
                (f(&plus) - 2.0 * f0 + f(&minus)) / (h * h)
            } else {
                let mut pp = m.clone();
                pp[i] += h;
                pp[j] += h;
                let mut pm = m.clone();
                pm[i] += h;
                pm[j] -= h;
                let mut mp = m.clone();
                mp[i] -= h;
                mp[j] += h;
                let mut mm = m.clone();
                mm[i] -= h;
                mm[j] -= h;
                (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * h * h)
            };
            hess[i * k + j] = val;
            hess[j * k + i] = val;
        }
    }
    let eigs = linalg::symmetric_eigenvalues(&hess, k);
    Ok(eigs[0])
}

/// F with |x|² clamped to the boundary; continuous extension used only for
/// finite-difference probes that overshoot by O(step).
fn f_clamped(moduli: &[f64], base: LogBase) -> f64 {
    let norm_sq: f64 = moduli.iter().map(|&v| v * v).sum::<f64>().min(0.25);
    let q = (1.0 - 4.0 * norm_sq).max(0.0).sqrt();
    let a1 = 0.5 * (1.0 + q);
    let mut total = xlogx(a1);
    for &v in moduli {
        total += xlogx(v * v / a1);
    }
    -total * base.scale()
}

/// Σₖ Fₖ(x) evaluated through the (r, g₂) pairs of a concrete x; equals F(x).
pub fn f_from_split(moduli: &[f64], base: LogBase) -> Result<f64> {
    let norm_sq: f64 = moduli.iter().map(|&v| v * v).sum();
    let r = norm_sq.sqrt();
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::domain("split evaluation needs 0 < |x| < 1/2"));
    }
    let mut total = 0.0;
    for &xk in moduli {
        let g2 = xk / r;
        if g2 <= 0.0 {
            continue;
        }
        let d = hc_f_nats(r);
        let lg = 2.0 * g2.ln();
        total += g2 * g2 * (d.hc - d.f * lg);
    }
    Ok(total * base.scale())
}
