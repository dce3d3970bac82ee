//! The three routes to `2π lim log J_N(4_1)/N = 6Λ(π/3)`: the max-term
//! bound route, the saddle-point/dilogarithm route, and the difference-
//! equation route, plus extrapolation of the finite volume sequence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fig8::fig8_log_jn;
use crate::phase::{q_symbol_table, RootContext};
use crate::special::im_li2_unit;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * PI;

/// One row of the volume sequence: `a_N = 2π log J_N / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeRow {
    pub n: usize,
    pub log_jn: f64,
    pub a_n: f64,
}

/// Per-N volume data plus an optional extrapolated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeTable {
    pub rows: Vec<VolumeRow>,
    pub extrapolated: Option<f64>,
    pub fit_residual: Option<f64>,
}

/// Builds the table from the closed-form log sum; input is sorted and
/// deduplicated so rows are strictly increasing in N.
pub fn volume_sequence(n_values: &[usize]) -> Result<VolumeTable> {
    if n_values.contains(&0) {
        return Err(Error::Domain("volume sequence needs N >= 1".into()));
    }
    let mut ns: Vec<usize> = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns
        .into_iter()
        .map(|n| {
            let log_jn = fig8_log_jn(n).log_value;
            VolumeRow { n, log_jn, a_n: TWO_PI * log_jn / n as f64 }
        })
        .collect();
    Ok(VolumeTable { rows, extrapolated: None, fit_residual: None })
}

/// Least-squares fit `a_N = v + b (log N)/N + c/N`; returns `v` and stores
/// it with the RMS fit residual on the table. Needs at least three rows.
pub fn extrapolate_volume(table: &mut VolumeTable) -> Result<f64> {
    let m = table.rows.len();
    if m < 3 {
        return Err(Error::Domain(format!(
            "extrapolation needs at least 3 rows, got {m}"
        )));
    }
    let basis: Vec<[f64; 3]> = table
        .rows
        .iter()
        .map(|r| {
            let nf = r.n as f64;
            [1.0, nf.ln() / nf, 1.0 / nf]
        })
        .collect();
    // 3x3 normal equations, Gaussian elimination with partial pivoting
    let mut a = [[0.0f64; 4]; 3];
    for r in 0..3 {
        for c in 0..3 {
            a[r][c] = basis.iter().map(|b| b[r] * b[c]).sum();
        }
        a[r][3] = basis
            .iter()
            .zip(&table.rows)
            .map(|(b, row)| b[r] * row.a_n)
            .sum();
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        if a[col][col] == 0.0 {
            return Err(Error::Domain("singular extrapolation system".into()));
        }
        for r in col + 1..3 {
            let f = a[r][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0].iter_mut().zip(&top[col]).skip(col) {
                *x -= f * y;
            }
        }
    }
    let mut x = [0.0f64; 3];
    for r in (0..3).rev() {
        x[r] = (a[r][3] - (r + 1..3).map(|c| a[r][c] * x[c]).sum::<f64>()) / a[r][r];
    }
    let rss: f64 = basis
        .iter()
        .zip(&table.rows)
        .map(|(b, row)| {
            let fit = x[0] * b[0] + x[1] * b[1] + x[2] * b[2];
            (row.a_n - fit) * (row.a_n - fit)
        })
        .sum();
    let residual = (rss / m as f64).sqrt();
    table.extrapolated = Some(x[0]);
    table.fit_residual = Some(residual);
    Ok(x[0])
}

/// Max-term analysis of `J_N = Σ g_k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkholmReport {
    pub n: usize,
    /// Exact argmax of `g_k`, ties broken toward the larger k.
    pub k_star: usize,
    /// `g_{k*}²` (overflows to inf past N ≈ 2100; the bound checks below
    /// are computed in log space and stay valid).
    pub g2: f64,
    pub jn: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `(2/N) Σ_{j<=k*} log 2 sin(jπ/N) = 2 log g_{k*} / N`.
    pub riemann_sum: f64,
}

/// Computes the max-term bounds `g_{k*}² <= J_N <= N g_{k*}²` in log space.
pub fn ekholm_report(n: usize) -> Result<EkholmReport> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let ctx = RootContext::new(n)?;
    let table = q_symbol_table(&ctx);
    let log_g = table.log_g_slice();
    let mut k_star = 0usize;
    for k in 1..n {
        if log_g[k] >= log_g[k_star] {
            k_star = k;
        }
    }
    let log_jn = fig8_log_jn(n).log_value;
    let two_lg = 2.0 * log_g[k_star];
    let slack = 1e-9;
    Ok(EkholmReport {
        n,
        k_star,
        g2: two_lg.exp(),
        jn: log_jn.exp(),
        lower_ok: two_lg <= log_jn + slack,
        upper_ok: log_jn <= two_lg + (n as f64).ln() + slack,
        riemann_sum: two_lg / n as f64,
    })
}

/// The discrete monotonicity pattern behind the max-term bound: `g_k` is
/// non-increasing up to `⌊N/6⌋` and non-decreasing on `⌈N/6⌉..=⌊5N/6⌋`
/// (within float slack).
pub fn g_unimodal(n: usize) -> bool {
    let ctx = match RootContext::new(n) {
        Ok(c) => c,
        Err(_) => return false,
    };
    let table = q_symbol_table(&ctx);
    let log_g = table.log_g_slice();
    let lo = n / 6;
    let hi = 5 * n / 6;
    let tol = 1e-12;
    for k in 1..=lo {
        if log_g[k] > log_g[k - 1] + tol {
            return false;
        }
    }
    for k in n.div_ceil(6) + 1..=hi {
        if log_g[k] < log_g[k - 1] - tol {
            return false;
        }
    }
    true
}

/// Saddle-point data for the figure-eight potential
/// `F(z, w) = -Li₂(zw) + Li₂(z⁻¹w⁻¹) + Li₂(z) - Li₂(w⁻¹)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleReport {
    /// Roots of the hyperbolicity equation u² - u + 1 = 0, conjugate pair.
    pub roots_u: (Complex64, Complex64),
    /// `Im F₀ = 2 Im Li₂(e^{iπ/3})`, the figure-eight complement volume.
    pub im_f0: f64,
    /// Residuals of the stationarity system at the trivial solution (1, 1).
    pub trivial_residuals: (Complex64, Complex64),
}

/// Residuals of the polynomial stationarity system
/// `z²w² - zw - z²w + 1` and `z²w² - zw - z + 1` at `(z, w)`.
pub fn stationarity_residuals(z: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let zw = z * w;
    (zw * zw - zw - z * z * w + one, zw * zw - zw - z + one)
}

/// Solves the blown-up saddle equations. The nontrivial solutions pin
/// `u = zw` to the roots of `u² - u + 1 = 0`; the surviving imaginary part
/// of the potential is `2 Im Li₂(e^{iπ/3})`.
pub fn saddle_solve() -> SaddleReport {
    // u = (1 ± i√3)/2 by the quadratic formula
    let root = Complex64::new(0.5, 0.75f64.sqrt());
    let im_f0 = 2.0 * im_li2_unit(PI / 3.0).expect("finite angle");
    SaddleReport {
        roots_u: (root, root.conj()),
        im_f0,
        trivial_residuals: stationarity_residuals(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
    }
}

/// Analysis of the summand `f(i, j) = (q)_{i+j}(q̄)_{i+j}/((q)_i(q̄)_j)` and
/// its partial difference ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioReport {
    pub n: usize,
    /// Largest deviation between a directly computed ratio
    /// `f(i,j)/f(i-1,j)` (resp. `f(i,j)/f(i,j-1)`) and the closed form
    /// `(1-zw)(1-(zw)⁻¹)/(1-z)` (resp. `/(1-w⁻¹)`) at `z = q^i, w = q^j`.
    pub max_ratio_residual: f64,
    /// The designated max term `g_{⌊5N/6⌋}²` (inf past N ≈ 2100; use the log).
    pub f_max: f64,
    pub log_f_max: f64,
    /// `2π log f_max / N`, the difference-equation route's volume estimate.
    pub v_n: f64,
    /// Discrete argmax of |f(i, j)| over the admissible triangle. Reported
    /// as a diagnostic only: the designated value above is the route's
    /// answer, and the literal argmax may sit on the boundary ridge instead.
    pub argmax: (usize, usize),
}

pub fn summand_ratio_analysis(n: usize) -> Result<RatioReport> {
    if n < 2 {
        return Err(Error::Domain("ratio analysis needs N >= 2".into()));
    }
    let ctx = RootContext::new(n)?;
    let table = q_symbol_table(&ctx);
    let log_g = table.log_g_slice();

    // |f(i,j)| = g_{i+j}² / (g_i g_j); scan the admissible triangle in log
    // space for the diagnostic argmax.
    let mut argmax = (0usize, 0usize);
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n - i {
            let v = 2.0 * log_g[i + j] - log_g[i] - log_g[j];
            if v > best {
                best = v;
                argmax = (i, j);
            }
        }
    }

    // Ratio residuals on a subsampled grid of interior points.
    let one = Complex64::new(1.0, 0.0);
    let q = |p: i64| crate::phase::phase_value(&ctx, 4 * p);
    let f = |i: usize, j: usize| {
        table.qpoch(i + j) * table.qpoch_bar(i + j) / (table.qpoch(i) * table.qpoch_bar(j))
    };
    let stride = (n / 40).max(1);
    let mut max_resid = 0.0f64;
    for i in (1..n).step_by(stride) {
        for j in (1..n - i).step_by(stride) {
            let z = q(i as i64);
            let w = q(j as i64);
            let zw = z * w;
            let common = (one - zw) * (one - zw.inv());
            let r1 = f(i, j) / f(i - 1, j);
            let r2 = f(i, j) / f(i, j - 1);
            max_resid = max_resid.max((r1 - common / (one - z)).norm());
            max_resid = max_resid.max((r2 - common / (one - w.inv())).norm());
        }
    }

    let k = 5 * n / 6;
    let log_f_max = 2.0 * log_g[k];
    Ok(RatioReport {
        n,
        max_ratio_residual: max_resid,
        f_max: log_f_max.exp(),
        log_f_max,
        v_n: TWO_PI * log_f_max / n as f64,
        argmax,
    })
}

/// Per-N modulus gap between `log |(q)_k|` at `k = ⌊αN⌋` and its
/// dilogarithm asymptote `-N Cl₂(2πk/N)/(2π)`, divided by N. The asymptote
/// is evaluated at the snapped fraction `k/N`, so the gap vanishes exactly
/// when `k = 0` and decays like a Riemann-sum error otherwise.
pub fn qpoch_asymptotic_gap(alpha: f64, n: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let k = (alpha * n as f64).floor() as usize;
    let gamma = PI / n as f64;
    let mut log_g = 0.0;
    for j in 1..=k {
        log_g += (2.0 * (j as f64 * gamma).sin()).ln();
    }
    let asymptote = n as f64 * im_li2_unit(TWO_PI * k as f64 / n as f64)? / TWO_PI;
    Ok((log_g + asymptote).abs() / n as f64)
}
