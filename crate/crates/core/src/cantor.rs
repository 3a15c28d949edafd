//! Generalized Cantor sets, their staircase functions, the dimension
//! formula and a dyadic box-counting estimator.

use serde::{Deserialize, Serialize};

use crate::arcgeom::Point;
use crate::error::{Error, Result};

/// Stage `n` of the central-removal Cantor set with removal ratio `tau`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorStage {
    pub tau: f64,
    pub n: u32,
    pub intervals: Vec<[f64; 2]>,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tau must lie in (0,1), got {tau}")))
    }
}

/// Largest stage we materialize (2^24 intervals).
pub const MAX_STAGE: u32 = 24;

pub fn cantor_stage(tau: f64, n: u32) -> Result<CantorStage> {
    check_tau(tau)?;
    if n > MAX_STAGE {
        return Err(Error::InvalidParameter(format!("stage {n} exceeds the supported maximum {MAX_STAGE}")));
    }
    // every stage interval has length rho^n; its left end is a sum of
    // (1-rho) rho^(i-1) over the binary digits of its index
    let rho = 0.5 * (1.0 - tau);
    let count = 1usize << n;
    let len = rho.powi(n as i32);
    let mut intervals = vec![[0.0, 0.0]; count];
    let half = count / 2;
    for (k, iv) in intervals.iter_mut().enumerate().take(half.max(1)) {
        let mut a = 0.0;
        let mut w = 1.0 - rho;
        for i in 0..n {
            if (k >> (n - 1 - i)) & 1 == 1 {
                a += w;
            }
            w *= rho;
        }
        *iv = [a, a + len];
    }
    if n == 0 {
        intervals[0] = [0.0, 1.0];
    } else {
        // mirror so the set is exactly symmetric under t -> 1 - t
        for k in 0..half {
            let [a, b] = intervals[k];
            intervals[count - 1 - k] = [1.0 - b, 1.0 - a];
        }
    }
    Ok(CantorStage { tau, n, intervals })
}

impl CantorStage {
    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|[a, b]| b - a).sum()
    }

    /// Gaps between consecutive stage intervals, left to right.
    pub fn gaps(&self) -> Vec<[f64; 2]> {
        self.intervals.windows(2).map(|w| [w[0][1], w[1][0]]).collect()
    }

    /// Normalized staircase `L¹(C_n ∩ [0,x]) / (1−τ)ⁿ` for `x ∈ [0,1]`.
    pub fn staircase(&self, x: f64) -> f64 {
        let iv = &self.intervals;
        let k = iv.partition_point(|[a, _]| *a <= x).saturating_sub(1);
        let scale = (iv.len() as f64).recip();
        let [a, b] = iv[k];
        if x >= b {
            (k + 1) as f64 * scale
        } else {
            (k as f64 + (x - a).max(0.0) / (b - a)) * scale
        }
    }
}

/// Hausdorff dimension `log 2 / log(2/(1−τ))` of the limit set.
pub fn alpha(tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(std::f64::consts::LN_2 / (2.0 / (1.0 - tau)).ln())
}

/// Parameters of the scaled staircase `s(t;H,ℓ) = Hℓ·s_n(t/ℓ)` on `[0, ℓ]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseParams {
    #[serde(rename = "H")]
    pub h: f64,
    pub ell: f64,
    pub tau: f64,
    pub n: u32,
}

impl StaircaseParams {
    pub fn new(h: f64, ell: f64, tau: f64, n: u32) -> Self {
        StaircaseParams { h, ell, tau, n }
    }

    /// Positivity and τ checks (without the `Hℓ < 2` admissibility bound).
    pub fn check_basic(&self) -> Result<()> {
        check_tau(self.tau)?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParameter(format!("H must be positive, got {}", self.h)));
        }
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return Err(Error::InvalidParameter(format!("ell must be positive, got {}", self.ell)));
        }
        if self.n > MAX_STAGE {
            return Err(Error::InvalidParameter(format!("stage {} too large", self.n)));
        }
        Ok(())
    }

    /// Standing assumption `Hℓ < 2`.
    pub fn check(&self) -> Result<()> {
        self.check_basic()?;
        if self.h * self.ell >= 2.0 {
            return Err(Error::InvalidParameter(format!(
                "H·ell = {} violates the admissibility bound H·ell < 2",
                self.h * self.ell
            )));
        }
        Ok(())
    }
}

/// Staircase evaluator that keeps its stage intervals.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub params: StaircaseParams,
    pub stage: CantorStage,
}

impl Staircase {
    pub fn new(params: StaircaseParams) -> Result<Self> {
        params.check_basic()?;
        Ok(Staircase { params, stage: cantor_stage(params.tau, params.n)? })
    }

    /// `s(t)`; `t` is clamped to `[0, ℓ]`.
    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.params;
        let x = (t / p.ell).clamp(0.0, 1.0);
        p.h * p.ell * self.stage.staircase(x)
    }

    /// Flux `s(t) − H t`.
    pub fn flux(&self, t: f64) -> f64 {
        self.eval(t) - self.params.h * t
    }

    /// Breakpoints `0 = t_0 < … < t_m = ℓ` where the flux changes slope.
    pub fn breakpoints(&self) -> Vec<f64> {
        let l = self.params.ell;
        let mut v = Vec::with_capacity(2 * self.stage.intervals.len());
        for [a, b] in &self.stage.intervals {
            v.push(a * l);
            v.push(b * l);
        }
        v.dedup();
        v
    }
}

pub fn staircase_eval(p: &StaircaseParams, t: f64) -> Result<f64> {
    if !(0.0..=p.ell).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {}]", p.ell)));
    }
    Ok(Staircase::new(*p)?.eval(t))
}

/// A bounded subset of the unit cube, as accepted by the box counter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DyadicSet {
    Points(Vec<f64>),
    Intervals(Vec<[f64; 2]>),
    Points2(Vec<Point>),
}

#[inline]
fn cube(x: f64, j: u32) -> i64 {
    let m = 1i64 << j;
    ((x * m as f64).floor() as i64).clamp(0, m - 1)
}

/// Number of level-`j` dyadic cubes (half-open, last one closed) meeting the set.
pub fn box_count(set: &DyadicSet, j: u32) -> u64 {
    match set {
        DyadicSet::Points(xs) => {
            let mut c: Vec<i64> = xs.iter().map(|&x| cube(x, j)).collect();
            c.sort_unstable();
            c.dedup();
            c.len() as u64
        }
        DyadicSet::Points2(ps) => {
            let mut c: Vec<(i64, i64)> = ps.iter().map(|p| (cube(p.x, j), cube(p.y, j))).collect();
            c.sort_unstable();
            c.dedup();
            c.len() as u64
        }
        DyadicSet::Intervals(ivs) => {
            let mut ranges: Vec<(i64, i64)> = ivs.iter().map(|&[a, b]| (cube(a.min(b), j), cube(a.max(b), j))).collect();
            ranges.sort_unstable();
            let mut total = 0u64;
            let mut last = i64::MIN;
            for (lo, hi) in ranges {
                let lo = lo.max(last + 1);
                if hi >= lo {
                    total += (hi - lo + 1) as u64;
                    last = hi;
                }
            }
            total
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub scales: Vec<u32>,
    pub counts: Vec<u64>,
    pub slope: f64,
    pub r2: f64,
}

/// Least-squares slope of `log₂ N_j` against `j` over `j_min..=j_max`.
pub fn estimate_dimension(set: &DyadicSet, j_min: u32, j_max: u32) -> Result<DimensionReport> {
    let nscales = if j_max >= j_min { (j_max - j_min + 1) as usize } else { 0 };
    if nscales < 3 {
        return Err(Error::InsufficientScales(nscales));
    }
    if j_max > 60 {
        return Err(Error::InvalidParameter(format!("dyadic level {j_max} too fine")));
    }
    let empty = match set {
        DyadicSet::Points(v) => v.is_empty(),
        DyadicSet::Intervals(v) => v.is_empty(),
        DyadicSet::Points2(v) => v.is_empty(),
    };
    if empty {
        return Err(Error::InvalidInput("cannot estimate the dimension of an empty set".into()));
    }
    let scales: Vec<u32> = (j_min..=j_max).collect();
    let counts: Vec<u64> = scales.iter().map(|&j| box_count(set, j)).collect();
    let xs: Vec<f64> = scales.iter().map(|&j| j as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(DimensionReport { scales, counts, slope, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_stages() {
        let c1 = cantor_stage(1.0 / 3.0, 1).unwrap();
        assert_eq!(c1.intervals.len(), 2);
        assert!((c1.intervals[0][1] - 1.0 / 3.0).abs() < 1e-16);
        assert!((c1.intervals[1][0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((c1.total_length() - 2.0 / 3.0).abs() < 1e-15);
        let c2 = cantor_stage(1.0 / 3.0, 2).unwrap();
        assert_eq!(c2.intervals.len(), 4);
        assert!((c2.total_length() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(cantor_stage(0.4, 0).unwrap().intervals, vec![[0.0, 1.0]]);
        assert!(cantor_stage(1.0, 2).is_err());
    }

    #[test]
    fn stage_is_symmetric_and_sorted() {
        let c = cantor_stage(0.27, 9).unwrap();
        let n = c.intervals.len();
        for k in 0..n {
            let [a, b] = c.intervals[k];
            let [a2, b2] = c.intervals[n - 1 - k];
            assert!((a - (1.0 - b2)).abs() < 1e-15 && (b - (1.0 - a2)).abs() < 1e-15);
            if k + 1 < n {
                assert!(b < c.intervals[k + 1][0]);
            }
        }
        assert!((c.total_length() - 0.73f64.powi(9)).abs() < 1e-13);
    }

    #[test]
    fn alpha_values() {
        assert!((alpha(1.0 / 3.0).unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert!((alpha(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(alpha(1e-9).unwrap() > 0.999_999);
        assert!(alpha(0.0).is_err());
    }

    #[test]
    fn staircase_values() {
        let p = StaircaseParams::new(1.3, 1.2, 1.0 / 3.0, 5);
        let s = Staircase::new(p).unwrap();
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.eval(1.2), 1.3 * 1.2);
        assert_eq!(s.eval(0.6), 1.3 * 1.2 / 2.0);
        assert_eq!(s.eval(0.5), s.eval(0.7));
        assert!(staircase_eval(&p, 1.3).is_err());
    }

    #[test]
    fn box_counts() {
        assert_eq!(box_count(&DyadicSet::Points(vec![0.5]), 7), 1);
        assert_eq!(box_count(&DyadicSet::Intervals(vec![[0.0, 1.0]]), 6), 64);
        let c = cantor_stage(1.0 / 3.0, 10).unwrap();
        let counts: Vec<u64> = (4..=10).map(|j| box_count(&DyadicSet::Intervals(c.intervals.clone()), j)).collect();
        assert_eq!(counts, vec![10, 16, 28, 42, 70, 102, 154]);
    }

    #[test]
    fn dimension_of_simple_sets() {
        let seg = estimate_dimension(&DyadicSet::Intervals(vec![[0.0, 1.0]]), 2, 10).unwrap();
        assert!((seg.slope - 1.0).abs() < 1e-12);
        let pts = estimate_dimension(&DyadicSet::Points(vec![0.1, 0.7]), 3, 12).unwrap();
        assert!(pts.slope.abs() < 0.05);
        assert!(matches!(
            estimate_dimension(&DyadicSet::Points(vec![0.1]), 3, 4),
            Err(Error::InsufficientScales(2))
        ));
    }
}
